#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "reiqc/pulse.hpp"

namespace reiqc {

struct GateOptions {
    double gamma_l_hz = 1e9;  ///< sets t_p = 1 / Gamma_L for every pulse
    double gamma_h_hz = 0.0;
    double window_hz = 0.0;   ///< 0 selects 5 Gamma_L
    /// When false the blockade condition is reported but not enforced
    /// (used to demonstrate that conditionality disappears without it).
    bool enforce_blockade = true;
};

struct GatePlan {
    std::string scheme_id;
    std::vector<int> controls;  ///< ion ids, most significant qubit first
    int target = 0;
    std::vector<PulseSpec> pulses;
    std::vector<double> blockade_shifts_hz;  ///< per control: weakest shift of the target's transitions
    std::vector<double> blockade_margins;    ///< per control: shift / max(Gamma_L, Gamma_h)

    double min_margin() const;
};

/// One pi pulse per ion on g -> 0 (1' -> 0 when g = 1'), in the given order.
/// Throws PhysicsError listing colliding ions when a pulse would drive more
/// than its own ion.
std::vector<PulseSpec> prepare_zero(const Register& reg, const std::vector<int>& ion_ids, const GateOptions& options);

/// Five pulses: control 0 -> 1', target 0 <-> 1', 1' <-> 1, 0 <-> 1', control 1' -> 0.
GatePlan cnot_plan(const Register& reg, int control_id, int target_id, const GateOptions& options);
/// 2m + 3 pulses: park every control, three-pulse NOT, unpark in reverse order.
GatePlan ccnot_plan(const Register& reg, const std::vector<int>& control_ids, int target_id, const GateOptions& options);

struct ExecOptions {
    bool decay = false;
    double dephasing_gamma_h_hz = 0.0;  ///< > 0 enables random-phase dephasing
    std::uint64_t seed = 0;
    Exec exec = Exec::parallel;
};

/// Pulse indices that addressed no ion during execute().
struct ExecTrace {
    std::vector<std::size_t> idle_pulses;
};

EnsembleState execute(const Register& reg, const std::vector<PulseSpec>& pulses, EnsembleState state,
                      const ExecOptions& options, ExecTrace* trace = nullptr);

/// Initial register state: every ion in its ground level.
EnsembleState ground_state(const Register& reg);

/// Ideal gate on k qubits as a basis permutation: output index of each input index.
using IdealGate = std::vector<std::size_t>;
/// Controlled NOT with `n_controls` controls; controls are the leading bits, the target the last.
IdealGate ideal_controlled_not(int n_controls);
IdealGate ideal_identity(int n_qubits);

struct InputState {
    std::string label;
    std::vector<Complex> amplitudes;  ///< over the 2^k computational basis
};
/// All basis states, |+0...0> and |+...+>; for two qubits {00, 01, 10, 11, +0, ++}.
std::vector<InputState> default_inputs(int n_qubits);

struct FidelityReport {
    std::vector<std::string> labels;
    std::vector<double> fidelities;
    std::vector<double> phases_rad;  ///< arg <ideal|sim>, the residual phase of each input
    std::vector<double> leakages;    ///< probability outside the computational subspace
    double mean = 0.0;
    double min = 0.0;
    double blockade_margin = 0.0;

    double fidelity(const std::string& label) const;
};

/// Maps a computational input to the simulated output restricted to the computational subspace.
using GateMap = std::function<std::vector<Complex>(const std::vector<Complex>&)>;

/// Scores a gate map against an ideal permutation: |<ideal psi|sim psi>|^2 per input.
FidelityReport gate_fidelity(const GateMap& simulate, const IdealGate& ideal, const std::vector<InputState>& inputs);

/// Runs `plan` on each input (controls then target, other register ions in |0>) and scores it.
FidelityReport simulate_gate(const Register& reg, const GatePlan& plan, const std::vector<InputState>& inputs,
                             const ExecOptions& options, int repetitions = 1);

struct ReadoutState {
    std::vector<double> p0;
    std::vector<double> p1;
    std::vector<Complex> amplitudes;  ///< product over qubits of ((1 + e^{i phi}) |0> + (1 - e^{i phi}) |1>) / 2
};
ReadoutState hadamard_readout_state(const std::vector<double>& phases);

}  // namespace reiqc
