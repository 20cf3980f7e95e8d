#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "reiqc/ensemble.hpp"
#include "reiqc/exec.hpp"
#include "reiqc/interactions.hpp"
#include "reiqc/ion_data.hpp"

namespace reiqc {

using Complex = std::complex<double>;
/// Row-major 2x2 matrix acting on (lower, upper) amplitudes.
using Mat2 = std::array<Complex, 4>;

/// Transition dipole |<0|r|1>| = sqrt(3 gamma0 / (4 alpha c k^3)), in m.
double dipole_matrix_element(double gamma0_s, double k_m);
/// Field amplitude of a pi pulse, 2 pi Gamma_L sqrt(hbar k^3 / (3 gamma0)), in V/cm.
double pi_pulse_field(double gamma_l_s, double k_m, double gamma0_s);
/// Same field written as pi hbar Gamma_L / (e d), in V/cm.
double pi_pulse_field_from_dipole(double gamma_l_s, double dipole_m);
/// I = E^2 / Z in W/cm^2 for E in V/cm.
double power_density(double field_v_per_cm);
/// E_L = I S / Gamma_L in J, S in cm^2.
double pulse_energy(double field_v_per_cm, double area_cm2, double gamma_l_s);

/// I cos(theta/2) + i (sx sin(phi) + sy cos(phi)) sin(theta/2).
Mat2 single_qubit_unitary(double theta, double phi);
/// exp(-i H t), H = (delta/2) sz - (omega/2)(sx sin(phi) + sy cos(phi)).
Mat2 detuned_rotation(double omega_rad_s, double delta_rad_s, double phi, double t_s);
/// The same pulse in the interaction picture of its static part,
/// exp(i (delta/2) sz t) exp(-i H t): identity when far detuned, and no phase
/// accrues between pulses. This is what apply_pulse applies.
Mat2 interaction_rotation(double omega_rad_s, double delta_rad_s, double phi, double t_s);
Mat2 multiply(const Mat2& a, const Mat2& b);

/// A square pulse. The carrier is stored as an offset from the bare
/// frequency of `reference`, which keeps Hz-level precision next to
/// optical frequencies.
struct PulseSpec {
    Transition reference{Role::zero, Role::aux};
    double carrier_offset_hz = 0.0;
    double theta = 3.141592653589793;
    double phase = 0.0;
    double duration_s = 1e-9;
    double cutoff_hz = 0.0;  ///< addressing window; 0 selects 5 Gamma_L
    std::optional<int> ion_id;  ///< informational: the intended ion

    double gamma_l_hz() const { return 1.0 / duration_s; }
    double rabi_rad_s() const { return theta / duration_s; }
    double window_hz() const { return cutoff_hz > 0 ? cutoff_hz : 5.0 * gamma_l_hz(); }
    /// Throws ValidationError when theta < 0, t_p <= 0 or the window is narrower than Gamma_L.
    void validate() const;
};

/// The ions a simulation runs on: one scheme, per-ion offsets and the pair couplings.
class Register {
public:
    Register() = default;
    Register(LevelScheme scheme, std::vector<IonSite> ions);

    /// Couplings from the physical interaction model for every pair.
    static Register physical(const IonDatabase& db, const LevelScheme& scheme, const InteractionModel& model,
                             std::vector<IonSite> ions);
    /// Every pair coupled only through w(1', 1') = delta.
    static Register blockade(const LevelScheme& scheme, std::vector<IonSite> ions, double delta_hz);

    const LevelScheme& scheme() const { return scheme_; }
    const std::vector<IonSite>& ions() const { return ions_; }
    int size() const { return static_cast<int>(ions_.size()); }
    int dim() const { return scheme_.dimension(); }
    /// Position of an ion id in the register; NotFoundError when absent.
    int index_of(int ion_id) const;

    /// w(l_i, l_j) for ions i != j.
    const PairCoupling& coupling(int i, int j) const;
    void set_coupling(int i, int j, const PairCoupling& w);

    /// Upper and lower local levels of a transition, by energy.
    std::pair<int, int> lower_upper(const Transition& t) const;
    /// Bare frequency of the transition in Hz, always positive.
    double bare_hz(const Transition& t) const;
    /// Unshifted frequency of ion i's transition relative to `reference`'s bare frequency.
    double offset_from(int i, const Transition& t, const Transition& reference) const;
    /// Shift of ion i's transition caused by partners sitting in `levels` (ion i's entry ignored).
    double pair_shift(int i, const Transition& t, const std::vector<int>& levels) const;

private:
    LevelScheme scheme_;
    std::vector<IonSite> ions_;
    std::vector<Transition> transitions_;
    std::vector<PairCoupling> couplings_;  // n x n, diagonal unused
};

/// Largest register the state-vector simulator accepts.
inline constexpr int kMaxSimulatedIons = 10;

/// Product-basis amplitudes over the register. Ion 0 is the most significant digit.
class EnsembleState {
public:
    EnsembleState() = default;
    /// All ions in the given local level.
    EnsembleState(int n_ions, int dim, int level = 0);
    /// Product state from per-ion amplitude vectors (each of length dim).
    static EnsembleState product(const std::vector<std::vector<Complex>>& per_ion);

    int n_ions() const { return n_; }
    int dim() const { return d_; }
    std::size_t size() const { return amps_.size(); }
    std::size_t stride(int ion) const { return strides_[static_cast<std::size_t>(ion)]; }
    int level_of(std::size_t index, int ion) const {
        return static_cast<int>((index / strides_[static_cast<std::size_t>(ion)]) % static_cast<std::size_t>(d_));
    }
    std::size_t index_of(const std::vector<int>& levels) const;

    std::vector<Complex>& amplitudes() { return amps_; }
    const std::vector<Complex>& amplitudes() const { return amps_; }
    Complex amplitude(const std::vector<int>& levels) const { return amps_[index_of(levels)]; }

    double leakage() const { return leakage_; }
    void add_leakage(double p) { leakage_ += p; }
    double norm_sq() const;
    /// Population of one ion's level (unnormalized: leakage is not redistributed).
    double population(int ion, int level) const;
    std::vector<double> populations(int ion) const;

private:
    int n_ = 0;
    int d_ = 0;
    std::vector<std::size_t> strides_;
    std::vector<Complex> amps_;
    double leakage_ = 0.0;
};

struct Addressed {
    int ion = 0;  ///< register index
    Transition transition;
    double detuning_hz = 0.0;  ///< unshifted ion frequency minus carrier
};

/// Ions whose nearest scheme transition (by unshifted frequency) lies within
/// the pulse window widened by the largest pair shift the partners can impose.
std::vector<Addressed> addressed_ions(const Register& reg, const PulseSpec& pulse);

/// Rotates every addressed ion (in register order) on its nearest
/// transition with interaction_rotation. The detuning of each product-basis
/// component includes the pair shifts from the partners' levels in that
/// component. Returns the
/// addressed ions; an empty result leaves the state unchanged.
std::vector<Addressed> apply_pulse(EnsembleState& state, const Register& reg, const PulseSpec& pulse,
                                   Exec exec = Exec::parallel);

/// No-jump damping: amplitudes scale by exp(-dt/2 sum 1/tau); lost norm goes to leakage.
void apply_decay(EnsembleState& state, const Register& reg, double dt_s);

/// Random-phase dephasing: each ion's levels pick up independent Gaussian
/// phases of variance pi Gamma_h dt, so every coherence decays on average as
/// exp(-pi Gamma_h dt).
void apply_dephasing(EnsembleState& state, const Register& reg, double gamma_h_hz, double dt_s, std::mt19937_64& rng);

/// Pulse schedule as delimited text:
/// index,ion_id,transition,carrier_offset_hz,theta_over_pi,phase,t_p_s,window_hz
std::string export_schedule(const std::vector<PulseSpec>& pulses, char delimiter = ',');
std::vector<PulseSpec> import_schedule(std::string_view text, char delimiter = ',');

}  // namespace reiqc
