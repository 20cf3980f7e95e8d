#include "reiqc/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "reiqc/error.hpp"
#include "reiqc/units.hpp"

namespace reiqc {

namespace {

constexpr Transition kZeroAux{Role::zero, Role::aux};
constexpr Transition kOneAux{Role::one, Role::aux};

PulseSpec pi_pulse_for(const Register& reg, int i, const Transition& t, const std::vector<int>& levels,
                       const GateOptions& options) {
    PulseSpec p;
    p.reference = t;
    p.carrier_offset_hz = reg.offset_from(i, t, t) + reg.pair_shift(i, t, levels);
    p.theta = units::kPi;
    p.duration_s = 1.0 / options.gamma_l_hz;
    p.cutoff_hz = options.window_hz;
    p.ion_id = reg.ions()[static_cast<std::size_t>(i)].id;
    p.validate();
    return p;
}

// The pulse must drive exactly its own ion on the intended transition.
void check_addressing(const Register& reg, const PulseSpec& p, int i, const Transition& t, std::size_t k) {
    const auto hits = addressed_ions(reg, p);
    const int me = reg.ions()[static_cast<std::size_t>(i)].id;
    std::ostringstream msg;
    bool ok = false;
    std::vector<int> others;
    for (const auto& h : hits) {
        if (h.ion == i) {
            ok = transition_index(reg.scheme(), h.transition.a, h.transition.b) == transition_index(reg.scheme(), t.a, t.b);
        } else {
            others.push_back(reg.ions()[static_cast<std::size_t>(h.ion)].id);
        }
    }
    if (ok && others.empty()) return;
    msg << "pulse " << k << " (" << transition_name(t) << " of ion " << me << "): ";
    if (!ok) msg << "the ion's nearest transition is not " << transition_name(t) << "; ";
    if (!others.empty()) {
        msg << "addressing collision with ion(s)";
        for (int o : others) msg << ' ' << me << '/' << o;
    }
    throw PhysicsError(msg.str());
}

void validate_options(const GateOptions& o) {
    if (!(o.gamma_l_hz > 0)) throw ValidationError("pulse.gamma_l_hz must be > 0");
    if (!(o.gamma_h_hz >= 0)) throw ValidationError("crystal.gamma_h_hz must be >= 0");
    if (o.window_hz != 0 && o.window_hz < o.gamma_l_hz) throw ValidationError("pulse.w_cut_hz must be >= Gamma_L");
}

std::vector<int> levels_all(const Register& reg, Role role) {
    return std::vector<int>(static_cast<std::size_t>(reg.size()), reg.scheme().local_index(role));
}

}  // namespace

double GatePlan::min_margin() const {
    return blockade_margins.empty() ? 0.0 : *std::min_element(blockade_margins.begin(), blockade_margins.end());
}

std::vector<PulseSpec> prepare_zero(const Register& reg, const std::vector<int>& ion_ids, const GateOptions& options) {
    validate_options(options);
    const Transition t{Role::ground, Role::zero};
    std::vector<int> levels = levels_all(reg, Role::ground);
    std::vector<PulseSpec> pulses;
    std::vector<std::string> collisions;
    for (std::size_t k = 0; k < ion_ids.size(); ++k) {
        const int i = reg.index_of(ion_ids[k]);
        auto p = pi_pulse_for(reg, i, t, levels, options);
        try {
            check_addressing(reg, p, i, t, k);
        } catch (const PhysicsError& e) {
            collisions.emplace_back(e.what());
        }
        pulses.push_back(p);
        levels[static_cast<std::size_t>(i)] = reg.scheme().local_index(Role::zero);
    }
    if (!collisions.empty()) {
        std::string all = "prepare_zero: ";
        for (std::size_t k = 0; k < collisions.size(); ++k) all += (k ? "; " : "") + collisions[k];
        throw PhysicsError(all);
    }
    return pulses;
}

GatePlan cnot_plan(const Register& reg, int control_id, int target_id, const GateOptions& options) {
    return ccnot_plan(reg, {control_id}, target_id, options);
}

GatePlan ccnot_plan(const Register& reg, const std::vector<int>& control_ids, int target_id, const GateOptions& options) {
    validate_options(options);
    if (control_ids.empty()) throw ValidationError("gate: at least one control is required");
    const int tgt = reg.index_of(target_id);
    std::vector<int> ctl;
    for (int id : control_ids) {
        if (id == target_id) throw ValidationError("gate: control and target must differ (ion " + std::to_string(id) + ")");
        const int c = reg.index_of(id);
        if (std::find(ctl.begin(), ctl.end(), c) != ctl.end()) throw ValidationError("gate: duplicate control " + std::to_string(id));
        ctl.push_back(c);
    }

    const auto& s = reg.scheme();
    const int l0 = s.local_index(Role::zero);
    const int l1 = s.local_index(Role::one);
    const int la = s.local_index(Role::aux);

    GatePlan plan;
    plan.scheme_id = s.id();
    plan.controls = control_ids;
    plan.target = target_id;

    // Blockade: the target's 0-1' and 1-1' lines must move by more than the
    // linewidths when a control goes from |1> (unparked) to |1'> (parked).
    for (int c : ctl) {
        const auto& w = reg.coupling(tgt, c);
        const double d01 = w.transition_shift(l0, la, l1, la);
        const double d11 = w.transition_shift(l1, la, l1, la);
        const double delta = std::min(std::abs(d01), std::abs(d11));
        const auto check = blockade_ok(delta, options.gamma_l_hz, options.gamma_h_hz);
        plan.blockade_shifts_hz.push_back(delta);
        plan.blockade_margins.push_back(check.margin);
        if (options.enforce_blockade && !check.ok) {
            std::ostringstream msg;
            msg << "blockade condition fails for control " << reg.ions()[static_cast<std::size_t>(c)].id << " / target "
                << target_id << ": shift " << delta << " Hz, margin " << check.margin << " (needs > 1)";
            throw PhysicsError(msg.str());
        }
    }

    // Carriers are the ions' own frequencies with unparked controls in |1>
    // and the target in |0>.
    std::vector<int> ref = levels_all(reg, Role::zero);
    for (int c : ctl) ref[static_cast<std::size_t>(c)] = l1;

    auto add = [&](int i, const Transition& t) {
        auto p = pi_pulse_for(reg, i, t, ref, options);
        check_addressing(reg, p, i, t, plan.pulses.size());
        plan.pulses.push_back(p);
    };

    for (int c : ctl) {
        add(c, kZeroAux);
        // A control in |1> must stay outside the window of its own 0-1' pulse.
        const auto& p = plan.pulses.back();
        const double gap = std::abs(reg.offset_from(c, kOneAux, kZeroAux) + reg.pair_shift(c, kOneAux, ref) - p.carrier_offset_hz);
        if (gap <= p.window_hz()) {
            throw PhysicsError("control " + std::to_string(reg.ions()[static_cast<std::size_t>(c)].id) +
                               ": 1-1' line lies within the addressing window of its 0-1' pulse");
        }
    }
    add(tgt, kZeroAux);
    add(tgt, kOneAux);
    add(tgt, kZeroAux);
    for (auto it = ctl.rbegin(); it != ctl.rend(); ++it) add(*it, kZeroAux);
    return plan;
}

EnsembleState ground_state(const Register& reg) {
    return EnsembleState(reg.size(), reg.dim(), reg.scheme().local_index(Role::ground));
}

EnsembleState execute(const Register& reg, const std::vector<PulseSpec>& pulses, EnsembleState state,
                      const ExecOptions& options, ExecTrace* trace) {
    std::mt19937_64 rng(options.seed);
    for (std::size_t k = 0; k < pulses.size(); ++k) {
        const auto hits = apply_pulse(state, reg, pulses[k], options.exec);
        if (hits.empty() && trace) trace->idle_pulses.push_back(k);
        if (options.decay) apply_decay(state, reg, pulses[k].duration_s);
        if (options.dephasing_gamma_h_hz > 0) apply_dephasing(state, reg, options.dephasing_gamma_h_hz, pulses[k].duration_s, rng);
    }
    return state;
}

IdealGate ideal_controlled_not(int n_controls) {
    if (n_controls < 1 || n_controls > kMaxSimulatedIons - 1) throw ValidationError("ideal gate: bad control count");
    const std::size_t size = std::size_t{1} << (n_controls + 1);
    const std::size_t control_mask = (size - 1) & ~std::size_t{1};
    IdealGate g(size);
    for (std::size_t b = 0; b < size; ++b) g[b] = (b & control_mask) == control_mask ? (b ^ 1u) : b;
    return g;
}

IdealGate ideal_identity(int n_qubits) {
    IdealGate g(std::size_t{1} << n_qubits);
    for (std::size_t b = 0; b < g.size(); ++b) g[b] = b;
    return g;
}

std::vector<InputState> default_inputs(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxSimulatedIons) throw ValidationError("inputs: bad qubit count");
    const std::size_t size = std::size_t{1} << n_qubits;
    std::vector<InputState> out;
    for (std::size_t b = 0; b < size; ++b) {
        InputState s;
        for (int q = n_qubits - 1; q >= 0; --q) s.label += ((b >> q) & 1u) ? '1' : '0';
        s.amplitudes.assign(size, 0.0);
        s.amplitudes[b] = 1.0;
        out.push_back(std::move(s));
    }
    const double r = 1.0 / std::sqrt(2.0);
    InputState plus0{"+" + std::string(static_cast<std::size_t>(n_qubits - 1), '0'), std::vector<Complex>(size, 0.0)};
    plus0.amplitudes[0] = r;
    plus0.amplitudes[size >> 1] = r;
    out.push_back(std::move(plus0));
    InputState all_plus{std::string(static_cast<std::size_t>(n_qubits), '+'),
                        std::vector<Complex>(size, 1.0 / std::sqrt(static_cast<double>(size)))};
    if (n_qubits > 1) out.push_back(std::move(all_plus));
    return out;
}

double FidelityReport::fidelity(const std::string& label) const {
    for (std::size_t k = 0; k < labels.size(); ++k) {
        if (labels[k] == label) return fidelities[k];
    }
    throw NotFoundError("no input state labelled '" + label + "'");
}

FidelityReport gate_fidelity(const GateMap& simulate, const IdealGate& ideal, const std::vector<InputState>& inputs) {
    FidelityReport rep;
    double sum = 0.0;
    rep.min = 1.0;
    for (const auto& in : inputs) {
        if (in.amplitudes.size() != ideal.size()) {
            throw ValidationError("gate_fidelity: input '" + in.label + "' has dimension " +
                                  std::to_string(in.amplitudes.size()) + ", gate has " + std::to_string(ideal.size()));
        }
        std::vector<Complex> want(ideal.size(), 0.0);
        for (std::size_t b = 0; b < ideal.size(); ++b) want[ideal[b]] += in.amplitudes[b];
        const auto got = simulate(in.amplitudes);
        if (got.size() != want.size()) throw ValidationError("gate_fidelity: simulated output has the wrong dimension");
        Complex overlap = 0.0;
        double inside = 0.0;
        for (std::size_t b = 0; b < want.size(); ++b) {
            overlap += std::conj(want[b]) * got[b];
            inside += std::norm(got[b]);
        }
        const double f = std::clamp(std::norm(overlap), 0.0, 1.0);
        rep.labels.push_back(in.label);
        rep.fidelities.push_back(f);
        rep.phases_rad.push_back(std::abs(overlap) > 0 ? std::arg(overlap) : 0.0);
        rep.leakages.push_back(std::max(0.0, 1.0 - inside));
        sum += f;
        rep.min = std::min(rep.min, f);
    }
    rep.mean = inputs.empty() ? 0.0 : sum / static_cast<double>(inputs.size());
    if (inputs.empty()) rep.min = 0.0;
    return rep;
}

FidelityReport simulate_gate(const Register& reg, const GatePlan& plan, const std::vector<InputState>& inputs,
                             const ExecOptions& options, int repetitions) {
    if (repetitions < 1) throw ValidationError("gate: repetitions must be >= 1");
    std::vector<int> qubits;
    for (int id : plan.controls) qubits.push_back(reg.index_of(id));
    qubits.push_back(reg.index_of(plan.target));
    const int k = static_cast<int>(qubits.size());
    const int l0 = reg.scheme().local_index(Role::zero);
    const int l1 = reg.scheme().local_index(Role::one);

    std::vector<PulseSpec> pulses;
    for (int r = 0; r < repetitions; ++r) pulses.insert(pulses.end(), plan.pulses.begin(), plan.pulses.end());

    auto levels_for = [&](std::size_t b) {
        std::vector<int> levels(static_cast<std::size_t>(reg.size()), l0);
        for (int q = 0; q < k; ++q) {
            levels[static_cast<std::size_t>(qubits[static_cast<std::size_t>(q)])] = ((b >> (k - 1 - q)) & 1u) ? l1 : l0;
        }
        return levels;
    };

    GateMap sim = [&](const std::vector<Complex>& in) {
        EnsembleState state(reg.size(), reg.dim(), l0);
        auto& amps = state.amplitudes();
        std::fill(amps.begin(), amps.end(), Complex(0));
        for (std::size_t b = 0; b < in.size(); ++b) amps[state.index_of(levels_for(b))] = in[b];
        state = execute(reg, pulses, std::move(state), options);
        std::vector<Complex> out(in.size());
        for (std::size_t b = 0; b < in.size(); ++b) out[b] = state.amplitude(levels_for(b));
        return out;
    };

    IdealGate once = ideal_controlled_not(k - 1);
    IdealGate ideal = ideal_identity(k);
    for (int r = 0; r < repetitions; ++r) {
        for (auto& v : ideal) v = once[v];
    }
    auto rep = gate_fidelity(sim, ideal, inputs);
    rep.blockade_margin = plan.min_margin();
    return rep;
}

ReadoutState hadamard_readout_state(const std::vector<double>& phases) {
    if (phases.size() > 30) throw ValidationError("readout: too many qubits");
    ReadoutState r;
    std::vector<std::pair<Complex, Complex>> per;
    for (double phi : phases) {
        const Complex e = std::polar(1.0, phi);
        const Complex a0 = 0.5 * (1.0 + e);
        const Complex a1 = 0.5 * (1.0 - e);
        r.p0.push_back(std::cos(phi / 2) * std::cos(phi / 2));
        r.p1.push_back(1.0 - r.p0.back());
        per.emplace_back(a0, a1);
    }
    const std::size_t n = phases.size();
    r.amplitudes.assign(std::size_t{1} << n, 1.0);
    for (std::size_t b = 0; b < r.amplitudes.size(); ++b) {
        for (std::size_t q = 0; q < n; ++q) {
            const bool one = (b >> (n - 1 - q)) & 1u;
            r.amplitudes[b] *= one ? per[q].second : per[q].first;
        }
    }
    return r;
}

}  // namespace reiqc
