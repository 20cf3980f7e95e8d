#include "reiqc/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "csv.hpp"
#include "reiqc/error.hpp"
#include "reiqc/units.hpp"

namespace reiqc {

using units::kPi;
using units::kTwoPi;

double dipole_matrix_element(double gamma0_s, double k_m) {
    if (!(gamma0_s > 0 && k_m > 0)) throw ValidationError("dipole_matrix_element: gamma0 and k must be > 0");
    const double k_cm = k_m / units::kCmPerMeter;
    const double d_cm = std::sqrt(3.0 * gamma0_s / (4.0 * units::kFineStructure * units::kSpeedOfLightCgs * k_cm * k_cm * k_cm));
    return d_cm / units::kCmPerMeter;
}

double pi_pulse_field(double gamma_l_s, double k_m, double gamma0_s) {
    if (!(gamma_l_s > 0 && k_m > 0 && gamma0_s > 0)) throw ValidationError("pi_pulse_field: inputs must be > 0");
    const double k_cm = k_m / units::kCmPerMeter;
    const double e_statv = kTwoPi * gamma_l_s * std::sqrt(units::kHbarCgs * k_cm * k_cm * k_cm / (3.0 * gamma0_s));
    return units::statvolt_per_cm_to_volt_per_cm(e_statv);
}

double pi_pulse_field_from_dipole(double gamma_l_s, double dipole_m) {
    if (!(gamma_l_s > 0 && dipole_m > 0)) throw ValidationError("pi_pulse_field_from_dipole: inputs must be > 0");
    const double d_cm = dipole_m * units::kCmPerMeter;
    const double e_statv = kPi * units::kHbarCgs * gamma_l_s / (units::kElementaryChargeCgs * d_cm);
    return units::statvolt_per_cm_to_volt_per_cm(e_statv);
}

double power_density(double field_v_per_cm) {
    if (!(field_v_per_cm >= 0)) throw ValidationError("power_density: field must be >= 0");
    return field_v_per_cm * field_v_per_cm / units::kFreeSpaceImpedance;
}

double pulse_energy(double field_v_per_cm, double area_cm2, double gamma_l_s) {
    if (!(area_cm2 > 0)) throw ValidationError("pulse_energy: beam area must be > 0");
    if (!(gamma_l_s > 0)) throw ValidationError("pulse_energy: Gamma_L must be > 0");
    return power_density(field_v_per_cm) * area_cm2 / gamma_l_s;
}

Mat2 single_qubit_unitary(double theta, double phi) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    const Complex e = std::polar(1.0, phi);
    return {Complex(c), s * e, -s * std::conj(e), Complex(c)};
}

Mat2 detuned_rotation(double omega_rad_s, double delta_rad_s, double phi, double t_s) {
    if (!(t_s >= 0)) throw ValidationError("detuned_rotation: t must be >= 0");
    const double w = std::hypot(omega_rad_s, delta_rad_s);
    if (w == 0) return {Complex(1), Complex(0), Complex(0), Complex(1)};
    const double c = std::cos(w * t_s / 2);
    const double s = std::sin(w * t_s / 2);
    const Complex e = std::polar(1.0, phi);
    const double sd = s * delta_rad_s / w;
    const double so = s * omega_rad_s / w;
    return {Complex(c, -sd), so * e, -so * std::conj(e), Complex(c, sd)};
}

Mat2 interaction_rotation(double omega_rad_s, double delta_rad_s, double phi, double t_s) {
    Mat2 u = detuned_rotation(omega_rad_s, delta_rad_s, phi, t_s);
    const Complex lo = std::polar(1.0, 0.5 * delta_rad_s * t_s);
    const Complex up = std::conj(lo);
    return {lo * u[0], lo * u[1], up * u[2], up * u[3]};
}

Mat2 multiply(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

void PulseSpec::validate() const {
    if (!(theta >= 0)) throw ValidationError("pulse.theta must be >= 0");
    if (!(duration_s > 0)) throw ValidationError("pulse.t_p must be > 0");
    if (!std::isfinite(carrier_offset_hz)) throw ValidationError("pulse.carrier must be finite");
    if (window_hz() < gamma_l_hz() * (1 - 1e-12)) throw ValidationError("pulse.w_cut must be >= Gamma_L");
    if (reference.a == reference.b) throw ValidationError("pulse.transition must join two distinct levels");
}

// ---------------------------------------------------------------------------

Register::Register(LevelScheme scheme, std::vector<IonSite> ions)
    : scheme_(std::move(scheme)), ions_(std::move(ions)), transitions_(scheme_transitions(scheme_)) {
    const int d = scheme_.dimension();
    for (const auto& ion : ions_) {
        if (ion.offsets_hz.size() != transitions_.size()) {
            throw ValidationError("register: ion " + std::to_string(ion.id) + " needs " +
                                  std::to_string(transitions_.size()) + " transition offsets");
        }
    }
    for (std::size_t i = 0; i < ions_.size(); ++i) {
        for (std::size_t j = i + 1; j < ions_.size(); ++j) {
            if (ions_[i].id == ions_[j].id) throw ValidationError("register: duplicate ion id " + std::to_string(ions_[i].id));
        }
    }
    couplings_.assign(ions_.size() * ions_.size(), PairCoupling(d, d));
}

Register Register::physical(const IonDatabase& db, const LevelScheme& scheme, const InteractionModel& model,
                            std::vector<IonSite> ions) {
    Register reg(scheme, std::move(ions));
    for (int i = 0; i < reg.size(); ++i) {
        for (int j = i + 1; j < reg.size(); ++j) {
            reg.set_coupling(i, j, physical_coupling(db, scheme, model, reg.ions_[i], reg.ions_[j]));
        }
    }
    return reg;
}

Register Register::blockade(const LevelScheme& scheme, std::vector<IonSite> ions, double delta_hz) {
    Register reg(scheme, std::move(ions));
    const PairCoupling w = blockade_coupling(scheme, delta_hz);
    for (int i = 0; i < reg.size(); ++i) {
        for (int j = i + 1; j < reg.size(); ++j) reg.set_coupling(i, j, w);
    }
    return reg;
}

int Register::index_of(int ion_id) const {
    for (int i = 0; i < size(); ++i) {
        if (ions_[static_cast<std::size_t>(i)].id == ion_id) return i;
    }
    throw NotFoundError("no ion with id " + std::to_string(ion_id) + " in the register");
}

const PairCoupling& Register::coupling(int i, int j) const {
    return couplings_[static_cast<std::size_t>(i * size() + j)];
}

void Register::set_coupling(int i, int j, const PairCoupling& w) {
    if (i == j) throw ValidationError("register: an ion does not couple to itself");
    if (w.dim_a() != dim() || w.dim_b() != dim()) throw ValidationError("register: coupling has the wrong shape");
    couplings_[static_cast<std::size_t>(i * size() + j)] = w;
    couplings_[static_cast<std::size_t>(j * size() + i)] = w.transposed();
}

std::pair<int, int> Register::lower_upper(const Transition& t) const {
    const int la = scheme_.local_index(t.a);
    const int lb = scheme_.local_index(t.b);
    if (la == lb) throw ValidationError("transition joins a level to itself");
    const bool a_lower = scheme_.level(t.a).energy_cm1 < scheme_.level(t.b).energy_cm1;
    return a_lower ? std::pair{la, lb} : std::pair{lb, la};
}

double Register::bare_hz(const Transition& t) const {
    return units::cm1_to_hz(transition_frequency(scheme_, t.a, t.b));
}

double Register::offset_from(int i, const Transition& t, const Transition& reference) const {
    const auto& ion = ions_[static_cast<std::size_t>(i)];
    const double own = ion.offsets_hz[static_cast<std::size_t>(transition_index(scheme_, t.a, t.b))];
    return (bare_hz(t) - bare_hz(reference)) + own;
}

double Register::pair_shift(int i, const Transition& t, const std::vector<int>& levels) const {
    const auto [lo, up] = lower_upper(t);
    double shift = 0.0;
    for (int j = 0; j < size(); ++j) {
        if (j == i) continue;
        const auto& w = coupling(i, j);
        shift += w.at(up, levels[static_cast<std::size_t>(j)]) - w.at(lo, levels[static_cast<std::size_t>(j)]);
    }
    return shift;
}

// ---------------------------------------------------------------------------

EnsembleState::EnsembleState(int n_ions, int dim, int level) : n_(n_ions), d_(dim) {
    if (n_ions < 1) throw ValidationError("state: at least one ion is required");
    if (n_ions > kMaxSimulatedIons) {
        throw ValidationError("state: " + std::to_string(n_ions) + " ions exceed the simulator cap of " +
                              std::to_string(kMaxSimulatedIons));
    }
    if (dim < 2 || dim > 4) throw ValidationError("state: level dimension must be 2..4");
    if (level < 0 || level >= dim) throw ValidationError("state: initial level out of range");
    strides_.assign(static_cast<std::size_t>(n_), 1);
    for (int i = n_ - 2; i >= 0; --i) {
        strides_[static_cast<std::size_t>(i)] = strides_[static_cast<std::size_t>(i + 1)] * static_cast<std::size_t>(d_);
    }
    amps_.assign(strides_[0] * static_cast<std::size_t>(d_), Complex(0));
    std::size_t idx = 0;
    for (int i = 0; i < n_; ++i) idx += static_cast<std::size_t>(level) * strides_[static_cast<std::size_t>(i)];
    amps_[idx] = 1.0;
}

EnsembleState EnsembleState::product(const std::vector<std::vector<Complex>>& per_ion) {
    if (per_ion.empty()) throw ValidationError("state: at least one ion is required");
    const int d = static_cast<int>(per_ion.front().size());
    EnsembleState s(static_cast<int>(per_ion.size()), d, 0);
    for (const auto& v : per_ion) {
        if (static_cast<int>(v.size()) != d) throw ValidationError("state: per-ion vectors differ in length");
    }
    for (std::size_t idx = 0; idx < s.amps_.size(); ++idx) {
        Complex a = 1.0;
        for (int i = 0; i < s.n_; ++i) a *= per_ion[static_cast<std::size_t>(i)][static_cast<std::size_t>(s.level_of(idx, i))];
        s.amps_[idx] = a;
    }
    return s;
}

std::size_t EnsembleState::index_of(const std::vector<int>& levels) const {
    if (static_cast<int>(levels.size()) != n_) throw ValidationError("state: level vector has the wrong length");
    std::size_t idx = 0;
    for (int i = 0; i < n_; ++i) {
        const int l = levels[static_cast<std::size_t>(i)];
        if (l < 0 || l >= d_) throw ValidationError("state: level out of range");
        idx += static_cast<std::size_t>(l) * strides_[static_cast<std::size_t>(i)];
    }
    return idx;
}

double EnsembleState::norm_sq() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
}

double EnsembleState::population(int ion, int level) const {
    double p = 0.0;
    for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
        if (level_of(idx, ion) == level) p += std::norm(amps_[idx]);
    }
    return p;
}

std::vector<double> EnsembleState::populations(int ion) const {
    std::vector<double> p(static_cast<std::size_t>(d_), 0.0);
    for (std::size_t idx = 0; idx < amps_.size(); ++idx) p[static_cast<std::size_t>(level_of(idx, ion))] += std::norm(amps_[idx]);
    return p;
}

// ---------------------------------------------------------------------------

std::vector<Addressed> addressed_ions(const Register& reg, const PulseSpec& pulse) {
    pulse.validate();
    const auto transitions = scheme_transitions(reg.scheme());
    std::vector<Addressed> out;
    for (int i = 0; i < reg.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        Addressed hit{i, {}, 0.0};
        for (const auto& t : transitions) {
            const double det = reg.offset_from(i, t, pulse.reference) - pulse.carrier_offset_hz;
            if (std::abs(det) < std::abs(best)) {
                best = det;
                hit.transition = t;
            }
        }
        // A line can sit anywhere its partners' levels push it; reach that far.
        const auto [lo, up] = reg.lower_upper(hit.transition);
        double reach = 0.0;
        for (int j = 0; j < reg.size(); ++j) {
            if (j == i) continue;
            const auto& w = reg.coupling(i, j);
            double most = 0.0;
            for (int l = 0; l < reg.dim(); ++l) most = std::max(most, std::abs(w.at(up, l) - w.at(lo, l)));
            reach += most;
        }
        if (std::abs(best) <= pulse.window_hz() + reach) {
            hit.detuning_hz = best;
            out.push_back(hit);
        }
    }
    return out;
}

namespace {

struct RotationPlan {
    int ion = 0;
    int lo = 0;
    int up = 0;
    double base_hz = 0.0;
    std::vector<std::vector<double>> partner_shift;  // [j][level_j], zero row for j == ion
};

RotationPlan plan_rotation(const Register& reg, const Addressed& a) {
    RotationPlan p;
    p.ion = a.ion;
    std::tie(p.lo, p.up) = reg.lower_upper(a.transition);
    p.base_hz = a.detuning_hz;
    const int d = reg.dim();
    p.partner_shift.assign(static_cast<std::size_t>(reg.size()), std::vector<double>(static_cast<std::size_t>(d), 0.0));
    for (int j = 0; j < reg.size(); ++j) {
        if (j == a.ion) continue;
        const auto& w = reg.coupling(a.ion, j);
        for (int l = 0; l < d; ++l) p.partner_shift[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)] = w.at(p.up, l) - w.at(p.lo, l);
    }
    return p;
}

void rotate_pair(Complex& lower, Complex& upper, const Mat2& u) {
    const Complex a = lower;
    const Complex b = upper;
    lower = u[0] * a + u[1] * b;
    upper = u[2] * a + u[3] * b;
}

// Reference kernel: visits every basis index and decodes all levels.
void rotate_serial(EnsembleState& state, const RotationPlan& p, const PulseSpec& pulse) {
    auto& amps = state.amplitudes();
    const std::size_t stride = state.stride(p.ion);
    const std::size_t jump = static_cast<std::size_t>(p.up - p.lo) * stride;
    const int n = state.n_ions();
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        if (state.level_of(idx, p.ion) != p.lo) continue;
        double det = p.base_hz;
        for (int j = 0; j < n; ++j) {
            if (j == p.ion) continue;
            det += p.partner_shift[static_cast<std::size_t>(j)][static_cast<std::size_t>(state.level_of(idx, j))];
        }
        const Mat2 u = interaction_rotation(pulse.rabi_rad_s(), kTwoPi * det, pulse.phase, pulse.duration_s);
        rotate_pair(amps[idx], amps[idx + jump], u);
    }
}

// Parallel kernel: one work item per configuration of the other ions.
void rotate_parallel(EnsembleState& state, const RotationPlan& p, const PulseSpec& pulse) {
    auto& amps = state.amplitudes();
    const std::size_t stride = state.stride(p.ion);
    const std::size_t d = static_cast<std::size_t>(state.dim());
    const std::size_t rest = amps.size() / d;
    const std::size_t off_lo = static_cast<std::size_t>(p.lo) * stride;
    const std::size_t off_up = static_cast<std::size_t>(p.up) * stride;
    const int n = state.n_ions();
    const double omega = pulse.rabi_rad_s();

#pragma omp parallel for schedule(static)
    for (long long rr = 0; rr < static_cast<long long>(rest); ++rr) {
        const std::size_t r = static_cast<std::size_t>(rr);
        const std::size_t base = (r / stride) * stride * d + r % stride;
        double det = p.base_hz;
        for (int j = 0; j < n; ++j) {
            if (j == p.ion) continue;
            det += p.partner_shift[static_cast<std::size_t>(j)][static_cast<std::size_t>(state.level_of(base, j))];
        }
        const Mat2 u = interaction_rotation(omega, kTwoPi * det, pulse.phase, pulse.duration_s);
        rotate_pair(amps[base + off_lo], amps[base + off_up], u);
    }
}

void check_shape(const EnsembleState& state, const Register& reg) {
    if (state.n_ions() != reg.size() || state.dim() != reg.dim()) {
        throw ValidationError("state shape does not match the register");
    }
}

}  // namespace

std::vector<Addressed> apply_pulse(EnsembleState& state, const Register& reg, const PulseSpec& pulse, Exec exec) {
    check_shape(state, reg);
    const auto hits = addressed_ions(reg, pulse);
    for (const auto& hit : hits) {
        const RotationPlan plan = plan_rotation(reg, hit);
        if (exec == Exec::serial) {
            rotate_serial(state, plan, pulse);
        } else {
            rotate_parallel(state, plan, pulse);
        }
    }
    return hits;
}

void apply_decay(EnsembleState& state, const Register& reg, double dt_s) {
    check_shape(state, reg);
    if (!(dt_s >= 0)) throw ValidationError("decay: dt must be >= 0");
    if (dt_s == 0) return;
    const auto roles = reg.scheme().local_roles();
    std::vector<double> rate(roles.size());
    for (std::size_t l = 0; l < roles.size(); ++l) {
        const double tau_us = reg.scheme().level(roles[l]).lifetime_us;
        rate[l] = std::isinf(tau_us) ? 0.0 : 1.0 / (tau_us * 1e-6);
    }
    auto& amps = state.amplitudes();
    double lost = 0.0;
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        double total = 0.0;
        for (int i = 0; i < state.n_ions(); ++i) total += rate[static_cast<std::size_t>(state.level_of(idx, i))];
        if (total == 0.0) continue;
        const double before = std::norm(amps[idx]);
        amps[idx] *= std::exp(-0.5 * dt_s * total);
        lost += before - std::norm(amps[idx]);
    }
    state.add_leakage(lost);
}

void apply_dephasing(EnsembleState& state, const Register& reg, double gamma_h_hz, double dt_s, std::mt19937_64& rng) {
    check_shape(state, reg);
    if (!(gamma_h_hz >= 0 && dt_s >= 0)) throw ValidationError("dephasing: Gamma_h and dt must be >= 0");
    const double sigma = std::sqrt(kPi * gamma_h_hz * dt_s);
    if (sigma == 0) return;
    std::normal_distribution<double> g(0.0, sigma);
    std::vector<std::vector<Complex>> kick(static_cast<std::size_t>(state.n_ions()));
    for (auto& k : kick) {
        k.resize(static_cast<std::size_t>(state.dim()));
        for (auto& z : k) z = std::polar(1.0, g(rng));
    }
    auto& amps = state.amplitudes();
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        for (int i = 0; i < state.n_ions(); ++i) amps[idx] *= kick[static_cast<std::size_t>(i)][static_cast<std::size_t>(state.level_of(idx, i))];
    }
}

std::string export_schedule(const std::vector<PulseSpec>& pulses, char delimiter) {
    const std::string d(1, delimiter);
    std::string out = "index" + d + "ion_id" + d + "transition" + d + "carrier_offset_hz" + d + "theta_over_pi" + d +
                      "phase" + d + "t_p_s" + d + "window_hz\n";
    for (std::size_t k = 0; k < pulses.size(); ++k) {
        const auto& p = pulses[k];
        out += std::to_string(k) + d + (p.ion_id ? std::to_string(*p.ion_id) : std::string()) + d +
               transition_name(p.reference) + d + detail::format_double(p.carrier_offset_hz) + d +
               detail::format_double(p.theta / kPi) + d + detail::format_double(p.phase) + d +
               detail::format_double(p.duration_s) + d + detail::format_double(p.window_hz()) + "\n";
    }
    return out;
}

std::vector<PulseSpec> import_schedule(std::string_view text, char delimiter) {
    const auto table = detail::parse_csv(text, delimiter);
    const int c_ion = table.column("ion_id");
    const int c_tr = table.column("transition");
    const int c_car = table.column("carrier_offset_hz");
    const int c_th = table.column("theta_over_pi");
    const int c_ph = table.column("phase");
    const int c_tp = table.column("t_p_s");
    const int c_w = table.column("window_hz");
    std::vector<PulseSpec> out;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string ctx = "schedule row " + std::to_string(r + 1);
        PulseSpec p;
        if (!row[static_cast<std::size_t>(c_ion)].empty()) {
            p.ion_id = static_cast<int>(detail::parse_int(row[static_cast<std::size_t>(c_ion)], ctx + " ion_id"));
        }
        p.reference = parse_transition(row[static_cast<std::size_t>(c_tr)]);
        p.carrier_offset_hz = detail::parse_double(row[static_cast<std::size_t>(c_car)], ctx + " carrier_offset_hz");
        p.theta = kPi * detail::parse_double(row[static_cast<std::size_t>(c_th)], ctx + " theta_over_pi");
        p.phase = detail::parse_double(row[static_cast<std::size_t>(c_ph)], ctx + " phase");
        p.duration_s = detail::parse_double(row[static_cast<std::size_t>(c_tp)], ctx + " t_p_s");
        p.cutoff_hz = detail::parse_double(row[static_cast<std::size_t>(c_w)], ctx + " window_hz");
        p.validate();
        out.push_back(p);
    }
    return out;
}

}  // namespace reiqc
