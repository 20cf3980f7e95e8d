#include "reiqc/interactions.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "csv.hpp"
#include "reiqc/error.hpp"
#include "reiqc/units.hpp"

namespace reiqc {

namespace {

constexpr double kCmPerM = 100.0;

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 normalized(const Vec3& v) {
    const double n = std::sqrt(dot(v, v));
    return {v[0] / n, v[1] / n, v[2] / n};
}

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

void require_distance(double r_m, const char* who) {
    if (!(r_m > 0)) throw ValidationError(std::string(who) + ": R must be > 0");
}

// e^2 / h in CGS, so that (e^2 / h) * [cm^-1] is a frequency in Hz.
double e2_over_h_cgs() {
    return units::kElementaryChargeCgs * units::kElementaryChargeCgs / (units::kTwoPi * units::kHbarCgs);
}

Vec3 axial_second(double magnitude, const Vec3& axis_in_frame) {
    const Vec3 n = normalized(axis_in_frame);
    return {magnitude * (n[0] * n[0] - 1.0 / 3.0), magnitude * (n[1] * n[1] - 1.0 / 3.0),
            magnitude * (n[2] * n[2] - 1.0 / 3.0)};
}

}  // namespace

void StaticMoments::validate() const {
    const double sum = second_m2[0] + second_m2[1] + second_m2[2];
    const double scale = std::max({std::abs(second_m2[0]), std::abs(second_m2[1]), std::abs(second_m2[2]),
                                   std::abs(r2_m2)});
    if (std::abs(sum - r2_m2) > 1e-12 * scale) {
        throw ValidationError("StaticMoments: <r^2> change must equal <x^2> + <y^2> + <z^2>");
    }
}

StaticMoments StaticMoments::from_second(const Vec3& second) {
    StaticMoments m;
    m.second_m2 = second;
    m.r2_m2 = second[0] + second[1] + second[2];
    return m;
}

double dipole_shift_full(const StaticMoments& m1, const StaticMoments& m2, double r_m, double eps_r) {
    require_distance(r_m, "dipole_shift_full");
    const auto& d1 = m1.dipole_m;
    const auto& d2 = m2.dipole_m;
    const double geometry_m2 = -2.0 * d1[0] * d2[0] + d1[1] * d2[1] + d1[2] * d2[2];
    const double r_cm = r_m * kCmPerM;
    return e2_over_h_cgs() * geometry_m2 * kCmPerM * kCmPerM / (eps_r * r_cm * r_cm * r_cm);
}

double quad_bracket(const StaticMoments& m1, const StaticMoments& m2) {
    m1.validate();
    m2.validate();
    // With r^2 = x^2 + y^2 + z^2 the bracket reduces to the traceless parts:
    // 17 x1' x2' + 2 y1' y2' + 2 z1' z2', u' = u - r^2/3.
    auto traceless = [](const Vec3& s) {
        return Vec3{(2.0 * s[0] - s[1] - s[2]) / 3.0, (2.0 * s[1] - s[0] - s[2]) / 3.0,
                    (2.0 * s[2] - s[0] - s[1]) / 3.0};
    };
    const Vec3 a = traceless(m1.second_m2);
    const Vec3 b = traceless(m2.second_m2);
    return 17.0 * a[0] * b[0] + 2.0 * a[1] * b[1] + 2.0 * a[2] * b[2];
}

double quad_shift_full(const StaticMoments& m1, const StaticMoments& m2, double r_m, double eps_r) {
    require_distance(r_m, "quad_shift_full");
    const double bracket_cm4 = quad_bracket(m1, m2) * std::pow(kCmPerM, 4);
    const double r_cm = r_m * kCmPerM;
    return 0.75 * e2_over_h_cgs() * bracket_cm4 / (eps_r * std::pow(r_cm, 5));
}

double dipole_shift_estimate(double gamma0_s, double eps_r, double u2_ratio_sq, double k_m, double r_m) {
    if (!(gamma0_s > 0 && eps_r > 0 && u2_ratio_sq >= 0 && k_m > 0 && r_m > 0)) {
        throw ValidationError("dipole_shift_estimate: inputs must be positive");
    }
    return gamma0_s / eps_r * u2_ratio_sq / std::pow(k_m * r_m, 3) / units::kTwoPi;
}

double quad_shift_estimate(double delta_u2_sq, double omega0_rad_s, double r0_sq_m2, double eps_r, double r_m) {
    if (!(delta_u2_sq >= 0 && omega0_rad_s > 0 && r0_sq_m2 > 0 && eps_r > 0 && r_m > 0)) {
        throw ValidationError("quad_shift_estimate: inputs must be positive");
    }
    return 25.0 * delta_u2_sq * omega0_rad_s * std::pow(r0_sq_m2, 2.5) / (eps_r * std::pow(r_m, 5)) / units::kTwoPi;
}

BlockadeCheck blockade_ok(double delta_hz, double gamma_l_hz, double gamma_h_hz) {
    const double width = std::max(gamma_l_hz, gamma_h_hz);
    const double shift = std::abs(delta_hz);
    if (width <= 0) return {shift > 0, shift > 0 ? INFINITY : 0.0};
    return {shift > width, shift / width};
}

double crossover_distance(double a_dipole, double a_quad) {
    if (!(a_dipole > 0 && a_quad > 0)) throw ValidationError("crossover_distance: prefactors must be > 0");
    return std::sqrt(a_quad / a_dipole);
}

double exchange_estimate(double r_a, double j_nn_cm1, double decay_a) {
    if (!(r_a >= 1)) throw ValidationError("exchange_estimate: R must be >= 1 lattice constant");
    if (!(decay_a > 0)) throw ValidationError("exchange_estimate: decay length must be > 0");
    return j_nn_cm1 * std::exp(-(r_a - 1.0) / decay_a);
}

double magnetic_dd_estimate(double r_a, double m_nn_cm1) {
    if (!(r_a >= 1)) throw ValidationError("magnetic_dd_estimate: R must be >= 1 lattice constant");
    return m_nn_cm1 / (r_a * r_a * r_a);
}

double transfer_rate_motional(double gamma_exch_hz, double detuning_hz) {
    if (gamma_exch_hz == 0) return 0.0;
    return gamma_exch_hz * gamma_exch_hz / std::hypot(gamma_exch_hz, detuning_hz);
}

double forster_rate(double gamma_exch_hz, double kappa, double delta_hz, double temperature_k, double detuning_hz) {
    if (detuning_hz == 0) {
        throw PhysicsError("forster_rate: resonant pair (detuning 0); use transfer_rate_motional");
    }
    if (!(kappa >= 0 && kappa < 1)) throw ValidationError("forster_rate: kappa must be in [0, 1)");
    if (!(temperature_k >= 0)) throw ValidationError("forster_rate: temperature must be >= 0");
    double occupation = 0.0;
    if (temperature_k > 0 && delta_hz != 0) {
        const double x = units::kPlanck * std::abs(delta_hz) / (units::kBoltzmann * temperature_k);
        occupation = 1.0 / std::expm1(x);
    }
    return gamma_exch_hz * gamma_exch_hz * kappa * kappa * (occupation + 1.0) / std::abs(detuning_hz);
}

double level_quadrupole(const Level& level, double r0_sq_m2) { return std::sqrt(level.u2_diag_sq) * r0_sq_m2; }

StaticMoments moments_from_u2(const IonDatabase& db, std::string_view ion, std::string_view level_j,
                              std::string_view level_jp, double r0_sq_m2, const Vec3& axis) {
    const double q = level_quadrupole(db.level(ion, level_jp), r0_sq_m2) - level_quadrupole(db.level(ion, level_j), r0_sq_m2);
    return StaticMoments::from_second(axial_second(q, axis));
}

InteractionModel InteractionModel::from_crystal(const CrystalConfig& crystal) {
    InteractionModel m;
    m.lattice_constant_m = crystal.lattice_constant_m;
    m.eps_r = crystal.eps_r;
    m.r0_sq_m2 = crystal.r0_sq_m2();
    m.refractive_index = crystal.refractive_index;
    return m;
}

PairFrame PairFrame::between(const Vec3& a, const Vec3& b) {
    PairFrame f;
    const Vec3 d{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
    f.distance_m = std::sqrt(dot(d, d));
    if (!(f.distance_m > 0)) throw ValidationError("PairFrame: ions coincide");
    f.ex = normalized(d);
    Vec3 ref{0, 0, 1};
    if (std::abs(dot(ref, f.ex)) > 1.0 - 1e-12) ref = {0, 1, 0};
    const double p = dot(ref, f.ex);
    f.ez = normalized({ref[0] - p * f.ex[0], ref[1] - p * f.ex[1], ref[2] - p * f.ex[2]});
    f.ey = cross(f.ez, f.ex);
    return f;
}

Vec3 PairFrame::to_frame(const Vec3& v) const { return {dot(v, ex), dot(v, ey), dot(v, ez)}; }

Vec3 ion_axis(const InteractionModel& model, int ion_id) {
    if (model.axes == AxisMode::global_z) return {0, 0, 1};
    std::mt19937_64 rng(stream_seed(model.axis_seed, static_cast<std::uint64_t>(ion_id)));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> phi(0.0, units::kTwoPi);
    const double z = u(rng);
    const double p = phi(rng);
    const double s = std::sqrt(1.0 - z * z);
    return {s * std::cos(p), s * std::sin(p), z};
}

double scheme_dipole_prefactor(const IonDatabase& db, const LevelScheme& scheme, const InteractionModel& model) {
    const double u_tilde = std::max(std::sqrt(scheme.zero.u2_diag_sq), std::sqrt(scheme.aux.u2_diag_sq));
    const double u01 = std::sqrt(db.u_sq(scheme.ion, scheme.zero.label, scheme.aux.label).max());
    if (!(u01 > 0)) throw PhysicsError("scheme " + scheme.id() + ": 0 <-> 1' transition has no intensity");
    const double ratio_sq = (u_tilde / u01) * (u_tilde / u01);
    const double k = units::wave_number(transition_frequency(scheme, Role::zero, Role::aux), model.refractive_index);
    return dipole_shift_estimate(model.gamma0_s, model.eps_r, ratio_sq, k, model.lattice_constant_m);
}

bool PairCoupling::is_zero() const {
    return std::all_of(w_.begin(), w_.end(), [](double v) { return v == 0.0; });
}

PairCoupling PairCoupling::transposed() const {
    PairCoupling t(dim_b_, dim_a_);
    for (int a = 0; a < dim_a_; ++a) {
        for (int b = 0; b < dim_b_; ++b) t.at(b, a) = at(a, b);
    }
    return t;
}

namespace {

// The level whose pair with itself carries the 0 <-> 1' scalar shift: the
// non-ground end of that transition, so ground-state neighbours shift nothing.
int scalar_level(const LevelScheme& scheme) {
    return scheme.ground_is_aux() ? scheme.local_index(Role::zero) : scheme.local_index(Role::aux);
}

}  // namespace

PairCoupling physical_coupling(const IonDatabase& db, const LevelScheme& scheme, const InteractionModel& model,
                               const IonSite& a, const IonSite& b) {
    const PairFrame frame = PairFrame::between(a.position_m, b.position_m);
    const Vec3 axis_a = frame.to_frame(ion_axis(model, a.id));
    const Vec3 axis_b = frame.to_frame(ion_axis(model, b.id));
    const auto roles = scheme.local_roles();
    const int d = scheme.dimension();
    const double q_ground = level_quadrupole(scheme.ground, model.r0_sq_m2);

    // Moments are taken relative to the ground level. The bracket is bilinear,
    // so transition shifts are unchanged and an all-ground neighbourhood
    // leaves every line where its inhomogeneous offset puts it.
    PairCoupling w(d, d);
    for (int la = 0; la < d; ++la) {
        const double qa = level_quadrupole(scheme.level(roles[la]), model.r0_sq_m2) - q_ground;
        const auto ma = StaticMoments::from_second(axial_second(qa, axis_a));
        for (int lb = 0; lb < d; ++lb) {
            const double qb = level_quadrupole(scheme.level(roles[lb]), model.r0_sq_m2) - q_ground;
            const auto mb = StaticMoments::from_second(axial_second(qb, axis_b));
            w.at(la, lb) = quad_shift_full(ma, mb, frame.distance_m, model.eps_r);
        }
    }
    if (model.include_dipole_estimate) {
        const double r_a = frame.distance_m / model.lattice_constant_m;
        const int x = scalar_level(scheme);
        w.at(x, x) += scheme_dipole_prefactor(db, scheme, model) / (r_a * r_a * r_a);
    }
    return w;
}

PairCoupling blockade_coupling(const LevelScheme& scheme, double delta_hz) {
    const int d = scheme.dimension();
    PairCoupling w(d, d);
    const int x = scalar_level(scheme);
    w.at(x, x) = delta_hz;
    return w;
}

namespace {

PairShift pair_record(const IonDatabase& db, const LevelScheme& scheme, const InteractionModel& model,
                      const IonSite& a, const IonSite& b, double dipole_prefactor, double gamma_l_hz,
                      double gamma_h_hz) {
    const PairFrame frame = PairFrame::between(a.position_m, b.position_m);
    const Vec3 axis_a = frame.to_frame(ion_axis(model, a.id));
    const Vec3 axis_b = frame.to_frame(ion_axis(model, b.id));
    const auto ma = moments_from_u2(db, scheme.ion, scheme.zero.label, scheme.aux.label, model.r0_sq_m2, axis_a);
    const auto mb = moments_from_u2(db, scheme.ion, scheme.zero.label, scheme.aux.label, model.r0_sq_m2, axis_b);

    PairShift rec;
    rec.id1 = std::min(a.id, b.id);
    rec.id2 = std::max(a.id, b.id);
    rec.r_over_a = frame.distance_m / model.lattice_constant_m;
    rec.delta_q_hz = quad_shift_full(ma, mb, frame.distance_m, model.eps_r);
    rec.delta_d_hz = model.include_dipole_estimate ? dipole_prefactor / std::pow(rec.r_over_a, 3) : 0.0;
    rec.delta_total_hz = rec.delta_d_hz + rec.delta_q_hz;
    rec.blockade_margin = blockade_ok(rec.delta_total_hz, gamma_l_hz, gamma_h_hz).margin;
    rec.dominant = std::abs(rec.delta_q_hz) >= std::abs(rec.delta_d_hz) ? "quadrupole" : "dipole";
    if (rec.delta_d_hz != 0 && rec.delta_q_hz != 0) {
        const double a_quad = std::abs(rec.delta_q_hz) * std::pow(rec.r_over_a, 5);
        const double r_star = crossover_distance(dipole_prefactor, a_quad);
        rec.cross_term_warning = rec.r_over_a >= 0.5 * r_star && rec.r_over_a <= 2.0 * r_star;
    }
    return rec;
}

}  // namespace

std::vector<PairShift> pair_shift_table(const IonDatabase& db, const LevelScheme& scheme,
                                        const InteractionModel& model, const std::vector<IonSite>& sites,
                                        double gamma_l_hz, double gamma_h_hz, Exec exec) {
    std::vector<IonSite> ordered = sites;
    std::sort(ordered.begin(), ordered.end(), [](const IonSite& x, const IonSite& y) { return x.id < y.id; });
    const double prefactor = model.include_dipole_estimate ? scheme_dipole_prefactor(db, scheme, model) : 0.0;

    const std::size_t n = ordered.size();
    const std::size_t n_pairs = n * (n - (n > 0 ? 1 : 0)) / 2;
    std::vector<PairShift> table(n_pairs);

    if (exec == Exec::serial) {
        std::size_t k = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                table[k++] = pair_record(db, scheme, model, ordered[i], ordered[j], prefactor, gamma_l_hz, gamma_h_hz);
            }
        }
        return table;
    }

    // Row i starts at i*n - i*(i+1)/2; each row is written independently.
    const long long rows = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 4)
    for (long long ii = 0; ii < rows; ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        std::size_t k = i * n - i * (i + 1) / 2;
        for (std::size_t j = i + 1; j < n; ++j) {
            table[k++] = pair_record(db, scheme, model, ordered[i], ordered[j], prefactor, gamma_l_hz, gamma_h_hz);
        }
    }
    return table;
}

std::string export_pair_shifts(const std::vector<PairShift>& table, char delimiter) {
    const std::string d(1, delimiter);
    std::string out = "id1" + d + "id2" + d + "R_over_a" + d + "delta_d_Hz" + d + "delta_q_Hz" + d + "delta_total_Hz" +
                      d + "blockade_margin\n";
    for (const auto& r : table) {
        out += std::to_string(r.id1) + d + std::to_string(r.id2) + d + detail::format_double(r.r_over_a) + d +
               detail::format_double(r.delta_d_hz) + d + detail::format_double(r.delta_q_hz) + d +
               detail::format_double(r.delta_total_hz) + d + detail::format_double(r.blockade_margin) + "\n";
    }
    return out;
}

}  // namespace reiqc
