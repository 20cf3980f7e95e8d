#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <optional>
#include <string>
#include <vector>

#include "reiqc/ensemble.hpp"
#include "reiqc/exec.hpp"
#include "reiqc/ion_data.hpp"

namespace reiqc {

using Vec3 = std::array<double, 3>;

/// State-difference static moments of one ion for one transition j -> j',
/// expressed in the pair frame (x along the inter-ion vector).
struct StaticMoments {
    Vec3 dipole_m{};     ///< change of <x>, <y>, <z>
    Vec3 second_m2{};    ///< change of <x^2>, <y^2>, <z^2>
    double r2_m2 = 0.0;  ///< change of <r^2>; must equal the sum of second_m2

    /// Throws ValidationError when r2 disagrees with the component sum beyond 1e-12 relative.
    void validate() const;
    static StaticMoments from_second(const Vec3& second);
};

/// Dipole-dipole shift of ion 1's transition caused by ion 2's change, in Hz.
double dipole_shift_full(const StaticMoments& m1, const StaticMoments& m2, double r_m, double eps_r);
/// Quadrupole-quadrupole shift of ion 1's transition caused by ion 2's change, in Hz.
/// Only the anisotropic parts of the moment changes contribute; an isotropic
/// change on either ion gives exactly zero.
double quad_shift_full(const StaticMoments& m1, const StaticMoments& m2, double r_m, double eps_r);
/// The bracket of the quadrupole formula, in m^4.
double quad_bracket(const StaticMoments& m1, const StaticMoments& m2);

/// Order-of-magnitude dipole estimate gamma0 / eps (U~/U01)^2 (kR)^-3, reported in Hz.
double dipole_shift_estimate(double gamma0_s, double eps_r, double u2_ratio_sq, double k_m, double r_m);
/// Order-of-magnitude quadrupole estimate 25 dU^2 w0 r0^5 / (eps R^5), w0 in rad/s, reported in Hz.
double quad_shift_estimate(double delta_u2_sq, double omega0_rad_s, double r0_sq_m2, double eps_r, double r_m);

struct BlockadeCheck {
    bool ok = false;
    double margin = 0.0;  ///< |delta| / max(Gamma_L, Gamma_h)
};
BlockadeCheck blockade_ok(double delta_hz, double gamma_l_hz, double gamma_h_hz);

/// Distance (units of a) where A_d/R^3 == A_q/R^5; quadrupole dominates inside it.
double crossover_distance(double a_dipole, double a_quad);

/// Exchange J(R) = J_nn exp(-(R-1)/lambda); R and lambda in units of a.
double exchange_estimate(double r_a, double j_nn_cm1, double decay_a = 0.4);
/// Magnetic dipole-dipole M_nn R^-3; R in units of a.
double magnetic_dd_estimate(double r_a, double m_nn_cm1 = 0.05);
/// Motional-narrowing transfer rate G^2 / sqrt(G^2 + D^2).
double transfer_rate_motional(double gamma_exch_hz, double detuning_hz);
/// One-phonon transfer rate G^2 kappa^2 (n + 1) / |D| with n the Planck factor at
/// frequency delta. Throws PhysicsError at D == 0 (use the motional-narrowing rate).
double forster_rate(double gamma_exch_hz, double kappa, double delta_hz, double temperature_k, double detuning_hz);

/// Axially symmetric, traceless second-moment change for j -> j' along `axis`
/// (a unit vector in the pair frame), with q = (sqrt|U_j'j'|^2 - sqrt|U_jj|^2) r0^2.
/// The dipole change is zero in this model.
StaticMoments moments_from_u2(const IonDatabase& db, std::string_view ion, std::string_view level_j,
                              std::string_view level_jp, double r0_sq_m2, const Vec3& axis);

/// Signed axial magnitude sqrt(|U_jj|^2) r0^2 of one level.
double level_quadrupole(const Level& level, double r0_sq_m2);

enum class AxisMode { global_z, random };

/// Parameters of the pair-interaction model shared by the pair table, the
/// simulator couplings and the spectra.
struct InteractionModel {
    double lattice_constant_m = 4e-10;
    double eps_r = 10.0;
    double r0_sq_m2 = 0.1 * 4e-10 * 4e-10;
    double refractive_index = 1.6;
    bool include_dipole_estimate = true;
    double gamma0_s = 1e4;
    AxisMode axes = AxisMode::global_z;
    std::uint64_t axis_seed = 0;

    static InteractionModel from_crystal(const CrystalConfig& crystal);
};

/// Orthonormal pair frame: ex along (b - a), ez the part of global z (or
/// global y when the pair lies along z) orthogonal to ex.
struct PairFrame {
    Vec3 ex{}, ey{}, ez{};
    double distance_m = 0.0;

    static PairFrame between(const Vec3& a, const Vec3& b);
    Vec3 to_frame(const Vec3& v) const;
};

/// Principal axis of an ion's quadrupole in global coordinates.
Vec3 ion_axis(const InteractionModel& model, int ion_id);

/// Dipole-estimate prefactor of a scheme: the shift at R = a, in Hz.
/// Uses the 0 <-> 1' transition: U~ = max(sqrt|U00|^2, sqrt|U1'1'|^2), U01 the
/// largest of sqrt|U^(k)_{0,1'}|^2, k from that transition's frequency.
double scheme_dipole_prefactor(const IonDatabase& db, const LevelScheme& scheme, const InteractionModel& model);

/// Diagonal interaction energies (Hz) of an ordered ion pair over the local
/// levels of both ions: w(la, lb). Transition shifts are differences of entries.
class PairCoupling {
public:
    PairCoupling() = default;
    PairCoupling(int dim_a, int dim_b) : dim_a_(dim_a), dim_b_(dim_b), w_(static_cast<std::size_t>(dim_a * dim_b)) {}

    int dim_a() const { return dim_a_; }
    int dim_b() const { return dim_b_; }
    double at(int la, int lb) const { return w_[static_cast<std::size_t>(la * dim_b_ + lb)]; }
    double& at(int la, int lb) { return w_[static_cast<std::size_t>(la * dim_b_ + lb)]; }
    bool is_zero() const;
    PairCoupling transposed() const;

    /// Shift of ion a's transition from -> to when ion b moves b_from -> b_to.
    double transition_shift(int a_from, int a_to, int b_from, int b_to) const {
        return at(a_to, b_to) - at(a_from, b_to) - at(a_to, b_from) + at(a_from, b_from);
    }

private:
    int dim_a_ = 0;
    int dim_b_ = 0;
    std::vector<double> w_;
};

/// Quadrupole (plus optional dipole-estimate) coupling between two ions of one
/// scheme. Level moments are referenced to the ground level, so w vanishes
/// whenever either ion is in |g>. The dipole estimate sits on the diagonal
/// entry of the non-ground end of the 0 <-> 1' transition.
PairCoupling physical_coupling(const IonDatabase& db, const LevelScheme& scheme, const InteractionModel& model,
                               const IonSite& a, const IonSite& b);
/// A bare blockade: the 0 <-> 1' line of either ion moves by delta when the
/// other makes the same transition. Stored on the diagonal entry of the
/// non-ground end of that transition (1', or 0 when g = 1').
PairCoupling blockade_coupling(const LevelScheme& scheme, double delta_hz);

struct PairShift {
    int id1 = 0;
    int id2 = 0;
    double r_over_a = 0.0;
    double delta_d_hz = 0.0;
    double delta_q_hz = 0.0;
    double delta_total_hz = 0.0;
    double blockade_margin = 0.0;
    std::string dominant;          ///< "quadrupole" or "dipole"
    bool cross_term_warning = false;  ///< R within a factor 2 of the crossover
};

/// Shift of id1's 0 <-> 1' transition when id2 goes 0 -> 1', one record per
/// unordered pair, ordered by (id1, id2) with id1 < id2.
std::vector<PairShift> pair_shift_table(const IonDatabase& db, const LevelScheme& scheme,
                                        const InteractionModel& model, const std::vector<IonSite>& sites,
                                        double gamma_l_hz, double gamma_h_hz, Exec exec = Exec::parallel);

std::string export_pair_shifts(const std::vector<PairShift>& table, char delimiter = ',');

}  // namespace reiqc
