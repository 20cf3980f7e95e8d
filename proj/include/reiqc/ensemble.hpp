#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace reiqc {

enum class OffsetDistribution { gaussian, uniform };
/// correlated: one offset per ion added to every transition.
/// independent: a separate draw per transition.
enum class OffsetCorrelation { correlated, independent };

/// FWHM of a Gaussian over its standard deviation, 2 sqrt(2 ln 2).
inline constexpr double kGaussianFwhmOverSigma = 2.3548200450309493;

struct CrystalConfig {
    double lattice_constant_m = 4e-10;
    double concentration = 0.1;     ///< site fraction occupied by the working ion
    double gamma_inh_hz = 1e12;     ///< inhomogeneous FWHM
    double gamma_h_ref_hz = 1e6;    ///< homogeneous floor (lifetime limited)
    double t_ref_k = 4.2;
    double raman_coeff_hz = 0.0;    ///< Raman contribution at t_ref
    double refractive_index = 1.6;
    double eps_r = 10.0;            ///< static dielectric screening
    double r0_sq_over_a_sq = 0.1;   ///< effective 4f radius, r0^2 / a^2
    OffsetDistribution distribution = OffsetDistribution::gaussian;
    OffsetCorrelation correlation = OffsetCorrelation::correlated;

    double r0_sq_m2() const { return r0_sq_over_a_sq * lattice_constant_m * lattice_constant_m; }
    /// Throws ValidationError naming the offending field.
    void validate() const;
};

struct IonSite {
    int id = 0;
    std::array<int, 3> lattice{};          ///< units of a
    std::array<double, 3> position_m{};
    std::vector<double> offsets_hz;        ///< one per scheme transition

    bool operator==(const IonSite&) const = default;
};

struct BoxExtent {
    int nx = 2;
    int ny = 2;
    int nz = 2;
    bool operator==(const BoxExtent&) const = default;
};

/// Occupies every site of a simple-cubic box independently with probability
/// `concentration`. Each site draws from its own stream derived from (seed,
/// site index), so the result does not depend on iteration order. Site ids
/// are assigned in lattice order (x fastest). Throws ValidationError on
/// box edge < 2 and PhysicsError when no site is occupied.
std::vector<IonSite> sample_sites(const CrystalConfig& config, int box_edge, std::uint64_t seed, int n_transitions);
/// Non-cubic variant; every extent must be >= 1.
std::vector<IonSite> sample_sites(const CrystalConfig& config, BoxExtent box, std::uint64_t seed, int n_transitions);

/// Offsets for one site drawn from the configured distribution.
std::vector<double> sample_offsets(const CrystalConfig& config, std::uint64_t stream_seed, int n_transitions);

/// Mixes a run seed with a stream index (splitmix64 finalizer).
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

/// Mean distance between ions at site fraction c_eff, in units of a: c_eff^(-1/3).
double mean_spacing(double c_eff);
/// Radius of the ball holding N ions at concentration c, in units of a: (N/c)^(1/3).
double ensemble_radius(double n_ions, double concentration);

/// Homogeneous width at temperature T: floor plus a T^7 Raman term.
double gamma_h(const CrystalConfig& config, double temperature_k);
/// Lorentzian FWHM of a dephasing-limited line, 1 / (pi T2).
double linewidth_from_t2(double t2_s);
/// Lorentzian FWHM of a lifetime-limited line, 1 / (2 pi tau).
double lifetime_limited_width(double lifetime_s);

/// Delimited export, one record per ion: id,i,j,k,offset_Hz_<transition>...
std::string export_sites(const std::vector<IonSite>& sites, const std::vector<std::string>& transition_names,
                         char delimiter = ',');
/// Inverse of export_sites. Positions are rebuilt from lattice coordinates.
std::vector<IonSite> import_sites(std::string_view text, double lattice_constant_m, char delimiter = ',');

}  // namespace reiqc
