#pragma once

// Physical constants and the handful of unit conversions used across the
// project. Frequencies are angular (rad/s) inside the dynamics; cm^-1 and Hz
// only appear at the spectroscopic boundary. Closed-form field estimates are
// evaluated in Gaussian-CGS and converted to SI on the way out.

#include <cmath>
#include <numbers>

namespace reiqc::units {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// SI
inline constexpr double kSpeedOfLight = 299792458.0;          // m/s, exact
inline constexpr double kHbar = 1.054571817e-34;              // J s
inline constexpr double kPlanck = kTwoPi * kHbar;             // J s
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kBoltzmann = 1.380649e-23;            // J/K
inline constexpr double kFineStructure = 1.0 / 137.035999;
inline constexpr double kFreeSpaceImpedance = 376.730313668;  // ohm

// Gaussian-CGS
inline constexpr double kSpeedOfLightCgs = 2.99792458e10;  // cm/s
inline constexpr double kHbarCgs = 1.054571817e-27;        // erg s
/// statvolt/cm -> V/cm
inline constexpr double kStatvoltToVolt = 299.792458;

/// Elementary charge in statcoulomb, derived from the pinned alpha so that
/// e^2 / (hbar c) == alpha holds to rounding. Agrees with CODATA
/// (4.80320471e-10) to better than 1e-8 relative.
inline const double kElementaryChargeCgs = std::sqrt(kFineStructure * kHbarCgs * kSpeedOfLightCgs);

inline constexpr double kCmPerMeter = 100.0;

/// 2 pi c wavenumber, with c in cm/s.
constexpr double cm1_to_angular(double wavenumber_cm1) { return kTwoPi * kSpeedOfLightCgs * wavenumber_cm1; }
constexpr double angular_to_cm1(double omega) { return omega / (kTwoPi * kSpeedOfLightCgs); }

constexpr double cm1_to_hz(double wavenumber_cm1) { return kSpeedOfLightCgs * wavenumber_cm1; }
constexpr double hz_to_cm1(double hz) { return hz / kSpeedOfLightCgs; }

constexpr double hz_to_angular(double hz) { return kTwoPi * hz; }
constexpr double angular_to_hz(double omega) { return omega / kTwoPi; }

constexpr double statvolt_per_cm_to_volt_per_cm(double e) { return e * kStatvoltToVolt; }
constexpr double volt_per_cm_to_statvolt_per_cm(double e) { return e / kStatvoltToVolt; }

/// Wave number k = 2 pi n / lambda_vac in m^-1 for a vacuum wavenumber in cm^-1.
/// Throws ValidationError when n < 1 or the wavenumber is not positive.
double wave_number(double wavenumber_vac_cm1, double refractive_index);

}  // namespace reiqc::units
