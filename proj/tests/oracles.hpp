#pragma once

// Independent reference formulas used by the tests. Everything here is SI and
// written from the multipole expansion directly, not from the library's
// CGS shortcuts.

#include <array>
#include <cmath>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEps0 = 8.8541878128e-12;
inline constexpr double kE = 1.602176634e-19;
inline constexpr double kH = 6.62607015e-34;

using V3 = std::array<double, 3>;
using M3 = std::array<std::array<double, 3>, 3>;

/// e^2 / (4 pi eps0 eps_r h) in Hz m.
inline double coulomb_hz_m(double eps_r) { return kE * kE / (4 * kPi * kEps0 * eps_r) / kH; }

/// Dipole-dipole energy (Hz) of charge displacements d1, d2 (m) separated by R along unit n.
inline double dipole_hz(const V3& d1, const V3& d2, const V3& n, double r_m, double eps_r) {
    double dd = 0, d1n = 0, d2n = 0;
    for (int i = 0; i < 3; ++i) {
        dd += d1[i] * d2[i];
        d1n += d1[i] * n[i];
        d2n += d2[i] * n[i];
    }
    return coulomb_hz_m(eps_r) * (dd - 3 * d1n * d2n) / std::pow(r_m, 3);
}

/// Quadrupole-quadrupole energy (Hz) from second-moment tensors S1, S2 (m^2,
/// <x_i x_j> of one electronic charge), separation R along unit n:
/// (1/36) Q1_ij Q2_kl d^4(1/R)/dx_i dx_j dx_k dx_l with Q = 3 S - tr(S) I.
inline double quadrupole_hz(const M3& s1, const M3& s2, const V3& n, double r_m, double eps_r) {
    auto q = [](const M3& s) {
        const double tr = s[0][0] + s[1][1] + s[2][2];
        M3 out{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) out[i][j] = 3 * s[i][j] - (i == j ? tr : 0.0);
        return out;
    };
    const M3 q1 = q(s1), q2 = q(s2);
    auto d = [](int i, int j) { return i == j ? 1.0 : 0.0; };
    double e = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    const double t = 105 * n[i] * n[j] * n[k] * n[l] -
                                     15 * (d(i, j) * n[k] * n[l] + d(i, k) * n[j] * n[l] + d(i, l) * n[j] * n[k] +
                                           d(j, k) * n[i] * n[l] + d(j, l) * n[i] * n[k] + d(k, l) * n[i] * n[j]) +
                                     3 * (d(i, j) * d(k, l) + d(i, k) * d(j, l) + d(i, l) * d(j, k));
                    e += q1[i][j] * q2[k][l] * t;
                }
    return coulomb_hz_m(eps_r) * e / 36.0 / std::pow(r_m, 5);
}

inline M3 diag(const V3& v) { return M3{{{v[0], 0, 0}, {0, v[1], 0}, {0, 0, v[2]}}}; }

/// Axially symmetric second moment q (n n^T - I/3).
inline M3 axial(double q, const V3& axis) {
    M3 out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[i][j] = q * (axis[i] * axis[j] - (i == j ? 1.0 / 3.0 : 0.0));
    return out;
}

}  // namespace oracle
