#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "reiqc/error.hpp"
#include "reiqc/interactions.hpp"
#include "reiqc/units.hpp"

using namespace reiqc;

namespace {

const IonDatabase& db() { return IonDatabase::embedded(); }

Vec3 random_vec(std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng), u(rng)};
}

IonSite site(int id, std::array<int, 3> l, double a = 4e-10) {
    return {id, l, {l[0] * a, l[1] * a, l[2] * a}, {}};
}

}  // namespace

TEST(Interactions, QuadrupoleMatchesTensorContraction) {
    std::mt19937_64 rng(1);
    const double a = 4e-10;
    for (int trial = 0; trial < 200; ++trial) {
        const Vec3 s1 = random_vec(rng, 1e-21);
        const Vec3 s2 = random_vec(rng, 1e-21);
        const double r = a * (2 + trial % 20);
        const double lib = quad_shift_full(StaticMoments::from_second(s1), StaticMoments::from_second(s2), r, 7.0);
        const double ref = oracle::quadrupole_hz(oracle::diag(s1), oracle::diag(s2), {1, 0, 0}, r, 7.0);
        EXPECT_NEAR(lib, ref, 1e-8 * std::abs(ref) + 1e-30) << trial;
    }
}

TEST(Interactions, DipoleMatchesVectorFormula) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        StaticMoments m1, m2;
        m1.dipole_m = random_vec(rng, 1e-11);
        m2.dipole_m = random_vec(rng, 1e-11);
        const double r = 4e-10 * (2 + trial % 30);
        const double lib = dipole_shift_full(m1, m2, r, 3.0);
        const double ref = oracle::dipole_hz(m1.dipole_m, m2.dipole_m, {1, 0, 0}, r, 3.0);
        EXPECT_NEAR(lib, ref, 1e-8 * std::abs(ref)) << trial;
    }
}

TEST(Interactions, IsotropicChangeGivesExactlyZero) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const auto aniso = StaticMoments::from_second(random_vec(rng, 1e-21));
        const double s = random_vec(rng, 1e-21)[0];
        const auto iso = StaticMoments::from_second({s, s, s});
        EXPECT_EQ(quad_shift_full(aniso, iso, 1.2e-9, 10.0), 0.0);
        EXPECT_EQ(quad_shift_full(iso, aniso, 1.2e-9, 10.0), 0.0);
    }
}

TEST(Interactions, MomentsMustBeConsistent) {
    StaticMoments m = StaticMoments::from_second({1e-21, 2e-21, 3e-21});
    EXPECT_NO_THROW(m.validate());
    m.r2_m2 *= 1.01;
    EXPECT_THROW(m.validate(), ValidationError);
    EXPECT_THROW(quad_bracket(m, m), ValidationError);
    EXPECT_THROW(quad_shift_full(StaticMoments{}, StaticMoments{}, 0.0, 1.0), ValidationError);
}

TEST(Interactions, PowerLaws) {
    const auto m = StaticMoments::from_second({2e-21, -1e-21, -1e-21});
    StaticMoments d;
    d.dipole_m = {1e-11, 0, 0};
    const double a = 4e-10;
    const double q0 = quad_shift_full(m, m, 2 * a, 10) * std::pow(2.0, 5);
    const double d0 = dipole_shift_full(d, d, 2 * a, 10) * std::pow(2.0, 3);
    for (double r = 2; r <= 100; r += 7.3) {
        EXPECT_NEAR(quad_shift_full(m, m, r * a, 10) * std::pow(r, 5) / q0, 1.0, 1e-12);
        EXPECT_NEAR(dipole_shift_full(d, d, r * a, 10) * std::pow(r, 3) / d0, 1.0, 1e-12);
    }
}

TEST(Interactions, EstimatesScaleAsDocumented) {
    const double k = units::wave_number(20469.0, 1.6);
    const double a = 4e-10;
    const double d1 = dipole_shift_estimate(1e4, 10, 1.0, k, a);
    EXPECT_NEAR(d1, 1e4 / 10 / std::pow(k * a, 3) / (2 * oracle::kPi), 1e-9 * d1);
    EXPECT_NEAR(dipole_shift_estimate(1e4, 10, 1.0, k, 2 * a) * 8, d1, 1e-9 * d1);
    const double q1 = quad_shift_estimate(0.1, 3e15, 0.1 * a * a, 10, a);
    EXPECT_NEAR(q1, 25 * 0.1 * 3e15 * std::pow(0.1, 2.5) / 10 / (2 * oracle::kPi), 1e-9 * q1);
    EXPECT_THROW(dipole_shift_estimate(1e4, 10, 1.0, k, 0), ValidationError);
}

TEST(Interactions, CrossoverIsWhereCurvesMeet) {
    const double ad = 3.6e9, aq = 5.6e12;
    const double r = crossover_distance(ad, aq);
    EXPECT_NEAR(ad / std::pow(r, 3), aq / std::pow(r, 5), 1e-9 * ad / std::pow(r, 3));
    EXPECT_THROW(crossover_distance(0, 1), ValidationError);
}

TEST(Interactions, BlockadeCheck) {
    EXPECT_TRUE(blockade_ok(3e9, 1e9, 1e6).ok);
    EXPECT_DOUBLE_EQ(blockade_ok(-3e9, 1e9, 1e6).margin, 3.0);
    EXPECT_FALSE(blockade_ok(5e8, 1e9, 1e6).ok);
    EXPECT_DOUBLE_EQ(blockade_ok(5e8, 1e6, 1e8).margin, 5.0);
}

TEST(Interactions, TransferRates) {
    EXPECT_DOUBLE_EQ(exchange_estimate(1.0, 2.0), 2.0);
    EXPECT_NEAR(exchange_estimate(1.4, 2.0, 0.4), 2.0 / M_E, 1e-12);
    EXPECT_THROW(exchange_estimate(0.5, 1.0), ValidationError);
    EXPECT_DOUBLE_EQ(magnetic_dd_estimate(2.0, 0.08), 0.01);
    EXPECT_DOUBLE_EQ(transfer_rate_motional(3.0, 4.0), 9.0 / 5.0);
    EXPECT_DOUBLE_EQ(transfer_rate_motional(3.0, 0.0), 3.0);
    EXPECT_THROW(forster_rate(1e6, 0.1, 1e9, 4.2, 0.0), PhysicsError);
    // T = 0: no thermal phonons.
    EXPECT_DOUBLE_EQ(forster_rate(1e6, 0.1, 1e9, 0.0, 1e9), 1e12 * 0.01 / 1e9);
    EXPECT_GT(forster_rate(1e6, 0.1, 1e9, 300.0, 1e9), forster_rate(1e6, 0.1, 1e9, 0.0, 1e9));
}

TEST(Interactions, PairFrameIsOrthonormal) {
    const auto f = PairFrame::between({0, 0, 0}, {1, 2, 3});
    auto dot = [](const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; };
    EXPECT_NEAR(dot(f.ex, f.ex), 1, 1e-15);
    EXPECT_NEAR(dot(f.ey, f.ey), 1, 1e-15);
    EXPECT_NEAR(dot(f.ez, f.ez), 1, 1e-15);
    EXPECT_NEAR(dot(f.ex, f.ey), 0, 1e-15);
    EXPECT_NEAR(dot(f.ex, f.ez), 0, 1e-15);
    EXPECT_NEAR(f.distance_m, std::sqrt(14.0), 1e-15);
    const auto along_z = PairFrame::between({0, 0, 0}, {0, 0, 2});
    EXPECT_NEAR(std::abs(along_z.ez[1]), 1.0, 1e-15);
    EXPECT_THROW(PairFrame::between({1, 1, 1}, {1, 1, 1}), ValidationError);
}

TEST(Interactions, RandomAxesAreUnitAndSeeded) {
    InteractionModel m;
    m.axes = AxisMode::random;
    m.axis_seed = 5;
    for (int id = 0; id < 50; ++id) {
        const auto v = ion_axis(m, id);
        EXPECT_NEAR(v[0] * v[0] + v[1] * v[1] + v[2] * v[2], 1.0, 1e-14);
        EXPECT_EQ(v, ion_axis(m, id));
    }
    EXPECT_NE(ion_axis(m, 1), ion_axis(m, 2));
}

// The Tm3+/1 0 <-> 1' line: axial moments sqrt|U|^2 r0^2 along z, pair along x.
TEST(Interactions, TmSchemeQuadrupolePrefactor) {
    const auto scheme = db().load_scheme("Tm3+", 1);
    InteractionModel model;
    model.include_dipole_estimate = false;
    const double a = model.lattice_constant_m;
    const auto w = physical_coupling(db(), scheme, model, site(0, {0, 0, 0}), site(1, {1, 0, 0}));
    const int l0 = scheme.local_index(Role::zero), la = scheme.local_index(Role::aux);
    const double lib = w.transition_shift(l0, la, l0, la);

    const double dq = (std::sqrt(4.88) - std::sqrt(0.268)) * model.r0_sq_m2;
    const auto s = oracle::axial(dq, {0, 0, 1});
    const double ref = oracle::quadrupole_hz(s, s, {1, 0, 0}, a, model.eps_r);
    EXPECT_NEAR(lib / ref, 1.0, 1e-8);
    EXPECT_NEAR(lib, 5.60e12, 0.01e12);
}

TEST(Interactions, CouplingMatchesOracleInGeneralPlanarGeometry) {
    // Axes along global z and pairs in the xy plane: every tensor is diagonal in the pair frame.
    const auto scheme = db().load_scheme("Tm3+", 1);
    InteractionModel model;
    model.include_dipole_estimate = false;
    const auto roles = scheme.local_roles();
    const double qg = std::sqrt(scheme.ground.u2_diag_sq) * model.r0_sq_m2;
    for (auto l : std::vector<std::array<int, 3>>{{3, 4, 0}, {-2, 5, 0}, {7, -1, 0}, {0, 0, 4}}) {
        const auto a = site(0, {0, 0, 0});
        const auto b = site(1, l);
        const auto w = physical_coupling(db(), scheme, model, a, b);
        const double r = std::sqrt(double(l[0] * l[0] + l[1] * l[1] + l[2] * l[2])) * model.lattice_constant_m;
        const oracle::V3 n{b.position_m[0] / r, b.position_m[1] / r, b.position_m[2] / r};
        for (int x = 0; x < scheme.dimension(); ++x) {
            for (int y = 0; y < scheme.dimension(); ++y) {
                const double qx = std::sqrt(scheme.level(roles[x]).u2_diag_sq) * model.r0_sq_m2 - qg;
                const double qy = std::sqrt(scheme.level(roles[y]).u2_diag_sq) * model.r0_sq_m2 - qg;
                const double ref = oracle::quadrupole_hz(oracle::axial(qx, {0, 0, 1}), oracle::axial(qy, {0, 0, 1}), n, r,
                                                         model.eps_r);
                EXPECT_NEAR(w.at(x, y), ref, 1e-8 * std::abs(ref) + 1e-6);
            }
        }
    }
}

TEST(Interactions, GroundNeighboursShiftNothing) {
    const auto scheme = db().load_scheme("Tm3+", 1);
    const InteractionModel model;
    const auto w = physical_coupling(db(), scheme, model, site(0, {0, 0, 0}), site(1, {2, 1, 0}));
    const int g = scheme.local_index(Role::ground);
    for (int l = 0; l < scheme.dimension(); ++l) {
        EXPECT_EQ(w.at(g, l), 0.0);
        EXPECT_EQ(w.at(l, g), 0.0);
    }
}

TEST(Interactions, CouplingIsSymmetricUnderExchange) {
    const auto scheme = db().load_scheme("Tm3+", 2);
    InteractionModel model;
    model.axes = AxisMode::random;
    const auto a = site(0, {0, 0, 0}), b = site(1, {2, -1, 3});
    const auto ab = physical_coupling(db(), scheme, model, a, b);
    const auto ba = physical_coupling(db(), scheme, model, b, a).transposed();
    for (int x = 0; x < scheme.dimension(); ++x)
        for (int y = 0; y < scheme.dimension(); ++y) EXPECT_NEAR(ab.at(x, y), ba.at(x, y), 1e-9 * std::abs(ab.at(x, y)));
}

TEST(Interactions, DipoleEstimateSitsOnTheBlockadeLine) {
    const auto scheme = db().load_scheme("Tm3+", 1);
    InteractionModel with, without;
    without.include_dipole_estimate = false;
    const auto a = site(0, {0, 0, 0}), b = site(1, {3, 0, 0});
    const auto w1 = physical_coupling(db(), scheme, with, a, b);
    const auto w0 = physical_coupling(db(), scheme, without, a, b);
    const int l0 = scheme.local_index(Role::zero), la = scheme.local_index(Role::aux);
    const double ad = scheme_dipole_prefactor(db(), scheme, with);
    EXPECT_NEAR(w1.transition_shift(l0, la, l0, la) - w0.transition_shift(l0, la, l0, la), ad / 27, 1e-6 * ad);
    EXPECT_NEAR(ad, 3.60e9, 0.01e9);
}

TEST(Interactions, BlockadeCouplingShiftsTheAuxLine) {
    for (auto [ion, idx] : std::vector<std::pair<std::string, int>>{{"Tm3+", 1}, {"Pr3+", 0}}) {
        const auto s = db().load_scheme(ion, idx);
        const auto w = blockade_coupling(s, 7e9);
        const int l0 = s.local_index(Role::zero), la = s.local_index(Role::aux);
        EXPECT_DOUBLE_EQ(std::abs(w.transition_shift(l0, la, l0, la)), 7e9) << ion;
        EXPECT_EQ(w.at(la, la) == 7e9, !s.ground_is_aux()) << ion;
    }
    EXPECT_TRUE(blockade_coupling(db().load_scheme("Tm3+", 1), 0.0).is_zero());
}

TEST(Interactions, PairTableSerialEqualsParallel) {
    CrystalConfig c;
    c.concentration = 0.2;
    const auto sites = sample_sites(c, 6, 4, 6);
    const auto scheme = db().load_scheme("Tm3+", 1);
    InteractionModel model = InteractionModel::from_crystal(c);
    model.axes = AxisMode::random;
    const auto s = pair_shift_table(db(), scheme, model, sites, 1e9, 1e6, Exec::serial);
    const auto p = pair_shift_table(db(), scheme, model, sites, 1e9, 1e6, Exec::parallel);
    ASSERT_EQ(s.size(), sites.size() * (sites.size() - 1) / 2);
    EXPECT_EQ(export_pair_shifts(s), export_pair_shifts(p));
    for (std::size_t k = 1; k < s.size(); ++k) {
        EXPECT_TRUE(s[k - 1].id1 < s[k].id1 || (s[k - 1].id1 == s[k].id1 && s[k - 1].id2 < s[k].id2));
    }
}

TEST(Interactions, PairTableAgreesWithCoupling) {
    const auto scheme = db().load_scheme("Tm3+", 1);
    const InteractionModel model;
    std::vector<IonSite> sites{site(0, {0, 0, 0}), site(1, {4, 3, 0})};
    const auto t = pair_shift_table(db(), scheme, model, sites, 1e9, 1e6);
    ASSERT_EQ(t.size(), 1u);
    const auto w = physical_coupling(db(), scheme, model, sites[0], sites[1]);
    const int l0 = scheme.local_index(Role::zero), la = scheme.local_index(Role::aux);
    EXPECT_NEAR(t[0].delta_total_hz, w.transition_shift(l0, la, l0, la), 1e-9 * std::abs(t[0].delta_total_hz));
    EXPECT_DOUBLE_EQ(t[0].r_over_a, 5.0);
    EXPECT_EQ(t[0].dominant, "quadrupole");
    EXPECT_DOUBLE_EQ(t[0].blockade_margin, std::abs(t[0].delta_total_hz) / 1e9);
}

TEST(Interactions, DipoleDominatesBeyondCrossover) {
    const auto scheme = db().load_scheme("Tm3+", 1);
    const InteractionModel model;
    std::vector<IonSite> sites{site(0, {0, 0, 0}), site(1, {60, 0, 0}), site(2, {0, 30, 0})};
    const auto t = pair_shift_table(db(), scheme, model, sites, 1e9, 1e6);
    EXPECT_EQ(t[0].dominant, "dipole");         // 60a, beyond R* ~ 39.5a
    EXPECT_TRUE(t[1].cross_term_warning);       // 30a, within a factor 2 of R*
}
