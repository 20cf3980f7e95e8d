#include <gtest/gtest.h>

#include <cmath>

#include "reiqc/error.hpp"
#include "reiqc/hole_burning.hpp"

using namespace reiqc;

namespace {

const IonDatabase& db() { return IonDatabase::embedded(); }
constexpr double kPi = 3.14159265358979323846;

Spectrum lines(const SpectrumGrid& g, const std::vector<double>& centers, double fwhm) {
    Spectrum s{g, std::vector<double>(g.size, 0.0)};
    for (std::size_t k = 0; k < g.size; ++k) {
        for (double c : centers) s.values[k] += lorentzian(g.at(k) - c, fwhm);
    }
    return s;
}

}  // namespace

TEST(HoleBurning, LorentzianNormalisation) {
    const double w = 2e5;
    EXPECT_NEAR(lorentzian(0, w), 2 / (kPi * w), 1e-20);
    EXPECT_NEAR(lorentzian(w / 2, w), 1 / (kPi * w), 1e-20);
    // Trapezoid over +/- 2000 w; tails beyond hold 2 * w / (2 pi * 2000 w).
    const auto g = make_grid(-2000 * w, 2000 * w, w / 50);
    double area = 0;
    for (std::size_t k = 0; k < g.size; ++k) area += lorentzian(g.at(k), w) * g.step_hz;
    EXPECT_NEAR(area, 1 - 1 / (kPi * 2000), 1e-6);
}

TEST(HoleBurning, GridValidation) {
    const auto g = make_grid(-1, 1, 0.5);
    EXPECT_EQ(g.size, 5u);
    EXPECT_DOUBLE_EQ(g.stop_hz(), 1.0);
    EXPECT_THROW(make_grid(1, -1, 0.1), ValidationError);
    EXPECT_THROW(make_grid(-1, 1, 0), ValidationError);
}

TEST(HoleBurning, BurnTransitionChoice) {
    const auto tm = db().load_scheme("Tm3+", 1);
    const auto bt = burn_transition(tm);
    if (tm.ground_is_aux()) {
        EXPECT_EQ(bt, (Transition{Role::aux, Role::zero}));
    } else {
        EXPECT_EQ(bt, (Transition{Role::ground, Role::aux}));
    }
}

TEST(HoleBurning, DetectsShiftedPartner) {
    const double gh = 2e5;
    const auto g = make_grid(-2e7, 3e7, gh / 10);
    // Burned ion at 0 vanishes; its partner moves from 5 MHz to 8 MHz;
    // an untouched spectator sits at -8 MHz.
    const auto before = lines(g, {0.0, 5e6, -8e6}, gh);
    const auto after = lines(g, {8e6, -8e6}, gh);
    DetectOptions opt;
    opt.burn_hz = 0.0;
    const auto d = detect_pairs(before, after, gh, opt);
    ASSERT_EQ(d.pairs.size(), 1u);
    EXPECT_NEAR(d.pairs[0].hole.frequency_hz, 5e6, gh / 10);
    EXPECT_NEAR(d.pairs[0].antihole.frequency_hz, 8e6, gh / 10);
    EXPECT_NEAR(d.pairs[0].splitting_hz, 3e6, gh / 5);
    EXPECT_LT(d.pairs[0].hole.amplitude, 0);
    EXPECT_GT(d.pairs[0].antihole.amplitude, 0);
    EXPECT_EQ(d.burned_holes.size(), 1u);
    EXPECT_TRUE(d.unmatched_antiholes.empty());
}

TEST(HoleBurning, IdenticalSpectraHaveNoFeatures) {
    const double gh = 2e5;
    const auto g = make_grid(-1e7, 1e7, gh / 10);
    const auto s = lines(g, {0.0, 3e6}, gh);
    const auto d = detect_pairs(s, s, gh);
    EXPECT_TRUE(d.pairs.empty());
    EXPECT_TRUE(d.unmatched_holes.empty());
}

TEST(HoleBurning, DetectRejectsMismatchedGrids) {
    const auto a = lines(make_grid(-1e7, 1e7, 2e4), {0.0}, 2e5);
    const auto b = lines(make_grid(-1e7, 1e7, 1e4), {0.0}, 2e5);
    EXPECT_THROW(detect_pairs(a, b, 2e5), ValidationError);
}

TEST(HoleBurning, Spearman) {
    EXPECT_NEAR(spearman({1, 2, 3, 4}, {10, 20, 30, 40}), 1.0, 1e-15);
    EXPECT_NEAR(spearman({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0, 1e-15);
    // Ties share average ranks: x ranks 1, 2.5, 2.5, 4.
    const double rho = spearman({1, 2, 2, 3}, {1, 2, 3, 4});
    EXPECT_NEAR(rho, 0.9486832980505138, 1e-12);
    EXPECT_THROW(spearman({1, 2}, {1}), ValidationError);
}

class Synthetic : public ::testing::Test {
protected:
    void SetUp() override {
        scheme = db().load_scheme("Tm3+", 1);
        exp.n_ions = 30;
        exp.band_hz = 2e10;
        exp.plane_edge = 21;
        reg = std::make_unique<Register>(
            planar_burn_ensemble(db(), scheme, CrystalConfig{}, InteractionModel{}, exp, 11));
    }
    LevelScheme scheme;
    BurnExperiment exp;
    std::unique_ptr<Register> reg;
};

TEST_F(Synthetic, SerialMatchesParallelSpectrum) {
    const auto occ = ground_occupation(*reg);
    const Probe probe{};
    const Transition ref{Role::ground, Role::aux};
    const auto g = make_grid(-1.1e10, 1.1e10, 4e4);
    const auto a = synth_spectrum(*reg, occ, {probe}, ref, exp.gamma_h_hz, g, Exec::serial);
    const auto b = synth_spectrum(*reg, occ, {probe}, ref, exp.gamma_h_hz, g, Exec::parallel);
    ASSERT_EQ(a.values.size(), b.values.size());
    for (std::size_t k = 0; k < a.values.size(); ++k) ASSERT_EQ(a.values[k], b.values[k]);
}

TEST_F(Synthetic, SpectrumValidatesGrid) {
    const auto occ = ground_occupation(*reg);
    const Transition ref{Role::ground, Role::aux};
    EXPECT_THROW(synth_spectrum(*reg, occ, {Probe{}}, ref, exp.gamma_h_hz, make_grid(-1.1e10, 1.1e10, 1e5)),
                 ValidationError);
    EXPECT_THROW(synth_spectrum(*reg, occ, {Probe{}}, ref, exp.gamma_h_hz, make_grid(-1e9, 1e9, 4e4)),
                 ValidationError);
}

TEST_F(Synthetic, BurnMovesOnlyTheTargetIon) {
    const auto occ = ground_occupation(*reg);
    const auto res = burn(*reg, occ, 0.0, exp.gamma_l_hz);
    ASSERT_EQ(res.burned_ids, (std::vector<int>{reg->ions()[0].id}));
    EXPECT_GT(res.transferred[0], 0.99);
    for (std::size_t i = 1; i < res.transferred.size(); ++i) EXPECT_LT(res.transferred[i], 0.01);
}

TEST_F(Synthetic, RecoveredSplittingsTrackTrueShifts) {
    const auto run = run_burn_experiment(*reg, exp);
    ASSERT_GE(run.detection.pairs.size(), 5u);
    std::vector<double> measured, truth;
    for (const auto& p : run.detection.pairs) {
        ASSERT_TRUE(p.true_shift_hz.has_value());
        measured.push_back(p.splitting_hz);
        truth.push_back(std::abs(*p.true_shift_hz));
        EXPECT_NEAR(p.splitting_hz, std::abs(*p.true_shift_hz), exp.gamma_h_hz);
    }
    EXPECT_GT(spearman(measured, truth), 0.9);
    for (std::size_t k = 1; k < run.detection.pairs.size(); ++k)
        EXPECT_GE(run.detection.pairs[k - 1].splitting_hz, run.detection.pairs[k].splitting_hz);
}

TEST_F(Synthetic, SelectionRespectsMargins) {
    const auto run = run_burn_experiment(*reg, exp);
    SelectOptions opt;
    opt.n = 3;
    opt.gamma_l_hz = exp.gamma_l_hz;
    opt.gamma_h_hz = exp.gamma_h_hz;
    const auto sel = select_ensemble(run.detection.pairs, *reg, opt);
    ASSERT_EQ(sel.ion_ids.size(), 3u);
    EXPECT_EQ(sel.pairs.size(), 3u);
    EXPECT_GT(sel.min_margin, opt.margin);
    for (std::size_t k = 1; k < sel.splittings_hz.size(); ++k) EXPECT_GE(sel.splittings_hz[k - 1], sel.splittings_hz[k]);
    opt.n = static_cast<int>(run.detection.pairs.size()) + 1;
    EXPECT_THROW(select_ensemble(run.detection.pairs, *reg, opt), ValidationError);
    // A margin no pair can meet leaves only the first candidate.
    opt.n = 3;
    opt.margin = 1e9;
    try {
        select_ensemble(run.detection.pairs, *reg, opt);
        FAIL() << "expected PartialRegistryError";
    } catch (const PartialRegistryError& e) {
        EXPECT_EQ(e.partial().ion_ids.size(), 1u);
    }
}
