#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "reiqc/ensemble.hpp"
#include "reiqc/error.hpp"

using namespace reiqc;

TEST(Ensemble, MeanSpacingClosedForm) {
    EXPECT_NEAR(mean_spacing(1e-4), std::cbrt(1e4), 1e-12);
    EXPECT_NEAR(mean_spacing(1e-4), 21.544, 1e-3);
    EXPECT_THROW(mean_spacing(0.0), ValidationError);
}

TEST(Ensemble, RadiusClosedForm) {
    EXPECT_NEAR(ensemble_radius(50, 0.1), std::cbrt(500.0), 1e-12);
    EXPECT_NEAR(ensemble_radius(50, 0.1), 7.937, 1e-3);
}

TEST(Ensemble, LinewidthHelpers) {
    EXPECT_NEAR(linewidth_from_t2(1e-6), 1.0 / (M_PI * 1e-6), 1e-6);
    EXPECT_NEAR(lifetime_limited_width(1e-3), 1.0 / (2 * M_PI * 1e-3), 1e-9);
    CrystalConfig c;
    c.raman_coeff_hz = 1e5;
    EXPECT_DOUBLE_EQ(gamma_h(c, c.t_ref_k), c.gamma_h_ref_hz + 1e5);
    EXPECT_NEAR(gamma_h(c, 2 * c.t_ref_k), c.gamma_h_ref_hz + 128 * 1e5, 1e-3);
    EXPECT_DOUBLE_EQ(gamma_h(c, 0.0), c.gamma_h_ref_hz);
}

TEST(Ensemble, SamplingIsDeterministicPerSeed) {
    CrystalConfig c;
    c.concentration = 0.2;
    const auto a = sample_sites(c, 6, 11, 3);
    const auto b = sample_sites(c, 6, 11, 3);
    const auto d = sample_sites(c, 6, 12, 3);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, d);
}

TEST(Ensemble, SiteStreamsDoNotDependOnBoxSize) {
    // Every site draws from its own (seed, index) stream; a box that is a
    // prefix in lattice order (same x and y extents, smaller z) reproduces the
    // sites of the larger box.
    CrystalConfig c;
    c.concentration = 0.3;
    const auto small = sample_sites(c, BoxExtent{5, 5, 2}, 3, 1);
    const auto large = sample_sites(c, BoxExtent{5, 5, 4}, 3, 1);
    ASSERT_LE(small.size(), large.size());
    for (std::size_t i = 0; i < small.size(); ++i) EXPECT_EQ(small[i], large[i]);
}

TEST(Ensemble, OccupationMatchesConcentration) {
    CrystalConfig c;
    c.concentration = 0.25;
    const auto sites = sample_sites(c, 20, 5, 1);
    const double frac = static_cast<double>(sites.size()) / 8000.0;
    // Binomial standard deviation sqrt(p (1 - p) / N) = 0.0048.
    EXPECT_NEAR(frac, 0.25, 5 * 0.0048);
}

TEST(Ensemble, PositionsFollowLattice) {
    CrystalConfig c;
    c.concentration = 1.0;
    const auto sites = sample_sites(c, 3, 1, 1);
    ASSERT_EQ(sites.size(), 27u);
    for (std::size_t i = 0; i < sites.size(); ++i) {
        EXPECT_EQ(sites[i].id, static_cast<int>(i));
        for (int k = 0; k < 3; ++k) EXPECT_DOUBLE_EQ(sites[i].position_m[k], sites[i].lattice[k] * c.lattice_constant_m);
    }
    EXPECT_EQ(sites[1].lattice, (std::array<int, 3>{1, 0, 0}));  // x fastest
}

TEST(Ensemble, GaussianOffsetsHaveConfiguredWidth) {
    CrystalConfig c;
    c.gamma_inh_hz = 1e10;
    c.correlation = OffsetCorrelation::independent;
    const auto o = sample_offsets(c, 9, 20000);
    const double mean = std::accumulate(o.begin(), o.end(), 0.0) / o.size();
    double var = 0;
    for (double x : o) var += (x - mean) * (x - mean);
    const double sigma = std::sqrt(var / o.size());
    EXPECT_NEAR(sigma * kGaussianFwhmOverSigma / c.gamma_inh_hz, 1.0, 0.03);
    EXPECT_NEAR(mean / c.gamma_inh_hz, 0.0, 0.01);
}

TEST(Ensemble, UniformOffsetsStayInBand) {
    CrystalConfig c;
    c.distribution = OffsetDistribution::uniform;
    c.correlation = OffsetCorrelation::independent;
    for (double x : sample_offsets(c, 4, 5000)) EXPECT_LE(std::abs(x), 0.5 * c.gamma_inh_hz);
}

TEST(Ensemble, CorrelatedOffsetsShareOneDraw) {
    CrystalConfig c;
    const auto o = sample_offsets(c, 4, 6);
    for (double x : o) EXPECT_EQ(x, o.front());
}

TEST(Ensemble, ExportImportRoundTrip) {
    CrystalConfig c;
    c.concentration = 0.3;
    const auto sites = sample_sites(c, 4, 8, 2);
    const std::string text = export_sites(sites, {"0-1", "0-1'"});
    EXPECT_EQ(import_sites(text, c.lattice_constant_m), sites);
    EXPECT_EQ(import_sites(export_sites(sites, {"0-1", "0-1'"}, ';'), c.lattice_constant_m, ';'), sites);
}

TEST(Ensemble, ValidationNamesTheField) {
    CrystalConfig c;
    c.concentration = 1.5;
    try {
        c.validate();
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("crystal.concentration"), std::string::npos);
    }
    EXPECT_THROW(sample_sites(CrystalConfig{}, 1, 0, 1), ValidationError);
}

TEST(Ensemble, StreamSeedsDiffer) {
    EXPECT_NE(stream_seed(1, 0), stream_seed(1, 1));
    EXPECT_NE(stream_seed(1, 0), stream_seed(2, 0));
    EXPECT_EQ(stream_seed(5, 7), stream_seed(5, 7));
}
