#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "reiqc/config.hpp"
#include "reiqc/error.hpp"

using namespace reiqc;
using nlohmann::json;

namespace {

std::string error_of(const json& j) {
    try {
        config_from_json(j).validate();
    } catch (const ValidationError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Config, DefaultsValidate) { EXPECT_NO_THROW(RunConfig{}.validate()); }

TEST(Config, RoundTripIsExact) {
    RunConfig c;
    c.seed = 77;
    c.crystal.concentration = 0.0123456789012345;
    c.crystal.distribution = OffsetDistribution::uniform;
    c.box = {3, 4, 5};
    c.protocol.gate = "ccnot";
    c.protocol.controls = 2;
    c.burn.spectrum_export = "full";
    c.readout.phases_rad = {0.1, 0.2};
    const json j = config_to_json(c);
    EXPECT_EQ(config_to_json(config_from_json(j)), j);
    EXPECT_EQ(config_from_json(j).box, (BoxExtent{3, 4, 5}));
}

TEST(Config, PartialDocumentKeepsDefaults) {
    const auto c = config_from_json(json{{"crystal", {{"concentration", 0.2}}}});
    EXPECT_DOUBLE_EQ(c.crystal.concentration, 0.2);
    EXPECT_EQ(c.ion, "Tm3+");
    EXPECT_EQ(c.seed, 2024u);
}

TEST(Config, UnknownKeysNameTheirPath) {
    EXPECT_NE(error_of(json{{"crystal", {{"concentraton", 0.1}}}}).find("crystal.concentraton"), std::string::npos);
    EXPECT_NE(error_of(json{{"bogus", 1}}).find("bogus"), std::string::npos);
}

TEST(Config, BadValuesNameTheirField) {
    EXPECT_NE(error_of(json{{"pulse", {{"gamma_l_hz", -1.0}}}}).find("pulse.gamma_l_hz"), std::string::npos);
    EXPECT_NE(error_of(json{{"crystal", {{"concentration", 1.5}}}}).find("crystal.concentration"), std::string::npos);
    EXPECT_NE(error_of(json{{"crystal", {{"distribution", "flat"}}}}).find("crystal.distribution"), std::string::npos);
    EXPECT_NE(error_of(json{{"ensemble", {{"box", {1, 2}}}}}).find("ensemble.box"), std::string::npos);
    EXPECT_NE(error_of(json{{"seed", "x"}}).find("seed"), std::string::npos);
    EXPECT_NE(error_of(json{{"pulse", {{"upper", "3H4"}}}}).find("pulse.upper"), std::string::npos);
    EXPECT_FALSE(error_of(json{{"ion", "Xx3+"}}).empty());
    EXPECT_FALSE(error_of(json{{"scheme", 99}}).empty());
    EXPECT_FALSE(error_of(json{{"burn", {{"export", "some"}}}}).empty());
    EXPECT_FALSE(error_of(json{{"protocol", {{"gate", "swap"}}}}).empty());
}

TEST(Config, LoadsFileWithComments) {
    const auto path = std::filesystem::temp_directory_path() / "reiqc_config_test.json";
    {
        std::ofstream f(path);
        f << "{\n  // lighter doping\n  \"crystal\": {\"concentration\": 0.05}\n}\n";
    }
    EXPECT_DOUBLE_EQ(load_config(path.string()).crystal.concentration, 0.05);
    std::filesystem::remove(path);
    EXPECT_THROW(load_config(path.string()), ValidationError);
}

TEST(Config, ModelTakesCrystalGeometry) {
    RunConfig c;
    c.crystal.eps_r = 7.0;
    c.crystal.lattice_constant_m = 5e-10;
    const auto m = c.model();
    EXPECT_DOUBLE_EQ(m.eps_r, 7.0);
    EXPECT_DOUBLE_EQ(m.lattice_constant_m, 5e-10);
}
