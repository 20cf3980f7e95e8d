#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "reiqc/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace reiqc;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        root = fs::temp_directory_path() / (std::string("reiqc_cli_") + info->name());
        fs::remove_all(root);
        fs::create_directories(root);
    }
    void TearDown() override { fs::remove_all(root); }

    fs::path write_config(const json& j, const std::string& name = "cfg.json") {
        const auto p = root / name;
        std::ofstream(p) << j.dump();
        return p;
    }

    fs::path root;
};

}  // namespace

TEST_F(CliTest, HelpAndUsage) {
    EXPECT_EQ(invoke({"--help"}).code, cli::kExitOk);
    EXPECT_EQ(invoke({}).code, cli::kExitValidation);
    EXPECT_EQ(invoke({"frobnicate"}).code, cli::kExitValidation);
    EXPECT_EQ(invoke({"--format", "xml", "ions"}).code, cli::kExitValidation);
}

TEST_F(CliTest, ValidationErrorsAreStructured) {
    const auto cfg = write_config({{"crystal", {{"concentraton", 0.1}}}});
    const auto r = invoke({"--config", cfg.string(), "--out", (root / "o").string(), "ensemble"});
    EXPECT_EQ(r.code, cli::kExitValidation);
    const auto e = json::parse(r.err);
    EXPECT_EQ(e["error"]["exit_code"], cli::kExitValidation);
    EXPECT_NE(e["error"]["message"].get<std::string>().find("crystal.concentraton"), std::string::npos);

    const auto bad_ion = write_config({{"ion", "Xx3+"}}, "ion.json");
    EXPECT_EQ(invoke({"--config", bad_ion.string(), "--out", (root / "o").string(), "ions"}).code, cli::kExitValidation);
}

TEST_F(CliTest, IonsWritesTables) {
    const auto out = root / "ions";
    ASSERT_EQ(invoke({"--out", out.string(), "ions"}).code, 0);
    const auto j = json::parse(slurp(out / "ions.json"));
    EXPECT_FALSE(j.empty());
    EXPECT_TRUE(fs::exists(out / "effective_config.json"));
    const auto meta = json::parse(slurp(out / "metadata.json"));
    EXPECT_EQ(meta["command"], "ions");
    EXPECT_EQ(meta["seed"], 2024);
}

TEST_F(CliTest, EnsembleIsReproducible) {
    const auto cfg = write_config({{"ensemble", {{"box", {3, 3, 3}}}}});
    const auto a = root / "a", b = root / "b", c = root / "c";
    ASSERT_EQ(invoke({"--config", cfg.string(), "--seed", "5", "--out", a.string(), "--format", "csv", "ensemble"}).code, 0);
    ASSERT_EQ(invoke({"--config", cfg.string(), "--seed", "5", "--out", b.string(), "--format", "csv", "ensemble"}).code, 0);
    EXPECT_EQ(slurp(a / "ensemble.csv"), slurp(b / "ensemble.csv"));
    // The effective configuration reproduces the run on its own.
    ASSERT_EQ(invoke({"--config", (a / "effective_config.json").string(), "--out", c.string(), "--format", "csv",
                      "ensemble"}).code, 0);
    EXPECT_EQ(slurp(a / "ensemble.csv"), slurp(c / "ensemble.csv"));
    const auto d = root / "d";
    ASSERT_EQ(invoke({"--config", cfg.string(), "--seed", "6", "--out", d.string(), "--format", "csv", "ensemble"}).code, 0);
    EXPECT_NE(slurp(a / "ensemble.csv"), slurp(d / "ensemble.csv"));
}

TEST_F(CliTest, PulseReportComparesWithPublishedValues) {
    const auto out = root / "p";
    ASSERT_EQ(invoke({"--out", out.string(), "pulse"}).code, 0);
    const auto text = slurp(out / "pulse_report.json");
    const auto j = json::parse(text);
    bool field = false;
    for (const auto& row : j["paper"]["rows"]) {
        if (row["paper"].get<double>() == 3e4) {
            field = true;
            EXPECT_NEAR(row["value"].get<double>(), 2.457e4, 0.01e4);
            EXPECT_TRUE(row["order_of_magnitude_ok"].get<bool>());
        }
    }
    EXPECT_TRUE(field) << text;
}

TEST_F(CliTest, GateReportsFidelities) {
    const auto out = root / "g";
    ASSERT_EQ(invoke({"--out", out.string(), "gate"}).code, 0);
    const auto j = json::parse(slurp(out / "fidelity_report.json"));
    EXPECT_GT(j["min"].get<double>(), 0.99);
    EXPECT_TRUE(fs::exists(out / "gate_schedule.csv"));
}

TEST_F(CliTest, BlockadeFailureIsPhysicsError) {
    const auto cfg = write_config({{"protocol", {{"blockade_hz", 0.0}}}});
    const auto r = invoke({"--config", cfg.string(), "--out", (root / "g").string(), "gate"});
    EXPECT_EQ(r.code, cli::kExitPhysics);
    EXPECT_EQ(json::parse(r.err)["error"]["type"], "physics");
}

TEST_F(CliTest, BurnAndSelectAreDeterministic) {
    const auto cfg = write_config({{"burn", {{"band_hz", 3e10}, {"ions", 20}, {"plane_edge", 21}, {"n", 3}}}});
    const auto a = root / "a", b = root / "b";
    for (const auto& o : {a, b}) {
        ASSERT_EQ(invoke({"--config", cfg.string(), "--out", o.string(), "burn"}).code, 0);
        ASSERT_EQ(invoke({"--config", cfg.string(), "--out", o.string(), "select"}).code, 0);
    }
    EXPECT_EQ(slurp(a / "hole_pairs.json"), slurp(b / "hole_pairs.json"));
    EXPECT_EQ(slurp(a / "spectrum_after.csv"), slurp(b / "spectrum_after.csv"));
    EXPECT_EQ(slurp(a / "registry.json"), slurp(b / "registry.json"));
    const auto reg = json::parse(slurp(a / "registry.json"));
    EXPECT_EQ(reg["ions"].size(), 3u);
    EXPECT_TRUE(reg["complete"].get<bool>());
    EXPECT_EQ(slurp(a / "spectrum_before.csv").rfind("frequency_offset_hz,value", 0), 0u);
}

TEST_F(CliTest, ReadoutWritesSpectrum) {
    const auto out = root / "r";
    ASSERT_EQ(invoke({"--out", out.string(), "readout"}).code, 0);
    EXPECT_TRUE(fs::exists(out / "readout.json"));
    EXPECT_TRUE(fs::exists(out / "readout_spectrum.csv"));
}
