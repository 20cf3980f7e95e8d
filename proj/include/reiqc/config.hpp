#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "reiqc/ensemble.hpp"
#include "reiqc/hole_burning.hpp"
#include "reiqc/interactions.hpp"

namespace reiqc {

/// Pulse calculator inputs; defaults are the Pr3+ 3H4 -> 3P0 case.
struct PulseSection {
    std::string ion = "Pr3+";
    std::string lower = "3H4";
    std::string upper = "3P0";
    double gamma0_s = 1.8e4;
    double gamma_l_hz = 1e9;
    double theta_over_pi = 1.0;
    double w_cut_hz = 0.0;  ///< 0 selects 5 Gamma_L
    double beam_area_cm2 = 1e-4;
};

struct ProtocolSection {
    std::string gate = "cnot";     ///< cnot or ccnot
    int controls = 1;              ///< ccnot only; cnot always has one
    double spacing_a = 3.0;        ///< qubits sit on a line along x
    double offset_step_hz = 0.0;   ///< 0 selects 100 Gamma_L between neighbouring qubits
    double blockade_hz = 3e10;     ///< >= 0: bare blockade shift; < 0: physical couplings
    bool enforce_blockade = true;
    bool decay = true;
    double dephasing_gamma_h_hz = 0.0;
};

struct BurnSection {
    BurnExperiment experiment;
    double concentration = 0.3;  ///< site fraction of the synthetic plane
    int n = 50;
    double margin = 3.0;
    int k = 1;
    std::string spectrum_export = "lines";  ///< lines: grid points near spectral lines only; full: whole grid
};

struct ReadoutSection {
    std::vector<double> phases_rad{0.0, 1.5707963267948966, 3.141592653589793};
    double gamma_h_hz = 1e6;
};

/// Every input of a run. Unknown keys and out-of-range values are rejected
/// with the offending field path.
struct RunConfig {
    std::uint64_t seed = 2024;
    std::string ion = "Tm3+";
    int scheme = 1;
    double temperature_k = 4.2;
    CrystalConfig crystal;
    BoxExtent box{6, 6, 6};
    InteractionModel interactions;  ///< lattice, eps, r0 and n are taken from `crystal`
    PulseSection pulse;
    ProtocolSection protocol;
    BurnSection burn;
    ReadoutSection readout;
    std::string output_dir = "reiqc_out";

    void validate() const;
    /// The interaction model with the crystal's geometry filled in.
    InteractionModel model() const;
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);
RunConfig load_config(const std::string& path);

}  // namespace reiqc
