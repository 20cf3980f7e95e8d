#include "reiqc/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "reiqc/error.hpp"
#include "reiqc/ion_data.hpp"

namespace reiqc {

using nlohmann::json;

namespace {

// Reads one JSON object, remembering which keys were consumed so that
// unknown (usually misspelt) keys can be reported.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ValidationError(where() + "must be an object");
    }

    template <class T>
    void get(const char* key, T& out) {
        used_.insert(key);
        if (!j_.contains(key)) return;
        const json& v = j_.at(key);
        if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) throw ValidationError(field(key) + ": expected true or false");
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) throw ValidationError(field(key) + ": expected a string");
        } else if constexpr (std::is_unsigned_v<T>) {
            if (!v.is_number_unsigned()) throw ValidationError(field(key) + ": expected a non-negative integer");
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer()) throw ValidationError(field(key) + ": expected an integer");
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!v.is_number()) throw ValidationError(field(key) + ": expected a number");
        }
        try {
            out = v.get<T>();
        } catch (const json::exception& e) {
            throw ValidationError(field(key) + ": " + e.what());
        }
    }

    bool has(const char* key) const { return j_.contains(key); }

    Section sub(const char* key) {
        used_.insert(key);
        static const json empty = json::object();
        return Section(j_.contains(key) ? j_.at(key) : empty, field(key));
    }

    void finish() const {
        for (const auto& item : j_.items()) {
            if (!used_.count(item.key())) throw ValidationError("unknown configuration key '" + field(item.key()) + "'");
        }
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

private:
    std::string where() const { return path_.empty() ? "configuration: " : path_ + ": "; }

    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ValidationError(field + ": " + what);
}

std::string distribution_name(OffsetDistribution d) { return d == OffsetDistribution::gaussian ? "gaussian" : "uniform"; }
std::string correlation_name(OffsetCorrelation c) { return c == OffsetCorrelation::correlated ? "correlated" : "independent"; }
std::string axes_name(AxisMode a) { return a == AxisMode::global_z ? "global_z" : "random"; }

}  // namespace

void RunConfig::validate() const {
    crystal.validate();
    const auto& db = IonDatabase::embedded();
    try {
        db.load_scheme(ion, scheme);
    } catch (const NotFoundError& e) {
        throw ValidationError(std::string("ion/scheme: ") + e.what());
    }
    require(temperature_k >= 0, "temperature_k", "must be >= 0");
    require(box.nx >= 1 && box.ny >= 1 && box.nz >= 1, "ensemble.box", "extents must be >= 1");
    require(interactions.gamma0_s > 0, "interactions.gamma0_s", "must be > 0");

    try {
        db.u_sq(pulse.ion, pulse.lower, pulse.upper);
    } catch (const NotFoundError& e) {
        throw ValidationError(std::string("pulse.lower/upper: ") + e.what());
    }
    require(pulse.lower != pulse.upper, "pulse.upper", "must differ from pulse.lower");
    require(pulse.gamma0_s > 0, "pulse.gamma0_s", "must be > 0");
    require(pulse.gamma_l_hz > 0, "pulse.gamma_l_hz", "must be > 0");
    require(pulse.theta_over_pi >= 0, "pulse.theta_over_pi", "must be >= 0");
    require(pulse.w_cut_hz == 0 || pulse.w_cut_hz >= pulse.gamma_l_hz, "pulse.w_cut_hz", "must be 0 or >= gamma_l_hz");
    require(pulse.beam_area_cm2 > 0, "pulse.beam_area_cm2", "must be > 0");

    require(protocol.gate == "cnot" || protocol.gate == "ccnot", "protocol.gate", "must be cnot or ccnot");
    require(protocol.controls >= 1 && protocol.controls < kMaxSimulatedIons, "protocol.controls",
            "must be in [1, " + std::to_string(kMaxSimulatedIons - 1) + "]");
    require(protocol.spacing_a > 0, "protocol.spacing_a", "must be > 0");
    require(protocol.offset_step_hz >= 0, "protocol.offset_step_hz", "must be >= 0");
    require(protocol.dephasing_gamma_h_hz >= 0, "protocol.dephasing_gamma_h_hz", "must be >= 0");

    const auto& e = burn.experiment;
    require(e.gamma_l_hz > 0, "burn.gamma_l_hz", "must be > 0");
    require(e.gamma_h_hz > 0, "burn.gamma_h_hz", "must be > 0");
    require(e.band_hz > 0, "burn.band_hz", "must be > 0");
    require(e.min_distance_a >= 0, "burn.min_distance_a", "must be >= 0");
    require(e.n_ions >= 2, "burn.ions", "must be >= 2");
    require(e.plane_edge >= 2, "burn.plane_edge", "must be >= 2");
    require(burn.concentration > 0 && burn.concentration <= 1, "burn.concentration", "must be in (0, 1]");
    require(burn.n >= 1, "burn.n", "must be >= 1");
    require(burn.margin >= 0, "burn.margin", "must be >= 0");
    require(burn.k >= 1, "burn.k", "must be >= 1");
    require(burn.spectrum_export == "lines" || burn.spectrum_export == "full", "burn.export", "must be lines or full");

    require(!readout.phases_rad.empty() && readout.phases_rad.size() <= static_cast<std::size_t>(kMaxSimulatedIons),
            "readout.phases_rad", "needs 1 to " + std::to_string(kMaxSimulatedIons) + " phases");
    for (double p : readout.phases_rad) require(std::isfinite(p), "readout.phases_rad", "phases must be finite");
    require(readout.gamma_h_hz > 0, "readout.gamma_h_hz", "must be > 0");
    require(!output_dir.empty(), "output_dir", "must not be empty");
}

InteractionModel RunConfig::model() const {
    InteractionModel m = InteractionModel::from_crystal(crystal);
    m.include_dipole_estimate = interactions.include_dipole_estimate;
    m.gamma0_s = interactions.gamma0_s;
    m.axes = interactions.axes;
    m.axis_seed = interactions.axis_seed;
    return m;
}

RunConfig config_from_json(const json& j) {
    RunConfig c;
    Section root(j, "");
    root.get("seed", c.seed);
    root.get("ion", c.ion);
    c.ion = canonical_ion_name(c.ion);
    root.get("scheme", c.scheme);
    root.get("temperature_k", c.temperature_k);
    root.get("output_dir", c.output_dir);

    {
        auto s = root.sub("crystal");
        auto& x = c.crystal;
        s.get("lattice_constant_m", x.lattice_constant_m);
        s.get("concentration", x.concentration);
        s.get("gamma_inh_hz", x.gamma_inh_hz);
        s.get("gamma_h_ref_hz", x.gamma_h_ref_hz);
        s.get("t_ref_k", x.t_ref_k);
        s.get("raman_coeff_hz", x.raman_coeff_hz);
        s.get("refractive_index", x.refractive_index);
        s.get("eps_r", x.eps_r);
        s.get("r0_sq_over_a_sq", x.r0_sq_over_a_sq);
        std::string dist = distribution_name(x.distribution);
        s.get("distribution", dist);
        require(dist == "gaussian" || dist == "uniform", s.field("distribution"), "must be gaussian or uniform");
        x.distribution = dist == "gaussian" ? OffsetDistribution::gaussian : OffsetDistribution::uniform;
        std::string corr = correlation_name(x.correlation);
        s.get("correlation", corr);
        require(corr == "correlated" || corr == "independent", s.field("correlation"), "must be correlated or independent");
        x.correlation = corr == "correlated" ? OffsetCorrelation::correlated : OffsetCorrelation::independent;
        s.finish();
    }
    {
        auto s = root.sub("ensemble");
        std::vector<int> box{c.box.nx, c.box.ny, c.box.nz};
        s.get("box", box);
        require(box.size() == 3, s.field("box"), "needs three extents");
        c.box = {box[0], box[1], box[2]};
        s.finish();
    }
    {
        auto s = root.sub("interactions");
        auto& m = c.interactions;
        s.get("include_dipole_estimate", m.include_dipole_estimate);
        s.get("gamma0_s", m.gamma0_s);
        std::string axes = axes_name(m.axes);
        s.get("axes", axes);
        require(axes == "global_z" || axes == "random", s.field("axes"), "must be global_z or random");
        m.axes = axes == "global_z" ? AxisMode::global_z : AxisMode::random;
        s.get("axis_seed", m.axis_seed);
        s.finish();
    }
    {
        auto s = root.sub("pulse");
        auto& p = c.pulse;
        s.get("ion", p.ion);
        p.ion = canonical_ion_name(p.ion);
        s.get("lower", p.lower);
        s.get("upper", p.upper);
        s.get("gamma0_s", p.gamma0_s);
        s.get("gamma_l_hz", p.gamma_l_hz);
        s.get("theta_over_pi", p.theta_over_pi);
        s.get("w_cut_hz", p.w_cut_hz);
        s.get("beam_area_cm2", p.beam_area_cm2);
        s.finish();
    }
    {
        auto s = root.sub("protocol");
        auto& p = c.protocol;
        s.get("gate", p.gate);
        s.get("controls", p.controls);
        s.get("spacing_a", p.spacing_a);
        s.get("offset_step_hz", p.offset_step_hz);
        s.get("blockade_hz", p.blockade_hz);
        s.get("enforce_blockade", p.enforce_blockade);
        s.get("decay", p.decay);
        s.get("dephasing_gamma_h_hz", p.dephasing_gamma_h_hz);
        s.finish();
    }
    {
        auto s = root.sub("burn");
        auto& b = c.burn;
        auto& e = b.experiment;
        s.get("gamma_l_hz", e.gamma_l_hz);
        s.get("gamma_h_hz", e.gamma_h_hz);
        s.get("band_hz", e.band_hz);
        s.get("min_distance_a", e.min_distance_a);
        s.get("ions", e.n_ions);
        s.get("plane_edge", e.plane_edge);
        s.get("concentration", b.concentration);
        s.get("n", b.n);
        s.get("margin", b.margin);
        s.get("k", b.k);
        s.get("export", b.spectrum_export);
        s.finish();
    }
    {
        auto s = root.sub("readout");
        s.get("phases_rad", c.readout.phases_rad);
        s.get("gamma_h_hz", c.readout.gamma_h_hz);
        s.finish();
    }
    root.finish();
    c.validate();
    return c;
}

json config_to_json(const RunConfig& c) {
    const auto& x = c.crystal;
    const auto& m = c.interactions;
    const auto& p = c.pulse;
    const auto& q = c.protocol;
    const auto& b = c.burn;
    return {{"seed", c.seed},
            {"ion", c.ion},
            {"scheme", c.scheme},
            {"temperature_k", c.temperature_k},
            {"output_dir", c.output_dir},
            {"crystal",
             {{"lattice_constant_m", x.lattice_constant_m},
              {"concentration", x.concentration},
              {"gamma_inh_hz", x.gamma_inh_hz},
              {"gamma_h_ref_hz", x.gamma_h_ref_hz},
              {"t_ref_k", x.t_ref_k},
              {"raman_coeff_hz", x.raman_coeff_hz},
              {"refractive_index", x.refractive_index},
              {"eps_r", x.eps_r},
              {"r0_sq_over_a_sq", x.r0_sq_over_a_sq},
              {"distribution", distribution_name(x.distribution)},
              {"correlation", correlation_name(x.correlation)}}},
            {"ensemble", {{"box", {c.box.nx, c.box.ny, c.box.nz}}}},
            {"interactions",
             {{"include_dipole_estimate", m.include_dipole_estimate},
              {"gamma0_s", m.gamma0_s},
              {"axes", axes_name(m.axes)},
              {"axis_seed", m.axis_seed}}},
            {"pulse",
             {{"ion", p.ion},
              {"lower", p.lower},
              {"upper", p.upper},
              {"gamma0_s", p.gamma0_s},
              {"gamma_l_hz", p.gamma_l_hz},
              {"theta_over_pi", p.theta_over_pi},
              {"w_cut_hz", p.w_cut_hz},
              {"beam_area_cm2", p.beam_area_cm2}}},
            {"protocol",
             {{"gate", q.gate},
              {"controls", q.controls},
              {"spacing_a", q.spacing_a},
              {"offset_step_hz", q.offset_step_hz},
              {"blockade_hz", q.blockade_hz},
              {"enforce_blockade", q.enforce_blockade},
              {"decay", q.decay},
              {"dephasing_gamma_h_hz", q.dephasing_gamma_h_hz}}},
            {"burn",
             {{"gamma_l_hz", b.experiment.gamma_l_hz},
              {"gamma_h_hz", b.experiment.gamma_h_hz},
              {"band_hz", b.experiment.band_hz},
              {"min_distance_a", b.experiment.min_distance_a},
              {"ions", b.experiment.n_ions},
              {"plane_edge", b.experiment.plane_edge},
              {"concentration", b.concentration},
              {"n", b.n},
              {"margin", b.margin},
              {"k", b.k},
              {"export", b.spectrum_export}}},
            {"readout", {{"phases_rad", c.readout.phases_rad}, {"gamma_h_hz", c.readout.gamma_h_hz}}}};
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open configuration file '" + path + "'");
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ValidationError("configuration file '" + path + "': " + e.what());
    }
    return config_from_json(j);
}

}  // namespace reiqc
