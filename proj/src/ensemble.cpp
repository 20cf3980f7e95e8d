#include "reiqc/ensemble.hpp"

#include <cmath>
#include <random>
#include <set>

#include "csv.hpp"
#include "reiqc/error.hpp"

namespace reiqc {

void CrystalConfig::validate() const {
    auto require = [](bool ok, const char* field, const char* what) {
        if (!ok) throw ValidationError(std::string("crystal.") + field + ": " + what);
    };
    require(lattice_constant_m > 0, "lattice_constant_m", "must be > 0");
    require(concentration > 0 && concentration <= 1, "concentration", "must be in (0, 1]");
    require(gamma_inh_hz > 0, "gamma_inh_hz", "must be > 0");
    require(gamma_h_ref_hz >= 0, "gamma_h_ref_hz", "must be >= 0");
    require(t_ref_k > 0, "t_ref_k", "must be > 0");
    require(raman_coeff_hz >= 0, "raman_coeff_hz", "must be >= 0");
    require(refractive_index >= 1, "refractive_index", "must be >= 1");
    require(eps_r >= 1, "eps_r", "must be >= 1");
    require(r0_sq_over_a_sq > 0, "r0_sq_over_a_sq", "must be > 0");
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<double> sample_offsets(const CrystalConfig& config, std::uint64_t seed, int n_transitions) {
    std::mt19937_64 rng(seed);
    auto draw = [&]() {
        if (config.distribution == OffsetDistribution::gaussian) {
            std::normal_distribution<double> normal(0.0, config.gamma_inh_hz / kGaussianFwhmOverSigma);
            return normal(rng);
        }
        std::uniform_real_distribution<double> uniform(-0.5 * config.gamma_inh_hz, 0.5 * config.gamma_inh_hz);
        return uniform(rng);
    };
    std::vector<double> offsets(static_cast<std::size_t>(n_transitions));
    if (config.correlation == OffsetCorrelation::correlated) {
        const double shared = draw();
        for (auto& o : offsets) o = shared;
    } else {
        for (auto& o : offsets) o = draw();
    }
    return offsets;
}

std::vector<IonSite> sample_sites(const CrystalConfig& config, int box_edge, std::uint64_t seed, int n_transitions) {
    if (box_edge < 2) throw ValidationError("sample_sites: box edge must be >= 2");
    return sample_sites(config, BoxExtent{box_edge, box_edge, box_edge}, seed, n_transitions);
}

std::vector<IonSite> sample_sites(const CrystalConfig& config, BoxExtent box, std::uint64_t seed, int n_transitions) {
    config.validate();
    if (box.nx < 1 || box.ny < 1 || box.nz < 1) throw ValidationError("sample_sites: box extents must be >= 1");
    if (n_transitions < 1) throw ValidationError("sample_sites: need at least one transition");

    std::vector<IonSite> sites;
    std::uint64_t site_index = 0;
    for (int k = 0; k < box.nz; ++k) {
        for (int j = 0; j < box.ny; ++j) {
            for (int i = 0; i < box.nx; ++i, ++site_index) {
                // Two independent streams per site: occupancy and offsets.
                std::mt19937_64 occ(stream_seed(seed, 2 * site_index));
                const double u = std::uniform_real_distribution<double>(0.0, 1.0)(occ);
                if (!(u < config.concentration)) continue;
                IonSite site;
                site.id = static_cast<int>(sites.size());
                site.lattice = {i, j, k};
                site.position_m = {i * config.lattice_constant_m, j * config.lattice_constant_m,
                                   k * config.lattice_constant_m};
                site.offsets_hz = sample_offsets(config, stream_seed(seed, 2 * site_index + 1), n_transitions);
                sites.push_back(std::move(site));
            }
        }
    }
    if (sites.empty()) throw PhysicsError("sample_sites: empty ensemble (no site occupied)");
    return sites;
}

double mean_spacing(double c_eff) {
    if (!(c_eff > 0 && c_eff <= 1)) throw ValidationError("mean_spacing: c_eff must be in (0, 1]");
    return std::cbrt(1.0 / c_eff);
}

double ensemble_radius(double n_ions, double concentration) {
    if (!(n_ions >= 1)) throw ValidationError("ensemble_radius: N must be >= 1");
    if (!(concentration > 0 && concentration <= 1)) throw ValidationError("ensemble_radius: c must be in (0, 1]");
    return std::cbrt(n_ions / concentration);
}

double gamma_h(const CrystalConfig& config, double temperature_k) {
    if (!(temperature_k >= 0)) throw ValidationError("gamma_h: temperature must be >= 0");
    return config.gamma_h_ref_hz + config.raman_coeff_hz * std::pow(temperature_k / config.t_ref_k, 7);
}

double linewidth_from_t2(double t2_s) {
    if (!(t2_s > 0)) throw ValidationError("linewidth_from_t2: T2 must be > 0");
    return 1.0 / (M_PI * t2_s);
}

double lifetime_limited_width(double lifetime_s) {
    if (!(lifetime_s > 0)) throw ValidationError("lifetime_limited_width: lifetime must be > 0");
    return 1.0 / (2.0 * M_PI * lifetime_s);
}

std::string export_sites(const std::vector<IonSite>& sites, const std::vector<std::string>& transition_names,
                         char delimiter) {
    const std::string d(1, delimiter);
    std::string out = "id" + d + "i" + d + "j" + d + "k";
    for (const auto& name : transition_names) out += d + "offset_Hz_" + name;
    out += "\n";
    for (const auto& s : sites) {
        if (s.offsets_hz.size() != transition_names.size()) {
            throw ValidationError("export_sites: ion " + std::to_string(s.id) + " has wrong offset count");
        }
        out += std::to_string(s.id) + d + std::to_string(s.lattice[0]) + d + std::to_string(s.lattice[1]) + d +
               std::to_string(s.lattice[2]);
        for (double o : s.offsets_hz) out += d + detail::format_double(o);
        out += "\n";
    }
    return out;
}

std::vector<IonSite> import_sites(std::string_view text, double lattice_constant_m, char delimiter) {
    const auto table = detail::parse_csv(text, delimiter);
    const int c_id = table.column("id"), c_i = table.column("i"), c_j = table.column("j"), c_k = table.column("k");
    std::vector<int> offset_cols;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (table.header[c].rfind("offset_Hz_", 0) == 0) offset_cols.push_back(static_cast<int>(c));
    }
    std::vector<IonSite> sites;
    std::set<std::array<int, 3>> seen;
    for (const auto& row : table.rows) {
        IonSite s;
        s.id = static_cast<int>(detail::parse_int(row[c_id], "ensemble.id"));
        s.lattice = {static_cast<int>(detail::parse_int(row[c_i], "ensemble.i")),
                     static_cast<int>(detail::parse_int(row[c_j], "ensemble.j")),
                     static_cast<int>(detail::parse_int(row[c_k], "ensemble.k"))};
        if (!seen.insert(s.lattice).second) {
            throw ValidationError("import_sites: two ions share lattice site of ion " + std::to_string(s.id));
        }
        for (int a = 0; a < 3; ++a) s.position_m[a] = s.lattice[a] * lattice_constant_m;
        for (int c : offset_cols) s.offsets_hz.push_back(detail::parse_double(row[c], "ensemble.offset"));
        sites.push_back(std::move(s));
    }
    return sites;
}

}  // namespace reiqc
