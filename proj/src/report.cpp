#include "reiqc/report.hpp"

#include <cmath>
#include <cstdio>

#include "reiqc/error.hpp"

namespace reiqc {

using nlohmann::json;

namespace {

// JSON has no infinity; unbounded values are written as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const Feature& f) {
    return {{"frequency_offset_hz", f.frequency_hz}, {"amplitude", f.amplitude}, {"area", f.area}};
}

json to_json(const HolePair& p) {
    json j{{"hole", to_json(p.hole)}, {"antihole", to_json(p.antihole)}, {"splitting_hz", p.splitting_hz}};
    j["partner_id"] = p.partner_id ? json(*p.partner_id) : json(nullptr);
    j["true_shift_hz"] = p.true_shift_hz ? json(*p.true_shift_hz) : json(nullptr);
    return j;
}

json to_json(const Detection& d) {
    auto list = [](const auto& v) {
        json a = json::array();
        for (const auto& x : v) a.push_back(to_json(x));
        return a;
    };
    return {{"threshold", d.threshold},
            {"pairs", list(d.pairs)},
            {"burned_holes", list(d.burned_holes)},
            {"unmatched_holes", list(d.unmatched_holes)},
            {"unmatched_antiholes", list(d.unmatched_antiholes)}};
}

json to_json(const QubitRegistry& r) {
    json pairs = json::array();
    double weakest = INFINITY;
    for (const auto& p : r.pairs) {
        pairs.push_back({{"id1", p.id1}, {"id2", p.id2}, {"shift_hz", p.shift_hz}, {"margin", number(p.margin)}});
        weakest = std::min(weakest, std::abs(p.shift_hz));
    }
    json ions = json::array();
    for (std::size_t i = 0; i < r.ion_ids.size(); ++i) {
        json addr = json::object();
        for (std::size_t t = 0; t < r.transition_names.size(); ++t) addr[r.transition_names[t]] = r.addressing_hz[i][t];
        ions.push_back({{"ion_id", r.ion_ids[i]}, {"splitting_hz", r.splittings_hz[i]}, {"addressing_hz", addr}});
    }
    return {{"n", r.n},
            {"k", r.k},
            {"n_prime", r.n_prime},
            {"min_margin", number(r.min_margin)},
            {"weakest_shift_hz", number(weakest)},
            {"ions", ions},
            {"pairs", pairs}};
}

json to_json(const FidelityReport& r) {
    json rows = json::array();
    for (std::size_t k = 0; k < r.labels.size(); ++k) {
        rows.push_back({{"input", r.labels[k]},
                        {"fidelity", r.fidelities[k]},
                        {"residual_phase_rad", r.phases_rad[k]},
                        {"leakage", r.leakages[k]}});
    }
    return {{"mean", r.mean}, {"min", r.min}, {"blockade_margin", number(r.blockade_margin)}, {"inputs", rows}};
}

json to_json(const GatePlan& p) {
    json shifts = json::array();
    for (std::size_t c = 0; c < p.controls.size(); ++c) {
        shifts.push_back({{"control", p.controls[c]},
                          {"shift_hz", p.blockade_shifts_hz[c]},
                          {"margin", number(p.blockade_margins[c])}});
    }
    return {{"scheme", p.scheme_id},
            {"controls", p.controls},
            {"target", p.target},
            {"pulses", p.pulses.size()},
            {"blockade", shifts},
            {"min_margin", number(p.min_margin())}};
}

json to_json(const PairShift& s) {
    return {{"id1", s.id1},
            {"id2", s.id2},
            {"r_over_a", s.r_over_a},
            {"delta_d_hz", s.delta_d_hz},
            {"delta_q_hz", s.delta_q_hz},
            {"delta_total_hz", s.delta_total_hz},
            {"blockade_margin", number(s.blockade_margin)},
            {"dominant", s.dominant},
            {"cross_term_warning", s.cross_term_warning}};
}

json to_json(const LevelScheme& s) {
    json levels = json::object();
    for (Role role : kAllRoles) levels[std::string(role_name(role))] = s.level(role).label;
    json transitions = json::array();
    for (const auto& t : scheme_transitions(s)) {
        transitions.push_back({{"name", transition_name(t)}, {"frequency_cm1", transition_frequency(s, t.a, t.b)}});
    }
    return {{"id", s.id()}, {"index", s.index}, {"levels", levels}, {"transitions", transitions}};
}

namespace {

void append_row(std::string& out, const Spectrum& s, std::size_t k, char delimiter) {
    char buf[96];
    const int n = std::snprintf(buf, sizeof buf, "%.17g%c%.17g\n", s.grid.at(k), delimiter, s.values[k]);
    out.append(buf, static_cast<std::size_t>(n));
}

std::string spectrum_header(char delimiter) { return std::string("frequency_offset_hz") + delimiter + "value\n"; }

}  // namespace

std::string export_spectrum(const Spectrum& s, char delimiter) {
    std::string out = spectrum_header(delimiter);
    out.reserve(out.size() + s.values.size() * 48);
    for (std::size_t k = 0; k < s.values.size(); ++k) append_row(out, s, k, delimiter);
    return out;
}

std::string export_spectrum(const Spectrum& s, const std::vector<std::size_t>& indices, char delimiter) {
    std::string out = spectrum_header(delimiter);
    out.reserve(out.size() + indices.size() * 48);
    for (std::size_t k : indices) append_row(out, s, k, delimiter);
    return out;
}

std::vector<std::size_t> line_support(const Spectrum& a, const Spectrum& b, double fraction) {
    if (a.values.size() != b.values.size()) throw ValidationError("line_support: spectra must share one grid");
    double peak = 0.0;
    for (double v : a.values) peak = std::max(peak, std::abs(v));
    for (double v : b.values) peak = std::max(peak, std::abs(v));
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        if (std::max(std::abs(a.values[k]), std::abs(b.values[k])) >= fraction * peak) out.push_back(k);
    }
    return out;
}

json paper_comparison(const std::string& quantity, double value, double paper, const std::string& unit) {
    const double ratio = value / paper;
    return {{"quantity", quantity}, {"value", value}, {"paper", paper}, {"unit", unit}, {"ratio", ratio},
            {"order_of_magnitude_ok", ratio >= 0.01 && ratio <= 100.0}};
}

}  // namespace reiqc
