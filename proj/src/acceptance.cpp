#include "reiqc/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>

#include "reiqc/ensemble.hpp"
#include "reiqc/error.hpp"
#include "reiqc/hole_burning.hpp"
#include "reiqc/interactions.hpp"
#include "reiqc/ion_data.hpp"
#include "reiqc/protocols.hpp"
#include "reiqc/pulse.hpp"
#include "reiqc/units.hpp"

namespace reiqc::acceptance {

using nlohmann::json;

namespace {

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

json paper_row(const std::string& what, double value, double paper, const std::string& unit) {
    const double ratio = value / paper;
    return {{"quantity", what}, {"value", value}, {"paper", paper}, {"unit", unit}, {"ratio", ratio},
            {"order_of_magnitude_ok", ratio >= 0.01 && ratio <= 100.0}};
}

// --- 1 -----------------------------------------------------------------------

CriterionResult pi_pulse_field_check() {
    CriterionResult r;
    r.title = "pi-pulse field and power density (Pr3+ 3P0)";
    const double k = units::wave_number(20469.0, 1.6);
    const double gamma_l = 1e9;
    const double gamma0 = 1.8e4;
    const double field = pi_pulse_field(gamma_l, k, gamma0);
    const double field_alt = pi_pulse_field_from_dipole(gamma_l, dipole_matrix_element(gamma0, k));
    const double power_mw = power_density(field) / 1e6;
    const double agree = rel_diff(field, field_alt);
    r.pass = field >= 2.0e4 && field <= 3.5e4 && power_mw >= 1.3 && power_mw <= 3.0 && agree <= 1e-12;
    r.summary = "E = " + fmt("%.4g", field) + " V/cm (paper ~3e4), I = " + fmt("%.3g", power_mw) +
                " MW/cm^2 (paper ~2), forms agree to " + fmt("%.1e", agree);
    r.details = {{"dipole_m", dipole_matrix_element(gamma0, k)},
                 {"field_v_per_cm", field},
                 {"field_from_dipole_v_per_cm", field_alt},
                 {"relative_difference", agree},
                 {"power_mw_per_cm2", power_mw},
                 {"paper", json::array({paper_row("field", field, 3e4, "V/cm"), paper_row("power", power_mw, 2.0, "MW/cm^2")})}};
    return r;
}

// --- 2 -----------------------------------------------------------------------

CriterionResult power_law_check() {
    CriterionResult r;
    r.title = "power laws and crossover distance";
    const auto& db = IonDatabase::embedded();
    const auto scheme = db.load_scheme("Tm3+", 1);
    const InteractionModel model;
    const double a = model.lattice_constant_m;
    const auto m = moments_from_u2(db, scheme.ion, scheme.zero.label, scheme.aux.label, model.r0_sq_m2, {0, 0, 1});
    const double u_tilde = std::max(std::sqrt(scheme.zero.u2_diag_sq), std::sqrt(scheme.aux.u2_diag_sq));
    const double u01 = std::sqrt(db.u_sq(scheme.ion, scheme.zero.label, scheme.aux.label).max());
    const double k = units::wave_number(transition_frequency(scheme, Role::zero, Role::aux), model.refractive_index);
    auto dd = [&](double r_a) { return dipole_shift_estimate(model.gamma0_s, model.eps_r, std::pow(u_tilde / u01, 2), k, r_a * a); };
    auto dq = [&](double r_a) { return std::abs(quad_shift_full(m, m, r_a * a, model.eps_r)); };

    const double a_d = dd(1.0);
    const double a_q = dq(1.0);
    double spread_d = 0.0;
    double spread_q = 0.0;
    for (int s = 0; s <= 200; ++s) {
        const double r_a = 2.0 * std::pow(50.0, s / 200.0);
        spread_d = std::max(spread_d, rel_diff(dd(r_a) * std::pow(r_a, 3), a_d));
        spread_q = std::max(spread_q, rel_diff(dq(r_a) * std::pow(r_a, 5), a_q));
    }
    const double r_star = crossover_distance(a_d, a_q);
    // Bisection on log(dq/dd), which is monotone in R.
    double lo = 1e-3;
    double hi = 1e3;
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        (dq(mid) > dd(mid) ? lo : hi) = mid;
    }
    const double r_bisect = std::sqrt(lo * hi);
    const double err = rel_diff(r_bisect, r_star);
    r.pass = spread_d <= 1e-12 && spread_q <= 1e-12 && err <= 1e-9;
    r.summary = "max deviation R^3: " + fmt("%.1e", spread_d) + ", R^5: " + fmt("%.1e", spread_q) + "; R* = " +
                fmt("%.6g", r_star) + "a, bisection differs by " + fmt("%.1e", err);
    r.details = {{"scheme", scheme.id()}, {"a_dipole_hz", a_d}, {"a_quad_hz", a_q}, {"spread_r3", spread_d},
                 {"spread_r5", spread_q}, {"crossover_a", r_star}, {"crossover_bisection_a", r_bisect}};
    return r;
}

// --- 3 -----------------------------------------------------------------------

CriterionResult isotropy_check(std::uint64_t seed) {
    CriterionResult r;
    r.title = "quadrupole isotropy null";
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double scale = 1e-21;
    const double dist = 3 * 4e-10;
    double worst = 0.0;
    for (int n = 0; n < 1000; ++n) {
        const auto aniso = StaticMoments::from_second({u(rng) * scale, u(rng) * scale, u(rng) * scale});
        const double s = u(rng) * scale;
        const auto iso = StaticMoments::from_second({s, s, s});
        const double ref = std::abs(quad_shift_full(aniso, aniso, dist, 10.0));
        if (ref == 0) continue;
        worst = std::max({worst, std::abs(quad_shift_full(iso, aniso, dist, 10.0)) / ref,
                          std::abs(quad_shift_full(aniso, iso, dist, 10.0)) / ref});
    }
    r.pass = worst < 1e-15;
    r.summary = "largest |isotropic shift| / anisotropic reference over 1000 sets: " + fmt("%.3g", worst);
    r.details = {{"samples", 1000}, {"worst_ratio", worst}};
    return r;
}

// --- 4 -----------------------------------------------------------------------

double round_sig(double v, int digits) {
    const double p = std::pow(10.0, digits - 1 - static_cast<int>(std::floor(std::log10(std::abs(v)))));
    return std::round(v * p) / p;
}

CriterionResult ensemble_arithmetic_check() {
    CriterionResult r;
    r.title = "ensemble spacing arithmetic";
    const double spacing = mean_spacing(1e-4);
    const double radius = ensemble_radius(50, 0.1);
    const double spacing_ref = 1.0 / std::cbrt(1e-4);
    const double radius_ref = std::cbrt(50 / 0.1);
    r.pass = round_sig(spacing, 3) == round_sig(spacing_ref, 3) && round_sig(radius, 3) == round_sig(radius_ref, 3) &&
             round_sig(spacing, 4) == 21.54 && round_sig(radius, 3) == 7.94;
    r.summary = "mean spacing " + fmt("%.4g", spacing) + "a (paper ~22a), radius of 50 ions " + fmt("%.3g", radius) +
                "a (paper 7.9a)";
    r.details = {{"mean_spacing_a", spacing}, {"ensemble_radius_a", radius},
                 {"paper", json::array({paper_row("mean spacing", spacing, 22, "a"), paper_row("radius", radius, 7.9, "a")})}};
    return r;
}

// --- 5 -----------------------------------------------------------------------

std::vector<IonSite> two_ions(const LevelScheme& scheme, double separation_hz) {
    const auto n_tr = scheme_transitions(scheme).size();
    IonSite a{0, {0, 0, 0}, {0, 0, 0}, std::vector<double>(n_tr, 0.0)};
    IonSite b{1, {3, 0, 0}, {3 * 4e-10, 0, 0}, std::vector<double>(n_tr, separation_hz)};
    return {a, b};
}

CriterionResult cnot_check() {
    CriterionResult r;
    r.title = "CNOT truth table from dynamics";
    const auto& db = IonDatabase::embedded();
    const auto scheme = db.load_scheme("Tm3+", 1);
    GateOptions opt;
    opt.gamma_l_hz = 1e9;
    const auto ions = two_ions(scheme, 100 * opt.gamma_l_hz);
    const auto inputs = default_inputs(2);
    const std::vector<InputState> basis(inputs.begin(), inputs.begin() + 4);

    const auto blocked = Register::blockade(scheme, ions, 30 * opt.gamma_l_hz);
    const auto plan = cnot_plan(blocked, 0, 1, opt);
    const auto off = simulate_gate(blocked, plan, inputs, {});
    ExecOptions with_decay;
    with_decay.decay = true;
    const auto on = simulate_gate(blocked, plan, basis, with_decay);

    opt.enforce_blockade = false;
    const auto free = Register::blockade(scheme, ions, 0.0);
    const auto plan0 = cnot_plan(free, 0, 1, opt);
    const auto none = simulate_gate(free, plan0, basis, {});

    double min_basis = 1.0;
    double degradation = 0.0;
    json rows = json::array();
    for (std::size_t k = 0; k < 4; ++k) {
        min_basis = std::min(min_basis, off.fidelities[k]);
        degradation = std::max(degradation, off.fidelities[k] - on.fidelities[k]);
        rows.push_back({{"input", off.labels[k]}, {"fidelity", off.fidelities[k]}, {"fidelity_decay_on", on.fidelities[k]},
                        {"fidelity_no_blockade", none.fidelities[k]}, {"residual_phase_rad", off.phases_rad[k]}});
    }
    for (std::size_t k = 4; k < off.labels.size(); ++k) {
        rows.push_back({{"input", off.labels[k]}, {"fidelity", off.fidelities[k]}, {"residual_phase_rad", off.phases_rad[k]}});
    }
    const double f00_free = none.fidelity("00");
    r.pass = min_basis >= 0.95 && f00_free <= 0.1 && degradation < 1e-3;
    r.summary = "min basis fidelity " + fmt("%.6f", min_basis) + " at delta = 30 Gamma_L; |00> without blockade " +
                fmt("%.3g", f00_free) + "; decay costs " + fmt("%.2e", degradation);
    r.details = {{"scheme", scheme.id()}, {"gamma_l_hz", opt.gamma_l_hz}, {"blockade_margin", plan.min_margin()},
                 {"pulses", plan.pulses.size()}, {"inputs", rows}, {"decay_degradation", degradation}};
    return r;
}

// --- 6 -----------------------------------------------------------------------

CriterionResult blockade_leakage_check() {
    CriterionResult r;
    r.title = "blockade leakage bound";
    const auto& db = IonDatabase::embedded();
    const auto scheme = db.load_scheme("Tm3+", 1);
    const double gamma_l = 1e9;
    const auto ions = two_ions(scheme, 100 * gamma_l);
    const int l0 = scheme.local_index(Role::zero);
    const int la = scheme.local_index(Role::aux);
    json rows = json::array();
    bool ok = true;
    double prev = INFINITY;
    for (double ratio : {3.0, 10.0, 30.0, 100.0}) {
        const auto reg = Register::blockade(scheme, ions, ratio * gamma_l);
        EnsembleState s(2, reg.dim(), l0);
        s.amplitudes()[s.index_of({l0, l0})] = 0.0;
        s.amplitudes()[s.index_of({la, l0})] = 1.0;
        PulseSpec p;
        p.reference = {Role::zero, Role::aux};
        p.carrier_offset_hz = reg.offset_from(1, p.reference, p.reference);
        p.duration_s = 1.0 / gamma_l;
        apply_pulse(s, reg, p);
        const double transfer = s.population(1, la);
        const double omega = p.rabi_rad_s();
        const double delta = units::kTwoPi * ratio * gamma_l;
        const double bound = omega * omega / (omega * omega + delta * delta);
        ok = ok && transfer <= bound * (1 + 1e-12) && transfer < prev;
        prev = transfer;
        rows.push_back({{"delta_over_gamma_l", ratio}, {"transfer", transfer}, {"bound", bound}});
    }
    r.pass = ok;
    std::ostringstream s;
    s << "transfer at delta/Gamma_L = 3,10,30,100:";
    for (const auto& row : rows) s << ' ' << fmt("%.2e", row["transfer"].get<double>());
    s << (ok ? " (below bound, decreasing)" : " (bound or monotonicity violated)");
    r.summary = s.str();
    r.details = {{"rows", rows}};
    return r;
}

// --- 7 -----------------------------------------------------------------------

CriterionResult hole_burning_check(std::uint64_t seed) {
    CriterionResult r;
    r.title = "hole-burning oracle and ensemble selection";
    const BurnExperiment cfg;
    const auto& db = IonDatabase::embedded();
    const auto scheme = db.load_scheme("Tm3+", 1);
    CrystalConfig crystal;
    crystal.concentration = 0.3;
    const InteractionModel model = InteractionModel::from_crystal(crystal);
    const auto reg = planar_burn_ensemble(db, scheme, crystal, model, cfg, seed);
    const auto run = run_burn_experiment(reg, cfg);
    const auto& det = run.detection;
    const auto& result = run.burn;
    const auto& grid = run.before.grid;
    const IonSite& burned = reg.ions().front();
    const int la = scheme.local_index(Role::aux);

    double worst = 0.0;
    bool all_attached = true;
    std::map<long long, std::vector<double>> shells;  // R^2 in a^2 -> splittings
    std::vector<double> split;
    std::vector<double> inv_r;
    for (const auto& p : det.pairs) {
        if (!p.partner_id) {
            all_attached = false;
            continue;
        }
        worst = std::max(worst, std::abs(p.splitting_hz - std::abs(*p.true_shift_hz)));
        const auto& s = reg.ions()[static_cast<std::size_t>(reg.index_of(*p.partner_id))];
        const int dx = s.lattice[0] - burned.lattice[0];
        const int dy = s.lattice[1] - burned.lattice[1];
        shells[dx * dx + dy * dy].push_back(p.splitting_hz);
        split.push_back(p.splitting_hz);
        inv_r.push_back(1.0 / std::sqrt(static_cast<double>(dx * dx + dy * dy)));
    }
    // Equal distances give equal true shifts; rank the distinct distances.
    std::vector<double> shell_inv_r;
    std::vector<double> shell_split;
    for (const auto& [r2, v] : shells) {
        shell_inv_r.push_back(1.0 / std::sqrt(static_cast<double>(r2)));
        double m = 0;
        for (double x : v) m += x;
        shell_split.push_back(m / static_cast<double>(v.size()));
    }
    const double rho_shells = shell_split.size() > 1 ? spearman(shell_split, shell_inv_r) : 0.0;
    long long discordant = 0;
    for (std::size_t x = 0; x < split.size(); ++x) {
        for (std::size_t y = x + 1; y < split.size(); ++y) {
            if (inv_r[x] != inv_r[y] && (inv_r[x] > inv_r[y]) != (split[x] > split[y])) ++discordant;
        }
    }

    const double a_d = model.include_dipole_estimate ? scheme_dipole_prefactor(db, scheme, model) : 0.0;
    const double a_q = std::abs(physical_coupling(db, scheme, {}, IonSite{0, {0, 0, 0}, {0, 0, 0}, {}},
                                                  IonSite{1, {1, 0, 0}, {model.lattice_constant_m, 0, 0}, {}})
                                    .transition_shift(scheme.local_index(Role::zero), la, scheme.local_index(Role::zero), la)) -
                       a_d;
    const double r_star = a_d > 0 && a_q > 0 ? crossover_distance(a_d, a_q) : INFINITY;

    SelectOptions sel;
    sel.n = 50;
    sel.gamma_l_hz = cfg.gamma_l_hz;
    sel.gamma_h_hz = cfg.gamma_h_hz;
    QubitRegistry registry;
    bool selected = true;
    std::string select_error;
    try {
        registry = select_ensemble(det.pairs, reg, sel);
    } catch (const PartialRegistryError& e) {
        registry = e.partial();
        selected = false;
        select_error = e.what();
    }
    double weakest = INFINITY;
    for (const auto& p : registry.pairs) weakest = std::min(weakest, p.shift_hz);

    const bool burned_only_center = result.burned_ids == std::vector<int>{burned.id};
    r.pass = burned_only_center && all_attached && static_cast<int>(det.pairs.size()) == cfg.n_ions - 1 &&
             det.unmatched_holes.empty() && det.unmatched_antiholes.empty() && worst <= cfg.gamma_h_hz / 2 &&
             rho_shells >= 1.0 - 1e-12 && discordant == 0 && selected && registry.min_margin > 1.0;
    r.summary = std::to_string(det.pairs.size()) + " pairs, worst splitting error " + fmt("%.3g", worst / cfg.gamma_h_hz) +
                " Gamma_h, rank correlation " + fmt("%.6f", rho_shells) + ", registry of " +
                std::to_string(registry.ion_ids.size()) + " with weakest margin " + fmt("%.3g", registry.min_margin) +
                "; weakest shift " + fmt("%.3g", weakest) + " Hz = " + fmt("%.2e", weakest / 3e9) + " x paper's 3 GHz";
    r.details = {{"scheme", scheme.id()},
                 {"ions", reg.size()},
                 {"concentration", crystal.concentration},
                 {"min_distance_a", cfg.min_distance_a},
                 {"gamma_l_hz", cfg.gamma_l_hz},
                 {"gamma_h_hz", cfg.gamma_h_hz},
                 {"grid_points", grid.size},
                 {"burned_ids", result.burned_ids},
                 {"pairs_detected", det.pairs.size()},
                 {"unmatched_holes", det.unmatched_holes.size()},
                 {"unmatched_antiholes", det.unmatched_antiholes.size()},
                 {"worst_splitting_error_hz", worst},
                 {"rank_correlation_distinct_distances", rho_shells},
                 {"rank_correlation_all_pairs", split.size() > 1 ? spearman(split, inv_r) : 0.0},
                 {"discordant_pairs", discordant},
                 {"crossover_a", r_star},
                 {"registry_size", registry.ion_ids.size()},
                 {"registry_min_margin", registry.min_margin},
                 {"select_error", select_error},
                 {"weakest_shift_hz", weakest},
                 {"margin_if_gamma_l_1ghz", weakest / 1e9},
                 {"paper", json::array({paper_row("weakest shift in registry", weakest, 3e9, "Hz")})}};
    return r;
}

// --- 8 -----------------------------------------------------------------------

CriterionResult readout_check() {
    CriterionResult r;
    r.title = "Hadamard readout populations";
    const std::vector<double> phases{0.0, units::kPi / 2, units::kPi};
    const auto state = hadamard_readout_state(phases);
    const std::vector<double> expect{1.0, 0.5, 0.0};
    double closed_err = 0.0;
    for (std::size_t q = 0; q < 3; ++q) closed_err = std::max(closed_err, std::abs(state.p0[q] - expect[q]));

    const auto& db = IonDatabase::embedded();
    const auto scheme = db.load_scheme("Tm3+", 1);
    const double gamma_h = 1e6;
    const double step = gamma_h / 5;
    const auto n_tr = scheme_transitions(scheme).size();
    std::vector<IonSite> ions;
    for (int q = 0; q < 3; ++q) {
        ions.push_back({q, {10 * q, 0, 0}, {10 * q * 4e-10, 0, 0}, std::vector<double>(n_tr, 5000.0 * step * (q + 1))});
    }
    const Register reg(scheme, ions);
    Occupation occ(3, std::vector<double>(static_cast<std::size_t>(reg.dim()), 0.0));
    for (std::size_t q = 0; q < 3; ++q) {
        occ[q][static_cast<std::size_t>(scheme.local_index(Role::zero))] = state.p0[q];
        occ[q][static_cast<std::size_t>(scheme.local_index(Role::one))] = state.p1[q];
    }
    const Transition ref{Role::zero, Role::aux};
    const auto grid = make_grid(0.0, 20000.0 * step, step);
    const auto spectrum = synth_spectrum(reg, occ, {{Role::zero, Role::aux}}, ref, gamma_h, grid);
    const double peak = lorentzian(0.0, gamma_h);
    double line_err = 0.0;
    std::vector<double> intensity;
    for (int q = 0; q < 3; ++q) {
        const auto k = static_cast<std::size_t>(std::llround(reg.offset_from(q, ref, ref) / step));
        intensity.push_back(spectrum.values[k] / peak);
        line_err = std::max(line_err, std::abs(intensity.back() - state.p0[static_cast<std::size_t>(q)]));
    }
    r.pass = closed_err <= 1e-12 && line_err <= 0.01;
    r.summary = "P(0) = " + fmt("%.12g", state.p0[0]) + ", " + fmt("%.12g", state.p0[1]) + ", " + fmt("%.12g", state.p0[2]) +
                "; line intensities/peak = " + fmt("%.5f", intensity[0]) + ", " + fmt("%.5f", intensity[1]) + ", " +
                fmt("%.5f", intensity[2]);
    r.details = {{"phases_rad", phases}, {"p0", state.p0}, {"p1", state.p1}, {"closed_form_error", closed_err},
                 {"line_intensity_over_peak", intensity}, {"line_error", line_err}};
    return r;
}

// --- 9 -----------------------------------------------------------------------

CriterionResult unitarity_check(std::uint64_t seed) {
    CriterionResult r;
    r.title = "unitarity and norm bookkeeping";
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    double unitary_err = 0.0;
    for (int n = 0; n < 1000; ++n) {
        const auto v = single_qubit_unitary(u01(rng) * 4 * units::kPi, u01(rng) * units::kTwoPi);
        const Mat2 vd{std::conj(v[0]), std::conj(v[2]), std::conj(v[1]), std::conj(v[3])};
        const auto p = multiply(vd, v);
        unitary_err = std::max({unitary_err, std::abs(p[0] - 1.0), std::abs(p[1]), std::abs(p[2]), std::abs(p[3] - 1.0)});
    }

    const auto& db = IonDatabase::embedded();
    const auto scheme = db.load_scheme("Tm3+", 1);
    const auto transitions = scheme_transitions(scheme);
    const double gamma_l = 1e9;
    std::vector<IonSite> ions;
    for (int q = 0; q < 3; ++q) {
        ions.push_back({q, {2 * q, 0, 0}, {2 * q * 4e-10, 0, 0}, std::vector<double>(transitions.size(), 40.0 * gamma_l * q)});
    }
    const auto reg = Register::physical(db, scheme, InteractionModel{}, ions);
    double norm_err = 0.0;
    for (int seq = 0; seq < 5; ++seq) {
        EnsembleState s(3, reg.dim(), 0);
        auto& a = s.amplitudes();
        std::normal_distribution<double> g;
        double nrm = 0;
        for (auto& z : a) {
            z = {g(rng), g(rng)};
            nrm += std::norm(z);
        }
        for (auto& z : a) z /= std::sqrt(nrm);
        for (int k = 0; k < 100; ++k) {
            PulseSpec p;
            const int ion = static_cast<int>(rng() % 3);
            p.reference = transitions[rng() % transitions.size()];
            p.carrier_offset_hz = reg.offset_from(ion, p.reference, p.reference) + (u01(rng) - 0.5) * 4 * gamma_l;
            p.theta = u01(rng) * units::kTwoPi;
            p.phase = u01(rng) * units::kTwoPi;
            p.duration_s = 1.0 / gamma_l;
            apply_pulse(s, reg, p);
            apply_decay(s, reg, p.duration_s);
            norm_err = std::max(norm_err, std::abs(s.norm_sq() + s.leakage() - 1.0));
        }
    }

    // Two resonant pi pulses on isolated ions restore every population.
    const Register isolated(scheme, ions);
    double restore_err = 0.0;
    for (int n = 0; n < 20; ++n) {
        EnsembleState s(3, isolated.dim(), 0);
        auto& a = s.amplitudes();
        std::normal_distribution<double> g;
        double nrm = 0;
        for (auto& z : a) {
            z = {g(rng), g(rng)};
            nrm += std::norm(z);
        }
        for (auto& z : a) z /= std::sqrt(nrm);
        std::vector<std::vector<double>> pops0;
        for (int i = 0; i < 3; ++i) pops0.push_back(s.populations(i));
        PulseSpec p;
        const int ion = static_cast<int>(rng() % 3);
        p.reference = transitions[rng() % transitions.size()];
        p.carrier_offset_hz = isolated.offset_from(ion, p.reference, p.reference);
        p.phase = u01(rng) * units::kTwoPi;
        p.duration_s = 1.0 / gamma_l;
        apply_pulse(s, isolated, p);
        apply_pulse(s, isolated, p);
        for (int i = 0; i < 3; ++i) {
            const auto pops = s.populations(i);
            for (std::size_t l = 0; l < pops.size(); ++l) restore_err = std::max(restore_err, std::abs(pops[l] - pops0[static_cast<std::size_t>(i)][l]));
        }
    }
    r.pass = norm_err <= 1e-9 && unitary_err <= 1e-12 && restore_err <= 1e-9;
    r.summary = "norm+leakage drift " + fmt("%.1e", norm_err) + " over 5x100 pulses, |V'V - I| " + fmt("%.1e", unitary_err) +
                ", double-pi restoration " + fmt("%.1e", restore_err);
    r.details = {{"norm_error", norm_err}, {"unitarity_error", unitary_err}, {"restoration_error", restore_err}};
    return r;
}

// --- 10 ----------------------------------------------------------------------

CriterionResult magnitude_ledger() {
    CriterionResult r;
    r.title = "order-of-magnitude ledger";
    const double a = 4e-10;
    const double k = units::wave_number(20469.0, 1.6);
    const double eps = 10.0;
    auto dd = [&](double r_a) { return dipole_shift_estimate(1e4, eps, 1.0, k, r_a * a); };
    auto dq = [&](double r_a) { return quad_shift_estimate(0.1, 3e15, 0.1 * a * a, eps, r_a * a); };
    json rows = json::array({paper_row("dipole prefactor A_d", dd(1), 100e9, "Hz (a/R)^3"),
                             paper_row("quadrupole prefactor A_q", dq(1), 50e12, "Hz (a/R)^5"),
                             paper_row("dipole shift at R = 5a", dd(5), 5e9, "Hz"),
                             paper_row("quadrupole shift at R = 5a", dq(5), 30e9, "Hz")});
    bool ok = true;
    std::ostringstream s;
    s << "ratios to paper:";
    for (const auto& row : rows) {
        ok = ok && row["order_of_magnitude_ok"].get<bool>();
        s << ' ' << fmt("%.2e", row["ratio"].get<double>());
    }
    s << " (band [0.01, 100])";
    r.pass = ok;
    r.summary = s.str();
    r.details = {{"conventions",
                  {{"omega0", "3e15 rad/s (angular)"},
                   {"shifts", "ordinary frequency, energy / (2 pi hbar)"},
                   {"k", "Pr3+ 3H4-3P0, 20469 cm^-1, n = 1.6"},
                   {"gamma0_s", 1e4},
                   {"eps_r", eps},
                   {"r0_sq", "0.1 a^2"}}},
                 {"rows", rows},
                 {"paper_self_consistency", {{"A_d (a/5a)^3 from the paper prefactor", 100e9 / 125}, {"paper quotes", 5e9}}}};
    return r;
}

}  // namespace

CriterionResult run_criterion(int id, std::uint64_t seed) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    switch (id) {
        case 1: r = pi_pulse_field_check(); break;
        case 2: r = power_law_check(); break;
        case 3: r = isotropy_check(seed); break;
        case 4: r = ensemble_arithmetic_check(); break;
        case 5: r = cnot_check(); break;
        case 6: r = blockade_leakage_check(); break;
        case 7: r = hole_burning_check(seed); break;
        case 8: r = readout_check(); break;
        case 9: r = unitarity_check(seed); break;
        case 10: r = magnitude_ledger(); break;
        default: throw NotFoundError("no acceptance criterion " + std::to_string(id));
    }
    r.id = id;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double limit = id == 1 ? 1.0 : id == 5 ? 10.0 : id == 7 ? 60.0 : 300.0;
    if (r.seconds > limit) {
        r.pass = false;
        r.summary += " [runtime " + fmt("%.1f", r.seconds) + " s over the " + fmt("%.0f", limit) + " s limit]";
    }
    return r;
}

std::vector<CriterionResult> run_all(std::uint64_t seed) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id, seed));
    return out;
}

json to_json(const CriterionResult& r) {
    return {{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"seconds", r.seconds}, {"summary", r.summary},
            {"details", r.details}};
}

std::string format_line(const CriterionResult& r) {
    char head[128];
    std::snprintf(head, sizeof head, "[%s] %2d  %-45s (%.2f s)  ", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(), r.seconds);
    return head + r.summary;
}

}  // namespace reiqc::acceptance
