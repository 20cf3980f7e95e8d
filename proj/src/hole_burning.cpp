#include "reiqc/hole_burning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "reiqc/units.hpp"

namespace reiqc {

SpectrumGrid make_grid(double lo_hz, double hi_hz, double step_hz) {
    if (!(step_hz > 0)) throw ValidationError("grid: step must be > 0");
    if (!(hi_hz > lo_hz)) throw ValidationError("grid: upper edge must exceed the lower edge");
    const auto n = static_cast<std::size_t>(std::ceil((hi_hz - lo_hz) / step_hz)) + 1;
    return {lo_hz, step_hz, n};
}

Occupation ground_occupation(const Register& reg) {
    Occupation occ(static_cast<std::size_t>(reg.size()), std::vector<double>(static_cast<std::size_t>(reg.dim()), 0.0));
    const int g = reg.scheme().local_index(Role::ground);
    for (auto& o : occ) o[static_cast<std::size_t>(g)] = 1.0;
    return occ;
}

Occupation occupation_of(const EnsembleState& state) {
    Occupation occ;
    for (int i = 0; i < state.n_ions(); ++i) occ.push_back(state.populations(i));
    return occ;
}

std::vector<int> dominant_levels(const Occupation& occ) {
    std::vector<int> out;
    out.reserve(occ.size());
    for (const auto& o : occ) out.push_back(static_cast<int>(std::max_element(o.begin(), o.end()) - o.begin()));
    return out;
}

double lorentzian(double x_hz, double fwhm_hz) {
    const double h = 0.5 * fwhm_hz;
    return h / (units::kPi * (x_hz * x_hz + h * h));
}

double line_center(const Register& reg, int i, const Probe& probe, const Transition& reference,
                   const std::vector<int>& partner_levels) {
    const Transition t{probe.from, probe.to};
    return reg.offset_from(i, t, reference) + reg.pair_shift(i, t, partner_levels);
}

namespace {

struct Line {
    double center;
    double weight;
};

void check_occupation(const Register& reg, const Occupation& occ) {
    if (static_cast<int>(occ.size()) != reg.size()) throw ValidationError("occupation: one row per ion is required");
    for (const auto& o : occ) {
        if (static_cast<int>(o.size()) != reg.dim()) throw ValidationError("occupation: row length must equal the level count");
    }
}

}  // namespace

Spectrum synth_spectrum(const Register& reg, const Occupation& occ, const std::vector<Probe>& probes,
                        const Transition& reference, double gamma_h_hz, const SpectrumGrid& grid, Exec exec) {
    check_occupation(reg, occ);
    if (!(gamma_h_hz > 0)) throw ValidationError("spectrum: Gamma_h must be > 0");
    if (grid.size < 2) throw ValidationError("spectrum: grid needs at least two points");
    if (grid.step_hz > gamma_h_hz / 5 * (1 + 1e-12)) {
        std::ostringstream msg;
        msg << "spectrum: grid step " << grid.step_hz << " Hz exceeds Gamma_h/5 = " << gamma_h_hz / 5 << " Hz";
        throw ValidationError(msg.str());
    }
    const auto levels = dominant_levels(occ);
    std::vector<Line> lines;
    for (int i = 0; i < reg.size(); ++i) {
        for (const auto& p : probes) {
            const double w = occ[static_cast<std::size_t>(i)][static_cast<std::size_t>(reg.scheme().local_index(p.from))];
            if (w <= 0) continue;
            const double c = line_center(reg, i, p, reference, levels);
            if (c - 10 * gamma_h_hz < grid.start_hz || c + 10 * gamma_h_hz > grid.stop_hz()) {
                std::ostringstream msg;
                msg << "spectrum: line of ion " << reg.ions()[static_cast<std::size_t>(i)].id << " at " << c
                    << " Hz is not covered by the grid +/- 10 Gamma_h";
                throw ValidationError(msg.str());
            }
            lines.push_back({c, w});
        }
    }

    Spectrum s{grid, std::vector<double>(grid.size, 0.0)};
    if (exec == Exec::serial) {
        for (const auto& line : lines) {
            for (std::size_t k = 0; k < grid.size; ++k) s.values[k] += line.weight * lorentzian(grid.at(k) - line.center, gamma_h_hz);
        }
        return s;
    }
#pragma omp parallel for schedule(static)
    for (long long kk = 0; kk < static_cast<long long>(grid.size); ++kk) {
        const auto k = static_cast<std::size_t>(kk);
        const double nu = grid.at(k);
        double acc = 0.0;
        for (const auto& line : lines) acc += line.weight * lorentzian(nu - line.center, gamma_h_hz);
        s.values[k] = acc;
    }
    return s;
}

Transition burn_transition(const LevelScheme& scheme) {
    if (scheme.ground_is_aux()) return {Role::aux, Role::zero};
    return {Role::ground, Role::aux};
}

BurnResult burn(const Register& reg, const Occupation& occ, double carrier_offset_hz, double gamma_l_hz) {
    check_occupation(reg, occ);
    if (!(gamma_l_hz > 0)) throw ValidationError("burn: Gamma_L must be > 0");
    BurnResult res;
    res.occupation = occ;
    res.transition = burn_transition(reg.scheme());
    res.transferred.assign(static_cast<std::size_t>(reg.size()), 0.0);
    const auto& t = res.transition;
    const int from = reg.scheme().local_index(Role::ground);
    const int to = from == reg.scheme().local_index(t.a) ? reg.scheme().local_index(t.b) : reg.scheme().local_index(t.a);
    const auto levels = dominant_levels(occ);
    const std::size_t t_idx = static_cast<std::size_t>(transition_index(reg.scheme(), t.a, t.b));

    PulseSpec pulse;
    pulse.reference = t;
    pulse.carrier_offset_hz = carrier_offset_hz;
    pulse.duration_s = 1.0 / gamma_l_hz;

    for (int i = 0; i < reg.size(); ++i) {
        if (levels[static_cast<std::size_t>(i)] != from) continue;
        const double shift = reg.pair_shift(i, t, levels);
        if (std::abs(reg.offset_from(i, t, t) + shift - carrier_offset_hz) > pulse.window_hz()) continue;

        IonSite alone = reg.ions()[static_cast<std::size_t>(i)];
        alone.offsets_hz[t_idx] += shift;
        const Register single(reg.scheme(), {alone});
        std::vector<Complex> amps;
        for (double p : occ[static_cast<std::size_t>(i)]) amps.emplace_back(std::sqrt(std::max(0.0, p)));
        auto state = EnsembleState::product({amps});
        apply_pulse(state, single, pulse, Exec::serial);

        auto pops = state.populations(0);
        const double moved = pops[static_cast<std::size_t>(to)] - occ[static_cast<std::size_t>(i)][static_cast<std::size_t>(to)];
        res.transferred[static_cast<std::size_t>(i)] = moved;
        res.occupation[static_cast<std::size_t>(i)] = std::move(pops);
        if (moved >= 0.5) res.burned_ids.push_back(reg.ions()[static_cast<std::size_t>(i)].id);
    }
    return res;
}

namespace {

// Peak position from the parabola through three equally spaced samples.
double parabolic_offset(double ym, double y0, double yp) {
    const double den = ym - 2 * y0 + yp;
    if (den == 0) return 0.0;
    return std::clamp(0.5 * (ym - yp) / den, -0.5, 0.5);
}

Feature make_feature(const std::vector<double>& d, const SpectrumGrid& g, std::size_t k) {
    Feature f;
    const double dk = k > 0 && k + 1 < d.size() ? parabolic_offset(d[k - 1], d[k], d[k + 1]) : 0.0;
    f.frequency_hz = g.at(k) + dk * g.step_hz;
    f.amplitude = d[k];
    const bool neg = d[k] < 0;
    auto same = [&](std::size_t j) { return neg ? d[j] < 0 : d[j] > 0; };
    std::size_t lo = k;
    while (lo > 0 && same(lo - 1)) --lo;
    std::size_t hi = k;
    while (hi + 1 < d.size() && same(hi + 1)) ++hi;
    double area = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) area += d[j];
    f.area = std::abs(area) * g.step_hz;
    return f;
}

}  // namespace

Detection detect_pairs(const Spectrum& before, const Spectrum& after, double gamma_h_hz, const DetectOptions& options) {
    if (!(before.grid == after.grid) || before.values.size() != after.values.size()) {
        throw ValidationError("detect_pairs: spectra must share one grid");
    }
    if (!(gamma_h_hz > 0)) throw ValidationError("detect_pairs: Gamma_h must be > 0");
    const auto& g = before.grid;
    std::vector<double> d(before.values.size());
    double peak = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
        d[k] = after.values[k] - before.values[k];
        peak = std::max(peak, std::abs(d[k]));
    }
    Detection out;
    out.threshold = options.noise_floor > 0 ? 5.0 * options.noise_floor : peak / 100.0;
    if (peak == 0.0) return out;

    std::vector<Feature> holes;
    std::vector<Feature> antiholes;
    for (std::size_t k = 1; k + 1 < d.size(); ++k) {
        if (d[k] < -out.threshold && d[k] < d[k - 1] && d[k] <= d[k + 1]) holes.push_back(make_feature(d, g, k));
        if (d[k] > out.threshold && d[k] > d[k - 1] && d[k] >= d[k + 1]) antiholes.push_back(make_feature(d, g, k));
    }

    if (options.burn_hz) {
        const double window = options.exclude_window_hz > 0 ? options.exclude_window_hz : gamma_h_hz;
        auto own = [&](const Feature& f) { return std::abs(f.frequency_hz - *options.burn_hz) <= window; };
        for (const auto& h : holes) {
            if (own(h)) out.burned_holes.push_back(h);
        }
        holes.erase(std::remove_if(holes.begin(), holes.end(), own), holes.end());
    }

    std::vector<bool> used(holes.size(), false);
    for (const auto& a : antiholes) {  // ascending frequency
        std::size_t best = holes.size();
        for (std::size_t h = 0; h < holes.size(); ++h) {
            if (used[h]) continue;
            if (best == holes.size()) {
                best = h;
                continue;
            }
            const double dh = std::abs(holes[h].frequency_hz - a.frequency_hz);
            const double db = std::abs(holes[best].frequency_hz - a.frequency_hz);
            if (dh < db || (dh == db && holes[h].area > holes[best].area)) best = h;
        }
        if (best == holes.size()) {
            out.unmatched_antiholes.push_back(a);
            continue;
        }
        used[best] = true;
        HolePair p;
        p.hole = holes[best];
        p.antihole = a;
        p.splitting_hz = std::abs(a.frequency_hz - holes[best].frequency_hz);
        out.pairs.push_back(p);
    }
    for (std::size_t h = 0; h < holes.size(); ++h) {
        if (!used[h]) out.unmatched_holes.push_back(holes[h]);
    }
    std::stable_sort(out.pairs.begin(), out.pairs.end(),
                     [](const HolePair& x, const HolePair& y) { return x.splitting_hz > y.splitting_hz; });
    return out;
}

void attach_ground_truth(Detection& detection, const Register& reg, const Occupation& before, const Occupation& after,
                         const Probe& probe, const Transition& reference, double gamma_h_hz) {
    check_occupation(reg, before);
    check_occupation(reg, after);
    const auto lv_before = dominant_levels(before);
    const auto lv_after = dominant_levels(after);
    const int from = reg.scheme().local_index(probe.from);
    std::vector<double> c_before(static_cast<std::size_t>(reg.size()));
    std::vector<double> c_after(static_cast<std::size_t>(reg.size()));
    for (int i = 0; i < reg.size(); ++i) {
        c_before[static_cast<std::size_t>(i)] = line_center(reg, i, probe, reference, lv_before);
        c_after[static_cast<std::size_t>(i)] = line_center(reg, i, probe, reference, lv_after);
    }
    for (auto& p : detection.pairs) {
        int best = -1;
        double dist = 0.5 * gamma_h_hz;
        for (int i = 0; i < reg.size(); ++i) {
            if (before[static_cast<std::size_t>(i)][static_cast<std::size_t>(from)] <= 0) continue;
            const double d = std::abs(c_before[static_cast<std::size_t>(i)] - p.hole.frequency_hz);
            if (d <= dist) {
                dist = d;
                best = i;
            }
        }
        if (best < 0) continue;
        p.partner_id = reg.ions()[static_cast<std::size_t>(best)].id;
        p.true_shift_hz = c_after[static_cast<std::size_t>(best)] - c_before[static_cast<std::size_t>(best)];
    }
}

QubitRegistry select_ensemble(const std::vector<HolePair>& pairs, const Register& reg, const SelectOptions& options) {
    if (options.n < 1) throw ValidationError("select.n must be >= 1");
    if (options.k < 1) throw ValidationError("select.k must be >= 1");
    if (!(options.gamma_l_hz > 0)) throw ValidationError("select.gamma_l_hz must be > 0");
    if (!(options.margin >= 0)) throw ValidationError("select.margin must be >= 0");
    if (static_cast<int>(pairs.size()) < options.n) {
        throw ValidationError("select: " + std::to_string(pairs.size()) + " candidate pairs for N = " + std::to_string(options.n));
    }

    std::vector<const HolePair*> cand;
    for (const auto& p : pairs) {
        if (!p.partner_id) throw ValidationError("select: hole pairs carry no ion ids (ground truth not attached)");
        cand.push_back(&p);
    }
    std::stable_sort(cand.begin(), cand.end(), [](const HolePair* x, const HolePair* y) {
        if (x->splitting_hz != y->splitting_hz) return x->splitting_hz > y->splitting_hz;
        return *x->partner_id < *y->partner_id;
    });

    const auto& s = reg.scheme();
    const Transition work{Role::zero, Role::aux};
    const int l0 = s.local_index(Role::zero);
    const int la = s.local_index(Role::aux);
    auto shift = [&](int i, int j) {
        return std::min(std::abs(reg.coupling(i, j).transition_shift(l0, la, l0, la)),
                        std::abs(reg.coupling(j, i).transition_shift(l0, la, l0, la)));
    };

    QubitRegistry r;
    r.k = options.k;
    std::vector<int> chosen;
    for (const HolePair* c : cand) {
        if (static_cast<int>(chosen.size()) == options.n) break;
        const int i = reg.index_of(*c->partner_id);
        if (std::find(chosen.begin(), chosen.end(), i) != chosen.end()) continue;
        const double nu_i = reg.offset_from(i, work, work);
        bool ok = true;
        for (int j : chosen) {
            if (std::abs(nu_i - reg.offset_from(j, work, work)) <= options.margin * options.gamma_l_hz ||
                !blockade_ok(shift(i, j), options.gamma_l_hz, options.gamma_h_hz).ok) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        chosen.push_back(i);
        r.splittings_hz.push_back(c->splitting_hz);
    }

    const auto transitions = scheme_transitions(s);
    for (const auto& t : transitions) r.transition_names.push_back(transition_name(t));
    r.min_margin = chosen.size() > 1 ? INFINITY : 0.0;
    for (std::size_t a = 0; a < chosen.size(); ++a) {
        const int i = chosen[a];
        r.ion_ids.push_back(reg.ions()[static_cast<std::size_t>(i)].id);
        std::vector<double> row;
        for (const auto& t : transitions) row.push_back(reg.bare_hz(t) + reg.offset_from(i, t, t));
        r.addressing_hz.push_back(std::move(row));
        for (std::size_t b = a + 1; b < chosen.size(); ++b) {
            const double d = shift(i, chosen[b]);
            const double m = blockade_ok(d, options.gamma_l_hz, options.gamma_h_hz).margin;
            r.pairs.push_back({r.ion_ids.back(), reg.ions()[static_cast<std::size_t>(chosen[b])].id, d, m});
            r.min_margin = std::min(r.min_margin, m);
        }
    }
    r.n_prime = static_cast<int>(chosen.size());
    r.n = r.n_prime / r.k;
    if (static_cast<int>(chosen.size()) < options.n) {
        throw PartialRegistryError("select: only " + std::to_string(chosen.size()) + " of " + std::to_string(options.n) +
                                       " candidates are feasible",
                                   r);
    }
    return r;
}

Register planar_burn_ensemble(const IonDatabase& db, const LevelScheme& scheme, const CrystalConfig& crystal,
                              const InteractionModel& model, const BurnExperiment& exp, std::uint64_t seed) {
    if (exp.n_ions < 2) throw ValidationError("burn.ions must be >= 2");
    if (!(exp.gamma_l_hz > 0 && exp.gamma_h_hz > 0 && exp.band_hz > 0)) {
        throw ValidationError("burn: Gamma_L, Gamma_h and the band must be > 0");
    }
    const auto n_tr = static_cast<int>(scheme_transitions(scheme).size());
    auto sites = sample_sites(crystal, BoxExtent{exp.plane_edge, exp.plane_edge, 1}, seed, n_tr);
    const int mid = exp.plane_edge / 2;
    auto r2 = [](const IonSite& s, int x, int y) {
        const int dx = s.lattice[0] - x;
        const int dy = s.lattice[1] - y;
        return dx * dx + dy * dy;
    };
    std::stable_sort(sites.begin(), sites.end(),
                     [&](const IonSite& x, const IonSite& y) { return r2(x, mid, mid) < r2(y, mid, mid); });
    std::vector<IonSite> ions{sites.front()};
    const int cx = ions[0].lattice[0];
    const int cy = ions[0].lattice[1];
    std::vector<std::size_t> rest;
    for (std::size_t k = 1; k < sites.size(); ++k) {
        if (r2(sites[k], cx, cy) >= exp.min_distance_a * exp.min_distance_a) rest.push_back(k);
    }
    std::stable_sort(rest.begin(), rest.end(), [&](std::size_t x, std::size_t y) { return r2(sites[x], cx, cy) < r2(sites[y], cx, cy); });
    for (std::size_t k : rest) {
        if (static_cast<int>(ions.size()) == exp.n_ions) break;
        ions.push_back(sites[k]);
    }
    if (static_cast<int>(ions.size()) < exp.n_ions) {
        throw PhysicsError("burn: the lattice plane holds only " + std::to_string(ions.size()) + " usable ions");
    }

    const Transition bt = burn_transition(scheme);
    const auto [lo, up] = Register(scheme, {}).lower_upper(bt);
    std::vector<double> shift(ions.size(), 0.0);
    for (std::size_t k = 1; k < ions.size(); ++k) {
        shift[k] = physical_coupling(db, scheme, model, ions[k], ions[0]).transition_shift(lo, up, lo, up);
    }

    const double guard = std::max(10 * exp.gamma_h_hz, 5 * exp.gamma_l_hz);
    std::vector<std::size_t> order(ions.size() - 1);
    std::iota(order.begin(), order.end(), 1);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return std::abs(shift[x]) > std::abs(shift[y]); });
    std::vector<std::pair<double, double>> zones{{-guard, guard}};
    std::mt19937_64 rng(stream_seed(seed, 0x6275726eULL));
    std::uniform_real_distribution<double> u(-exp.band_hz / 2, exp.band_hz / 2);
    for (std::size_t k : order) {
        const double reach = 2 * std::abs(shift[k]);
        bool placed = false;
        for (int attempt = 0; attempt < 100000 && !placed; ++attempt) {
            const double nu = u(rng);
            const std::pair<double, double> z = shift[k] >= 0 ? std::pair{nu - guard, nu + reach + guard}
                                                              : std::pair{nu - reach - guard, nu + guard};
            placed = std::none_of(zones.begin(), zones.end(),
                                  [&](const auto& o) { return z.first < o.second && o.first < z.second; });
            if (placed) {
                zones.push_back(z);
                ions[k].offsets_hz.assign(static_cast<std::size_t>(n_tr), nu);
            }
        }
        if (!placed) throw PhysicsError("burn: offset band too narrow to separate every hole-antihole pair");
    }
    ions[0].offsets_hz.assign(static_cast<std::size_t>(n_tr), 0.0);
    return Register::physical(db, scheme, model, std::move(ions));
}

BurnRun run_burn_experiment(const Register& reg, const BurnExperiment& exp, Exec exec) {
    BurnRun run;
    run.reference = burn_transition(reg.scheme());
    run.probe = {Role::ground, Role::aux};
    if (reg.scheme().ground_is_aux()) run.probe = {Role::aux, Role::zero};
    run.before_occupation = ground_occupation(reg);
    const double carrier = reg.offset_from(0, run.reference, run.reference) +
                           reg.pair_shift(0, run.reference, dominant_levels(run.before_occupation));
    run.burn = burn(reg, run.before_occupation, carrier, exp.gamma_l_hz);

    double lo = INFINITY;
    double hi = -INFINITY;
    for (const auto* occ : {&run.before_occupation, &run.burn.occupation}) {
        const auto lv = dominant_levels(*occ);
        for (int i = 0; i < reg.size(); ++i) {
            const double c = line_center(reg, i, run.probe, run.reference, lv);
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
    }
    const auto grid = make_grid(lo - 12 * exp.gamma_h_hz, hi + 12 * exp.gamma_h_hz, exp.gamma_h_hz / 5);
    run.before = synth_spectrum(reg, run.before_occupation, {run.probe}, run.reference, exp.gamma_h_hz, grid, exec);
    run.after = synth_spectrum(reg, run.burn.occupation, {run.probe}, run.reference, exp.gamma_h_hz, grid, exec);
    DetectOptions opt;
    opt.burn_hz = carrier;
    opt.exclude_window_hz = exp.gamma_l_hz;
    run.detection = detect_pairs(run.before, run.after, exp.gamma_h_hz, opt);
    attach_ground_truth(run.detection, reg, run.before_occupation, run.burn.occupation, run.probe, run.reference,
                        exp.gamma_h_hz);
    return run;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> rank(v.size());
    for (std::size_t k = 0; k < idx.size();) {
        std::size_t e = k;
        while (e + 1 < idx.size() && v[idx[e + 1]] == v[idx[k]]) ++e;
        const double r = 0.5 * static_cast<double>(k + e) + 1.0;
        for (std::size_t m = k; m <= e; ++m) rank[idx[m]] = r;
        k = e + 1;
    }
    return rank;
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ValidationError("spearman: samples differ in length");
    if (x.size() < 2) throw ValidationError("spearman: at least two samples are required");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t k = 0; k < rx.size(); ++k) {
        sxy += (rx[k] - mx) * (ry[k] - my);
        sxx += (rx[k] - mx) * (rx[k] - mx);
        syy += (ry[k] - my) * (ry[k] - my);
    }
    if (sxx == 0 || syy == 0) throw ValidationError("spearman: a sample is constant");
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace reiqc
