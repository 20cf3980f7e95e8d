// Serial reference vs OpenMP kernels. Arg 0 = serial, 1 = parallel.
#include <benchmark/benchmark.h>

#include "reiqc/hole_burning.hpp"
#include "reiqc/interactions.hpp"
#include "reiqc/pulse.hpp"

using namespace reiqc;

namespace {

const IonDatabase& db() { return IonDatabase::embedded(); }
Exec mode(const benchmark::State& st) { return st.range(0) ? Exec::parallel : Exec::serial; }

std::vector<IonSite> line_of_qubits(const LevelScheme& s, int n) {
    const auto nt = scheme_transitions(s).size();
    std::vector<IonSite> out;
    for (int q = 0; q < n; ++q)
        out.push_back({q, {3 * q, 0, 0}, {3 * q * 4e-10, 0, 0}, std::vector<double>(nt, 1e11 * q)});
    return out;
}

void BM_ApplyPulse(benchmark::State& st) {
    const auto s = db().load_scheme("Tm3+", 1);
    const int n = static_cast<int>(st.range(1));
    const auto reg = Register::physical(db(), s, InteractionModel{}, line_of_qubits(s, n));
    EnsembleState state(n, reg.dim());
    // Spread amplitude over the whole space so every component is touched.
    for (std::size_t i = 0; i < state.size(); ++i) state.amplitudes()[i] = 1.0 / std::sqrt(double(state.size()));
    PulseSpec p;
    p.theta = 0.3;
    for (auto _ : st) {
        apply_pulse(state, reg, p, mode(st));
        benchmark::ClobberMemory();
    }
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(state.size()));
}
BENCHMARK(BM_ApplyPulse)->ArgsProduct({{0, 1}, {6, 8}})->Unit(benchmark::kMillisecond);

void BM_PairShiftTable(benchmark::State& st) {
    const auto s = db().load_scheme("Tm3+", 1);
    CrystalConfig crystal;
    const auto sites = sample_sites(crystal, static_cast<int>(st.range(1)), 7,
                                    static_cast<int>(scheme_transitions(s).size()));
    const auto model = InteractionModel::from_crystal(crystal);
    for (auto _ : st) benchmark::DoNotOptimize(pair_shift_table(db(), s, model, sites, 1e9, 1e6, mode(st)));
    st.counters["ions"] = static_cast<double>(sites.size());
}
BENCHMARK(BM_PairShiftTable)->ArgsProduct({{0, 1}, {6, 10}})->Unit(benchmark::kMillisecond);

void BM_SynthSpectrum(benchmark::State& st) {
    const auto s = db().load_scheme("Tm3+", 1);
    BurnExperiment exp;
    const auto reg = planar_burn_ensemble(db(), s, CrystalConfig{}, InteractionModel{}, exp, 11);
    const auto occ = ground_occupation(reg);
    const auto grid = make_grid(-0.6 * exp.band_hz, 0.6 * exp.band_hz, exp.gamma_h_hz / 5);
    for (auto _ : st)
        benchmark::DoNotOptimize(synth_spectrum(reg, occ, {Probe{}}, {Role::ground, Role::aux}, exp.gamma_h_hz, grid, mode(st)));
    st.counters["grid"] = static_cast<double>(grid.size);
}
BENCHMARK(BM_SynthSpectrum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
