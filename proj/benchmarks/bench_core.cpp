// Microbenchmarks for the hot paths: RPF solves, Legendre inversions, and the
// branch-and-bound window counter whose node throughput bounds every scan.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "thermocount/convex.hpp"
#include "thermocount/counting.hpp"
#include "thermocount/manhattan.hpp"

using namespace tc;

namespace {

PotentialPair bench_pair() {
    const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
    Shift s = full_shift(3);
    std::vector<double> fv = {1.98, 1.95 + r2 / 5, 2.56, 0.66, 0.01 + r2 / 2,
                              0.64, 1.40, 1.46,          0.23 + 0.7 * r2};
    std::vector<double> gv = {0.72 + 0.75 * r3, 1.77, 2.30, 0.82, -0.49 + 0.75 * r3,
                              1.03, 0.57,       0.10 + r3 / 2, 0.59};
    return make_pair_potentials(make_potential(s, 2, fv), make_potential(s, 2, gv));
}

void BM_RpfSolve(benchmark::State& state) {
    Shift s = full_shift(3);
    PotentialPair pair = bench_pair();
    Potential u = combine(pair.f, -0.5, pair.g, -0.3);
    for (auto _ : state) {
        RpfData rpf = rpf_data(s, u, false);
        benchmark::DoNotOptimize(rpf.pressure);
    }
}
BENCHMARK(BM_RpfSolve)->Unit(benchmark::kMicrosecond);

void BM_BowenRoot(benchmark::State& state) {
    Shift s = full_shift(3);
    PotentialPair pair = bench_pair();
    for (auto _ : state) benchmark::DoNotOptimize(bowen_root(s, pair.f));
}
BENCHMARK(BM_BowenRoot)->Unit(benchmark::kMicrosecond);

void BM_Legendre(benchmark::State& state) {
    PressureSurface S = make_surface(bench_pair());
    Vec2 x = grad_pressure(S, Vec2(-0.25, -0.15));
    for (auto _ : state) {
        S.cache.clear(); // measure the full solve, not the memo hit
        LegendrePoint lp = legendre(S, x);
        benchmark::DoNotOptimize(lp.pstar);
    }
}
BENCHMARK(BM_Legendre)->Unit(benchmark::kMillisecond);

void BM_CurvePoint(benchmark::State& state) {
    PressureSurface S = make_surface(bench_pair());
    for (auto _ : state) {
        S.cache.clear();
        CurvePoint cp = curve_point(S, 0.4);
        benchmark::DoNotOptimize(cp.q);
    }
}
BENCHMARK(BM_CurvePoint)->Unit(benchmark::kMillisecond);

// single fixed-period window count; node throughput is the figure of merit
void BM_WindowCount(benchmark::State& state) {
    const int n = int(state.range(0));
    Shift s = full_shift(3);
    PotentialPair pair = bench_pair();
    OrbitCounter oc = make_counter(s, pair);
    WindowSpec spec{0.8431, 0.5, n * 1.25};
    Window win = window_of(spec);
    long long nodes = 0;
    for (auto _ : state) {
        BudgetState bud{5'000'000'000LL, 0, false};
        WindowCount wc = count_fix_window(oc, win, n, bud);
        nodes += wc.nodes;
        benchmark::DoNotOptimize(wc.count);
    }
    state.counters["nodes/s"] =
        benchmark::Counter(double(nodes), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_WindowCount)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

// one full t-slice of a scan: all contributing periods plus a tracked cylinder
void BM_ScanSlice(benchmark::State& state) {
    Shift s = full_shift(3);
    PotentialPair pair = bench_pair();
    OrbitCounter oc = make_counter(s, pair);
    WindowSpec spec{0.8431, 0.5, 14.0};
    Cylinder p{{0}};
    SampleWord z = pick_sample_word(s, p);
    for (auto _ : state) {
        BudgetState bud{5'000'000'000LL, 0, false};
        MCount mc = count_M(oc, spec, bud);
        double agg = 0;
        for (const NCell& cell : mc.per_n) {
            WindowCount wc =
                count_preimage_window(oc, window_of(spec), p, z, cell.n, bud);
            agg += double(wc.count) / cell.n;
        }
        benchmark::DoNotOptimize(mc.M);
        benchmark::DoNotOptimize(agg);
    }
}
BENCHMARK(BM_ScanSlice)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
