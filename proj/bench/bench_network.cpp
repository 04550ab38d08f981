#include <benchmark/benchmark.h>

#include <random>

#include "wp/lattice.hpp"
#include "wp/network.hpp"

using namespace wp;

namespace {

// Two vendors, a buy/sell exclusion per period and a three-way constraint
// linking consecutive periods (thickness 3).
Instance desk(int T) {
    const std::int64_t d = 3;
    std::mt19937_64 rng(777);
    auto price = [&](int lo, int hi) { return Rational(std::uniform_int_distribution<int>(2 * lo, 2 * hi)(rng), 2); };
    Instance inst;
    inst.horizon = T;
    inst.vendors = 2;
    inst.lattice = Lattice{{Quantity(d)}, 2};
    inst.stock.assign(T, {Quantity(0), Quantity(300)});
    inst.market.resize(2);
    for (int v = 0; v < 2; ++v)
        for (int t = 1; t <= T; ++t) {
            VendorPeriod p;
            p.ux = p.uy = Quantity(2 * d);
            p.lx = Quantity(v == 0 ? 0 : d);
            p.cx = price(1, 4);
            p.ry = price(1, 5);
            p.fx = v == 1 ? Rational(1) : Rational(0);
            inst.market[v].push_back(p);
        }
    inst.stock_payoff.assign(T, {{Rational(-1, 4), Rational(0)}, {Rational(0), Rational(-1)}});
    int id = 0;
    for (int t = 1; t <= T; ++t) {
        inst.constraints.push_back({id++,
                                    {{{FlowKind::purchase, 0, t}, {AnchorKind::zero, {}}},
                                     {{FlowKind::sale, 0, t}, {AnchorKind::zero, {}}}}});
        if (t < T)
            inst.constraints.push_back({id++,
                                        {{{FlowKind::sale, 1, t}, {AnchorKind::zero, {}}},
                                         {{FlowKind::sale, 1, t + 1}, {AnchorKind::zero, {}}},
                                         {{FlowKind::purchase, 1, t + 1}, {AnchorKind::upper, {}}}}});
    }
    return inst;
}

void BM_SolveParallel(benchmark::State& state) {
    const Instance inst = desk(static_cast<int>(state.range(0)));
    SolveOptions opts;
    opts.network.threads = static_cast<int>(state.range(1));
    std::size_t arcs = 0;
    for (auto _ : state) {
        const SolveResult r = solve(inst, opts);
        arcs = r.stats.arcs;
        benchmark::DoNotOptimize(r.solution);
    }
    state.counters["arcs"] = static_cast<double>(arcs);
}

void BM_SolveSerialReference(benchmark::State& state) {
    const Instance inst = desk(static_cast<int>(state.range(0)));
    const StockCandidateSet stocks = lattice_stock_set(inst);
    for (auto _ : state) benchmark::DoNotOptimize(solve_reference(inst, stocks).solution);
}

void BM_BuildNetwork(benchmark::State& state) {
    const Instance inst = desk(static_cast<int>(state.range(0)));
    const StockCandidateSet stocks = lattice_stock_set(inst);
    NetworkOptions opts;
    opts.threads = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(build_network(inst, stocks, opts).arc_count());
}

}  // namespace

// Second argument: thread count (0 = OpenMP default).
BENCHMARK(BM_SolveParallel)->ArgsProduct({{6, 10, 16}, {1, 0}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveSerialReference)->Arg(6)->Arg(10)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildNetwork)->ArgsProduct({{10, 16}, {1, 0}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
