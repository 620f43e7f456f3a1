// Serial reference vs OpenMP path for each parallel kernel.
// Arg 0 of every benchmark selects the path: 0 = serial, 1 = parallel.
#include <random>

#include <benchmark/benchmark.h>

#include "linkpred/baseline_svd.hpp"
#include "linkpred/evaluation.hpp"
#include "linkpred/katz.hpp"
#include "linkpred/kernels.hpp"
#include "linkpred/tvc_generator.hpp"

using namespace linkpred;

namespace {

Exec exec_of(const benchmark::State& state)
{
    return state.range(0) ? Exec::parallel : Exec::serial;
}

Eigen::MatrixXd random_graph(Eigen::Index n, double density, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0, 1);
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (u(rng) < density)
                x(i, j) = x(j, i) = 1 + 2 * u(rng);
    return x;
}

// One shared 100-node, 4 h trace for the pipeline-level benchmarks.
const TvcTrace& trace()
{
    static const TvcTrace t = [] {
        TvcParams p;
        p.duration = 14700;
        return generate(p);
    }();
    return t;
}

void BM_Matmul(benchmark::State& state)
{
    const auto n = static_cast<Eigen::Index>(state.range(1));
    Eigen::MatrixXd a = random_graph(n, 0.1, 1), b = random_graph(n, 0.1, 2), out;
    for (auto _ : state) {
        kernels::matmul(a, b, out, exec_of(state));
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_Matmul)->ArgsProduct({{0, 1}, {100, 400}})->Unit(benchmark::kMillisecond);

void BM_PowerSeries(benchmark::State& state)
{
    Eigen::MatrixXd x = random_graph(state.range(1), 0.05, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::power_series(x, 0.01, 10, exec_of(state)).data());
}
BENCHMARK(BM_PowerSeries)->ArgsProduct({{0, 1}, {100, 400}})->Unit(benchmark::kMillisecond);

void BM_PowerSeriesSparse(benchmark::State& state)
{
    SparseMatrix x = random_graph(state.range(1), 0.01, 4).sparseView();
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::power_series_sparse(x, 0.01, 10, exec_of(state)).data());
}
BENCHMARK(BM_PowerSeriesSparse)->ArgsProduct({{0, 1}, {400, 1000}})->Unit(benchmark::kMillisecond);

void BM_Distributed(benchmark::State& state)
{
    const auto& t = trace();
    auto z = build_tensor(t.contacts, {0, 300, 48}, t.nodes.size());
    auto x = collapse(z, {0.2});
    for (auto _ : state)
        benchmark::DoNotOptimize(katz_distributed(x, {0.001}, 2, exec_of(state)).s.data());
}
BENCHMARK(BM_Distributed)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state)
{
    const auto& t = trace();
    WindowConfig w{0, 300, 48};
    auto z = build_tensor(t.contacts, w, t.nodes.size());
    auto truth = ground_truth_slice(t.contacts, w, t.nodes.size());
    const auto spec = ScoringSpec::parse("centralized", 0.001, 2, 10);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            sweep(z, truth, {0, 0.2, 0.5, 0.9}, {1e-4, 1e-3}, spec, Regime::all_links, exec_of(state)).data());
}
BENCHMARK(BM_Sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Baseline(benchmark::State& state)
{
    const auto& t = trace();
    auto assoc = build_association(t.visits, t.nodes.size(), t.locations.size(), 300, 14400);
    std::vector<BehaviorProfile> profiles;
    for (const auto& a : assoc)
        profiles.push_back(profile(a));
    for (auto _ : state)
        benchmark::DoNotOptimize(baseline_scores(profiles, exec_of(state)).s.data());
}
BENCHMARK(BM_Baseline)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
