#include <benchmark/benchmark.h>

#include <random>

#include "progind/experiments.hpp"
#include "progind/parallel.hpp"

using namespace progind;

namespace {

std::vector<Proposal> batch(const TraceSchema& s, int n) {
    const Registry reg = Registry::standard(s);
    const char* shapes[] = {"(accel (scale ? x))", "(accel (add (scale ? x) (scale ? v)))", "(accel (sub x (scale ? v)))",
                            "(accel (add v ?))"};
    std::mt19937_64 rng(5);
    std::normal_distribution<double> init(0.0, 0.3);
    std::vector<Proposal> out;
    for (int i = 0; i < n; ++i) {
        auto p = parse_program(shapes[i % 4], reg, s);
        for (auto& [id, v] : p.params) v[0] = init(rng);
        out.push_back({p.program, p.params});
    }
    return out;
}

void BM_OptimizeSerial(benchmark::State& st) {
    const auto tr = simulate_second_order(SecondOrderConfig::oscillator());
    const VariableIndex index(tr);
    const auto props = batch(tr.schema(), static_cast<int>(st.range(0)));
    OptimizerConfig cfg;
    cfg.max_iters = 200;
    for (auto _ : st) benchmark::DoNotOptimize(optimize_batch_serial(props, tr, index, ErrorSpec::standard(), cfg));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_OptimizeParallel(benchmark::State& st) {
    const auto tr = simulate_second_order(SecondOrderConfig::oscillator());
    const VariableIndex index(tr);
    const auto props = batch(tr.schema(), static_cast<int>(st.range(0)));
    OptimizerConfig cfg;
    cfg.max_iters = 200;
    const int workers = static_cast<int>(st.range(1));
    for (auto _ : st)
        benchmark::DoNotOptimize(optimize_batch_parallel(props, tr, index, ErrorSpec::standard(), cfg, workers));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

// Nearest-variable queries on a wide trace: kd-tree against a linear scan.
ObservationTrace wide_trace(int n_vars) {
    TraceSchema s;
    for (int i = 0; i < n_vars; ++i) s.variables["v" + std::to_string(i)] = 2;
    s.actions = {{"a", 1}};
    std::mt19937_64 rng(9);
    std::normal_distribution<double> n(0.0, 1.0);
    TraceStep step{1, {}, "a", {0.0}};
    for (const auto& [name, d] : s.variables) step.vars[name] = {n(rng), n(rng)};
    return ObservationTrace(s, {step});
}

void BM_NearestKdTree(benchmark::State& st) {
    const auto tr = wide_trace(static_cast<int>(st.range(0)));
    const VariableIndex index(tr);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0.0, 1.0);
    for (auto _ : st) {
        const Vec q{n(rng), n(rng)};
        benchmark::DoNotOptimize(index.nearest(1, 2, q));
    }
}

void BM_NearestLinear(benchmark::State& st) {
    const auto tr = wide_trace(static_cast<int>(st.range(0)));
    const int n_vars = static_cast<int>(tr.variable_names().size());
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0.0, 1.0);
    for (auto _ : st) {
        const double q0 = n(rng), q1 = n(rng);
        int best = -1;
        double best_d2 = 0.0;
        for (int id = 0; id < n_vars; ++id) {
            const auto p = tr.value(id, 1);
            const double d2 = (p[0] - q0) * (p[0] - q0) + (p[1] - q1) * (p[1] - q1);
            if (best < 0 || d2 < best_d2) {
                best = id;
                best_d2 = d2;
            }
        }
        benchmark::DoNotOptimize(best);
    }
}

} // namespace

BENCHMARK(BM_OptimizeSerial)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OptimizeParallel)->Args({32, 2})->Args({32, 4})->Args({32, 8})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_NearestKdTree)->Arg(8)->Arg(64)->Arg(1024);
BENCHMARK(BM_NearestLinear)->Arg(8)->Arg(64)->Arg(1024);

BENCHMARK_MAIN();
