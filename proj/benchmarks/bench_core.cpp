#include <benchmark/benchmark.h>

#include <cmath>

#include "suprad/analysis.hpp"
#include "suprad/profiles.hpp"
#include "suprad/recurrence.hpp"

using namespace suprad;

namespace {

void bm_table_build(benchmark::State& state) {
    const double q = 1.5;
    const int k = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(build_table(q, k));
}
BENCHMARK(bm_table_build)->Arg(2)->Arg(12)->Arg(50);

void bm_profile_eval(benchmark::State& state) {
    const bubble_profile pr = bubble_profile::tower(1.4641);
    double r = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pr.evaluate(r));
        r = r < 100.0 ? r * 1.0001 : 0.01;
    }
}
BENCHMARK(bm_profile_eval);

void bm_rhs_eval(benchmark::State& state) {
    const growth_model model = growth_model::power_exp(3.0);
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(model.g_extended(t));
        benchmark::DoNotOptimize(model.g_prime_extended(t));
        t = t < 8.0 ? t + 1e-4 : 0.0;
    }
}
BENCHMARK(bm_rhs_eval);

void bm_shot(benchmark::State& state) {
    const growth_model model = growth_model::pure_exp();
    const weight w = weight::constant();
    const double mu = 0.01 * static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(shoot_unit_lambda(model, w, mu));
}
BENCHMARK(bm_shot)->Arg(100)->Arg(500);

void bm_detect(benchmark::State& state) {
    const growth_model model = growth_model::power_exp(3.0);
    const weight w = weight::constant();
    const recurrence_table table = build_table(1.5, 12);
    const radial_solution sol = shoot_unit_lambda(model, w, std::cbrt(300.0));
    const scaling_diagnostics diag = compute_diagnostics(sol, model, w);
    for (auto _ : state) benchmark::DoNotOptimize(detect_bubbles(diag, sol, model, w, &table));
}
BENCHMARK(bm_detect);

void bm_total_energy(benchmark::State& state) {
    const growth_model model = growth_model::pure_exp();
    const weight w = weight::constant();
    const radial_solution sol = shoot_unit_lambda(model, w, 3.0);
    for (auto _ : state) benchmark::DoNotOptimize(total_energy(sol, model, w));
}
BENCHMARK(bm_total_energy);

} // namespace

BENCHMARK_MAIN();
