#include <benchmark/benchmark.h>

#include "orbatlas/cat_bk.hpp"
#include "orbatlas/completion.hpp"
#include "orbatlas/fixtures.hpp"
#include "orbatlas/invariants.hpp"
#include "orbatlas/resolve.hpp"

using namespace orb;

static void BM_ValidateFootball(benchmark::State& state) {
    auto K = fixtures::football();
    for (auto _ : state) benchmark::DoNotOptimize(validate_atlas(K).ok());
}
BENCHMARK(BM_ValidateFootball);

static void BM_BuildCompletion(benchmark::State& state) {
    auto K = fixtures::football();
    for (auto _ : state) {
        auto gk = GkGroupoid::build(K);
        benchmark::DoNotOptimize(gk.model().num_mors());
    }
}
BENCHMARK(BM_BuildCompletion);

static void BM_GroupoidLawSuite(benchmark::State& state) {
    auto K = fixtures::football();
    auto gk = GkGroupoid::build(K);
    for (auto _ : state) benchmark::DoNotOptimize(gk.verify().ok());
}
BENCHMARK(BM_GroupoidLawSuite);

static void BM_ComposeLift(benchmark::State& state) {
    auto K = fixtures::football();
    auto gk = GkGroupoid::build(K);
    auto out = gk.model().out_adj();
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < gk.model().num_mors(); ++a)
        for (int b : out[gk.model().mors[a].dst]) pairs.push_back({a, b});
    size_t i = 0;
    for (auto _ : state) {
        auto [a, b] = pairs[i++ % pairs.size()];
        benchmark::DoNotOptimize(gk.compose_detail(a, b).mor);
    }
}
BENCHMARK(BM_ComposeLift);

static void BM_CoverReduction(benchmark::State& state) {
    auto K = fixtures::football();
    for (auto _ : state) {
        auto red = cover_reduction(K);
        benchmark::DoNotOptimize(red.Q.size());
    }
}
BENCHMARK(BM_CoverReduction);

static void BM_EulerPipeline(benchmark::State& state) {
    auto K = fixtures::football();
    int n = *K.base.index_of("N");
    int s = *K.base.index_of("S");
    for (auto _ : state) {
        auto gk = GkGroupoid::build(K);
        auto red = cover_reduction(K);
        auto vk = ResolutionGroupoid::build(gk, red);
        auto vh = vk.hausdorff_close();
        auto [w, wrep] = compute_weighting(vh, vk);
        SectionData nu;
        nu.values.resize(K.num_charts());
        for (int c = 0; c < K.num_charts(); ++c) {
            nu.values[c].assign(red.V[c].size(), 1);
            for (size_t l = 0; l < red.V[c].size(); ++l) {
                int y = K.chart(c).footprint_map(red.V[c][l]);
                if (y == n || y == s) {
                    nu.values[c][l] = 0;
                    nu.signs[{c, static_cast<int>(l)}] = 1;
                }
            }
        }
        auto res = euler_number(vh, w, nu);
        benchmark::DoNotOptimize(res.total);
    }
}
BENCHMARK(BM_EulerPipeline);

static void BM_GerbeClassification(benchmark::State& state) {
    auto K = fixtures::gerbe(false, 5);
    for (auto _ : state) benchmark::DoNotOptimize(gerbe_class(K).class_bit);
}
BENCHMARK(BM_GerbeClassification);

BENCHMARK_MAIN();
