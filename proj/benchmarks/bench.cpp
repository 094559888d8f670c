#include <benchmark/benchmark.h>

#include <qdilate/anti.hpp>
#include <qdilate/classify.hpp>
#include <qdilate/generators.hpp>
#include <qdilate/pairdilate.hpp>
#include <qdilate/qrel.hpp>
#include <qdilate/tupledilate.hpp>

using namespace qdilate;

static void BM_Schaffer(benchmark::State& st) {
    Rng rng(1);
    const Mat T = random_contraction(rng, 2);
    const unsigned N = static_cast<unsigned>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(schaffer(T, TruncationConfig{N, schaffer_sites(N)}));
}
BENCHMARK(BM_Schaffer)->Arg(4)->Arg(8)->Arg(16);

static void BM_QPair(benchmark::State& st) {
    const Tuple T = epsilon_triple();
    const unsigned N = static_cast<unsigned>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(q_pair(T[1], T[2], -1.0, TruncationConfig{N, 0}));
}
BENCHMARK(BM_QPair)->Arg(3)->Arg(5);

static void BM_DilateAnti(benchmark::State& st) {
    const Tuple T = epsilon_triple();
    for (auto _ : st) benchmark::DoNotOptimize(dilate_anti(T, TruncationConfig{5, 0}));
}
BENCHMARK(BM_DilateAnti);

static void BM_Verify(benchmark::State& st) {
    const Tuple T = epsilon_triple();
    const DilationCertificate c = dilate_anti(T, TruncationConfig{5, 0});
    for (auto _ : st) benchmark::DoNotOptimize(verify_certificate(T, c, 5, Tol{}));
}
BENCHMARK(BM_Verify);

static void BM_Classify(benchmark::State& st) {
    const PlantedTuple p = plant_type3(7, 4);
    const QFamily q = detect_family(p.T, Tol{});
    for (auto _ : st) benchmark::DoNotOptimize(classify(p.T, q, Tol{}));
}
BENCHMARK(BM_Classify);
BENCHMARK_MAIN();
