#include <benchmark/benchmark.h>

#include "diffbound/extractor.hpp"
#include "diffbound/kolchin.hpp"
#include "diffbound/oracle.hpp"
#include "diffbound/poly_text.hpp"
#include "diffbound/rg.hpp"
#include "diffbound/text.hpp"
#include "diffbound/theory.hpp"

using namespace diffbound;

namespace {

void bench_qe_order(benchmark::State& state) {
    auto th = theory::Theory::by_name("lovs");
    text::ParseContext ctx{th.signature(), "Q", {}};
    auto f = text::parse_formula(
        "(exists (x Q) (exists (y Q) (and (< a x) (< x y) (< y b))))", ctx);
    for (auto _ : state) benchmark::DoNotOptimize(th.qe(f).formula);
}
BENCHMARK(bench_qe_order);

void bench_qe_field(benchmark::State& state) {
    auto th = theory::Theory::by_name("acf0");
    text::ParseContext ctx{th.signature(), "F", {}};
    auto f = text::parse_formula(
        "(exists (x F) (and (= (+ (* x x) (* a x) b) 0) (= (+ (* x x) c) 0)))",
        ctx);
    for (auto _ : state) benchmark::DoNotOptimize(th.qe(f).formula);
}
BENCHMARK(bench_qe_field);

void bench_extract_bound(benchmark::State& state) {
    auto th = theory::Theory::by_name("lovs");
    auto alg = oracle::builtin("first_nonzero(" +
                               std::to_string(state.range(0)) + ")");
    for (auto _ : state) {
        auto r = extractor::extract_bound(th, alg, "", {});
        benchmark::DoNotOptimize(r.bound);
    }
}
BENCHMARK(bench_extract_bound)->Arg(2)->Arg(4)->Arg(6);

void bench_decomposition(benchmark::State& state) {
    diffalg::DiffRing ring{1, 1, {"y"}};
    auto rk = diffalg::ranking_by_name("orderly", 1, 1);
    diffalg::RationalCoeffs field;
    auto p = poly_text::parse_poly("y[1]^2 - 4*y[0]", ring);
    for (auto _ : state) {
        auto r = diffalg::rosenfeld_groebner({p}, {}, rk, ring, field);
        benchmark::DoNotOptimize(r.components.size());
    }
}
BENCHMARK(bench_decomposition);

void bench_chain_len(benchmark::State& state) {
    kolchin::GrowthFn g = [](std::size_t) { return BigInt(3); };
    int dim = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto r = kolchin::chain_len(g, dim);
        benchmark::DoNotOptimize(r.length);
    }
}
BENCHMARK(bench_chain_len)->Arg(2)->Arg(3);

}  // namespace

BENCHMARK_MAIN();
