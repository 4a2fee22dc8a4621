#include "causal/identify.hpp"
#include "causal/scm.hpp"
#include "causal/solver.hpp"

#include <benchmark/benchmark.h>

using namespace causal;

namespace {

const char* kFrontDoor = "vars X, Z, Y\nX -> Z\nZ -> Y\nconf {X, Y}";
const char* kCovariates =
    "vars X, Y, W1, W2, W3, W4, W5, W6\n"
    "W1 -> W3\nW2 -> W5\nW3 -> X\nW4 -> X\nW4 -> Y\nW5 -> Y\nX -> W6\nW6 -> Y\n"
    "conf {W3, W4}\nconf {W4, W5}\nconf {W6, Y}";

Domains binary(const CausalDiagram& d) {
    Domains out;
    for (const auto& v : d.vertices()) out[v] = 2;
    return out;
}

void BM_IdFrontDoor(benchmark::State& state) {
    auto d = parse_diagram(kFrontDoor);
    for (auto _ : state) benchmark::DoNotOptimize(id(d, {"X"}, {"Y"}));
}
BENCHMARK(BM_IdFrontDoor);

void BM_IdAllPairsFourVertices(benchmark::State& state) {
    EnumerationOptions o;
    o.include_semi_markovian = true;
    auto all = collect_diagrams({"A", "B", "C", "D"}, o);
    std::size_t k = 0;
    for (auto _ : state) {
        const auto& d = all[k++ % all.size()];
        for (const auto& x : d.vertices()) {
            for (const auto& y : d.vertices()) {
                if (x != y) benchmark::DoNotOptimize(id(d, {x}, {y}));
            }
        }
    }
}
BENCHMARK(BM_IdAllPairsFourVertices);

void BM_EnumerateMarkovian(benchmark::State& state) {
    std::vector<std::string> vars;
    for (int i = 0; i < state.range(0); ++i) vars.push_back("V" + std::to_string(i));
    for (auto _ : state) {
        std::size_t count = 0;
        enumerate_diagrams(vars, {}, [&](const CausalDiagram&) {
            ++count;
            return true;
        });
        benchmark::DoNotOptimize(count);
    }
}
BENCHMARK(BM_EnumerateMarkovian)->DenseRange(3, 5);

void BM_DSeparation(benchmark::State& state) {
    auto d = parse_diagram(kCovariates);
    Mask x = bit(d.index_of("X")), y = bit(d.index_of("Y"));
    Mask z = bit(d.index_of("W3")) | bit(d.index_of("W4"));
    for (auto _ : state) benchmark::DoNotOptimize(d_separated(d, x, y, z));
}
BENCHMARK(BM_DSeparation);

void BM_ObservationalJoint(benchmark::State& state) {
    auto d = parse_diagram(kCovariates);
    auto s = random_scm(d, binary(d), 1);
    for (auto _ : state) benchmark::DoNotOptimize(observational_joint(s));
}
BENCHMARK(BM_ObservationalJoint);

void BM_EvaluateFrontDoor(benchmark::State& state) {
    auto d = parse_diagram(kFrontDoor);
    auto s = random_scm(d, binary(d), 1);
    auto bank = make_bank(s, {{"X", "Y", "Z"}, {}});
    auto f = id(d, {"X"}, {"Y"}).formula;
    for (auto _ : state) benchmark::DoNotOptimize(evaluate(f, bank));
}
BENCHMARK(BM_EvaluateFrontDoor);

void BM_ResearchDesign(benchmark::State& state) {
    auto d = parse_diagram(kCovariates);
    for (auto _ : state) benchmark::DoNotOptimize(research_design(d, Query{{"Y"}, {}, {"X"}}, false));
}
BENCHMARK(BM_ResearchDesign)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
