// Parallel vs serial minor enumeration on rational and Laurent matrices.
#include <benchmark/benchmark.h>

#include <random>

#include "cbr/io.hpp"
#include "cbr/matrix.hpp"

using namespace cbr;

namespace {

ExactMatrix random_rational(int k, int n) {
    std::mt19937 rng(static_cast<unsigned>(k * 100 + n));
    std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
    ExactMatrix m(k, n, 0);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < n; ++c) m(r, c) = QuadExtScalar::constant(0, Rational(num(rng), den(rng)));
    return m;
}

template <MinorTable (*F)(const ExactMatrix&, Orientation)>
void rational(benchmark::State& state) {
    ExactMatrix m = random_rational(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(F(m, Orientation::Columns));
}

template <MinorTable (*F)(const ExactMatrix&, Orientation)>
void laurent(benchmark::State& state) {
    ExactMatrix m = load_matrix(std::string(CBR_DATA_DIR) + "/fixtures/ex12_left.json");
    for (auto _ : state) benchmark::DoNotOptimize(F(m, Orientation::Columns));
}

}  // namespace

BENCHMARK(rational<all_minors>)->Args({3, 10})->Args({4, 12})->Unit(benchmark::kMillisecond);
BENCHMARK(rational<all_minors_serial>)->Args({3, 10})->Args({4, 12})->Unit(benchmark::kMillisecond);
BENCHMARK(laurent<all_minors>)->Unit(benchmark::kMillisecond);
BENCHMARK(laurent<all_minors_serial>)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
