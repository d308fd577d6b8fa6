#include <benchmark/benchmark.h>

#include "gemcap/tensor.hpp"

using namespace gemcap;

static void MatmulSquare(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng(1);
    Tensor a = Tensor::normal({n, n}, 0.0, 1.0, rng);
    Tensor b = Tensor::normal({n, n}, 0.0, 1.0, rng);
    for (auto _ : state) {
        Tensor c = matmul(a, b);
        benchmark::DoNotOptimize(c.data());
    }
    state.SetItemsProcessed(state.iterations() * 2ll * n * n * n);
}
BENCHMARK(MatmulSquare)->Arg(64)->Arg(128)->Arg(256)->Arg(512);

static void MatmulIm2colShape(benchmark::State& state) {
    // the shape conv2d feeds per 8-image batch of 64x64 RGB
    Rng rng(2);
    Tensor cols = Tensor::normal({8 * 64 * 64, 27}, 0.0, 1.0, rng);
    Tensor w = Tensor::normal({27, 16}, 0.0, 1.0, rng);
    for (auto _ : state) {
        Tensor y = matmul(cols, w);
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations() * 2ll * 8 * 64 * 64 * 27 * 16);
}
BENCHMARK(MatmulIm2colShape);

static void ElementwiseAdd(benchmark::State& state) {
    Rng rng(3);
    Tensor a = Tensor::normal({1 << 20}, 0.0, 1.0, rng);
    Tensor b = Tensor::normal({1 << 20}, 0.0, 1.0, rng);
    for (auto _ : state) {
        Tensor c = ew(EwOp::Add, a, b);
        benchmark::DoNotOptimize(c.data());
    }
    state.SetItemsProcessed(state.iterations() * (1ll << 20));
}
BENCHMARK(ElementwiseAdd);

BENCHMARK_MAIN();
