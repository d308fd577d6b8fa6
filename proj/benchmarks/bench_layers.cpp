#include <benchmark/benchmark.h>

#include "gemcap/layers.hpp"

using namespace gemcap;

static void Conv2dForward(benchmark::State& state) {
    Rng rng(1);
    Conv2d conv(3, 16, rng);
    Tensor x = Tensor::normal({8, 3, 64, 64}, 0.0, 1.0, rng);
    for (auto _ : state) {
        Tensor y = conv.forward(x);
        benchmark::DoNotOptimize(y.data());
    }
}
BENCHMARK(Conv2dForward);

static void Conv2dForwardBackward(benchmark::State& state) {
    Rng rng(1);
    Conv2d conv(3, 16, rng);
    Tensor x = Tensor::normal({8, 3, 64, 64}, 0.0, 1.0, rng);
    Tensor dy = Tensor::normal({8, 16, 64, 64}, 0.0, 1.0, rng);
    for (auto _ : state) {
        Conv2d::Cache cache;
        Tensor y = conv.forward(x, &cache);
        Tensor dx = conv.backward(dy, cache);
        conv.params().zero_grads();
        benchmark::DoNotOptimize(dx.data());
    }
}
BENCHMARK(Conv2dForwardBackward);

static void GruStep(benchmark::State& state) {
    const int hidden = static_cast<int>(state.range(0));
    Rng rng(2);
    GruCell cell(64, hidden, rng);
    Tensor x = Tensor::normal({16, 64}, 0.0, 1.0, rng);
    Tensor h = Tensor::normal({16, hidden}, 0.0, 1.0, rng);
    for (auto _ : state) {
        Tensor h2 = cell.forward(x, h);
        benchmark::DoNotOptimize(h2.data());
    }
}
BENCHMARK(GruStep)->Arg(128)->Arg(256)->Arg(512);

static void LstmStep(benchmark::State& state) {
    const int hidden = static_cast<int>(state.range(0));
    Rng rng(3);
    LstmCell cell(64, hidden, rng);
    Tensor x = Tensor::normal({16, 64}, 0.0, 1.0, rng);
    LstmCell::State s{Tensor::normal({16, hidden}, 0.0, 1.0, rng),
                      Tensor::normal({16, hidden}, 0.0, 1.0, rng)};
    for (auto _ : state) {
        auto out = cell.forward(x, s);
        benchmark::DoNotOptimize(out.h.data());
    }
}
BENCHMARK(LstmStep)->Arg(128)->Arg(256)->Arg(512);

static void MaxPoolForward(benchmark::State& state) {
    Rng rng(4);
    Tensor x = Tensor::normal({8, 16, 64, 64}, 0.0, 1.0, rng);
    for (auto _ : state) {
        Tensor y = MaxPool2::forward(x);
        benchmark::DoNotOptimize(y.data());
    }
}
BENCHMARK(MaxPoolForward);

BENCHMARK_MAIN();
