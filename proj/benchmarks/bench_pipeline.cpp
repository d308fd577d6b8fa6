#include <benchmark/benchmark.h>

#include "gemcap/augment.hpp"
#include "gemcap/grammar.hpp"
#include "gemcap/render.hpp"

using namespace gemcap;

static void RenderSample(benchmark::State& state) {
    RenderSpec spec;
    spec.jewelry_class = JewelryClass::Bracelet;
    spec.material = "yellow gold";
    spec.stone = "topaz";
    spec.stone_count = 3;
    spec.geometry_jitter_seed = 9;
    for (auto _ : state) {
        Tensor img = render_sample(spec, 64, 64);
        benchmark::DoNotOptimize(img.data());
    }
}
BENCHMARK(RenderSample);

static void ApplyAugment(benchmark::State& state) {
    RenderSpec spec;
    spec.jewelry_class = JewelryClass::Ring;
    spec.material = "silver";
    spec.stone = "ruby";
    spec.stone_count = 1;
    spec.geometry_jitter_seed = 3;
    Tensor img = render_sample(spec, 64, 64);
    Rng rng(17);
    for (auto _ : state) {
        AugmentOp op = sample_augment_op(rng);
        Tensor out = apply_augment(img, op, rng);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(ApplyAugment);

static void GenerateAndValidate(benchmark::State& state) {
    const Lexicon& lex = Lexicon::builtin();
    JewelryRecord record{"bracelet",
                         {"yellow gold"},
                         {"topaz", "topaz", "topaz"},
                         {},
                         {"sky"},
                         {"sustainable", "dazzling"}};
    Rng rng(5);
    for (auto _ : state) {
        const std::string caption =
            generate_description(record, DescriptionLevel::Complete, true, rng, lex);
        const auto res = validate_description(caption, DescriptionLevel::Complete, lex);
        benchmark::DoNotOptimize(res.valid);
    }
}
BENCHMARK(GenerateAndValidate);

static void TokenizeCaptions(benchmark::State& state) {
    const Lexicon& lex = Lexicon::builtin();
    const std::string caption = "Earrings in sustainable yellow gold adorned with exquisite, "
                                "brilliant-cut diamonds and featuring a secure push-back clasp.";
    for (auto _ : state) {
        auto toks = tokenize(caption, lex);
        benchmark::DoNotOptimize(toks.data());
    }
}
BENCHMARK(TokenizeCaptions);

BENCHMARK_MAIN();
