#include <doctest.h>

#include "gemcap/error.hpp"
#include "gemcap/metrics.hpp"
#include "gemcap/rng.hpp"

using namespace gemcap;

namespace {
constexpr JewelryClass N = JewelryClass::Necklace;
constexpr JewelryClass R = JewelryClass::Ring;
constexpr JewelryClass E = JewelryClass::Earrings;
constexpr JewelryClass B = JewelryClass::Bracelet;
} // namespace

TEST_CASE("ccr basics") {
    CHECK(ccr({N, R, E}, {N, R, E}) == 1.0);
    CHECK(ccr({N, R, E, B, N, R, E, B, N, R}, {N, R, E, B, N, R, E, B, N, N}) ==
          doctest::Approx(0.9));
    CHECK(ccr({N, N}, {R, B}) == 0.0);
    CHECK_THROWS_AS(ccr({N}, {N, R}), InputMismatch);
    CHECK_THROWS_AS(ccr({}, {}), EmptyEvaluation);
}

TEST_CASE("ccr is invariant under joint permutation") {
    Rng rng(8);
    std::vector<JewelryClass> preds, labels;
    for (int i = 0; i < 50; ++i) {
        preds.push_back(kClassOrder[rng.next_below(4)]);
        labels.push_back(kClassOrder[rng.next_below(4)]);
    }
    const double base = ccr(preds, labels);
    for (int trial = 0; trial < 10; ++trial) {
        for (std::size_t i = preds.size(); i > 1; --i) {
            const std::size_t j = rng.next_below(i);
            std::swap(preds[i - 1], preds[j]);
            std::swap(labels[i - 1], labels[j]);
        }
        CHECK(ccr(preds, labels) == doctest::Approx(base));
    }
}

TEST_CASE("confusion structure") {
    ConfusionMatrix perfect = confusion({N, R, E, B}, {N, R, E, B});
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(perfect.counts[i][j] == (i == j ? 1 : 0));

    ConfusionMatrix single = confusion({B}, {R});
    CHECK(single.at(R, B) == 1);
    CHECK(single.total() == 1);
    CHECK(single.trace() == 0);
}

TEST_CASE("trace over total equals ccr on random inputs") {
    Rng rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<JewelryClass> preds, labels;
        const std::size_t n = 10 + rng.next_below(90);
        for (std::size_t i = 0; i < n; ++i) {
            preds.push_back(kClassOrder[rng.next_below(4)]);
            labels.push_back(kClassOrder[rng.next_below(4)]);
        }
        ConfusionMatrix cm = confusion(preds, labels);
        CHECK(static_cast<double>(cm.trace()) / static_cast<double>(cm.total()) ==
              doctest::Approx(ccr(preds, labels)));
    }
}

TEST_CASE("prf1 formulas") {
    ConfusionMatrix diag;
    for (int i = 0; i < 4; ++i)
        diag.counts[i][i] = 5;
    for (JewelryClass c : kClassOrder) {
        const Prf1 m = prf1(diag, c);
        CHECK(m.precision == 1.0);
        CHECK(m.recall == 1.0);
        CHECK(m.f1 == 1.0);
    }

    // TP=3, FP=1, FN=2 for necklace
    ConfusionMatrix cm;
    cm.at(N, N) = 3;
    cm.at(R, N) = 1; // false positive
    cm.at(N, R) = 2; // false negative
    const Prf1 m = prf1(cm, N);
    CHECK(m.precision == doctest::Approx(0.75));
    CHECK(m.recall == doctest::Approx(0.6));
    CHECK(m.f1 == doctest::Approx(2 * 0.45 / 1.35));

    // class never predicted and never true
    ConfusionMatrix empty_b;
    empty_b.at(N, N) = 4;
    const Prf1 degenerate = prf1(empty_b, B);
    CHECK(degenerate.precision == 0.0);
    CHECK(degenerate.recall == 0.0);
    CHECK(degenerate.f1 == 0.0);
}

TEST_CASE("prf1 agrees with direct counting on random matrices") {
    Rng rng(10);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<JewelryClass> preds, labels;
        for (int i = 0; i < 200; ++i) {
            preds.push_back(kClassOrder[rng.next_below(4)]);
            labels.push_back(kClassOrder[rng.next_below(4)]);
        }
        ConfusionMatrix cm = confusion(preds, labels);
        for (JewelryClass c : kClassOrder) {
            long tp = 0, fp = 0, fn = 0;
            for (std::size_t i = 0; i < preds.size(); ++i) {
                tp += preds[i] == c && labels[i] == c;
                fp += preds[i] == c && labels[i] != c;
                fn += preds[i] != c && labels[i] == c;
            }
            const Prf1 m = prf1(cm, c);
            if (tp + fp)
                CHECK(m.precision == doctest::Approx(double(tp) / double(tp + fp)));
            if (tp + fn)
                CHECK(m.recall == doctest::Approx(double(tp) / double(tp + fn)));
        }
    }
}

TEST_CASE("macro recall equals ccr on balanced labels") {
    Rng rng(11);
    std::vector<JewelryClass> labels, preds;
    for (int i = 0; i < 100; ++i)
        for (JewelryClass c : kClassOrder) {
            labels.push_back(c);
            preds.push_back(rng.next_below(5) == 0 ? kClassOrder[rng.next_below(4)] : c);
        }
    ConfusionMatrix cm = confusion(preds, labels);
    double macro_recall = 0.0;
    for (JewelryClass c : kClassOrder)
        macro_recall += prf1(cm, c).recall / 4.0;
    CHECK(macro_recall == doctest::Approx(ccr(preds, labels)));
}

TEST_CASE("exact match with canonicalization") {
    const Lexicon& lex = Lexicon::builtin();
    std::vector<std::string> a = {"Earrings in yellow gold.", "Ring in silver.",
                                  "Yellow gold bracelet.", "Solitaire in rose gold."};
    CHECK(exact_match(a, a, lex) == 1.0);

    // case-only difference counts as a match
    std::vector<std::string> b = a;
    b[0] = "earrings in yellow gold.";
    CHECK(exact_match(b, a, lex) == 1.0);

    // one word different in 1 of 4 pairs
    std::vector<std::string> c = a;
    c[1] = "Ring in platinum.";
    CHECK(exact_match(c, a, lex) == doctest::Approx(0.75));

    CHECK_THROWS_AS(exact_match({"x."}, {"x.", "y."}, lex), InputMismatch);
}

TEST_CASE("exact match is reflexive and symmetric") {
    const Lexicon& lex = Lexicon::builtin();
    std::vector<std::string> a = {"Earrings in yellow gold.", "Ring in rose gold with central diamond."};
    std::vector<std::string> b = {"EARRINGS IN YELLOW GOLD.", "Necklace in gold."};
    CHECK(exact_match(a, a, lex) == 1.0);
    CHECK(exact_match(a, b, lex) == exact_match(b, a, lex));
}

TEST_CASE("report table flags the right best row") {
    // reference comparison fixture for the classification task
    std::vector<ResultRow> rows = {
        {"InceptionV3", "GRU", 1024, 0.9187, 0.1026, 0.9161},
        {"VGG-16", "GRU", 512, 0.9314, 0.0390, 0.9464},
        {"MobileNet", "GRU", 64, 0.8851, 0.2696, 0.8802},
        {"InceptionV3", "LSTM", 1024, 0.9487, 0.0301, 0.9193},
        {"VGG-16", "LSTM", 512, 0.9597, 0.0542, 0.9227},
        {"MobileNet", "LSTM", 64, 0.8811, 0.2208, 0.8775},
    };
    CHECK(best_row(rows) == 1);
    const std::string text = render_report(rows);
    CHECK(text.find("* VGG-16") != std::string::npos);
    CHECK(text.find("0.9464") != std::string::npos);

    // single row is flagged best
    std::vector<ResultRow> one = {rows[2]};
    CHECK(best_row(one) == 0);
    CHECK(render_report(one).find("* MobileNet") != std::string::npos);

    // ties on test ccr break by lower val loss
    std::vector<ResultRow> tie = {
        {"s", "gru", 64, 0.9, 0.20, 0.95},
        {"s", "gru", 128, 0.9, 0.10, 0.95},
        {"s", "gru", 256, 0.9, 0.30, 0.95},
    };
    CHECK(best_row(tie) == 1);
}

TEST_CASE("metrics report carries zero-denominator warnings") {
    const auto report = metrics_report({N, N, N}, {N, N, N});
    CHECK(report.ccr == 1.0);
    CHECK_FALSE(report.warnings.empty());
    CHECK(report.to_text().find("warning:") != std::string::npos);
    CHECK(report.to_json().find("per_class") != std::string::npos);
}
