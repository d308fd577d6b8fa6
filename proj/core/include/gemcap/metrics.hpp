#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gemcap/lexicon.hpp"
#include "gemcap/render.hpp"

namespace gemcap {

/// 4x4 confusion counts, rows = true class, columns = predicted class,
/// both in the fixed class order (necklace, ring, earrings, bracelet).
struct ConfusionMatrix {
    std::array<std::array<long, 4>, 4> counts{};

    long total() const;
    long trace() const;
    long& at(JewelryClass truth, JewelryClass predicted);
    long at(JewelryClass truth, JewelryClass predicted) const;
};

/// Correct classification rate: the fraction of exact hits.
double ccr(const std::vector<JewelryClass>& predictions,
           const std::vector<JewelryClass>& labels);

ConfusionMatrix confusion(const std::vector<JewelryClass>& predictions,
                          const std::vector<JewelryClass>& labels);

struct Prf1 {
    double precision = 0.0, recall = 0.0, f1 = 0.0;
};

/// precision = TP/(TP+FP), recall = TP/(TP+FN), f1 = 2PR/(P+R); every
/// zero-denominator case yields 0 by convention.
Prf1 prf1(const ConfusionMatrix& cm, JewelryClass cls);

/// Canonical caption form used by exact matching: lowercase, one pass
/// through the tokenizer, single terminal period.
std::string canonical_caption(const std::string& caption, const Lexicon& lexicon);

/// Fraction of caption pairs equal after canonicalization.
double exact_match(const std::vector<std::string>& generated,
                   const std::vector<std::string>& gold, const Lexicon& lexicon);

/// Full classification (and optionally captioning) report.
struct MetricsReport {
    double ccr = 0.0;
    ConfusionMatrix matrix;
    std::array<Prf1, 4> per_class;
    std::optional<double> caption_exact_match;
    std::vector<std::string> warnings; // e.g. zero-denominator conventions

    std::string to_text() const;
    std::string to_json() const;
};

MetricsReport metrics_report(const std::vector<JewelryClass>& predictions,
                             const std::vector<JewelryClass>& labels);

/// One row of a model-comparison table.
struct ResultRow {
    std::string cnn;  // encoder scale name
    std::string rnn;  // cell name
    int neurons = 0;
    double val_ccr = 0.0;
    double val_loss = 0.0;
    double test_ccr = 0.0;
};

/// Best row: maximal test CCR, ties broken by lower validation loss.
std::size_t best_row(const std::vector<ResultRow>& rows);

/// Plain-text table, columns CNN | RNN | Neurons | Val. CCR | Val. Loss |
/// Test CCR, four decimals with a period separator, best row flagged.
std::string render_report(const std::vector<ResultRow>& rows);
std::string render_report_json(const std::vector<ResultRow>& rows);

} // namespace gemcap
