#include "gemcap/metrics.hpp"

#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "gemcap/error.hpp"
#include "gemcap/grammar.hpp"

namespace gemcap {

long ConfusionMatrix::total() const {
    long n = 0;
    for (const auto& row : counts)
        for (long v : row)
            n += v;
    return n;
}

long ConfusionMatrix::trace() const {
    long n = 0;
    for (int i = 0; i < 4; ++i)
        n += counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    return n;
}

long& ConfusionMatrix::at(JewelryClass truth, JewelryClass predicted) {
    return counts[static_cast<std::size_t>(class_index(truth))]
                 [static_cast<std::size_t>(class_index(predicted))];
}

long ConfusionMatrix::at(JewelryClass truth, JewelryClass predicted) const {
    return counts[static_cast<std::size_t>(class_index(truth))]
                 [static_cast<std::size_t>(class_index(predicted))];
}

double ccr(const std::vector<JewelryClass>& predictions,
           const std::vector<JewelryClass>& labels) {
    if (predictions.size() != labels.size())
        throw InputMismatch("ccr: " + std::to_string(predictions.size()) + " predictions vs " +
                            std::to_string(labels.size()) + " labels");
    if (predictions.empty())
        throw EmptyEvaluation("ccr over an empty set");
    long hits = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i)
        hits += predictions[i] == labels[i];
    return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

ConfusionMatrix confusion(const std::vector<JewelryClass>& predictions,
                          const std::vector<JewelryClass>& labels) {
    if (predictions.size() != labels.size())
        throw InputMismatch("confusion: prediction/label length mismatch");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < predictions.size(); ++i)
        ++cm.at(labels[i], predictions[i]);
    return cm;
}

Prf1 prf1(const ConfusionMatrix& cm, JewelryClass cls) {
    const int k = class_index(cls);
    if (k < 0)
        throw ClassError("prf1: unknown class");
    long tp = cm.counts[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
    long fp = 0, fn = 0;
    for (int i = 0; i < 4; ++i) {
        if (i != k) {
            fp += cm.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
            fn += cm.counts[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
        }
    }
    Prf1 out;
    out.precision = (tp + fp) ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    out.recall = (tp + fn) ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    out.f1 = (out.precision + out.recall > 0.0)
                 ? 2.0 * out.precision * out.recall / (out.precision + out.recall)
                 : 0.0;
    return out;
}

std::string canonical_caption(const std::string& caption, const Lexicon& lexicon) {
    std::vector<std::string> toks = tokenize(caption, lexicon);
    while (!toks.empty() && toks.back() == ".")
        toks.pop_back();
    return detokenize(toks) + ".";
}

double exact_match(const std::vector<std::string>& generated,
                   const std::vector<std::string>& gold, const Lexicon& lexicon) {
    if (generated.size() != gold.size())
        throw InputMismatch("exact_match: " + std::to_string(generated.size()) +
                            " generated vs " + std::to_string(gold.size()) + " gold");
    if (generated.empty())
        throw EmptyEvaluation("exact_match over an empty set");
    long hits = 0;
    for (std::size_t i = 0; i < generated.size(); ++i)
        hits += canonical_caption(generated[i], lexicon) == canonical_caption(gold[i], lexicon);
    return static_cast<double>(hits) / static_cast<double>(generated.size());
}

MetricsReport metrics_report(const std::vector<JewelryClass>& predictions,
                             const std::vector<JewelryClass>& labels) {
    MetricsReport report;
    report.ccr = ccr(predictions, labels);
    report.matrix = confusion(predictions, labels);
    for (int k = 0; k < 4; ++k) {
        const JewelryClass cls = kClassOrder[static_cast<std::size_t>(k)];
        report.per_class[static_cast<std::size_t>(k)] = prf1(report.matrix, cls);
        long tp_fp = 0, tp_fn = 0;
        for (int i = 0; i < 4; ++i) {
            tp_fp += report.matrix.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
            tp_fn += report.matrix.counts[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
        }
        if (tp_fp == 0)
            report.warnings.push_back("class '" + class_name(cls) +
                                      "' never predicted; precision set to 0 by convention");
        if (tp_fn == 0)
            report.warnings.push_back("class '" + class_name(cls) +
                                      "' absent from labels; recall set to 0 by convention");
    }
    return report;
}

namespace {

std::string fixed4(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << v;
    return os.str();
}

} // namespace

std::string MetricsReport::to_text() const {
    std::ostringstream os;
    os << "CCR: " << fixed4(ccr) << "\n";
    if (caption_exact_match)
        os << "Caption exact match: " << fixed4(*caption_exact_match) << "\n";
    os << "\nClass       Precision  Recall  F1-Score\n";
    for (int k = 0; k < 4; ++k) {
        const auto& m = per_class[static_cast<std::size_t>(k)];
        os << std::left << std::setw(12) << class_name(kClassOrder[static_cast<std::size_t>(k)])
           << std::right << std::setw(9) << fixed4(m.precision) << std::setw(8)
           << fixed4(m.recall) << std::setw(10) << fixed4(m.f1) << "\n";
    }
    os << "\nConfusion (rows = true, cols = predicted):\n";
    for (int i = 0; i < 4; ++i) {
        os << std::left << std::setw(12) << class_name(kClassOrder[static_cast<std::size_t>(i)])
           << std::right;
        for (int j = 0; j < 4; ++j)
            os << std::setw(7)
               << matrix.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        os << "\n";
    }
    for (const auto& w : warnings)
        os << "warning: " << w << "\n";
    return os.str();
}

std::string MetricsReport::to_json() const {
    nlohmann::json j;
    j["ccr"] = ccr;
    if (caption_exact_match)
        j["caption_exact_match"] = *caption_exact_match;
    nlohmann::json per;
    for (int k = 0; k < 4; ++k) {
        const auto& m = per_class[static_cast<std::size_t>(k)];
        per[class_name(kClassOrder[static_cast<std::size_t>(k)])] = {
            {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
    }
    j["per_class"] = per;
    j["confusion"] = matrix.counts;
    j["warnings"] = warnings;
    return j.dump(2);
}

std::size_t best_row(const std::vector<ResultRow>& rows) {
    if (rows.empty())
        throw EmptyEvaluation("best_row over an empty table");
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].test_ccr > rows[best].test_ccr ||
            (rows[i].test_ccr == rows[best].test_ccr && rows[i].val_loss < rows[best].val_loss))
            best = i;
    }
    return best;
}

std::string render_report(const std::vector<ResultRow>& rows) {
    if (rows.empty())
        throw EmptyEvaluation("render_report over an empty table");
    const std::size_t flag = best_row(rows);
    std::ostringstream os;
    os << "  CNN          RNN    Neurons  Val. CCR  Val. Loss  Test CCR\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const ResultRow& r = rows[i];
        os << (i == flag ? "* " : "  ") << std::left << std::setw(12) << r.cnn << " "
           << std::setw(6) << r.rnn << std::right << std::setw(8) << r.neurons << "  "
           << std::setw(8) << fixed4(r.val_ccr) << "  " << std::setw(9) << fixed4(r.val_loss)
           << "  " << std::setw(8) << fixed4(r.test_ccr) << "\n";
    }
    return os.str();
}

std::string render_report_json(const std::vector<ResultRow>& rows) {
    const std::size_t flag = rows.empty() ? 0 : best_row(rows);
    nlohmann::json j = nlohmann::json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const ResultRow& r = rows[i];
        j.push_back({{"cnn", r.cnn},
                     {"rnn", r.rnn},
                     {"neurons", r.neurons},
                     {"val_ccr", r.val_ccr},
                     {"val_loss", r.val_loss},
                     {"test_ccr", r.test_ccr},
                     {"best", i == flag}});
    }
    return j.dump(2);
}

} // namespace gemcap
