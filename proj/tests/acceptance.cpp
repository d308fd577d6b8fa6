// Acceptance suite: runs every release criterion end to end and prints one
// PASS/FAIL line per criterion. Exit code 0 when all pass, 3 otherwise.
//
// The training proxies build a 2000-image synthetic dataset and train real
// models, so a full run takes tens of minutes. Individual criteria can be
// selected by number: `acceptance 1 2 3`.

#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <iostream>
#include <set>
#include <sstream>
#include <vector>

#include "gemcap/augment.hpp"
#include "gemcap/checkpoint.hpp"
#include "gemcap/dataset.hpp"
#include "gemcap/grad_check.hpp"
#include "gemcap/grammar.hpp"
#include "gemcap/grid.hpp"
#include "gemcap/train.hpp"
#include "reference_captions.hpp"

using namespace gemcap;
using namespace gemcap::testutil;
namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------- pinned knobs

constexpr double kGradTol = 1e-4;
constexpr double kGradEps = 1e-4;
constexpr int kGradProbePoints = 100;
constexpr double kGradSuiteBudgetSec = 60.0;

constexpr double kOptimTol = 1e-9;
constexpr int kOptimSteps = 100;

constexpr double kCellTol = 1e-12;

constexpr int kProxyImages = 2000;
constexpr int kProxySize = 64;
constexpr std::uint64_t kProxySeed = 20240807;

constexpr double kClsTargetCcr = 0.90;
constexpr double kClsBudgetSec = 15 * 60.0;
constexpr int kClsHidden = 128;
constexpr int kClsBatch = 8;
constexpr double kClsLr = 0.001;
constexpr int kClsMaxEpochs = 12;
constexpr int kClsPatience = 4;
constexpr std::uint64_t kClsSeed = 11;

constexpr double kCapTargetExact = 0.85;
constexpr double kCapBudgetSec = 30 * 60.0;
constexpr int kCapHidden = 256;
constexpr int kCapBatch = 16;
constexpr double kCapLr = 0.001;
constexpr int kCapMaxEpochsBasic = 18;  // basic saturates earlier
constexpr int kCapMaxEpochsNormal = 24; // exact match crosses 0.85 near epoch 17
constexpr int kCapPatience = 6;
constexpr std::uint64_t kCapSeed = 13;

constexpr double kPerClassF1Target = 0.85;

constexpr int kAugmentCases = 10000;
constexpr int kGrammarRecords = 1000;

// ---------------------------------------------------------------- scaffolding

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Context {
    fs::path work = fs::temp_directory_path() / "gemcap_acceptance";
    Manifest proxy_manifest;
    bool proxy_ready = false;

    // criterion 4 artifacts consumed by 6 and 10
    std::string cls_ckpt;
    std::string cls_metrics_json;
    MetricsReport cls_report;
    bool cls_ready = false;

    std::string proxy_dir() const { return (work / "proxy").string(); }
};

void ensure_proxy_dataset(Context& ctx, std::ostream& log) {
    if (ctx.proxy_ready)
        return;
    const auto t0 = std::chrono::steady_clock::now();
    DatasetConfig cfg;
    cfg.n_base = kProxyImages;
    cfg.augment_multiplier = 0;
    cfg.height = kProxySize;
    cfg.width = kProxySize;
    cfg.master_seed = kProxySeed;
    fs::create_directories(ctx.proxy_dir());
    ctx.proxy_manifest = build_dataset(cfg, ctx.proxy_dir(), Lexicon::builtin());
    split_dataset(ctx.proxy_manifest, {0.75, 0.15, 0.10}, kProxySeed);
    write_manifest(ctx.proxy_manifest, (fs::path(ctx.proxy_dir()) / "manifest.jsonl").string());
    ctx.proxy_ready = true;
    log << "    proxy dataset: " << ctx.proxy_manifest.samples.size() << " images in "
        << seconds_since(t0) << " s\n";
}

ModelConfig proxy_classifier_config() {
    ModelConfig cfg;
    cfg.encoder = EncoderConfig{3, kProxySize, kProxySize, {16, 32, 64}, 128, "vgg-s"};
    cfg.decoder = DecoderConfig{CellKind::Gru, kClsHidden, 64, 32};
    cfg.task = TaskSpec{TaskKind::Classification, DescriptionLevel::Basic};
    return cfg;
}

TrainConfig proxy_classifier_train() {
    TrainConfig tc;
    tc.batch_size = kClsBatch;
    tc.optimizer = OptimizerConfig::adam(kClsLr);
    tc.max_epochs = kClsMaxEpochs;
    tc.patience = kClsPatience;
    tc.seed = kClsSeed;
    return tc;
}

struct ClassifierRun {
    TrainResult result;
    MetricsReport test_report;
    std::string checkpoint_path;
    std::string metrics_json;
};

ClassifierRun run_proxy_classifier(Context& ctx, const std::string& tag, std::ostream& log) {
    CaptionModel model(proxy_classifier_config(), classification_vocab(), kClsSeed);
    ClassifierRun run;
    const auto t0 = std::chrono::steady_clock::now();
    run.result = train(model, ctx.proxy_manifest, ctx.proxy_dir(), proxy_classifier_train(),
                       Lexicon::builtin());
    log << "    " << tag << ": " << run.result.epochs_ran << " epochs in "
        << seconds_since(t0) << " s, best val_ccr " << run.result.best.best_val_ccr << "\n";
    run.test_report =
        evaluate(model, ctx.proxy_manifest, ctx.proxy_dir(), Split::Test, Lexicon::builtin());
    run.checkpoint_path = (ctx.work / (tag + ".ckpt")).string();
    save_checkpoint(model, run.result.best, run.checkpoint_path);
    run.metrics_json = run.test_report.to_json();
    return run;
}

std::string file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

// ------------------------------------------------------- criterion 1 helpers

using ProbeFn = std::function<GradCheckReport(std::uint64_t)>;

bool probe_suite(const std::string& name, const ProbeFn& probe, std::ostream& log) {
    double worst = 0.0;
    for (int point = 0; point < kGradProbePoints; ++point) {
        const GradCheckReport report = probe(static_cast<std::uint64_t>(point));
        worst = std::max(worst, report.max_rel_err);
        if (!report.pass) {
            log << "    " << name << ": probe " << point << " failed at " << report.worst
                << " rel err " << report.max_rel_err << "\n";
            return false;
        }
    }
    log << "    " << name << ": " << kGradProbePoints << " probes, worst rel err " << worst
        << "\n";
    return true;
}

double dots(const Tensor& a, const Tensor& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

bool criterion1_gradients(Context&, std::ostream& log) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;

    ok &= probe_suite("dense", [](std::uint64_t seed) {
        Rng rng(seed * 2 + 1);
        Dense layer(3, 2, 1.0, rng);
        Tensor x = Tensor::normal({2, 3}, 0.0, 1.0, rng);
        Tensor proj = Tensor::normal({2, 2}, 0.0, 1.0, rng);
        Tensor dx;
        auto loss = [&] { return dots(layer.forward(x), proj); };
        auto grads = [&] {
            layer.params().zero_grads();
            Dense::Cache c;
            layer.forward(x, &c);
            dx = layer.backward(proj, c);
        };
        std::vector<GradProbe> probes{{"x", &x, &dx}};
        for (auto& p : layer.params().items())
            probes.push_back({p.name, &p.value, &p.grad});
        return grad_check(loss, grads, probes, kGradEps, kGradTol);
    }, log);

    ok &= probe_suite("conv2d", [](std::uint64_t seed) {
        Rng rng(seed * 2 + 101);
        Conv2d layer(2, 2, rng);
        Tensor x = Tensor::normal({1, 2, 4, 4}, 0.0, 1.0, rng);
        Tensor proj = Tensor::normal({1, 2, 4, 4}, 0.0, 1.0, rng);
        Tensor dx;
        auto loss = [&] { return dots(layer.forward(x), proj); };
        auto grads = [&] {
            layer.params().zero_grads();
            Conv2d::Cache c;
            layer.forward(x, &c);
            dx = layer.backward(proj, c);
        };
        std::vector<GradProbe> probes{{"x", &x, &dx}};
        for (auto& p : layer.params().items())
            probes.push_back({p.name, &p.value, &p.grad});
        return grad_check(loss, grads, probes, kGradEps, kGradTol);
    }, log);

    ok &= probe_suite("maxpool", [](std::uint64_t seed) {
        Rng rng(seed * 2 + 201);
        // wide value spread keeps window maxima unique at probe scale
        Tensor x = Tensor::normal({1, 2, 4, 4}, 0.0, 10.0, rng);
        Tensor proj = Tensor::normal({1, 2, 2, 2}, 0.0, 1.0, rng);
        Tensor dx;
        auto loss = [&] { return dots(MaxPool2::forward(x), proj); };
        auto grads = [&] {
            MaxPool2::Cache c;
            MaxPool2::forward(x, &c);
            dx = MaxPool2::backward(proj, c);
        };
        return grad_check(loss, grads, {{"x", &x, &dx}}, kGradEps, kGradTol);
    }, log);

    ok &= probe_suite("relu", [](std::uint64_t seed) {
        Rng rng(seed * 2 + 301);
        Tensor x = Tensor::normal({2, 6}, 0.0, 1.0, rng);
        for (double& v : x.values())
            v = (v >= 0 ? 1.0 : -1.0) * (0.15 + std::abs(v)); // kink-avoiding
        Tensor proj = Tensor::normal({2, 6}, 0.0, 1.0, rng);
        Tensor dx;
        auto loss = [&] { return dots(relu(x), proj); };
        auto grads = [&] {
            ReluCache c;
            relu(x, &c);
            dx = relu_backward(proj, c);
        };
        return grad_check(loss, grads, {{"x", &x, &dx}}, kGradEps, kGradTol);
    }, log);

    ok &= probe_suite("embedding", [](std::uint64_t seed) {
        Rng rng(seed * 2 + 401);
        Embedding emb(5, 3, rng);
        Tensor ids = Tensor::zeros({4});
        for (std::size_t i = 0; i < 4; ++i)
            ids[i] = static_cast<double>(rng.next_below(5));
        Tensor proj = Tensor::normal({4, 3}, 0.0, 1.0, rng);
        auto loss = [&] { return dots(emb.forward(ids), proj); };
        auto grads = [&] {
            emb.params().zero_grads();
            Embedding::Cache c;
            emb.forward(ids, &c);
            emb.backward(proj, c);
        };
        return grad_check(loss, grads,
                          {{"E", &emb.params().at("E").value, &emb.params().at("E").grad}},
                          kGradEps, kGradTol);
    }, log);

    ok &= probe_suite("gru_cell", [](std::uint64_t seed) {
        Rng rng(seed * 2 + 501);
        GruCell cell(3, 4, rng);
        Tensor x = Tensor::normal({2, 3}, 0.0, 1.0, rng);
        Tensor h = Tensor::normal({2, 4}, 0.0, 1.0, rng);
        Tensor proj = Tensor::normal({2, 4}, 0.0, 1.0, rng);
        GruCell::Grads io;
        auto loss = [&] { return dots(cell.forward(x, h), proj); };
        auto grads = [&] {
            cell.params().zero_grads();
            GruCell::Cache c;
            cell.forward(x, h, &c);
            io = cell.backward(proj, c);
        };
        std::vector<GradProbe> probes{{"x", &x, &io.dx}, {"h", &h, &io.dh}};
        for (auto& p : cell.params().items())
            probes.push_back({p.name, &p.value, &p.grad});
        return grad_check(loss, grads, probes, kGradEps, kGradTol);
    }, log);

    ok &= probe_suite("lstm_cell", [](std::uint64_t seed) {
        Rng rng(seed * 2 + 601);
        LstmCell cell(3, 4, rng);
        Tensor x = Tensor::normal({2, 3}, 0.0, 1.0, rng);
        LstmCell::State s{Tensor::normal({2, 4}, 0.0, 1.0, rng),
                          Tensor::normal({2, 4}, 0.0, 1.0, rng)};
        Tensor ph = Tensor::normal({2, 4}, 0.0, 1.0, rng);
        Tensor pc = Tensor::normal({2, 4}, 0.0, 1.0, rng);
        LstmCell::Grads io;
        auto loss = [&] {
            auto out = cell.forward(x, s);
            return dots(out.h, ph) + dots(out.c, pc);
        };
        auto grads = [&] {
            cell.params().zero_grads();
            LstmCell::Cache c;
            cell.forward(x, s, &c);
            io = cell.backward(ph, pc, c);
        };
        std::vector<GradProbe> probes{
            {"x", &x, &io.dx}, {"h", &s.h, &io.dh}, {"c", &s.c, &io.dc}};
        for (auto& p : cell.params().items())
            probes.push_back({p.name, &p.value, &p.grad});
        return grad_check(loss, grads, probes, kGradEps, kGradTol);
    }, log);

    ok &= probe_suite("softmax_xent", [](std::uint64_t seed) {
        Rng rng(seed * 2 + 701);
        Tensor logits = Tensor::normal({3, 5}, 0.0, 1.0, rng);
        std::vector<int> targets;
        for (int i = 0; i < 3; ++i)
            targets.push_back(static_cast<int>(rng.next_below(5)));
        Tensor dlogits;
        auto loss = [&] { return softmax_xent(logits, targets).loss; };
        auto grads = [&] { dlogits = softmax_xent(logits, targets).dlogits; };
        return grad_check(loss, grads, {{"logits", &logits, &dlogits}}, kGradEps, kGradTol);
    }, log);

    ok &= probe_suite("decoder_init_map", [](std::uint64_t seed) {
        Rng rng(seed * 2 + 801);
        Decoder dec(DecoderConfig{CellKind::Lstm, 4, 3, 8}, 8, 5, rng);
        Tensor features = Tensor::normal({2, 5}, 0.0, 1.0, rng);
        Tensor ph = Tensor::normal({2, 4}, 0.0, 1.0, rng);
        Tensor pc = Tensor::normal({2, 4}, 0.0, 1.0, rng);
        Tensor dfeatures;
        std::vector<Param*> params;
        dec.collect_params(params);
        auto loss = [&] {
            Decoder::State s = dec.init_state(features);
            return dots(s.h, ph) + dots(s.c, pc);
        };
        auto grads = [&] {
            for (Param* p : params)
                p->grad.fill(0.0);
            Decoder::InitCache cache;
            dec.init_state(features, &cache);
            dfeatures = dec.init_state_backward(ph, pc, cache);
        };
        // only the two init dense layers receive gradient through this path
        std::vector<GradProbe> probes{{"features", &features, &dfeatures}};
        for (std::size_t i = 0; i < 4; ++i)
            probes.push_back({params[i]->name, &params[i]->value, &params[i]->grad});
        return grad_check(loss, grads, probes, kGradEps, kGradTol);
    }, log);

    ok &= probe_suite("captioner_3step", [](std::uint64_t seed) {
        // The full model contains relu and maxpool; a probe point is only
        // numerically valid when no activation sits within a step of a
        // kink. Points are rejected when central differences at eps and
        // eps/2 disagree anywhere (the observable signature of a crossing)
        // and regenerated deterministically from the next sub-seed.
        for (std::uint64_t attempt = 0;; ++attempt) {
            const std::uint64_t s = seed * 131 + attempt * 7919;
            ModelConfig cfg;
            cfg.encoder = EncoderConfig{1, 4, 4, {2}, 3, "vgg-grad"};
            cfg.decoder = DecoderConfig{seed % 2 ? CellKind::Lstm : CellKind::Gru, 3, 2, 8};
            cfg.task = TaskSpec{TaskKind::Captioning, DescriptionLevel::Basic};
            Vocabulary vocab = Vocabulary::from_token_lists({{"a", "b", "c", "d", "e", "f"}});
            CaptionModel model(cfg, vocab, s * 7 + 3);

            Rng rng(s * 2 + 901);
            Tensor images = Tensor::normal({2, 1, 4, 4}, 0.0, 1.0, rng);
            const std::vector<std::vector<int>> seqs = {
                {static_cast<int>(4 + rng.next_below(6)),
                 static_cast<int>(4 + rng.next_below(6))},
                {static_cast<int>(4 + rng.next_below(6))}};
            Tensor dimages;
            auto loss = [&] { return sequence_loss(model, images, seqs, false); };
            auto grads = [&] {
                for (Param* p : model.params())
                    p->grad.fill(0.0);
                sequence_loss(model, images, seqs, true, &dimages);
            };
            std::vector<GradProbe> probes{{"images", &images, &dimages}};
            for (Param* p : model.params())
                probes.push_back({p->name, &p->value, &p->grad});

            bool smooth = true;
            for (const GradProbe& probe : probes) {
                Tensor& value = *probe.value;
                for (std::size_t i = 0; i < value.size() && smooth; ++i) {
                    const auto numeric_at = [&](double step) {
                        const double saved = value[i];
                        value[i] = saved + step;
                        const double up = loss();
                        value[i] = saved - step;
                        const double down = loss();
                        value[i] = saved;
                        return (up - down) / (2.0 * step);
                    };
                    const double coarse = numeric_at(kGradEps);
                    const double fine = numeric_at(kGradEps / 2.0);
                    if (std::abs(coarse - fine) >
                        0.02 * std::max({std::abs(coarse), std::abs(fine), 1e-6}))
                        smooth = false;
                }
                if (!smooth)
                    break;
            }
            if (!smooth)
                continue;
            return grad_check(loss, grads, probes, kGradEps, kGradTol);
        }
    }, log);

    const double elapsed = seconds_since(t0);
    log << "    gradient suite runtime " << elapsed << " s (budget " << kGradSuiteBudgetSec
        << ")\n";
    return ok && elapsed < kGradSuiteBudgetSec;
}

// ------------------------------------------------------- criterion 2 helpers

// Scalar reference scripts, written independently from the optim module.
struct QuadRef {
    double ax = 1.0, ay = 3.0;
    double gx(double x) const { return ax * x; }
    double gy(double y) const { return ay * y; }
};

bool criterion2_optimizers(Context&, std::ostream& log) {
    const QuadRef f;
    const double x0 = 1.0, y0 = -0.5;
    bool all_ok = true;

    auto compare = [&](const char* name, OptimizerConfig cfg, auto reference) {
        Param theta{"theta", Tensor::from_values({x0, y0}), Tensor::zeros({2})};
        Optimizer opt(cfg);
        double rx = x0, ry = y0, worst = 0.0;
        // reference state
        double m1 = 0, m2 = 0, v1 = 0, v2 = 0;
        for (int t = 1; t <= kOptimSteps; ++t) {
            theta.grad[0] = f.gx(theta.value[0]);
            theta.grad[1] = f.gy(theta.value[1]);
            opt.step({&theta});
            reference(t, rx, ry, m1, m2, v1, v2);
            worst = std::max({worst, std::abs(theta.value[0] - rx),
                              std::abs(theta.value[1] - ry)});
        }
        const bool ok = worst < kOptimTol;
        log << "    " << name << ": max |theta - reference| = " << worst
            << (ok ? "" : "  (over tolerance)") << "\n";
        all_ok = all_ok && ok;
    };

    compare("adam", OptimizerConfig::adam(0.001),
            [&](int t, double& x, double& y, double& mx, double& my, double& vx, double& vy) {
                const double b1 = 0.9, b2 = 0.999, eps = 1e-8, lr = 0.001;
                const double gx = f.gx(x), gy = f.gy(y);
                mx = b1 * mx + (1 - b1) * gx;
                my = b1 * my + (1 - b1) * gy;
                vx = b2 * vx + (1 - b2) * gx * gx;
                vy = b2 * vy + (1 - b2) * gy * gy;
                x -= lr * (mx / (1 - std::pow(b1, t))) /
                     (std::sqrt(vx / (1 - std::pow(b2, t))) + eps);
                y -= lr * (my / (1 - std::pow(b1, t))) /
                     (std::sqrt(vy / (1 - std::pow(b2, t))) + eps);
            });

    compare("adagrad", OptimizerConfig::adagrad(0.01),
            [&](int, double& x, double& y, double& ax, double& ay, double&, double&) {
                const double eps = 1e-8, lr = 0.01;
                const double gx = f.gx(x), gy = f.gy(y);
                ax += gx * gx;
                ay += gy * gy;
                x -= lr * gx / (std::sqrt(ax) + eps);
                y -= lr * gy / (std::sqrt(ay) + eps);
            });

    compare("adadelta", OptimizerConfig::adadelta(),
            [&](int, double& x, double& y, double& egx, double& egy, double& edx, double& edy) {
                const double rho = 0.9, eps = 1e-6;
                const double gx = f.gx(x), gy = f.gy(y);
                egx = rho * egx + (1 - rho) * gx * gx;
                egy = rho * egy + (1 - rho) * gy * gy;
                const double dx = -std::sqrt(edx + eps) / std::sqrt(egx + eps) * gx;
                const double dy = -std::sqrt(edy + eps) / std::sqrt(egy + eps) * gy;
                edx = rho * edx + (1 - rho) * dx * dx;
                edy = rho * edy + (1 - rho) * dy * dy;
                x += dx;
                y += dy;
            });

    compare("rmsprop", OptimizerConfig::rmsprop(0.001),
            [&](int, double& x, double& y, double& ex, double& ey, double&, double&) {
                const double rho = 0.9, eps = 1e-6, lr = 0.001;
                const double gx = f.gx(x), gy = f.gy(y);
                ex = rho * ex + (1 - rho) * gx * gx;
                ey = rho * ey + (1 - rho) * gy * gy;
                x -= lr * gx / (std::sqrt(ex) + eps);
                y -= lr * gy / (std::sqrt(ey) + eps);
            });

    return all_ok;
}

bool criterion3_closed_forms(Context&, std::ostream& log) {
    Rng rng(5);
    GruCell gru(1, 1, rng);
    for (auto& p : gru.params().items())
        p.value.fill(0.0);
    const Tensor h_new = gru.forward(Tensor::zeros({1, 1}), Tensor::constant({1, 1}, 0.4));
    const double gru_err = std::abs(h_new[0] - 0.2);

    LstmCell lstm(1, 1, rng);
    for (auto& p : lstm.params().items())
        p.value.fill(0.0);
    const LstmCell::State out =
        lstm.forward(Tensor::zeros({1, 1}), {Tensor::zeros({1, 1}), Tensor::constant({1, 1}, 0.4)});
    const double c_err = std::abs(out.c[0] - 0.2);
    const double h_err = std::abs(out.h[0] - 0.5 * std::tanh(0.2));

    log << "    gru h'=" << h_new[0] << " (err " << gru_err << "), lstm c'=" << out.c[0]
        << " (err " << c_err << "), lstm h'=" << out.h[0] << " (err vs 0.5*tanh(0.2) = "
        << h_err << ")\n";
    log << "    lstm h' vs 0.098688: " << std::abs(out.h[0] - 0.098688) << "\n";
    return gru_err <= kCellTol && c_err <= kCellTol && h_err <= kCellTol &&
           std::abs(out.h[0] - 0.098688) < 1e-6;
}

bool criterion4_classification(Context& ctx, std::ostream& log) {
    const auto t0 = std::chrono::steady_clock::now();
    ensure_proxy_dataset(ctx, log);
    ClassifierRun run = run_proxy_classifier(ctx, "cls-a", log);
    const double elapsed = seconds_since(t0);

    ctx.cls_ckpt = run.checkpoint_path;
    ctx.cls_metrics_json = run.metrics_json;
    ctx.cls_report = run.test_report;
    ctx.cls_ready = true;

    log << "    test CCR " << run.test_report.ccr << " (target >= " << kClsTargetCcr
        << "), runtime " << elapsed << " s (budget " << kClsBudgetSec << ")\n";
    return run.test_report.ccr >= kClsTargetCcr && elapsed <= kClsBudgetSec;
}

bool criterion5_captioning(Context& ctx, std::ostream& log) {
    const auto t0 = std::chrono::steady_clock::now();
    ensure_proxy_dataset(ctx, log);

    bool ok = true;
    for (DescriptionLevel level : {DescriptionLevel::Basic, DescriptionLevel::Normal}) {
        ModelConfig cfg;
        cfg.encoder = EncoderConfig{3, kProxySize, kProxySize, {16, 32, 64}, 128, "vgg-s"};
        cfg.decoder = DecoderConfig{CellKind::Gru, kCapHidden, 64, 32};
        cfg.task = TaskSpec{TaskKind::Captioning, level};

        const Vocabulary vocab =
            task_vocabulary(ctx.proxy_manifest, cfg.task, Lexicon::builtin());
        CaptionModel model(cfg, vocab, kCapSeed);

        TrainConfig tc;
        tc.batch_size = kCapBatch;
        tc.optimizer = OptimizerConfig::adam(kCapLr);
        tc.max_epochs =
            level == DescriptionLevel::Basic ? kCapMaxEpochsBasic : kCapMaxEpochsNormal;
        tc.patience = kCapPatience;
        tc.seed = kCapSeed;

        const auto t1 = std::chrono::steady_clock::now();
        const TrainResult result =
            train(model, ctx.proxy_manifest, ctx.proxy_dir(), tc, Lexicon::builtin());
        const MetricsReport report =
            evaluate(model, ctx.proxy_manifest, ctx.proxy_dir(), Split::Test, Lexicon::builtin());
        log << "    " << level_name(level) << ": " << result.epochs_ran << " epochs in "
            << seconds_since(t1) << " s, test exact match "
            << report.caption_exact_match.value_or(0.0) << " (target >= " << kCapTargetExact
            << ")\n";
        ok = ok && report.caption_exact_match.value_or(0.0) >= kCapTargetExact;
    }
    const double elapsed = seconds_since(t0);
    log << "    captioning runtime " << elapsed << " s (budget " << kCapBudgetSec << ")\n";
    return ok && elapsed <= kCapBudgetSec;
}

bool criterion6_per_class(Context& ctx, std::ostream& log) {
    if (!ctx.cls_ready) {
        log << "    (classification proxy not yet run, running it now)\n";
        if (!criterion4_classification(ctx, log))
            log << "    note: classification criterion itself failed\n";
    }
    bool ok = true;
    for (int k = 0; k < 4; ++k) {
        const auto& m = ctx.cls_report.per_class[static_cast<std::size_t>(k)];
        log << "    " << class_name(kClassOrder[static_cast<std::size_t>(k)]) << ": F1 " << m.f1
            << " (precision " << m.precision << ", recall " << m.recall << ")\n";
        ok = ok && m.f1 >= kPerClassF1Target;
    }
    return ok;
}

bool criterion7_reference_captions(Context&, std::ostream& log) {
    const Lexicon& lex = Lexicon::builtin();
    bool ok = true;

    auto check_exact = [&](const JewelryRecord& record, DescriptionLevel level, bool sups,
                           std::size_t idx, const std::string& expected) {
        const auto variants = generate_all(record, level, sups, lex);
        std::string got = idx < variants.size() ? variants[idx] : "<no such template>";
        // drive the public entry point to the same surface form
        if (idx < variants.size()) {
            for (std::uint64_t seed = 0; seed < 4096; ++seed) {
                Rng probe(seed);
                if (probe.next_below(variants.size()) == idx) {
                    Rng rng(seed);
                    got = generate_description(record, level, sups, rng, lex);
                    break;
                }
            }
        }
        const bool match = got == expected;
        if (!match) {
            log << "    MISMATCH at " << level_name(level) << ":\n      expected: " << expected
                << "\n      got:      " << got << "\n";
        }
        ok = ok && match;
    };

    for (const auto& col : reference_columns()) {
        check_exact(col.record, DescriptionLevel::Basic, true, col.basic_idx, col.basic);
        check_exact(col.record, DescriptionLevel::Normal, true, col.normal_idx, col.normal);
        check_exact(col.record, DescriptionLevel::Complete, true, col.complete_idx,
                    col.complete);
    }
    log << "    nine reference captions reproduced exactly\n";

    const std::string stripped = strip_superlatives(superlative_caption(), lex);
    if (stripped != stripped_caption()) {
        log << "    stripping mismatch:\n      expected: " << stripped_caption()
            << "\n      got:      " << stripped << "\n";
        ok = false;
    } else {
        log << "    superlative-stripping equivalence reproduced exactly\n";
    }
    return ok;
}

bool criterion8_augment_properties(Context&, std::ostream& log) {
    Rng rng(808);
    RenderSpec spec;
    spec.jewelry_class = JewelryClass::Earrings;
    spec.material = "rose gold";
    spec.stone = "emerald";
    spec.stone_count = 2;
    spec.geometry_jitter_seed = 4;
    const Tensor base = render_sample(spec, kProxySize, kProxySize);

    int cases = 0;
    // randomized shape/range preservation across all nine ops
    while (cases < kAugmentCases - 400) {
        const AugmentOp op = sample_augment_op(rng);
        const Tensor out = apply_augment(base, op, rng);
        if (out.shape() != base.shape())
            return false;
        for (double v : out.values())
            if (v < 0.0 || v > 1.0) {
                log << "    range violation under " << augment_kind_name(op.kind) << "\n";
                return false;
            }
        ++cases;
    }
    // identity laws on fresh random images
    for (int i = 0; i < 100; ++i) {
        spec.geometry_jitter_seed = 1000 + static_cast<std::uint64_t>(i);
        spec.background_shade = 0.05 + 0.2 * (i % 5);
        const Tensor img = render_sample(spec, 48, 48);

        Tensor r = img;
        const AugmentOp quarter{AugmentOp::Kind::Rotate90, 1.0, {1, 1, 1}};
        for (int t = 0; t < 4; ++t)
            r = apply_augment(r, quarter, rng);
        if (!(r == img))
            return false;
        ++cases;

        const AugmentOp fliph{AugmentOp::Kind::FlipH, 0.0, {1, 1, 1}};
        if (!(apply_augment(apply_augment(img, fliph, rng), fliph, rng) == img))
            return false;
        ++cases;

        const AugmentOp flipv{AugmentOp::Kind::FlipV, 0.0, {1, 1, 1}};
        if (!(apply_augment(apply_augment(img, flipv, rng), flipv, rng) == img))
            return false;
        ++cases;

        const AugmentOp unit{AugmentOp::Kind::Brightness, 1.0, {1, 1, 1}};
        if (!(apply_augment(img, unit, rng) == img))
            return false;
        ++cases;
    }

    // augmentation never touches labels or captions
    const fs::path dir = fs::temp_directory_path() / "gemcap_acceptance_aug";
    fs::remove_all(dir);
    DatasetConfig cfg;
    cfg.n_base = 16;
    cfg.augment_multiplier = 4;
    cfg.height = 32;
    cfg.width = 32;
    cfg.master_seed = 99;
    const Manifest m = build_dataset(cfg, dir.string(), Lexicon::builtin());
    std::map<std::string, const Sample*> originals;
    for (const auto& s : m.samples)
        if (!s.provenance)
            originals[s.id] = &s;
    for (const auto& s : m.samples)
        if (s.provenance) {
            const Sample* parent = originals.at(s.provenance->parent_id);
            if (s.class_label != parent->class_label || s.caption_basic != parent->caption_basic ||
                s.caption_normal != parent->caption_normal ||
                s.caption_complete != parent->caption_complete)
                return false;
            ++cases;
        }
    fs::remove_all(dir);

    log << "    " << cases << " randomized cases, all properties held\n";
    return cases >= kAugmentCases;
}

bool criterion9_grammar(Context&, std::ostream& log) {
    const Lexicon& lex = Lexicon::builtin();
    Rng rng(909);

    static const std::vector<std::string> types = {"necklace", "ring", "earrings", "bracelet",
                                                   "solitaire", "locket", "pendant"};
    static const std::vector<std::string> materials = {"yellow gold", "rose gold", "white gold",
                                                       "silver", "gold", "platinum"};
    static const std::vector<std::string> stones = {
        "pearl", "diamond", "ruby", "emerald", "alexandrite", "sapphire", "oriental catseye",
        "amethyst", "topaz", "tourmaline", "aquamarine", "chrysoprase", "peridot", "opal",
        "zircon", "jade"};
    static const std::vector<std::string> adjectives = {"brilliant-cut", "central", "sky",
                                                        "round", "oval", "polished"};
    static const std::vector<std::string> features = {"pendant", "push-back clasp", "clasp",
                                                      "charm", "engraving"};
    static const std::vector<std::string> sups = {"sustainable", "exquisite", "secure",
                                                  "dazzling", "iris", "elegant", "beautiful",
                                                  "stunning", "radiant", "luxurious"};

    int round_trips = 0, monotone = 0, idempotent = 0;
    for (int trial = 0; trial < kGrammarRecords; ++trial) {
        JewelryRecord r;
        r.jewelry_type = types[rng.next_below(types.size())];
        r.materials = {materials[rng.next_below(materials.size())]};
        if (rng.next_below(4) != 0)
            r.stones.assign(1 + rng.next_below(3), stones[rng.next_below(stones.size())]);
        if (rng.next_below(2) == 0)
            r.features.push_back(adjectives[rng.next_below(adjectives.size())]);
        if (rng.next_below(2) == 0)
            r.features.push_back(features[rng.next_below(features.size())]);
        for (std::size_t i = 0, n = rng.next_below(4); i < n; ++i)
            r.style_adjectives.push_back(sups[rng.next_below(sups.size())]);

        for (DescriptionLevel level :
             {DescriptionLevel::Basic, DescriptionLevel::Normal, DescriptionLevel::Complete}) {
            for (bool s : {false, true}) {
                for (const auto& caption : generate_all(r, level, s, lex)) {
                    if (!validate_description(caption, level, lex)) {
                        log << "    round trip failed: " << caption << " at "
                            << level_name(level) << "\n";
                        return false;
                    }
                    ++round_trips;
                }
            }
        }
        for (const auto& caption : generate_all(r, DescriptionLevel::Basic, false, lex)) {
            if (!validate_description(caption, DescriptionLevel::Normal, lex) ||
                !validate_description(caption, DescriptionLevel::Complete, lex))
                return false;
            ++monotone;
        }
        for (const auto& caption : generate_all(r, DescriptionLevel::Normal, false, lex)) {
            if (!validate_description(caption, DescriptionLevel::Complete, lex))
                return false;
            ++monotone;
        }
        for (const auto& caption : generate_all(r, DescriptionLevel::Complete, true, lex)) {
            const std::string once = strip_superlatives(caption, lex);
            if (strip_superlatives(once, lex) != once)
                return false;
            ++idempotent;
        }
    }
    log << "    " << kGrammarRecords << " records: " << round_trips << " round trips, "
        << monotone << " monotonicity checks, " << idempotent
        << " idempotence checks, all passed\n";
    return true;
}

bool criterion10_determinism(Context& ctx, std::ostream& log) {
    ensure_proxy_dataset(ctx, log);
    if (!ctx.cls_ready) {
        log << "    (classification proxy not yet run, running it now)\n";
        criterion4_classification(ctx, log);
    }
    ClassifierRun second = run_proxy_classifier(ctx, "cls-b", log);

    const bool bytes_equal = file_bytes(ctx.cls_ckpt) == file_bytes(second.checkpoint_path);
    const bool json_equal = ctx.cls_metrics_json == second.metrics_json;
    log << "    checkpoint bytes " << (bytes_equal ? "identical" : "DIFFER")
        << ", metric JSON " << (json_equal ? "identical" : "DIFFERS") << "\n";
    return bytes_equal && json_equal;
}

bool criterion11_early_stopping(Context& ctx, std::ostream& log) {
    // a frozen model: the optimizer's learning rate is zero, so the
    // validation loss is constant across epochs
    const fs::path dir = ctx.work / "earlystop";
    fs::remove_all(dir);
    DatasetConfig dcfg;
    dcfg.n_base = 28;
    dcfg.height = 32;
    dcfg.width = 32;
    dcfg.master_seed = 4;
    Manifest manifest = build_dataset(dcfg, dir.string(), Lexicon::builtin());
    split_dataset(manifest, {0.75, 0.15, 0.10}, 4);

    ModelConfig cfg;
    cfg.encoder = EncoderConfig{3, 32, 32, {4, 8}, 16, "vgg-xs"};
    cfg.decoder = DecoderConfig{CellKind::Gru, 16, 8, 16};
    cfg.task = TaskSpec{TaskKind::Classification, DescriptionLevel::Basic};
    CaptionModel model(cfg, classification_vocab(), 6);

    TrainConfig tc;
    tc.batch_size = 4;
    tc.optimizer = OptimizerConfig::adam(0.0);
    tc.max_epochs = 50;
    tc.patience = 10; // the module default
    tc.seed = 2;
    const TrainResult result = train(model, manifest, dir.string(), tc, Lexicon::builtin());

    log << "    stopped after epoch " << result.epochs_ran << " (expected "
        << tc.patience + 1 << "), reported checkpoint epoch " << result.best.epoch
        << " (expected 1)\n";
    return result.stopped_early && result.epochs_ran == tc.patience + 1 &&
           result.best.epoch == 1;
}

bool criterion12_grid(Context&, std::ostream& log) {
    const auto points = enumerate_grid(paper_grid_axes());
    log << "    --paper-grid sweep enumerates " << points.size() << " points\n";
    if (points.size() != 400)
        return false;

    // planted fixture: tie on test CCR resolves to the lower val loss
    std::vector<ResultRow> fixture = {
        {"vgg-s", "gru", 64, 0.90, 0.20, 0.95},
        {"vgg-s", "gru", 128, 0.90, 0.10, 0.95},
        {"vgg-s", "gru", 256, 0.95, 0.30, 0.94},
        {"vgg-s", "gru", 512, 0.90, 0.05, 0.90},
    };
    const std::size_t best = best_row(fixture);
    const std::string table = render_report(fixture);
    log << "    planted fixture best row index " << best << " (expected 1)\n";

    // the reference comparison fixture flags its known best row
    std::vector<ResultRow> reference = {
        {"InceptionV3", "GRU", 1024, 0.9187, 0.1026, 0.9161},
        {"VGG-16", "GRU", 512, 0.9314, 0.0390, 0.9464},
        {"MobileNet", "GRU", 64, 0.8851, 0.2696, 0.8802},
        {"InceptionV3", "LSTM", 1024, 0.9487, 0.0301, 0.9193},
        {"VGG-16", "LSTM", 512, 0.9597, 0.0542, 0.9227},
        {"MobileNet", "LSTM", 64, 0.8811, 0.2208, 0.8775},
    };
    const bool reference_ok = best_row(reference) == 1;

    return best == 1 && table.find("* vgg-s") != std::string::npos && reference_ok;
}

} // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i)
        selected.insert(std::atoi(argv[i]));

    Context ctx;
    fs::remove_all(ctx.work);
    fs::create_directories(ctx.work);

    struct Criterion {
        int id;
        const char* name;
        std::function<bool(Context&, std::ostream&)> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "gradient suite: every layer matches central differences at 1e-4", criterion1_gradients},
        {2, "optimizer oracles: four update rules match scripted references at 1e-9", criterion2_optimizers},
        {3, "closed-form cell checks: gru 0.4->0.2, lstm 0.4->(0.2, 0.5*tanh(0.2))", criterion3_closed_forms},
        {4, "synthetic classification proxy: test CCR >= 0.90 within 15 min", criterion4_classification},
        {5, "synthetic captioning proxy: exact match >= 0.85 (basic+normal) within 30 min", criterion5_captioning},
        {6, "per-class quality: every class F1 >= 0.85 on the classification run", criterion6_per_class},
        {7, "reference caption table: nine strings and the stripping equivalence, exact", criterion7_reference_captions},
        {8, "augmentation properties: shape/range/identities/label safety, 10k cases", criterion8_augment_properties},
        {9, "grammar suite: 1000 records, round trip + monotonicity + idempotence", criterion9_grammar},
        {10, "determinism: two identical runs, identical checkpoint bytes and metric JSON", criterion10_determinism},
        {11, "early stopping: frozen run halts at patience+1, reports epoch 1", criterion11_early_stopping},
        {12, "grid machinery: 400-point enumeration and best-row tie-break", criterion12_grid},
    };

    bool all_pass = true;
    for (const auto& criterion : criteria) {
        if (!selected.empty() && !selected.count(criterion.id))
            continue;
        std::ostringstream detail;
        bool ok = false;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            ok = criterion.run(ctx, detail);
        } catch (const std::exception& e) {
            detail << "    exception: " << e.what() << "\n";
        }
        std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << criterion.id << ": "
                  << criterion.name << "  [" << seconds_since(t0) << " s]\n"
                  << detail.str();
        std::cout.flush();
        all_pass = all_pass && ok;
    }

    fs::remove_all(ctx.work);
    return all_pass ? 0 : 3;
}
