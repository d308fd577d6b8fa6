#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gemcap/checkpoint.hpp"
#include "gemcap/dataset.hpp"
#include "gemcap/error.hpp"
#include "gemcap/grad_check.hpp"
#include "gemcap/grid.hpp"
#include "gemcap/image_io.hpp"
#include "gemcap/train.hpp"

namespace fs = std::filesystem;

namespace gemcap::cli {
namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kRuntime = 2;
constexpr int kCheckFailed = 3;

// ------------------------------------------------------------- run config

/// Flat run configuration; JSON file sections dataset/model/train/eval
/// overlay these defaults, command-line flags override both.
struct RunConfig {
    // dataset
    int n_base = 2000;
    int multiplier = 0;
    int size = 64;
    std::uint64_t dataset_seed = 7;
    // model
    std::string encoder_scale = "vgg-s";
    std::string cell = "gru";
    int hidden = 128;
    int embed_dim = 64;
    int max_len = 32;
    // train
    int batch = 8;
    std::string optimizer = "adam";
    double lr = 0.001;
    int max_epochs = 30;
    int patience = 10;
    std::uint64_t train_seed = 7;
    // eval
    std::string format = "text";
};

EncoderConfig encoder_for_scale(const std::string& scale, int size) {
    EncoderConfig cfg;
    cfg.height = size;
    cfg.width = size;
    cfg.scale_name = scale;
    if (scale == "vgg-xs") {
        cfg.blocks = {8, 16};
        cfg.feature_dim = 64;
    } else if (scale == "vgg-s") {
        cfg.blocks = {16, 32, 64};
        cfg.feature_dim = 128;
    } else if (scale == "vgg-m") {
        cfg.blocks = {32, 64, 128};
        cfg.feature_dim = 256;
    } else {
        throw Error("unknown encoder scale: " + scale + " (vgg-xs, vgg-s, vgg-m)");
    }
    cfg.validate();
    return cfg;
}

void overlay_config_file(RunConfig& rc, const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open config file: " + path);
    nlohmann::json doc;
    try {
        std::ostringstream buf;
        buf << in.rdbuf();
        doc = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("config is not valid JSON: ") + e.what());
    }

    auto reject_unknown = [](const nlohmann::json& obj, const std::string& section,
                             std::initializer_list<const char*> known) {
        for (const auto& [key, value] : obj.items()) {
            (void)value;
            if (std::find_if(known.begin(), known.end(),
                             [&](const char* k) { return key == k; }) == known.end())
                throw Error("unknown config key " + section + "." + key);
        }
    };

    reject_unknown(doc, "<root>", {"dataset", "model", "train", "eval"});
    if (doc.contains("dataset")) {
        const auto& d = doc["dataset"];
        reject_unknown(d, "dataset", {"n_base", "multiplier", "size", "seed"});
        rc.n_base = d.value("n_base", rc.n_base);
        rc.multiplier = d.value("multiplier", rc.multiplier);
        rc.size = d.value("size", rc.size);
        rc.dataset_seed = d.value("seed", rc.dataset_seed);
    }
    if (doc.contains("model")) {
        const auto& m = doc["model"];
        reject_unknown(m, "model",
                       {"encoder_scale", "cell", "hidden", "embed_dim", "max_len"});
        rc.encoder_scale = m.value("encoder_scale", rc.encoder_scale);
        rc.cell = m.value("cell", rc.cell);
        rc.hidden = m.value("hidden", rc.hidden);
        rc.embed_dim = m.value("embed_dim", rc.embed_dim);
        rc.max_len = m.value("max_len", rc.max_len);
    }
    if (doc.contains("train")) {
        const auto& t = doc["train"];
        reject_unknown(t, "train",
                       {"batch", "optimizer", "lr", "max_epochs", "patience", "seed"});
        rc.batch = t.value("batch", rc.batch);
        rc.optimizer = t.value("optimizer", rc.optimizer);
        rc.lr = t.value("lr", rc.lr);
        rc.max_epochs = t.value("max_epochs", rc.max_epochs);
        rc.patience = t.value("patience", rc.patience);
        rc.train_seed = t.value("seed", rc.train_seed);
    }
    if (doc.contains("eval")) {
        reject_unknown(doc["eval"], "eval", {"format"});
        rc.format = doc["eval"].value("format", rc.format);
    }
}

void apply_preset(RunConfig& rc, const std::string& preset) {
    // the reference best configurations, decoder side
    if (preset == "paper-classification") {
        rc.cell = "gru";
        rc.hidden = 512;
        rc.batch = 8;
        rc.optimizer = "adam";
        rc.lr = 0.001;
    } else if (preset == "paper-captioning") {
        rc.cell = "gru";
        rc.hidden = 256;
        rc.batch = 16;
        rc.optimizer = "adam";
        rc.lr = 0.001;
    } else if (preset == "desk-classification") {
        // same recipe at desk scale: smaller hidden width trains in minutes
        rc.cell = "gru";
        rc.hidden = 128;
        rc.batch = 8;
        rc.optimizer = "adam";
        rc.lr = 0.001;
    } else if (preset == "desk-captioning") {
        rc.cell = "gru";
        rc.hidden = 256;
        rc.batch = 16;
        rc.optimizer = "adam";
        rc.lr = 0.001;
    } else {
        throw Error("unknown preset: " + preset);
    }
}

void validate_against_paper_grid(const RunConfig& rc) {
    const GridAxes axes = paper_grid_axes();
    auto in = [](auto value, const auto& list) {
        return std::find(list.begin(), list.end(), value) != list.end();
    };
    if (!in(rc.hidden, axes.neurons))
        throw Error("--paper-grid: hidden " + std::to_string(rc.hidden) +
                    " is outside the reference neuron axis");
    if (!in(rc.batch, axes.batch_sizes))
        throw Error("--paper-grid: batch " + std::to_string(rc.batch) +
                    " is outside the reference batch axis");
    if (!in(rc.lr, axes.learning_rates))
        throw Error("--paper-grid: lr outside the reference learning-rate axis");
    opt_kind_from_name(rc.optimizer); // one of the four
}

// ----------------------------------------------------------- subcommands

int cmd_gen_data(const RunConfig& rc, const std::string& out_dir) {
    fs::create_directories(out_dir);
    DatasetConfig cfg;
    cfg.n_base = rc.n_base;
    cfg.augment_multiplier = rc.multiplier;
    cfg.height = rc.size;
    cfg.width = rc.size;
    cfg.master_seed = rc.dataset_seed;

    Manifest manifest = build_dataset(cfg, out_dir, Lexicon::builtin());
    split_dataset(manifest, {0.75, 0.15, 0.10}, rc.dataset_seed);
    write_manifest(manifest, (fs::path(out_dir) / "manifest.jsonl").string());

    std::array<int, 3> counts{};
    for (const auto& s : manifest.samples)
        ++counts[static_cast<std::size_t>(s.split)];
    std::cout << "wrote " << manifest.samples.size() << " samples (" << counts[0] << " train, "
              << counts[1] << " val, " << counts[2] << " test) under " << out_dir << "\n";
    return kOk;
}

int cmd_augment_preview(const std::string& image_path, const std::string& out_dir,
                        std::uint64_t seed) {
    const Tensor image = read_png(image_path);
    fs::create_directories(out_dir);
    Rng rng(seed);
    for (int k = 0; k <= static_cast<int>(AugmentOp::Kind::Brightness); ++k) {
        AugmentOp op;
        do {
            op = sample_augment_op(rng);
        } while (op.kind != static_cast<AugmentOp::Kind>(k));
        const Tensor out = apply_augment(image, op, rng);
        const std::string name = augment_kind_name(op.kind) + ".png";
        write_png((fs::path(out_dir) / name).string(), out);
        std::cout << name << " amount=" << op.amount << "\n";
    }
    return kOk;
}

int cmd_train(const RunConfig& rc, const std::string& manifest_path, const std::string& task,
              const std::string& level, const std::string& out_dir) {
    const Manifest manifest = read_manifest(manifest_path);
    const std::string manifest_dir = fs::path(manifest_path).parent_path().string();

    TaskSpec spec;
    spec.kind = task_from_name(task);
    spec.level = level_from_name(level);

    ModelConfig model_cfg;
    model_cfg.encoder = encoder_for_scale(rc.encoder_scale, rc.size);
    model_cfg.decoder =
        DecoderConfig{cell_from_name(rc.cell), rc.hidden, rc.embed_dim, rc.max_len};
    model_cfg.task = spec;

    TrainConfig train_cfg;
    train_cfg.batch_size = rc.batch;
    train_cfg.optimizer = OptimizerConfig::make(opt_kind_from_name(rc.optimizer), rc.lr);
    train_cfg.max_epochs = rc.max_epochs;
    train_cfg.patience = rc.patience;
    train_cfg.seed = rc.train_seed;

    const Vocabulary vocab = task_vocabulary(manifest, spec, Lexicon::builtin());
    CaptionModel model(model_cfg, vocab, train_cfg.seed);

    const TrainResult result = train(model, manifest, manifest_dir, train_cfg,
                                     Lexicon::builtin());

    fs::create_directories(fs::path(out_dir) / "checkpoints");
    const std::string ckpt = (fs::path(out_dir) / "checkpoints" / "model.ckpt").string();
    save_checkpoint(model, result.best, ckpt);
    {
        std::ofstream log((fs::path(out_dir) / "log.jsonl").string(), std::ios::binary);
        for (const auto& entry : result.log)
            log << epoch_log_line(entry) << '\n';
    }
    std::cout << "trained " << result.epochs_ran << " epochs"
              << (result.stopped_early ? " (stopped early)" : "") << "; best epoch "
              << result.best.epoch << " val_loss " << result.best.best_val_loss << " val_ccr "
              << result.best.best_val_ccr << "\ncheckpoint: " << ckpt << "\n";
    return kOk;
}

int cmd_eval(const RunConfig& rc, const std::string& checkpoint_path,
             const std::string& manifest_path, const std::string& split_tag,
             const std::string& out_dir) {
    LoadedCheckpoint loaded = load_checkpoint(checkpoint_path);
    const Manifest manifest = read_manifest(manifest_path);
    const std::string manifest_dir = fs::path(manifest_path).parent_path().string();

    const MetricsReport report = evaluate(loaded.model, manifest, manifest_dir,
                                          split_from_name(split_tag), Lexicon::builtin());
    const std::string text = rc.format == "json" ? report.to_json() : report.to_text();
    std::cout << text << (text.ends_with('\n') ? "" : "\n");

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::ofstream((fs::path(out_dir) / "report.txt").string()) << report.to_text();
        std::ofstream((fs::path(out_dir) / "report.json").string()) << report.to_json();
    }
    return kOk;
}

std::vector<int> sample_decode(const CaptionModel& model, const Tensor& image, Rng& rng) {
    const auto& enc_cfg = model.config().encoder;
    const Tensor batch =
        image.reshaped({1, enc_cfg.channels, enc_cfg.height, enc_cfg.width});
    const Tensor features = model.encoder().forward(batch);
    Decoder::State state = model.decoder().init_state(features);

    std::vector<int> out;
    int prev = Vocabulary::kStart;
    for (int t = 0; t < model.config().decoder.max_len; ++t) {
        const Tensor ids = Tensor::from_values({static_cast<double>(prev)});
        const Tensor logits = model.decoder().step(ids, state);
        // softmax sample over the row
        double mx = logits.at(0, 0);
        for (int k = 1; k < logits.dim(1); ++k)
            mx = std::max(mx, logits.at(0, k));
        std::vector<double> probs(static_cast<std::size_t>(logits.dim(1)));
        double sum = 0.0;
        for (int k = 0; k < logits.dim(1); ++k) {
            probs[static_cast<std::size_t>(k)] = std::exp(logits.at(0, k) - mx);
            sum += probs[static_cast<std::size_t>(k)];
        }
        double draw = rng.next_double() * sum;
        int pick = 0;
        for (int k = 0; k < logits.dim(1); ++k) {
            draw -= probs[static_cast<std::size_t>(k)];
            if (draw <= 0.0) {
                pick = k;
                break;
            }
        }
        if (pick == Vocabulary::kEnd)
            break;
        out.push_back(pick);
        prev = pick;
    }
    return out;
}

int cmd_caption(const std::string& image_path, const std::string& checkpoint_path,
                const std::string& level_tag, int retries, std::uint64_t seed) {
    LoadedCheckpoint loaded = load_checkpoint(checkpoint_path);
    const Tensor image = read_png(image_path);
    const DescriptionLevel level =
        level_tag.empty() ? loaded.model.config().task.level : level_from_name(level_tag);

    // attempt 0 is greedy; each retry re-decodes with a perturbed stream
    std::string caption = sentence_case(detokenize(
        loaded.model.vocab().decode(loaded.model.greedy_decode(image))));
    ValidationResult check = validate_description(caption, level, Lexicon::builtin());
    for (int attempt = 1; attempt <= retries && !check; ++attempt) {
        Rng rng = Rng::split(seed, static_cast<std::uint64_t>(attempt));
        caption = sentence_case(detokenize(
            loaded.model.vocab().decode(sample_decode(loaded.model, image, rng))));
        check = validate_description(caption, level, Lexicon::builtin());
    }
    if (!check) {
        std::cerr << "caption fails " << level_name(level) << " grammar at token "
                  << check.position << ": " << check.reason << "\n"
                  << "last attempt: " << caption << "\n";
        return kRuntime;
    }
    std::cout << caption << "\n";
    return kOk;
}

int cmd_grad_check() {
    // compact re-run of the layer gradient suite, one line per layer
    struct Row {
        std::string name;
        GradCheckReport report;
    };
    std::vector<Row> rows;
    Rng rng(20240);

    auto dot = [](const Tensor& a, const Tensor& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            s += a[i] * b[i];
        return s;
    };

    {
        Dense layer(4, 3, 1.0, rng);
        Tensor x = Tensor::normal({2, 4}, 0.0, 1.0, rng);
        Tensor proj = Tensor::normal({2, 3}, 0.0, 1.0, rng);
        Tensor dx;
        auto loss = [&] { return dot(layer.forward(x), proj); };
        auto grads = [&] {
            layer.params().zero_grads();
            Dense::Cache c;
            layer.forward(x, &c);
            dx = layer.backward(proj, c);
        };
        std::vector<GradProbe> probes{{"x", &x, &dx}};
        for (auto& p : layer.params().items())
            probes.push_back({p.name, &p.value, &p.grad});
        rows.push_back({"dense", grad_check(loss, grads, probes, 1e-4)});
    }
    {
        Conv2d layer(2, 3, rng);
        Tensor x = Tensor::normal({1, 2, 4, 4}, 0.0, 1.0, rng);
        Tensor proj = Tensor::normal({1, 3, 4, 4}, 0.0, 1.0, rng);
        Tensor dx;
        auto loss = [&] { return dot(layer.forward(x), proj); };
        auto grads = [&] {
            layer.params().zero_grads();
            Conv2d::Cache c;
            layer.forward(x, &c);
            dx = layer.backward(proj, c);
        };
        std::vector<GradProbe> probes{{"x", &x, &dx}};
        for (auto& p : layer.params().items())
            probes.push_back({p.name, &p.value, &p.grad});
        rows.push_back({"conv2d", grad_check(loss, grads, probes, 1e-4)});
    }
    {
        GruCell cell(3, 4, rng);
        Tensor x = Tensor::normal({2, 3}, 0.0, 1.0, rng);
        Tensor h = Tensor::normal({2, 4}, 0.0, 1.0, rng);
        Tensor proj = Tensor::normal({2, 4}, 0.0, 1.0, rng);
        GruCell::Grads io;
        auto loss = [&] { return dot(cell.forward(x, h), proj); };
        auto grads = [&] {
            cell.params().zero_grads();
            GruCell::Cache c;
            cell.forward(x, h, &c);
            io = cell.backward(proj, c);
        };
        std::vector<GradProbe> probes{{"x", &x, &io.dx}, {"h", &h, &io.dh}};
        for (auto& p : cell.params().items())
            probes.push_back({p.name, &p.value, &p.grad});
        rows.push_back({"gru_cell", grad_check(loss, grads, probes, 1e-4)});
    }
    {
        LstmCell cell(3, 4, rng);
        Tensor x = Tensor::normal({2, 3}, 0.0, 1.0, rng);
        LstmCell::State s{Tensor::normal({2, 4}, 0.0, 1.0, rng),
                          Tensor::normal({2, 4}, 0.0, 1.0, rng)};
        Tensor ph = Tensor::normal({2, 4}, 0.0, 1.0, rng);
        Tensor pc = Tensor::normal({2, 4}, 0.0, 1.0, rng);
        LstmCell::Grads io;
        auto loss = [&] {
            auto out = cell.forward(x, s);
            return dot(out.h, ph) + dot(out.c, pc);
        };
        auto grads = [&] {
            cell.params().zero_grads();
            LstmCell::Cache c;
            cell.forward(x, s, &c);
            io = cell.backward(ph, pc, c);
        };
        std::vector<GradProbe> probes{{"x", &x, &io.dx}, {"h", &s.h, &io.dh}, {"c", &s.c, &io.dc}};
        for (auto& p : cell.params().items())
            probes.push_back({p.name, &p.value, &p.grad});
        rows.push_back({"lstm_cell", grad_check(loss, grads, probes, 1e-4)});
    }
    {
        Tensor logits = Tensor::normal({3, 5}, 0.0, 1.0, rng);
        const std::vector<int> targets{1, 4, 0};
        Tensor dlogits;
        auto loss = [&] { return softmax_xent(logits, targets).loss; };
        auto grads = [&] { dlogits = softmax_xent(logits, targets).dlogits; };
        rows.push_back(
            {"softmax_xent", grad_check(loss, grads, {{"logits", &logits, &dlogits}}, 1e-4)});
    }

    bool all_pass = true;
    for (const auto& row : rows) {
        std::cout << (row.report.pass ? "PASS" : "FAIL") << "  " << row.name
                  << "  max_rel_err=" << row.report.max_rel_err << "  coords="
                  << row.report.coords_checked << "\n";
        all_pass = all_pass && row.report.pass;
    }
    return all_pass ? kOk : kCheckFailed;
}

int cmd_grid(const RunConfig& rc, const std::string& manifest_path, bool paper_grid,
             bool dry_run, const std::string& out_dir) {
    GridAxes axes;
    if (paper_grid) {
        axes = paper_grid_axes();
    } else {
        axes = GridAxes{{rc.hidden}, {rc.batch}, {rc.lr},
                        {opt_kind_from_name(rc.optimizer)}};
    }

    const auto points = enumerate_grid(axes);
    if (dry_run) {
        for (const auto& pt : points)
            std::cout << "neurons=" << pt.neurons << " batch=" << pt.batch_size
                      << " lr=" << pt.learning_rate << " opt=" << opt_kind_name(pt.optimizer)
                      << "\n";
        std::cout << points.size() << " grid points\n";
        return kOk;
    }

    const Manifest manifest = read_manifest(manifest_path);
    const std::string manifest_dir = fs::path(manifest_path).parent_path().string();

    ModelConfig base;
    base.encoder = encoder_for_scale(rc.encoder_scale, rc.size);
    base.decoder = DecoderConfig{cell_from_name(rc.cell), rc.hidden, rc.embed_dim, rc.max_len};
    base.task = TaskSpec{TaskKind::Classification, DescriptionLevel::Basic};

    TrainConfig train_cfg;
    train_cfg.batch_size = rc.batch;
    train_cfg.max_epochs = rc.max_epochs;
    train_cfg.patience = rc.patience;
    train_cfg.seed = rc.train_seed;

    const auto outcomes = run_grid(manifest, manifest_dir, base, train_cfg, axes,
                                   Lexicon::builtin());
    const std::string table = render_report(grid_rows(outcomes));
    std::cout << table;
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::ofstream((fs::path(out_dir) / "report.txt").string()) << table;
        std::ofstream((fs::path(out_dir) / "report.json").string())
            << render_report_json(grid_rows(outcomes));
    }
    return kOk;
}

int cmd_dump_lexicon(const std::string& out_path) {
    const std::string text = Lexicon::builtin().dump();
    if (out_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out)
            throw Error("cannot open for writing: " + out_path);
        out << text << "\n";
    }
    return kOk;
}

} // namespace

int dispatch(int argc, const char* const* argv) {
    CLI::App app{"jewelry image captioning engine"};
    app.require_subcommand(1);

    RunConfig rc;
    std::string config_path;

    // two-pass --config so file values sit between defaults and flags
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config")
            config_path = argv[i + 1];
    try {
        if (!config_path.empty())
            overlay_config_file(rc, config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    app.add_option("--config", config_path, "JSON run configuration");

    std::string out_dir, manifest_path, checkpoint_path, image_path, level_tag, split_tag =
        "test", task = "classification", preset;
    bool paper_grid = false, dry_run = false;
    int retries = 0;

    auto add_model_flags = [&](CLI::App* cmd) {
        cmd->add_option("--encoder-scale", rc.encoder_scale, "vgg-xs | vgg-s | vgg-m");
        cmd->add_option("--cell", rc.cell, "gru | lstm");
        cmd->add_option("--hidden", rc.hidden, "decoder hidden width");
        cmd->add_option("--embed-dim", rc.embed_dim, "token embedding width");
        cmd->add_option("--max-len", rc.max_len, "decode length cap");
        cmd->add_option("--size", rc.size, "image edge length");
    };
    auto add_train_flags = [&](CLI::App* cmd) {
        cmd->add_option("--batch", rc.batch, "batch size");
        cmd->add_option("--optimizer", rc.optimizer, "adam | adagrad | adadelta | rmsprop");
        cmd->add_option("--lr", rc.lr, "learning rate");
        cmd->add_option("--max-epochs", rc.max_epochs, "epoch cap");
        cmd->add_option("--patience", rc.patience, "early-stop patience");
        cmd->add_option("--seed", rc.train_seed, "training seed");
        cmd->add_option("--preset", preset,
                        "paper-classification | paper-captioning | desk-classification | "
                        "desk-captioning");
    };

    CLI::App* gen = app.add_subcommand("gen-data", "render a synthetic dataset");
    gen->add_option("--n", rc.n_base, "original images (stratified over 4 classes)");
    gen->add_option("--multiplier", rc.multiplier, "augmented children per original");
    gen->add_option("--size", rc.size, "image edge length");
    gen->add_option("--seed", rc.dataset_seed, "master seed");
    gen->add_option("--out", out_dir, "output directory")->required();

    CLI::App* aug = app.add_subcommand("augment-preview", "apply each augmentation once");
    aug->add_option("image", image_path, "input PNG")->required();
    aug->add_option("--out", out_dir, "output directory")->required();
    aug->add_option("--seed", rc.dataset_seed, "sampling seed");

    CLI::App* tr = app.add_subcommand("train", "train a model on a manifest");
    tr->add_option("--manifest", manifest_path, "manifest.jsonl path")->required();
    tr->add_option("--task", task, "classification | captioning");
    tr->add_option("--level", level_tag, "basic | normal | complete")->default_val("basic");
    tr->add_option("--out", out_dir, "run directory")->required();
    add_model_flags(tr);
    add_train_flags(tr);

    CLI::App* ev = app.add_subcommand("eval", "evaluate a checkpoint");
    ev->add_option("--checkpoint", checkpoint_path, "checkpoint path")->required();
    ev->add_option("--manifest", manifest_path, "manifest.jsonl path")->required();
    ev->add_option("--split", split_tag, "train | val | test");
    ev->add_option("--format", rc.format, "text | json");
    ev->add_option("--out", out_dir, "directory for report.{txt,json}");

    CLI::App* cap = app.add_subcommand("caption", "caption one image");
    cap->add_option("image", image_path, "input PNG")->required();
    cap->add_option("--checkpoint", checkpoint_path, "checkpoint path")->required();
    cap->add_option("--level", level_tag, "validation level (defaults to the model's)");
    cap->add_option("--retries", retries, "re-decode attempts if validation fails");
    cap->add_option("--seed", rc.train_seed, "retry sampling seed");

    CLI::App* gc = app.add_subcommand("grad-check", "verify layer gradients");

    CLI::App* gr = app.add_subcommand("grid", "hyperparameter sweep");
    gr->add_option("--manifest", manifest_path, "manifest.jsonl path");
    gr->add_flag("--paper-grid", paper_grid, "the full 400-point reference sweep");
    gr->add_flag("--dry-run", dry_run, "enumerate points without training");
    gr->add_option("--out", out_dir, "directory for report.{txt,json}");
    add_model_flags(gr);
    add_train_flags(gr);

    CLI::App* dl = app.add_subcommand("dump-lexicon", "print the built-in lexicon JSON");
    dl->add_option("--out", out_dir, "write to file instead of stdout");

    for (CLI::App* sub : app.get_subcommands({}))
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n" << app.help();
        return kUsage;
    }

    try {
        if (!preset.empty())
            apply_preset(rc, preset);
        if (paper_grid && !dry_run && gr->parsed())
            validate_against_paper_grid(rc);

        if (gen->parsed())
            return cmd_gen_data(rc, out_dir);
        if (aug->parsed())
            return cmd_augment_preview(image_path, out_dir, rc.dataset_seed);
        if (tr->parsed())
            return cmd_train(rc, manifest_path, task, level_tag, out_dir);
        if (ev->parsed())
            return cmd_eval(rc, checkpoint_path, manifest_path, split_tag, out_dir);
        if (cap->parsed())
            return cmd_caption(image_path, checkpoint_path, level_tag, retries, rc.train_seed);
        if (gc->parsed())
            return cmd_grad_check();
        if (gr->parsed()) {
            if (!dry_run && manifest_path.empty()) {
                std::cerr << "usage error: grid needs --manifest unless --dry-run\n";
                return kUsage;
            }
            return cmd_grid(rc, manifest_path, paper_grid, dry_run, out_dir);
        }
        if (dl->parsed())
            return cmd_dump_lexicon(out_dir);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    std::cerr << "usage error: no subcommand\n";
    return kUsage;
}

int dispatch(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args)
        argv.push_back(a.c_str());
    return dispatch(static_cast<int>(argv.size()), argv.data());
}

} // namespace gemcap::cli
