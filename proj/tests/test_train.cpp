#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "gemcap/error.hpp"
#include "gemcap/train.hpp"

using namespace gemcap;
namespace fs = std::filesystem;

namespace {

struct Workspace {
    fs::path dir;
    Manifest manifest;

    explicit Workspace(const std::string& tag, int n_base, std::uint64_t seed) {
        dir = fs::temp_directory_path() / ("gemcap_train_" + tag);
        fs::remove_all(dir);
        DatasetConfig cfg;
        cfg.n_base = n_base;
        cfg.height = 32;
        cfg.width = 32;
        cfg.master_seed = seed;
        manifest = build_dataset(cfg, dir.string(), Lexicon::builtin());
        split_dataset(manifest, {0.75, 0.15, 0.10}, seed);
    }
    ~Workspace() { fs::remove_all(dir); }
};

ModelConfig small_model(TaskKind task, DescriptionLevel level = DescriptionLevel::Basic) {
    ModelConfig cfg;
    cfg.encoder = EncoderConfig{3, 32, 32, {4, 8}, 16, "vgg-xs"};
    cfg.decoder = DecoderConfig{CellKind::Gru, 16, 8, 16};
    cfg.task = TaskSpec{task, level};
    return cfg;
}

} // namespace

TEST_CASE("overfitting a single sample memorizes its caption") {
    Workspace ws("overfit", 8, 3);
    // one train sample; val watches the same image so best-epoch
    // restoration keeps the memorized weights
    for (std::size_t i = 0; i < ws.manifest.samples.size(); ++i)
        ws.manifest.samples[i].split = i == 0 ? Split::Train : Split::Test;
    Sample val_twin = ws.manifest.samples[0];
    val_twin.id = "val-twin";
    val_twin.split = Split::Val;
    ws.manifest.samples.push_back(val_twin);

    const TaskSpec task{TaskKind::Captioning, DescriptionLevel::Basic};
    Vocabulary vocab = task_vocabulary(ws.manifest, task, Lexicon::builtin());
    ModelConfig mc = small_model(TaskKind::Captioning);
    CaptionModel model(mc, vocab, 9);

    TrainConfig tc;
    tc.batch_size = 1;
    tc.optimizer = OptimizerConfig::adam(0.01);
    tc.max_epochs = 300;
    tc.patience = 300;
    tc.seed = 9;
    const TrainResult result = train(model, ws.manifest, ws.dir.string(), tc, Lexicon::builtin());

    CHECK(result.log.back().train_loss < 0.01);

    // the decoded caption equals the gold caption exactly
    const Sample& s = ws.manifest.samples[0];
    const Tensor image = load_sample_image(s, ws.dir.string());
    CHECK(canonical_caption(model.caption_image(image), Lexicon::builtin()) ==
          canonical_caption(s.caption_basic, Lexicon::builtin()));

    // classification flavor: the overfit sample predicts its true class
    Vocabulary cvocab = classification_vocab();
    CaptionModel cls(small_model(TaskKind::Classification), cvocab, 10);
    TrainConfig ctc = tc;
    ctc.max_epochs = 150;
    ctc.patience = 150;
    const TrainResult cres = train(cls, ws.manifest, ws.dir.string(), ctc, Lexicon::builtin());
    (void)cres;
    CHECK(cls.predict_class(image) == s.class_label);
}

TEST_CASE("training is deterministic: same seed, same checkpoint bytes") {
    Workspace ws("det", 28, 5);
    const TaskSpec task{TaskKind::Classification, DescriptionLevel::Basic};

    auto run = [&](const std::string& name) {
        CaptionModel model(small_model(TaskKind::Classification), classification_vocab(), 77);
        TrainConfig tc;
        tc.batch_size = 4;
        tc.max_epochs = 3;
        tc.patience = 10;
        tc.seed = 41;
        const TrainResult r = train(model, ws.manifest, ws.dir.string(), tc, Lexicon::builtin());
        const std::string path = (ws.dir / name).string();
        save_checkpoint(model, r.best, path);
        std::ifstream in(path, std::ios::binary);
        return std::string((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
    };
    (void)task;
    CHECK(run("a.ckpt") == run("b.ckpt"));
}

TEST_CASE("frozen model stops exactly at patience+1 and reports epoch 1") {
    Workspace ws("frozen", 28, 7);
    CaptionModel model(small_model(TaskKind::Classification), classification_vocab(), 3);

    TrainConfig tc;
    tc.batch_size = 4;
    tc.optimizer = OptimizerConfig::adam(0.0); // lr 0 freezes the weights
    tc.max_epochs = 50;
    tc.patience = 3;
    tc.seed = 1;
    const TrainResult result = train(model, ws.manifest, ws.dir.string(), tc, Lexicon::builtin());

    CHECK(result.stopped_early);
    CHECK(result.epochs_ran == tc.patience + 1);
    CHECK(result.best.epoch == 1);
}

TEST_CASE("training requires non-empty splits") {
    Workspace ws("empty", 8, 11);
    for (auto& s : ws.manifest.samples)
        s.split = Split::Test;
    CaptionModel model(small_model(TaskKind::Classification), classification_vocab(), 3);
    TrainConfig tc;
    CHECK_THROWS_AS(train(model, ws.manifest, ws.dir.string(), tc, Lexicon::builtin()),
                    DatasetError);
}

TEST_CASE("epoch log lines are json") {
    const std::string line = epoch_log_line(EpochLog{3, 0.5, 0.25, 0.9});
    CHECK(line.find("\"epoch\":3") != std::string::npos);
    CHECK(line.find("train_loss") != std::string::npos);
}

TEST_CASE("evaluate reports classification metrics and captioning exact match") {
    Workspace ws("eval", 28, 13);

    CaptionModel cls(small_model(TaskKind::Classification), classification_vocab(), 3);
    const MetricsReport cr = evaluate(cls, ws.manifest, ws.dir.string(), Split::Test,
                                      Lexicon::builtin());
    CHECK(cr.ccr >= 0.0);
    CHECK(cr.ccr <= 1.0);
    CHECK(cr.matrix.total() == static_cast<long>(split_indices(ws.manifest, Split::Test).size()));

    const TaskSpec task{TaskKind::Captioning, DescriptionLevel::Basic};
    Vocabulary vocab = task_vocabulary(ws.manifest, task, Lexicon::builtin());
    CaptionModel cap(small_model(TaskKind::Captioning), vocab, 4);
    const MetricsReport mr = evaluate(cap, ws.manifest, ws.dir.string(), Split::Test,
                                      Lexicon::builtin());
    CHECK(mr.caption_exact_match.has_value());
    CHECK(mr.ccr == *mr.caption_exact_match);
}
