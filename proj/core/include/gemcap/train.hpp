#pragma once

#include <string>
#include <vector>

#include "gemcap/checkpoint.hpp"
#include "gemcap/dataset.hpp"
#include "gemcap/metrics.hpp"
#include "gemcap/model.hpp"
#include "gemcap/optim.hpp"

namespace gemcap {

struct TrainConfig {
    int batch_size = 8;
    OptimizerConfig optimizer = OptimizerConfig::adam(0.001);
    int max_epochs = 50;
    int patience = 10;
    std::uint64_t seed = 0;

    bool operator==(const TrainConfig&) const = default;
};

struct EpochLog {
    int epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    double val_ccr = 0.0;
};

struct TrainResult {
    CheckpointMeta best;          // metrics of the reported (best) epoch
    std::vector<EpochLog> log;    // one record per trained epoch
    int epochs_ran = 0;
    bool stopped_early = false;
};

/// Teacher-forced sequence loss over one batch. `sequences` holds the
/// content token ids per sample (no start/end markers); the function
/// feeds <start> + tokens and targets tokens + <end> for captioning, or
/// just the single class token for classification models (no <end>).
/// The mean is over unmasked target positions. When `backprop` is set,
/// gradients accumulate into the model parameters; `dimages` (optional)
/// receives the input-image gradient.
double sequence_loss(CaptionModel& model, const Tensor& images,
                     const std::vector<std::vector<int>>& sequences, bool backprop,
                     Tensor* dimages = nullptr);

/// The target token sequence for one sample under the model's task.
std::vector<int> target_sequence(const Sample& sample, const TaskSpec& task,
                                 const Vocabulary& vocab, const Lexicon& lexicon);

/// Vocabulary for a task: the four class tokens for classification, or a
/// frequency vocabulary built from the train-split captions at the task's
/// level for captioning.
Vocabulary task_vocabulary(const Manifest& manifest, const TaskSpec& task,
                           const Lexicon& lexicon);

/// Full training loop: seeded shuffles, teacher forcing, per-epoch
/// validation loss and CCR (classification accuracy, or caption exact
/// match), early stopping on validation loss, best-epoch weight
/// restoration. The model ends up holding the best-epoch weights.
/// Deterministic for a fixed (config, seed) in serial mode.
TrainResult train(CaptionModel& model, const Manifest& manifest,
                  const std::string& manifest_dir, const TrainConfig& config,
                  const Lexicon& lexicon);

/// Evaluation on one split: classification models report CCR and
/// per-class metrics, captioning models report caption exact match (as
/// their CCR) against the gold caption at the model's level.
MetricsReport evaluate(const CaptionModel& model, const Manifest& manifest,
                       const std::string& manifest_dir, Split split, const Lexicon& lexicon);

/// Serializes one epoch log record as a JSON line.
std::string epoch_log_line(const EpochLog& entry);

} // namespace gemcap
