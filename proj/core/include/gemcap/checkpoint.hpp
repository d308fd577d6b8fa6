#pragma once

#include <string>

#include "gemcap/model.hpp"

namespace gemcap {

struct CheckpointMeta {
    double best_val_loss = 0.0;
    double best_val_ccr = 0.0;
    int epoch = 0;

    bool operator==(const CheckpointMeta&) const = default;
};

/// Checkpoint file layout: the magic bytes "GEMCAP", one format version
/// byte, a little-endian u32 length-prefixed UTF-8 JSON metadata block
/// (configs, vocabulary, metrics, parameter names and shapes), then every
/// parameter tensor as little-endian 64-bit floats in declaration order.
/// save -> load -> save is byte-identical.
void save_checkpoint(CaptionModel& model, const CheckpointMeta& meta, const std::string& path);

struct LoadedCheckpoint {
    CaptionModel model;
    CheckpointMeta meta;
};

LoadedCheckpoint load_checkpoint(const std::string& path);

} // namespace gemcap
