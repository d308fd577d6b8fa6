#pragma once

#include <string>
#include <vector>

#include "gemcap/train.hpp"

namespace gemcap {

/// Hyperparameter axes for a grid sweep.
struct GridAxes {
    std::vector<int> neurons;
    std::vector<int> batch_sizes;
    std::vector<double> learning_rates;
    std::vector<OptKind> optimizers;
};

/// The full reference sweep: 5 neuron counts x 5 batch sizes x 4 learning
/// rates x 4 optimizers = 400 points per (cell, encoder-scale) pair.
GridAxes paper_grid_axes();

struct GridPoint {
    int neurons = 0;
    int batch_size = 0;
    double learning_rate = 0.0;
    OptKind optimizer = OptKind::Adam;
};

/// Fixed enumeration order: neurons outermost, then batch size, learning
/// rate, optimizer.
std::vector<GridPoint> enumerate_grid(const GridAxes& axes);

struct GridOutcome {
    GridPoint point;
    ResultRow row;
    bool diverged = false;
};

/// Trains one model per grid point (decoder hidden width, batch size,
/// learning rate and optimizer overridden per point; per-point seeds are
/// split from the base seed by enumeration index) and records validation
/// CCR/loss and test CCR. Divergence is recorded on the row, not fatal.
/// Result order equals enumeration order regardless of scheduling.
std::vector<GridOutcome> run_grid(const Manifest& manifest, const std::string& manifest_dir,
                                  const ModelConfig& base_model, const TrainConfig& base_train,
                                  const GridAxes& axes, const Lexicon& lexicon);

/// Table rows for render_report, in enumeration order.
std::vector<ResultRow> grid_rows(const std::vector<GridOutcome>& outcomes);

} // namespace gemcap
