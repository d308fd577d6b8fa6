#include "gemcap/grid.hpp"

#include <limits>

#include "gemcap/error.hpp"

namespace gemcap {

GridAxes paper_grid_axes() {
    return GridAxes{{64, 128, 256, 512, 1024},
                    {4, 8, 32, 128, 512},
                    {0.0001, 0.001, 0.01, 0.1},
                    {OptKind::Adam, OptKind::Adagrad, OptKind::Adadelta, OptKind::RMSProp}};
}

std::vector<GridPoint> enumerate_grid(const GridAxes& axes) {
    std::vector<GridPoint> points;
    points.reserve(axes.neurons.size() * axes.batch_sizes.size() *
                   axes.learning_rates.size() * axes.optimizers.size());
    for (int n : axes.neurons)
        for (int b : axes.batch_sizes)
            for (double lr : axes.learning_rates)
                for (OptKind opt : axes.optimizers)
                    points.push_back(GridPoint{n, b, lr, opt});
    return points;
}

std::vector<GridOutcome> run_grid(const Manifest& manifest, const std::string& manifest_dir,
                                  const ModelConfig& base_model, const TrainConfig& base_train,
                                  const GridAxes& axes, const Lexicon& lexicon) {
    const std::vector<GridPoint> points = enumerate_grid(axes);
    std::vector<GridOutcome> outcomes;
    outcomes.reserve(points.size());

    const Vocabulary vocab = task_vocabulary(manifest, base_model.task, lexicon);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const GridPoint& pt = points[i];
        ModelConfig model_cfg = base_model;
        model_cfg.decoder.hidden = pt.neurons;
        TrainConfig train_cfg = base_train;
        train_cfg.batch_size = pt.batch_size;
        train_cfg.optimizer = OptimizerConfig::make(pt.optimizer, pt.learning_rate);
        train_cfg.seed = Rng::split(base_train.seed, i).state();

        GridOutcome outcome;
        outcome.point = pt;
        outcome.row.cnn = model_cfg.encoder.scale_name;
        outcome.row.rnn = cell_name(model_cfg.decoder.cell);
        outcome.row.neurons = pt.neurons;
        try {
            CaptionModel model(model_cfg, vocab, train_cfg.seed);
            const TrainResult result = train(model, manifest, manifest_dir, train_cfg, lexicon);
            outcome.row.val_ccr = result.best.best_val_ccr;
            outcome.row.val_loss = result.best.best_val_loss;
            const MetricsReport test =
                evaluate(model, manifest, manifest_dir, Split::Test, lexicon);
            outcome.row.test_ccr = test.ccr;
        } catch (const TrainingDiverged&) {
            outcome.diverged = true;
            outcome.row.val_ccr = 0.0;
            outcome.row.val_loss = std::numeric_limits<double>::infinity();
            outcome.row.test_ccr = 0.0;
        }
        outcomes.push_back(std::move(outcome));
    }
    return outcomes;
}

std::vector<ResultRow> grid_rows(const std::vector<GridOutcome>& outcomes) {
    std::vector<ResultRow> rows;
    rows.reserve(outcomes.size());
    for (const auto& o : outcomes)
        rows.push_back(o.row);
    return rows;
}

} // namespace gemcap
