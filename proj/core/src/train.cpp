#include "gemcap/train.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "gemcap/error.hpp"
#include "gemcap/grammar.hpp"

namespace gemcap {

double sequence_loss(CaptionModel& model, const Tensor& images,
                     const std::vector<std::vector<int>>& sequences, bool backprop,
                     Tensor* dimages) {
    const int batch = images.dim(0);
    if (static_cast<int>(sequences.size()) != batch)
        throw ShapeMismatch("sequence_loss: batch of " + std::to_string(batch) + " images vs " +
                            std::to_string(sequences.size()) + " sequences");
    const bool captioning = model.config().task.kind == TaskKind::Captioning;

    // build padded input/target matrices; inputs start with <start>
    std::size_t steps = 0;
    for (const auto& seq : sequences)
        steps = std::max(steps, seq.size() + (captioning ? 1 : 0)); // +1 for <end>
    steps = std::max<std::size_t>(steps, 1);

    std::vector<std::vector<int>> inputs(steps, std::vector<int>(batch, Vocabulary::kPad));
    std::vector<std::vector<int>> targets(steps, std::vector<int>(batch, Vocabulary::kPad));
    std::vector<std::vector<unsigned char>> active(steps,
                                                   std::vector<unsigned char>(batch, 0));
    int denom = 0;
    for (int b = 0; b < batch; ++b) {
        const auto& seq = sequences[static_cast<std::size_t>(b)];
        const std::size_t n = seq.size() + (captioning ? 1 : 0);
        for (std::size_t t = 0; t < n; ++t) {
            inputs[t][static_cast<std::size_t>(b)] =
                t == 0 ? Vocabulary::kStart : seq[t - 1];
            targets[t][static_cast<std::size_t>(b)] =
                t < seq.size() ? seq[t] : Vocabulary::kEnd;
            active[t][static_cast<std::size_t>(b)] = 1;
            ++denom;
        }
    }
    if (denom == 0)
        throw DatasetError("sequence_loss: no target tokens in batch");

    // forward
    Encoder::Cache enc_cache;
    const Tensor features = model.encoder().forward(images, backprop ? &enc_cache : nullptr);
    Decoder::InitCache init_cache;
    Decoder::State state =
        model.decoder().init_state(features, backprop ? &init_cache : nullptr);

    std::vector<Decoder::StepCache> step_caches(backprop ? steps : 0);
    std::vector<Tensor> dlogits_per_step(steps);
    double loss_sum = 0.0;
    for (std::size_t t = 0; t < steps; ++t) {
        Tensor ids = Tensor::zeros({batch});
        for (int b = 0; b < batch; ++b)
            ids[static_cast<std::size_t>(b)] =
                static_cast<double>(inputs[t][static_cast<std::size_t>(b)]);
        const Tensor logits =
            model.decoder().step(ids, state, backprop ? &step_caches[t] : nullptr);
        SoftmaxXentResult res = softmax_xent_rows(logits, targets[t], active[t], denom);
        loss_sum += res.loss;
        if (backprop)
            dlogits_per_step[t] = std::move(res.dlogits);
    }
    const double loss = loss_sum / static_cast<double>(denom);
    if (!std::isfinite(loss))
        throw TrainingDiverged("sequence loss is not finite");

    if (backprop) {
        Tensor dh, dc;
        for (std::size_t t = steps; t-- > 0;)
            model.decoder().step_backward(dlogits_per_step[t], dh, dc, step_caches[t]);
        const Tensor dfeatures = model.decoder().init_state_backward(dh, dc, init_cache);
        Tensor dimg = model.encoder().backward(dfeatures, enc_cache);
        if (dimages)
            *dimages = std::move(dimg);
    }
    return loss;
}

std::vector<int> target_sequence(const Sample& sample, const TaskSpec& task,
                                 const Vocabulary& vocab, const Lexicon& lexicon) {
    if (task.kind == TaskKind::Classification)
        return {vocab.id_of(class_name(sample.class_label))};
    const std::string* caption = &sample.caption_normal;
    switch (task.level) {
    case DescriptionLevel::Basic: caption = &sample.caption_basic; break;
    case DescriptionLevel::Normal: caption = &sample.caption_normal; break;
    case DescriptionLevel::Complete: caption = &sample.caption_complete; break;
    }
    return vocab.encode(tokenize(*caption, lexicon));
}

Vocabulary task_vocabulary(const Manifest& manifest, const TaskSpec& task,
                           const Lexicon& lexicon) {
    if (task.kind == TaskKind::Classification)
        return classification_vocab();
    std::vector<std::string> captions;
    for (const Sample& s : manifest.samples) {
        if (s.split != Split::Train)
            continue;
        switch (task.level) {
        case DescriptionLevel::Basic: captions.push_back(s.caption_basic); break;
        case DescriptionLevel::Normal: captions.push_back(s.caption_normal); break;
        case DescriptionLevel::Complete: captions.push_back(s.caption_complete); break;
        }
    }
    return Vocabulary::build(captions, lexicon);
}

namespace {

Tensor stack_images(const std::vector<Tensor>& images, const std::vector<std::size_t>& order,
                    std::size_t begin, std::size_t end) {
    const Tensor& first = images[order[begin]];
    const int c = first.dim(0), h = first.dim(1), w = first.dim(2);
    Tensor batch = Tensor::zeros({static_cast<int>(end - begin), c, h, w});
    const std::size_t plane = static_cast<std::size_t>(c) * h * w;
    for (std::size_t i = begin; i < end; ++i)
        std::copy_n(images[order[i]].data(), plane, batch.data() + (i - begin) * plane);
    return batch;
}

const std::string& caption_at(const Sample& s, DescriptionLevel level) {
    switch (level) {
    case DescriptionLevel::Basic: return s.caption_basic;
    case DescriptionLevel::Normal: return s.caption_normal;
    case DescriptionLevel::Complete: return s.caption_complete;
    }
    return s.caption_normal;
}

double validation_ccr(const CaptionModel& model, const Manifest& manifest,
                      const std::vector<Tensor>& images, const std::vector<std::size_t>& idx,
                      const Lexicon& lexicon) {
    if (idx.empty())
        return 0.0;
    if (model.config().task.kind == TaskKind::Classification) {
        long hits = 0;
        for (std::size_t i : idx)
            hits += model.predict_class(images[i]) == manifest.samples[i].class_label;
        return static_cast<double>(hits) / static_cast<double>(idx.size());
    }
    std::vector<std::string> generated, gold;
    for (std::size_t i : idx) {
        generated.push_back(model.caption_image(images[i]));
        gold.push_back(caption_at(manifest.samples[i], model.config().task.level));
    }
    return exact_match(generated, gold, lexicon);
}

} // namespace

TrainResult train(CaptionModel& model, const Manifest& manifest,
                  const std::string& manifest_dir, const TrainConfig& config,
                  const Lexicon& lexicon) {
    const std::vector<std::size_t> train_idx = split_indices(manifest, Split::Train);
    const std::vector<std::size_t> val_idx = split_indices(manifest, Split::Val);
    if (config.max_epochs < 1)
        throw DatasetError("max_epochs must be at least 1");
    if (train_idx.empty())
        throw DatasetError("training needs a non-empty train split");
    if (val_idx.empty())
        throw DatasetError("training needs a non-empty val split");

    // load every needed image once
    std::vector<Tensor> images(manifest.samples.size());
    for (std::size_t i : train_idx)
        images[i] = load_sample_image(manifest.samples[i], manifest_dir);
    for (std::size_t i : val_idx)
        images[i] = load_sample_image(manifest.samples[i], manifest_dir);

    std::vector<std::vector<int>> sequences(manifest.samples.size());
    for (std::size_t i : train_idx)
        sequences[i] =
            target_sequence(manifest.samples[i], model.config().task, model.vocab(), lexicon);
    for (std::size_t i : val_idx)
        sequences[i] =
            target_sequence(manifest.samples[i], model.config().task, model.vocab(), lexicon);

    Optimizer optimizer(config.optimizer);
    const std::vector<Param*> params = model.params();
    EarlyStop stopper{.patience = config.patience};

    TrainResult result;
    std::vector<Tensor> best_weights;
    std::vector<std::size_t> order = train_idx;

    for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
        // seeded shuffle, new stream per epoch
        Rng shuffle_rng = Rng::split(config.seed, static_cast<std::uint64_t>(epoch));
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[shuffle_rng.next_below(i)]);

        double train_loss_sum = 0.0;
        long train_tokens = 0;
        for (std::size_t at = 0; at < order.size(); at += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t end =
                std::min(order.size(), at + static_cast<std::size_t>(config.batch_size));
            Tensor batch = stack_images(images, order, at, end);
            std::vector<std::vector<int>> seqs;
            long tokens = 0;
            for (std::size_t i = at; i < end; ++i) {
                seqs.push_back(sequences[order[i]]);
                tokens += static_cast<long>(sequences[order[i]].size()) +
                          (model.config().task.kind == TaskKind::Captioning ? 1 : 0);
            }
            const double loss = sequence_loss(model, batch, seqs, true);
            optimizer.step(params);
            train_loss_sum += loss * static_cast<double>(tokens);
            train_tokens += tokens;
        }
        const double train_loss = train_loss_sum / static_cast<double>(train_tokens);

        // validation loss (teacher forced, no backprop)
        double val_loss_sum = 0.0;
        long val_tokens = 0;
        for (std::size_t at = 0; at < val_idx.size(); at += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t end =
                std::min(val_idx.size(), at + static_cast<std::size_t>(config.batch_size));
            Tensor batch = stack_images(images, val_idx, at, end);
            std::vector<std::vector<int>> seqs;
            long tokens = 0;
            for (std::size_t i = at; i < end; ++i) {
                seqs.push_back(sequences[val_idx[i]]);
                tokens += static_cast<long>(sequences[val_idx[i]].size()) +
                          (model.config().task.kind == TaskKind::Captioning ? 1 : 0);
            }
            val_loss_sum += sequence_loss(model, batch, seqs, false) *
                            static_cast<double>(tokens);
            val_tokens += tokens;
        }
        const double val_loss = val_loss_sum / static_cast<double>(val_tokens);
        const double val_ccr = validation_ccr(model, manifest, images, val_idx, lexicon);

        result.log.push_back(EpochLog{epoch, train_loss, val_loss, val_ccr});
        result.epochs_ran = epoch;

        const StopDecision decision = early_stop_update(stopper, val_loss);
        if (stopper.best_epoch == epoch) {
            best_weights.clear();
            for (const Param* p : params)
                best_weights.push_back(p->value);
            result.best = CheckpointMeta{val_loss, val_ccr, epoch};
        }
        if (decision == StopDecision::Stop) {
            result.stopped_early = true;
            break;
        }
    }

    // restore the reported (best-epoch) weights
    for (std::size_t i = 0; i < params.size(); ++i)
        params[i]->value = best_weights[i];
    return result;
}

MetricsReport evaluate(const CaptionModel& model, const Manifest& manifest,
                       const std::string& manifest_dir, Split split, const Lexicon& lexicon) {
    const std::vector<std::size_t> idx = split_indices(manifest, split);
    if (idx.empty())
        throw EmptyEvaluation("no samples in split " + split_name(split));

    if (model.config().task.kind == TaskKind::Classification) {
        std::vector<JewelryClass> predictions, labels;
        for (std::size_t i : idx) {
            const Tensor image = load_sample_image(manifest.samples[i], manifest_dir);
            predictions.push_back(model.predict_class(image));
            labels.push_back(manifest.samples[i].class_label);
        }
        return metrics_report(predictions, labels);
    }

    std::vector<std::string> generated, gold;
    for (std::size_t i : idx) {
        const Tensor image = load_sample_image(manifest.samples[i], manifest_dir);
        generated.push_back(model.caption_image(image));
        gold.push_back(caption_at(manifest.samples[i], model.config().task.level));
    }
    MetricsReport report;
    report.caption_exact_match = exact_match(generated, gold, lexicon);
    report.ccr = *report.caption_exact_match; // captioning CCR is exact match
    report.warnings.push_back("captioning run: per-class metrics apply to classification runs");
    return report;
}

std::string epoch_log_line(const EpochLog& entry) {
    nlohmann::json j;
    j["epoch"] = entry.epoch;
    j["train_loss"] = entry.train_loss;
    j["val_loss"] = entry.val_loss;
    j["val_ccr"] = entry.val_ccr;
    return j.dump();
}

} // namespace gemcap
