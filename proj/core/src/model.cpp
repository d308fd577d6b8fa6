#include "gemcap/model.hpp"

#include <cmath>

#include "gemcap/error.hpp"

namespace gemcap {

std::string cell_name(CellKind c) {
    return c == CellKind::Gru ? "gru" : "lstm";
}

CellKind cell_from_name(const std::string& name) {
    if (name == "gru") return CellKind::Gru;
    if (name == "lstm") return CellKind::Lstm;
    throw Error("unknown cell kind: " + name);
}

std::string task_name(TaskKind t) {
    return t == TaskKind::Classification ? "classification" : "captioning";
}

TaskKind task_from_name(const std::string& name) {
    if (name == "classification") return TaskKind::Classification;
    if (name == "captioning") return TaskKind::Captioning;
    throw Error("unknown task: " + name);
}

void EncoderConfig::validate() const {
    if (blocks.empty() || feature_dim < 1 || channels < 1)
        throw InvalidShape("encoder config needs blocks and a positive feature_dim");
    const int factor = 1 << blocks.size();
    if (height % factor != 0 || width % factor != 0)
        throw InvalidShape("encoder input " + std::to_string(height) + "x" +
                           std::to_string(width) + " not divisible by 2^" +
                           std::to_string(blocks.size()));
}

// ------------------------------------------------------------------- Encoder

namespace {

std::vector<Conv2d> make_convs(const EncoderConfig& cfg, Rng& rng) {
    std::vector<Conv2d> convs;
    convs.reserve(cfg.blocks.size());
    int c_in = cfg.channels;
    for (int c_out : cfg.blocks) {
        convs.emplace_back(c_in, c_out, rng);
        c_in = c_out;
    }
    return convs;
}

int encoder_flat_dim(const EncoderConfig& cfg) {
    const int factor = 1 << cfg.blocks.size();
    return cfg.blocks.back() * (cfg.height / factor) * (cfg.width / factor);
}

} // namespace

Encoder::Encoder(EncoderConfig cfg, Rng& rng)
    : cfg_((cfg.validate(), std::move(cfg))),
      convs_(make_convs(cfg_, rng)),
      proj_(encoder_flat_dim(cfg_), cfg_.feature_dim, 1.0, rng) {}

Tensor Encoder::forward(const Tensor& images, Cache* cache) const {
    if (images.rank() != 4 || images.dim(1) != cfg_.channels ||
        images.dim(2) != cfg_.height || images.dim(3) != cfg_.width)
        throw ShapeMismatch("encoder expects [batch," + std::to_string(cfg_.channels) + "," +
                            std::to_string(cfg_.height) + "," + std::to_string(cfg_.width) +
                            "], got " + images.shape_str());
    const int batch = images.dim(0);
    if (cache) {
        cache->conv.resize(convs_.size());
        cache->relu.resize(convs_.size());
        cache->pool.resize(convs_.size());
        cache->batch = batch;
    }

    Tensor x = images;
    for (std::size_t b = 0; b < convs_.size(); ++b) {
        x = convs_[b].forward(x, cache ? &cache->conv[b] : nullptr);
        x = relu(x, cache ? &cache->relu[b] : nullptr);
        x = MaxPool2::forward(x, cache ? &cache->pool[b] : nullptr);
    }
    x = x.reshaped({batch, encoder_flat_dim(cfg_)});
    return proj_.forward(x, cache ? &cache->proj : nullptr);
}

Tensor Encoder::backward(const Tensor& dfeatures, const Cache& cache) {
    Tensor dx = proj_.backward(dfeatures, cache.proj);
    const int factor = 1 << cfg_.blocks.size();
    dx = dx.reshaped({cache.batch, cfg_.blocks.back(), cfg_.height / factor,
                      cfg_.width / factor});
    for (std::size_t b = convs_.size(); b-- > 0;) {
        dx = MaxPool2::backward(dx, cache.pool[b]);
        dx = relu_backward(dx, cache.relu[b]);
        dx = convs_[b].backward(dx, cache.conv[b]);
    }
    return dx;
}

void Encoder::collect_params(std::vector<Param*>& out) {
    for (auto& conv : convs_)
        for (auto& p : conv.params().items())
            out.push_back(&p);
    for (auto& p : proj_.params().items())
        out.push_back(&p);
}

// ------------------------------------------------------------------- Decoder

Decoder::Decoder(DecoderConfig cfg, int vocab_size, int feature_dim, Rng& rng)
    : cfg_(cfg),
      init_h_(feature_dim, cfg.hidden, 1.0, rng),
      init_c_(cfg.cell == CellKind::Lstm
                  ? std::optional<Dense>(std::in_place, feature_dim, cfg.hidden, 1.0, rng)
                  : std::nullopt),
      embed_(vocab_size, cfg.embed_dim, rng),
      gru_(cfg.cell == CellKind::Gru
               ? std::optional<GruCell>(std::in_place, cfg.embed_dim, cfg.hidden, rng)
               : std::nullopt),
      lstm_(cfg.cell == CellKind::Lstm
                ? std::optional<LstmCell>(std::in_place, cfg.embed_dim, cfg.hidden, rng)
                : std::nullopt),
      head_(cfg.hidden, vocab_size, 1.0, rng) {}

Decoder::State Decoder::init_state(const Tensor& features, InitCache* cache) const {
    Tensor h0 = init_h_.forward(features, cache ? &cache->h_cache : nullptr);
    for (double& v : h0.values())
        v = std::tanh(v);
    State state{h0, Tensor()};
    if (cfg_.cell == CellKind::Lstm) {
        Tensor c0 = init_c_->forward(features, cache ? &cache->c_cache : nullptr);
        for (double& v : c0.values())
            v = std::tanh(v);
        state.c = c0;
    }
    if (cache) {
        cache->h0 = state.h;
        cache->c0 = state.c;
    }
    return state;
}

Tensor Decoder::init_state_backward(const Tensor& dh0, const Tensor& dc0,
                                    const InitCache& cache) {
    Tensor dpre_h = dh0;
    for (std::size_t i = 0; i < dpre_h.size(); ++i)
        dpre_h[i] *= 1.0 - cache.h0[i] * cache.h0[i];
    Tensor dfeatures = init_h_.backward(dpre_h, cache.h_cache);

    if (cfg_.cell == CellKind::Lstm && !dc0.empty()) {
        Tensor dpre_c = dc0;
        for (std::size_t i = 0; i < dpre_c.size(); ++i)
            dpre_c[i] *= 1.0 - cache.c0[i] * cache.c0[i];
        Tensor more = init_c_->backward(dpre_c, cache.c_cache);
        dfeatures = ew(EwOp::Add, dfeatures, more);
    }
    return dfeatures;
}

Tensor Decoder::step(const Tensor& token_ids, State& state, StepCache* cache) const {
    Tensor x = embed_.forward(token_ids, cache ? &cache->embed : nullptr);
    if (cfg_.cell == CellKind::Gru) {
        state.h = gru_->forward(x, state.h, cache ? &cache->gru : nullptr);
    } else {
        LstmCell::State next =
            lstm_->forward(x, LstmCell::State{state.h, state.c}, cache ? &cache->lstm : nullptr);
        state.h = std::move(next.h);
        state.c = std::move(next.c);
    }
    return head_.forward(state.h, cache ? &cache->head : nullptr);
}

void Decoder::step_backward(const Tensor& dlogits, Tensor& dh, Tensor& dc,
                            const StepCache& cache) {
    Tensor dh_step = head_.backward(dlogits, cache.head);
    Tensor dh_total = dh.empty() ? dh_step : ew(EwOp::Add, dh_step, dh);

    if (cfg_.cell == CellKind::Gru) {
        GruCell::Grads grads = gru_->backward(dh_total, cache.gru);
        embed_.backward(grads.dx, cache.embed);
        dh = std::move(grads.dh);
    } else {
        Tensor dc_in = dc.empty() ? Tensor::zeros(dh_total.shape()) : dc;
        LstmCell::Grads grads = lstm_->backward(dh_total, dc_in, cache.lstm);
        embed_.backward(grads.dx, cache.embed);
        dh = std::move(grads.dh);
        dc = std::move(grads.dc);
    }
}

void Decoder::collect_params(std::vector<Param*>& out) {
    for (auto& p : init_h_.params().items())
        out.push_back(&p);
    if (init_c_)
        for (auto& p : init_c_->params().items())
            out.push_back(&p);
    for (auto& p : embed_.params().items())
        out.push_back(&p);
    if (gru_)
        for (auto& p : gru_->params().items())
            out.push_back(&p);
    if (lstm_)
        for (auto& p : lstm_->params().items())
            out.push_back(&p);
    for (auto& p : head_.params().items())
        out.push_back(&p);
}

// -------------------------------------------------------------- CaptionModel

namespace {

Rng model_rng(std::uint64_t seed) {
    return Rng::split(seed, 0xCA9);
}

Tensor batch_of_one(const Tensor& image, const EncoderConfig& cfg) {
    const std::vector<int> expected{cfg.channels, cfg.height, cfg.width};
    if (image.shape() != expected)
        throw ShapeMismatch("image shape " + image.shape_str() + " does not match the model's " +
                            Tensor::zeros(expected).shape_str());
    return image.reshaped({1, cfg.channels, cfg.height, cfg.width});
}

} // namespace

CaptionModel::CaptionModel(ModelConfig cfg, Vocabulary vocab, std::uint64_t init_seed)
    : cfg_(std::move(cfg)),
      vocab_(std::move(vocab)),
      encoder_([&] {
          Rng rng = model_rng(init_seed);
          return Encoder(cfg_.encoder, rng);
      }()),
      decoder_([&] {
          Rng rng = Rng::split(init_seed, 0xDEC);
          return Decoder(cfg_.decoder, vocab_.size(), cfg_.encoder.feature_dim, rng);
      }()) {}

std::vector<Param*> CaptionModel::params() {
    std::vector<Param*> out;
    encoder_.collect_params(out);
    decoder_.collect_params(out);
    return out;
}

Tensor CaptionModel::encode_image(const Tensor& image) const {
    const Tensor batch = batch_of_one(image, cfg_.encoder);
    Tensor features = encoder_.forward(batch);
    return features.reshaped({cfg_.encoder.feature_dim});
}

std::vector<int> CaptionModel::greedy_decode(const Tensor& image, int max_len) const {
    if (max_len < 0)
        max_len = cfg_.decoder.max_len;
    const Tensor batch = batch_of_one(image, cfg_.encoder);
    const Tensor features = encoder_.forward(batch);
    Decoder::State state = decoder_.init_state(features);

    std::vector<int> out;
    int prev = Vocabulary::kStart;
    for (int t = 0; t < max_len; ++t) {
        const Tensor ids = Tensor::from_values({static_cast<double>(prev)});
        const Tensor logits = decoder_.step(ids, state);
        int best = 0;
        for (int k = 1; k < logits.dim(1); ++k)
            if (logits.at(0, k) > logits.at(0, best)) // strict >: lowest index wins ties
                best = k;
        if (best == Vocabulary::kEnd)
            break;
        out.push_back(best);
        prev = best;
    }
    return out;
}

std::string CaptionModel::caption_image(const Tensor& image) const {
    const std::vector<int> ids = greedy_decode(image);
    return sentence_case(detokenize(vocab_.decode(ids)));
}

std::array<int, 4> CaptionModel::class_token_ids() const {
    std::array<int, 4> ids{};
    for (int k = 0; k < 4; ++k)
        ids[static_cast<std::size_t>(k)] =
            vocab_.id_of(class_name(kClassOrder[static_cast<std::size_t>(k)]));
    return ids;
}

JewelryClass CaptionModel::predict_class(const Tensor& image) const {
    if (cfg_.task.kind != TaskKind::Classification)
        throw TaskMismatch("predict_class on a " + task_name(cfg_.task.kind) + " model");
    const Tensor batch = batch_of_one(image, cfg_.encoder);
    const Tensor features = encoder_.forward(batch);
    Decoder::State state = decoder_.init_state(features);
    const Tensor ids = Tensor::from_values({static_cast<double>(Vocabulary::kStart)});
    const Tensor logits = decoder_.step(ids, state);

    const std::array<int, 4> tokens = class_token_ids();
    int best = 0;
    for (int k = 1; k < 4; ++k)
        if (logits.at(0, tokens[static_cast<std::size_t>(k)]) >
            logits.at(0, tokens[static_cast<std::size_t>(best)]))
            best = k;
    return kClassOrder[static_cast<std::size_t>(best)];
}

Vocabulary classification_vocab() {
    std::vector<std::vector<std::string>> lists;
    for (JewelryClass c : kClassOrder)
        lists.push_back({class_name(c)});
    return Vocabulary::from_token_lists(lists);
}

} // namespace gemcap
