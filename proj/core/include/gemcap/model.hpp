#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gemcap/grammar.hpp"
#include "gemcap/layers.hpp"
#include "gemcap/render.hpp"
#include "gemcap/vocab.hpp"

namespace gemcap {

enum class CellKind { Gru, Lstm };

std::string cell_name(CellKind c);
CellKind cell_from_name(const std::string& name);

/// Convolutional encoder layout: conv3x3/relu/maxpool blocks, then a
/// dense projection to the feature vector. Spatial dims must be divisible
/// by 2^blocks.
struct EncoderConfig {
    int channels = 3;
    int height = 64;
    int width = 64;
    std::vector<int> blocks = {16, 32, 64};
    int feature_dim = 128;
    std::string scale_name = "vgg-s";

    void validate() const;
    bool operator==(const EncoderConfig&) const = default;
};

struct DecoderConfig {
    CellKind cell = CellKind::Gru;
    int hidden = 128;
    int embed_dim = 64;
    int max_len = 32;

    bool operator==(const DecoderConfig&) const = default;
};

enum class TaskKind { Classification, Captioning };

std::string task_name(TaskKind t);
TaskKind task_from_name(const std::string& name);

struct TaskSpec {
    TaskKind kind = TaskKind::Classification;
    DescriptionLevel level = DescriptionLevel::Basic; // captioning only

    bool operator==(const TaskSpec&) const = default;
};

struct ModelConfig {
    EncoderConfig encoder;
    DecoderConfig decoder;
    TaskSpec task;

    bool operator==(const ModelConfig&) const = default;
};

/// The CNN encoder: images [batch,3,h,w] -> features [batch,feature_dim].
class Encoder {
public:
    Encoder(EncoderConfig cfg, Rng& rng);

    struct Cache {
        std::vector<Conv2d::Cache> conv;
        std::vector<ReluCache> relu;
        std::vector<MaxPool2::Cache> pool;
        Dense::Cache proj;
        int batch = 0;
    };

    Tensor forward(const Tensor& images, Cache* cache = nullptr) const;
    Tensor backward(const Tensor& dfeatures, const Cache& cache); // returns dimages

    const EncoderConfig& config() const { return cfg_; }
    void collect_params(std::vector<Param*>& out);

private:
    EncoderConfig cfg_;
    std::vector<Conv2d> convs_;
    Dense proj_;
};

/// The recurrent decoder: feature-conditioned initial state, then
/// embed -> cell -> vocab head per step. The image enters only through
/// the initial state.
class Decoder {
public:
    Decoder(DecoderConfig cfg, int vocab_size, int feature_dim, Rng& rng);

    struct State {
        Tensor h, c; // c is empty for GRU
    };
    struct InitCache {
        Dense::Cache h_cache, c_cache;
        Tensor h0, c0; // post-tanh values
    };
    struct StepCache {
        Embedding::Cache embed;
        GruCell::Cache gru;
        LstmCell::Cache lstm;
        Dense::Cache head;
    };

    /// h0 = tanh(features.W + b); LSTM also c0 = tanh(features.Wc + bc).
    State init_state(const Tensor& features, InitCache* cache = nullptr) const;
    /// Gradient of init_state; returns dfeatures.
    Tensor init_state_backward(const Tensor& dh0, const Tensor& dc0, const InitCache& cache);

    /// One decode step; token ids as a rank-1 tensor of integral values.
    Tensor step(const Tensor& token_ids, State& state, StepCache* cache = nullptr) const;
    /// Gradient of one step. dlogits in, accumulates into the incoming
    /// state gradients (dh, dc) and returns nothing extra (token ids are
    /// discrete).
    void step_backward(const Tensor& dlogits, Tensor& dh, Tensor& dc, const StepCache& cache);

    const DecoderConfig& config() const { return cfg_; }
    int vocab_size() const { return head_.out_dim(); }
    void collect_params(std::vector<Param*>& out);

private:
    DecoderConfig cfg_;
    Dense init_h_;
    std::optional<Dense> init_c_;
    Embedding embed_;
    std::optional<GruCell> gru_;
    std::optional<LstmCell> lstm_;
    Dense head_;
};

/// Encoder + decoder + vocabulary: the trainable captioner. Parameter
/// order (encoder blocks, encoder projection, decoder init maps,
/// embedding, cell gates, vocab head) is the declaration order and fixes
/// the checkpoint layout.
class CaptionModel {
public:
    CaptionModel(ModelConfig cfg, Vocabulary vocab, std::uint64_t init_seed);

    /// Every trainable parameter in documented order.
    std::vector<Param*> params();

    /// Feature vector of one image [3,h,w].
    Tensor encode_image(const Tensor& image) const;

    /// Greedy decoding: start from <start>, argmax each step (lowest
    /// index wins ties), stop at <end> or max_len. The returned ids
    /// exclude <start>/<end>.
    std::vector<int> greedy_decode(const Tensor& image, int max_len = -1) const;

    /// Greedy tokens rendered as a display caption.
    std::string caption_image(const Tensor& image) const;

    /// One decode step from the initial state, argmax restricted to the
    /// four class tokens. Only valid for classification-task models.
    JewelryClass predict_class(const Tensor& image) const;

    const ModelConfig& config() const { return cfg_; }
    const Vocabulary& vocab() const { return vocab_; }
    Encoder& encoder() { return encoder_; }
    const Encoder& encoder() const { return encoder_; }
    Decoder& decoder() { return decoder_; }
    const Decoder& decoder() const { return decoder_; }

    /// Ids of the four class tokens in class order.
    std::array<int, 4> class_token_ids() const;

private:
    ModelConfig cfg_;
    Vocabulary vocab_;
    Encoder encoder_;
    Decoder decoder_;
};

/// Vocabulary for classification models: the reserved tokens plus the
/// four class terms.
Vocabulary classification_vocab();

} // namespace gemcap
