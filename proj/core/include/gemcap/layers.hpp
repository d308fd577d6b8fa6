#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gemcap/tensor.hpp"

namespace gemcap {

/// One trainable parameter: value plus gradient of the same shape.
struct Param {
    std::string name;
    Tensor value;
    Tensor grad;
};

/// Declaration-ordered set of named parameters. Iteration order is the
/// order of `add` calls and never changes; checkpoint layout depends on it.
class ParamMap {
public:
    Param& add(std::string name, Tensor init);
    Param& at(std::string_view name);
    const Param& at(std::string_view name) const;

    std::vector<Param>& items() { return items_; }
    const std::vector<Param>& items() const { return items_; }
    void zero_grads();

private:
    std::vector<Param> items_;
};

// ---------------------------------------------------------------------------
// Layers. Each has an explicit forward producing a cache and a backward
// consuming exactly that cache. Backward accumulates parameter gradients
// into params().grad and returns the input gradient.
// ---------------------------------------------------------------------------

/// Fully connected layer, y = x.W + b with x [batch, in], W [in, out].
class Dense {
public:
    /// `gain` scales the init variance: W ~ Normal(0, sqrt(gain / in_dim)).
    /// Use 2.0 when the output feeds a ReLU, 1.0 otherwise.
    Dense(int in_dim, int out_dim, double gain, Rng& rng);

    struct Cache {
        Tensor x;
    };

    Tensor forward(const Tensor& x, Cache* cache = nullptr) const;
    Tensor backward(const Tensor& dy, const Cache& cache);

    int in_dim() const { return in_dim_; }
    int out_dim() const { return out_dim_; }
    ParamMap& params() { return params_; }
    const ParamMap& params() const { return params_; }

private:
    int in_dim_, out_dim_;
    ParamMap params_;
};

/// 3x3 convolution, stride 1, zero padding of width 1 (cross-correlation:
/// no kernel flip). Output spatial dims equal input's. Weight shape is
/// [c_out, c_in, 3, 3].
class Conv2d {
public:
    Conv2d(int c_in, int c_out, Rng& rng);

    struct Cache {
        Tensor cols; // [batch*h*w, c_in*9]
        std::vector<int> x_shape;
    };

    Tensor forward(const Tensor& x, Cache* cache = nullptr) const;
    Tensor backward(const Tensor& dy, const Cache& cache);

    int c_in() const { return c_in_; }
    int c_out() const { return c_out_; }
    ParamMap& params() { return params_; }
    const ParamMap& params() const { return params_; }

private:
    int c_in_, c_out_;
    ParamMap params_;
};

/// 2x2 max pooling with stride 2. Spatial dims must be even. Backward
/// routes the gradient to the argmax position, lowest index among ties.
struct MaxPool2 {
    struct Cache {
        std::vector<std::size_t> argmax; // flat input index per output element
        std::vector<int> x_shape;
    };

    static Tensor forward(const Tensor& x, Cache* cache = nullptr);
    static Tensor backward(const Tensor& dy, const Cache& cache);
};

/// Elementwise max(x, 0). Subgradient at exactly 0 is 0.
struct ReluCache {
    std::vector<unsigned char> active;
    std::vector<int> x_shape;
};
Tensor relu(const Tensor& x, ReluCache* cache = nullptr);
Tensor relu_backward(const Tensor& dy, const ReluCache& cache);

/// Token embedding table E [vocab, dim]; forward is row lookup, backward
/// scatter-adds into dE. Token ids arrive as a rank-1 tensor of integral
/// values.
class Embedding {
public:
    Embedding(int vocab_size, int dim, Rng& rng);

    struct Cache {
        std::vector<int> ids;
    };

    Tensor forward(const Tensor& token_ids, Cache* cache = nullptr) const;
    void backward(const Tensor& dy, const Cache& cache);

    int vocab_size() const { return vocab_size_; }
    int dim() const { return dim_; }
    ParamMap& params() { return params_; }
    const ParamMap& params() const { return params_; }

private:
    int vocab_size_, dim_;
    ParamMap params_;
};

/// Gated recurrent unit cell:
///   z = sigmoid(x.Wz + h.Uz + bz)
///   r = sigmoid(x.Wr + h.Ur + br)
///   hbar = tanh(x.Wh + (r*h).Uh + bh)
///   h' = (1-z)*h + z*hbar
class GruCell {
public:
    GruCell(int in_dim, int hidden_dim, Rng& rng);

    struct Cache {
        Tensor x, h, z, r, hbar;
    };
    struct Grads {
        Tensor dx, dh;
    };

    Tensor forward(const Tensor& x, const Tensor& h, Cache* cache = nullptr) const;
    Grads backward(const Tensor& dh_next, const Cache& cache);

    int in_dim() const { return in_dim_; }
    int hidden_dim() const { return hidden_dim_; }
    ParamMap& params() { return params_; }
    const ParamMap& params() const { return params_; }

private:
    int in_dim_, hidden_dim_;
    ParamMap params_;
};

/// LSTM cell:
///   f,i,o = sigmoid(x.W* + h.U* + b*), g = tanh(x.Wg + h.Ug + bg)
///   c' = f*c + i*g
///   h' = o*tanh(c')
class LstmCell {
public:
    LstmCell(int in_dim, int hidden_dim, Rng& rng);

    struct State {
        Tensor h, c;
    };
    struct Cache {
        Tensor x, h, c, f, i, o, g, c_new;
    };
    struct Grads {
        Tensor dx, dh, dc;
    };

    State forward(const Tensor& x, const State& state, Cache* cache = nullptr) const;
    Grads backward(const Tensor& dh_next, const Tensor& dc_next, const Cache& cache);

    int in_dim() const { return in_dim_; }
    int hidden_dim() const { return hidden_dim_; }
    ParamMap& params() { return params_; }
    const ParamMap& params() const { return params_; }

private:
    int in_dim_, hidden_dim_;
    ParamMap params_;
};

/// Softmax cross-entropy over logits [batch, k] against integer targets.
/// Numerically stabilized by subtracting the row max. loss is the mean
/// negative log-likelihood; dlogits = (softmax - onehot) / batch.
struct SoftmaxXentResult {
    double loss;
    Tensor dlogits;
    Tensor probs;
};
SoftmaxXentResult softmax_xent(const Tensor& logits, const std::vector<int>& targets);

/// Row-masked variant for padded sequence batches. Masked-out rows
/// contribute nothing; loss is the plain sum over active rows and dlogits
/// rows are scaled by 1/denom (the caller supplies the global token count
/// so per-step calls compose into one mean).
SoftmaxXentResult softmax_xent_rows(const Tensor& logits, const std::vector<int>& targets,
                                    const std::vector<unsigned char>& active, int denom);

} // namespace gemcap
