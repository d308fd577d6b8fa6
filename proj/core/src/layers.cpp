#include "gemcap/layers.hpp"

#include <algorithm>
#include <cmath>

#include "gemcap/error.hpp"

namespace gemcap {

Param& ParamMap::add(std::string name, Tensor init) {
    for (const auto& p : items_)
        if (p.name == name)
            throw InvalidShape("duplicate parameter name: " + name);
    Tensor grad = Tensor::zeros(init.shape());
    items_.push_back(Param{std::move(name), std::move(init), std::move(grad)});
    return items_.back();
}

Param& ParamMap::at(std::string_view name) {
    for (auto& p : items_)
        if (p.name == name)
            return p;
    throw InvalidShape("unknown parameter: " + std::string(name));
}

const Param& ParamMap::at(std::string_view name) const {
    for (const auto& p : items_)
        if (p.name == name)
            return p;
    throw InvalidShape("unknown parameter: " + std::string(name));
}

void ParamMap::zero_grads() {
    for (auto& p : items_)
        p.grad.fill(0.0);
}

namespace {

void add_row_bias(Tensor& m, const Tensor& b) {
    const int rows = m.dim(0), cols = m.dim(1);
    double* mp = m.data();
    const double* bp = b.data();
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            mp[static_cast<std::size_t>(i) * cols + j] += bp[j];
}

void accumulate_col_sums(const Tensor& m, Tensor& out) {
    const int rows = m.dim(0), cols = m.dim(1);
    const double* mp = m.data();
    double* op = out.data();
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            op[j] += mp[static_cast<std::size_t>(i) * cols + j];
}

void accumulate(Tensor& dst, const Tensor& src) {
    double* d = dst.data();
    const double* s = src.data();
    for (std::size_t i = 0; i < dst.size(); ++i)
        d[i] += s[i];
}

Tensor map_sigmoid(const Tensor& x) {
    Tensor y = x;
    for (double& v : y.values())
        v = 1.0 / (1.0 + std::exp(-v));
    return y;
}

Tensor map_tanh(const Tensor& x) {
    Tensor y = x;
    for (double& v : y.values())
        v = std::tanh(v);
    return y;
}

} // namespace

// --------------------------------------------------------------------- Dense

Dense::Dense(int in_dim, int out_dim, double gain, Rng& rng)
    : in_dim_(in_dim), out_dim_(out_dim) {
    params_.add("W", Tensor::normal({in_dim, out_dim}, 0.0,
                                    std::sqrt(gain / static_cast<double>(in_dim)), rng));
    params_.add("b", Tensor::zeros({out_dim}));
}

Tensor Dense::forward(const Tensor& x, Cache* cache) const {
    if (x.rank() != 2 || x.dim(1) != in_dim_)
        throw ShapeMismatch("dense expects [batch," + std::to_string(in_dim_) + "], got " +
                            x.shape_str());
    Tensor y = matmul(x, params_.at("W").value);
    add_row_bias(y, params_.at("b").value);
    if (cache)
        cache->x = x;
    return y;
}

Tensor Dense::backward(const Tensor& dy, const Cache& cache) {
    accumulate(params_.at("W").grad, matmul(transpose(cache.x), dy));
    accumulate_col_sums(dy, params_.at("b").grad);
    return matmul(dy, transpose(params_.at("W").value));
}

// -------------------------------------------------------------------- Conv2d

namespace {

constexpr int kK = 3; // kernel edge; padding 1 keeps spatial dims

// cols[(b*h + i)*w + j, c*9 + ki*3 + kj] = x[b, c, i+ki-1, j+kj-1] (0 outside)
Tensor im2col(const Tensor& x) {
    const int batch = x.dim(0), c_in = x.dim(1), h = x.dim(2), w = x.dim(3);
    Tensor cols = Tensor::zeros({batch * h * w, c_in * kK * kK});
    const double* xp = x.data();
    double* cp = cols.data();
    const std::size_t row_len = static_cast<std::size_t>(c_in) * kK * kK;
    for (int b = 0; b < batch; ++b) {
        for (int i = 0; i < h; ++i) {
            for (int j = 0; j < w; ++j) {
                double* row = cp + (static_cast<std::size_t>(b) * h * w +
                                    static_cast<std::size_t>(i) * w + j) * row_len;
                for (int c = 0; c < c_in; ++c) {
                    const double* plane = xp + (static_cast<std::size_t>(b) * c_in + c) * h * w;
                    for (int ki = 0; ki < kK; ++ki) {
                        const int si = i + ki - 1;
                        if (si < 0 || si >= h)
                            continue;
                        for (int kj = 0; kj < kK; ++kj) {
                            const int sj = j + kj - 1;
                            if (sj < 0 || sj >= w)
                                continue;
                            row[c * kK * kK + ki * kK + kj] =
                                plane[static_cast<std::size_t>(si) * w + sj];
                        }
                    }
                }
            }
        }
    }
    return cols;
}

void col2im_accumulate(const Tensor& cols, Tensor& dx) {
    const int batch = dx.dim(0), c_in = dx.dim(1), h = dx.dim(2), w = dx.dim(3);
    const double* cp = cols.data();
    double* xp = dx.data();
    const std::size_t row_len = static_cast<std::size_t>(c_in) * kK * kK;
    for (int b = 0; b < batch; ++b) {
        for (int i = 0; i < h; ++i) {
            for (int j = 0; j < w; ++j) {
                const double* row = cp + (static_cast<std::size_t>(b) * h * w +
                                          static_cast<std::size_t>(i) * w + j) * row_len;
                for (int c = 0; c < c_in; ++c) {
                    double* plane = xp + (static_cast<std::size_t>(b) * c_in + c) * h * w;
                    for (int ki = 0; ki < kK; ++ki) {
                        const int si = i + ki - 1;
                        if (si < 0 || si >= h)
                            continue;
                        for (int kj = 0; kj < kK; ++kj) {
                            const int sj = j + kj - 1;
                            if (sj < 0 || sj >= w)
                                continue;
                            plane[static_cast<std::size_t>(si) * w + sj] +=
                                row[c * kK * kK + ki * kK + kj];
                        }
                    }
                }
            }
        }
    }
}

// [c_out, c_in, 3, 3] -> [c_in*9, c_out]
Tensor pack_weights(const Tensor& w) {
    const int c_out = w.dim(0), c_in = w.dim(1);
    Tensor packed = Tensor::zeros({c_in * kK * kK, c_out});
    for (int co = 0; co < c_out; ++co)
        for (int t = 0; t < c_in * kK * kK; ++t)
            packed.at(t, co) = w[static_cast<std::size_t>(co) * c_in * kK * kK + t];
    return packed;
}

} // namespace

Conv2d::Conv2d(int c_in, int c_out, Rng& rng) : c_in_(c_in), c_out_(c_out) {
    const double stddev = std::sqrt(2.0 / static_cast<double>(c_in * kK * kK));
    params_.add("W", Tensor::normal({c_out, c_in, kK, kK}, 0.0, stddev, rng));
    params_.add("b", Tensor::zeros({c_out}));
}

Tensor Conv2d::forward(const Tensor& x, Cache* cache) const {
    if (x.rank() != 4 || x.dim(1) != c_in_)
        throw ShapeMismatch("conv2d expects [batch," + std::to_string(c_in_) +
                            ",h,w], got " + x.shape_str());
    const int batch = x.dim(0), h = x.dim(2), w = x.dim(3);

    Tensor cols = im2col(x);
    Tensor y_mat = matmul(cols, pack_weights(params_.at("W").value)); // [b*h*w, c_out]

    Tensor y = Tensor::zeros({batch, c_out_, h, w});
    const double* bias = params_.at("b").value.data();
    const double* ym = y_mat.data();
    double* yp = y.data();
    for (int b = 0; b < batch; ++b)
        for (int i = 0; i < h; ++i)
            for (int j = 0; j < w; ++j) {
                const double* src = ym + (static_cast<std::size_t>(b) * h * w +
                                          static_cast<std::size_t>(i) * w + j) * c_out_;
                for (int co = 0; co < c_out_; ++co)
                    yp[((static_cast<std::size_t>(b) * c_out_ + co) * h + i) * w + j] =
                        src[co] + bias[co];
            }

    if (cache) {
        cache->cols = std::move(cols);
        cache->x_shape = x.shape();
    }
    return y;
}

Tensor Conv2d::backward(const Tensor& dy, const Cache& cache) {
    const int batch = cache.x_shape[0], h = cache.x_shape[2], w = cache.x_shape[3];

    // [batch, c_out, h, w] -> [b*h*w, c_out]
    Tensor dy_mat = Tensor::zeros({batch * h * w, c_out_});
    const double* dp = dy.data();
    double* dm = dy_mat.data();
    for (int b = 0; b < batch; ++b)
        for (int co = 0; co < c_out_; ++co)
            for (int i = 0; i < h; ++i)
                for (int j = 0; j < w; ++j)
                    dm[(static_cast<std::size_t>(b) * h * w +
                        static_cast<std::size_t>(i) * w + j) * c_out_ + co] =
                        dp[((static_cast<std::size_t>(b) * c_out_ + co) * h + i) * w + j];

    accumulate_col_sums(dy_mat, params_.at("b").grad);

    Tensor dw_packed = matmul(transpose(cache.cols), dy_mat); // [c_in*9, c_out]
    Tensor& dw = params_.at("W").grad;
    for (int co = 0; co < c_out_; ++co)
        for (int t = 0; t < c_in_ * kK * kK; ++t)
            dw[static_cast<std::size_t>(co) * c_in_ * kK * kK + t] += dw_packed.at(t, co);

    Tensor dcols = matmul(dy_mat, transpose(pack_weights(params_.at("W").value)));
    Tensor dx = Tensor::zeros(cache.x_shape);
    col2im_accumulate(dcols, dx);
    return dx;
}

// ------------------------------------------------------------------ MaxPool2

Tensor MaxPool2::forward(const Tensor& x, Cache* cache) {
    if (x.rank() != 4)
        throw InvalidShape("maxpool2 expects rank-4 input, got " + x.shape_str());
    const int batch = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
    if (h % 2 != 0 || w % 2 != 0)
        throw InvalidShape("maxpool2 needs even spatial dims, got " + x.shape_str());

    const int oh = h / 2, ow = w / 2;
    Tensor y = Tensor::zeros({batch, c, oh, ow});
    std::vector<std::size_t> argmax(y.size());
    const double* xp = x.data();
    double* yp = y.data();
    std::size_t out = 0;
    for (int b = 0; b < batch; ++b)
        for (int ch = 0; ch < c; ++ch) {
            const double* plane = xp + (static_cast<std::size_t>(b) * c + ch) * h * w;
            const std::size_t plane_off = (static_cast<std::size_t>(b) * c + ch) *
                                          static_cast<std::size_t>(h) * w;
            for (int i = 0; i < oh; ++i)
                for (int j = 0; j < ow; ++j) {
                    std::size_t best_idx = 0;
                    double best = -1.0;
                    bool first = true;
                    for (int di = 0; di < 2; ++di)
                        for (int dj = 0; dj < 2; ++dj) {
                            const std::size_t idx =
                                static_cast<std::size_t>(2 * i + di) * w + (2 * j + dj);
                            // strict > keeps the lowest index among ties
                            if (first || plane[idx] > best) {
                                best = plane[idx];
                                best_idx = idx;
                                first = false;
                            }
                        }
                    yp[out] = best;
                    argmax[out] = plane_off + best_idx;
                    ++out;
                }
        }
    if (cache) {
        cache->argmax = std::move(argmax);
        cache->x_shape = x.shape();
    }
    return y;
}

Tensor MaxPool2::backward(const Tensor& dy, const Cache& cache) {
    Tensor dx = Tensor::zeros(cache.x_shape);
    const double* dp = dy.data();
    double* xp = dx.data();
    for (std::size_t i = 0; i < dy.size(); ++i)
        xp[cache.argmax[i]] += dp[i];
    return dx;
}

// ---------------------------------------------------------------------- ReLU

Tensor relu(const Tensor& x, ReluCache* cache) {
    Tensor y = x;
    std::vector<unsigned char> active(x.size());
    double* yp = y.data();
    for (std::size_t i = 0; i < y.size(); ++i) {
        active[i] = yp[i] > 0.0;
        if (!active[i])
            yp[i] = 0.0;
    }
    if (cache) {
        cache->active = std::move(active);
        cache->x_shape = x.shape();
    }
    return y;
}

Tensor relu_backward(const Tensor& dy, const ReluCache& cache) {
    Tensor dx = dy;
    double* dp = dx.data();
    for (std::size_t i = 0; i < dx.size(); ++i)
        if (!cache.active[i])
            dp[i] = 0.0;
    return dx;
}

// ----------------------------------------------------------------- Embedding

Embedding::Embedding(int vocab_size, int dim, Rng& rng)
    : vocab_size_(vocab_size), dim_(dim) {
    params_.add("E", Tensor::normal({vocab_size, dim}, 0.0,
                                    std::sqrt(1.0 / static_cast<double>(dim)), rng));
}

Tensor Embedding::forward(const Tensor& token_ids, Cache* cache) const {
    if (token_ids.rank() != 1)
        throw ShapeMismatch("embedding expects rank-1 ids, got " + token_ids.shape_str());
    const int batch = token_ids.dim(0);
    std::vector<int> ids(static_cast<std::size_t>(batch));
    for (int i = 0; i < batch; ++i) {
        const int id = static_cast<int>(token_ids[static_cast<std::size_t>(i)]);
        if (id < 0 || id >= vocab_size_)
            throw VocabOverflow("token id " + std::to_string(id) + " outside vocab of " +
                                std::to_string(vocab_size_));
        ids[static_cast<std::size_t>(i)] = id;
    }

    const Tensor& table = params_.at("E").value;
    Tensor y = Tensor::zeros({batch, dim_});
    for (int i = 0; i < batch; ++i)
        std::copy_n(table.data() + static_cast<std::size_t>(ids[static_cast<std::size_t>(i)]) * dim_,
                    dim_, y.data() + static_cast<std::size_t>(i) * dim_);
    if (cache)
        cache->ids = std::move(ids);
    return y;
}

void Embedding::backward(const Tensor& dy, const Cache& cache) {
    Tensor& grad = params_.at("E").grad;
    for (std::size_t i = 0; i < cache.ids.size(); ++i) {
        const double* src = dy.data() + i * dim_;
        double* dst = grad.data() + static_cast<std::size_t>(cache.ids[i]) * dim_;
        for (int d = 0; d < dim_; ++d)
            dst[d] += src[d];
    }
}

// ------------------------------------------------------------------- GruCell

GruCell::GruCell(int in_dim, int hidden_dim, Rng& rng)
    : in_dim_(in_dim), hidden_dim_(hidden_dim) {
    const double sx = std::sqrt(1.0 / static_cast<double>(in_dim));
    const double sh = std::sqrt(1.0 / static_cast<double>(hidden_dim));
    for (const char* gate : {"z", "r", "h"}) {
        params_.add(std::string("W") + gate,
                    Tensor::normal({in_dim, hidden_dim}, 0.0, sx, rng));
        params_.add(std::string("U") + gate,
                    Tensor::normal({hidden_dim, hidden_dim}, 0.0, sh, rng));
        params_.add(std::string("b") + gate, Tensor::zeros({hidden_dim}));
    }
}

Tensor GruCell::forward(const Tensor& x, const Tensor& h, Cache* cache) const {
    if (x.rank() != 2 || x.dim(1) != in_dim_ || h.rank() != 2 || h.dim(1) != hidden_dim_ ||
        x.dim(0) != h.dim(0))
        throw ShapeMismatch("gru_cell shapes: x " + x.shape_str() + ", h " + h.shape_str());

    auto gate_pre = [&](const char* g, const Tensor& hin) {
        Tensor pre = matmul(x, params_.at(std::string("W") + g).value);
        accumulate(pre, matmul(hin, params_.at(std::string("U") + g).value));
        add_row_bias(pre, params_.at(std::string("b") + g).value);
        return pre;
    };

    Tensor z = map_sigmoid(gate_pre("z", h));
    Tensor r = map_sigmoid(gate_pre("r", h));
    Tensor rh = ew(EwOp::Mul, r, h);
    Tensor hbar = map_tanh(gate_pre("h", rh));

    Tensor h_new = h;
    for (std::size_t i = 0; i < h_new.size(); ++i)
        h_new[i] = (1.0 - z[i]) * h[i] + z[i] * hbar[i];

    if (cache) {
        cache->x = x;
        cache->h = h;
        cache->z = std::move(z);
        cache->r = std::move(r);
        cache->hbar = std::move(hbar);
    }
    return h_new;
}

GruCell::Grads GruCell::backward(const Tensor& dh_next, const Cache& cache) {
    const Tensor &x = cache.x, &h = cache.h, &z = cache.z, &r = cache.r, &hbar = cache.hbar;

    Tensor dz = dh_next, dhbar = dh_next, dh = dh_next;
    for (std::size_t i = 0; i < dh_next.size(); ++i) {
        dz[i] = dh_next[i] * (hbar[i] - h[i]);
        dhbar[i] = dh_next[i] * z[i];
        dh[i] = dh_next[i] * (1.0 - z[i]);
    }

    // candidate branch
    Tensor da_h = dhbar;
    for (std::size_t i = 0; i < da_h.size(); ++i)
        da_h[i] *= 1.0 - hbar[i] * hbar[i];
    Tensor rh = ew(EwOp::Mul, r, h);
    accumulate(params_.at("Wh").grad, matmul(transpose(x), da_h));
    accumulate(params_.at("Uh").grad, matmul(transpose(rh), da_h));
    accumulate_col_sums(da_h, params_.at("bh").grad);
    Tensor drh = matmul(da_h, transpose(params_.at("Uh").value));
    Tensor dr = ew(EwOp::Mul, drh, h);
    accumulate(dh, ew(EwOp::Mul, drh, r));

    // reset gate
    Tensor da_r = dr;
    for (std::size_t i = 0; i < da_r.size(); ++i)
        da_r[i] *= r[i] * (1.0 - r[i]);
    accumulate(params_.at("Wr").grad, matmul(transpose(x), da_r));
    accumulate(params_.at("Ur").grad, matmul(transpose(h), da_r));
    accumulate_col_sums(da_r, params_.at("br").grad);

    // update gate
    Tensor da_z = dz;
    for (std::size_t i = 0; i < da_z.size(); ++i)
        da_z[i] *= z[i] * (1.0 - z[i]);
    accumulate(params_.at("Wz").grad, matmul(transpose(x), da_z));
    accumulate(params_.at("Uz").grad, matmul(transpose(h), da_z));
    accumulate_col_sums(da_z, params_.at("bz").grad);

    Tensor dx = matmul(da_h, transpose(params_.at("Wh").value));
    accumulate(dx, matmul(da_r, transpose(params_.at("Wr").value)));
    accumulate(dx, matmul(da_z, transpose(params_.at("Wz").value)));
    accumulate(dh, matmul(da_r, transpose(params_.at("Ur").value)));
    accumulate(dh, matmul(da_z, transpose(params_.at("Uz").value)));

    return Grads{std::move(dx), std::move(dh)};
}

// ------------------------------------------------------------------ LstmCell

LstmCell::LstmCell(int in_dim, int hidden_dim, Rng& rng)
    : in_dim_(in_dim), hidden_dim_(hidden_dim) {
    const double sx = std::sqrt(1.0 / static_cast<double>(in_dim));
    const double sh = std::sqrt(1.0 / static_cast<double>(hidden_dim));
    for (const char* gate : {"f", "i", "o", "g"}) {
        params_.add(std::string("W") + gate,
                    Tensor::normal({in_dim, hidden_dim}, 0.0, sx, rng));
        params_.add(std::string("U") + gate,
                    Tensor::normal({hidden_dim, hidden_dim}, 0.0, sh, rng));
        params_.add(std::string("b") + gate, Tensor::zeros({hidden_dim}));
    }
}

LstmCell::State LstmCell::forward(const Tensor& x, const State& state, Cache* cache) const {
    const Tensor &h = state.h, &c = state.c;
    if (x.rank() != 2 || x.dim(1) != in_dim_ || h.dim(1) != hidden_dim_ ||
        c.dim(1) != hidden_dim_ || x.dim(0) != h.dim(0) || x.dim(0) != c.dim(0))
        throw ShapeMismatch("lstm_cell shapes: x " + x.shape_str() + ", h " + h.shape_str() +
                            ", c " + c.shape_str());

    auto gate_pre = [&](const char* g) {
        Tensor pre = matmul(x, params_.at(std::string("W") + g).value);
        accumulate(pre, matmul(h, params_.at(std::string("U") + g).value));
        add_row_bias(pre, params_.at(std::string("b") + g).value);
        return pre;
    };

    Tensor f = map_sigmoid(gate_pre("f"));
    Tensor i = map_sigmoid(gate_pre("i"));
    Tensor o = map_sigmoid(gate_pre("o"));
    Tensor g = map_tanh(gate_pre("g"));

    Tensor c_new = c;
    for (std::size_t t = 0; t < c_new.size(); ++t)
        c_new[t] = f[t] * c[t] + i[t] * g[t];
    Tensor h_new = c_new;
    for (std::size_t t = 0; t < h_new.size(); ++t)
        h_new[t] = o[t] * std::tanh(c_new[t]);

    if (cache) {
        cache->x = x;
        cache->h = h;
        cache->c = c;
        cache->f = std::move(f);
        cache->i = std::move(i);
        cache->o = std::move(o);
        cache->g = std::move(g);
        cache->c_new = c_new;
    }
    return State{std::move(h_new), std::move(c_new)};
}

LstmCell::Grads LstmCell::backward(const Tensor& dh_next, const Tensor& dc_next,
                                   const Cache& cache) {
    const Tensor &x = cache.x, &h = cache.h, &c = cache.c;
    const Tensor &f = cache.f, &i = cache.i, &o = cache.o, &g = cache.g, &c_new = cache.c_new;

    Tensor dc = dc_next, do_ = dh_next;
    for (std::size_t t = 0; t < dc.size(); ++t) {
        const double tc = std::tanh(c_new[t]);
        do_[t] = dh_next[t] * tc;
        dc[t] += dh_next[t] * o[t] * (1.0 - tc * tc);
    }

    Tensor da_f = dc, da_i = dc, da_g = dc, dc_prev = dc, da_o = do_;
    for (std::size_t t = 0; t < dc.size(); ++t) {
        da_f[t] = dc[t] * c[t] * f[t] * (1.0 - f[t]);
        da_i[t] = dc[t] * g[t] * i[t] * (1.0 - i[t]);
        da_g[t] = dc[t] * i[t] * (1.0 - g[t] * g[t]);
        da_o[t] = do_[t] * o[t] * (1.0 - o[t]);
        dc_prev[t] = dc[t] * f[t];
    }

    Tensor dx = Tensor::zeros({x.dim(0), in_dim_});
    Tensor dh = Tensor::zeros({h.dim(0), hidden_dim_});
    const std::pair<const char*, const Tensor*> gates[] = {
        {"f", &da_f}, {"i", &da_i}, {"o", &da_o}, {"g", &da_g}};
    for (const auto& [name, da] : gates) {
        accumulate(params_.at(std::string("W") + name).grad, matmul(transpose(x), *da));
        accumulate(params_.at(std::string("U") + name).grad, matmul(transpose(h), *da));
        accumulate_col_sums(*da, params_.at(std::string("b") + name).grad);
        accumulate(dx, matmul(*da, transpose(params_.at(std::string("W") + name).value)));
        accumulate(dh, matmul(*da, transpose(params_.at(std::string("U") + name).value)));
    }

    return Grads{std::move(dx), std::move(dh), std::move(dc_prev)};
}

// ------------------------------------------------------------- softmax_xent

namespace {

SoftmaxXentResult softmax_xent_impl(const Tensor& logits, const std::vector<int>& targets,
                                    const std::vector<unsigned char>* active, int denom) {
    if (logits.rank() != 2)
        throw ShapeMismatch("softmax_xent expects [batch,k], got " + logits.shape_str());
    const int batch = logits.dim(0), k = logits.dim(1);
    if (static_cast<int>(targets.size()) != batch)
        throw ShapeMismatch("softmax_xent targets length " + std::to_string(targets.size()) +
                            " vs batch " + std::to_string(batch));

    Tensor probs = Tensor::zeros({batch, k});
    Tensor dlogits = Tensor::zeros({batch, k});
    double loss = 0.0;
    const double inv = 1.0 / static_cast<double>(denom);

    for (int b = 0; b < batch; ++b) {
        if (active && !(*active)[static_cast<std::size_t>(b)])
            continue;
        const int target = targets[static_cast<std::size_t>(b)];
        if (target < 0 || target >= k)
            throw VocabOverflow("softmax_xent target " + std::to_string(target) +
                                " outside " + std::to_string(k) + " classes");
        const double* row = logits.data() + static_cast<std::size_t>(b) * k;
        double* prow = probs.data() + static_cast<std::size_t>(b) * k;
        double* drow = dlogits.data() + static_cast<std::size_t>(b) * k;

        double mx = row[0];
        for (int j = 1; j < k; ++j)
            mx = std::max(mx, row[j]);
        double sum = 0.0;
        for (int j = 0; j < k; ++j) {
            prow[j] = std::exp(row[j] - mx);
            sum += prow[j];
        }
        for (int j = 0; j < k; ++j) {
            prow[j] /= sum;
            drow[j] = prow[j] * inv;
        }
        drow[target] -= inv;
        loss -= std::log(prow[target]);
    }

    if (!active)
        loss *= inv;
    return SoftmaxXentResult{loss, std::move(dlogits), std::move(probs)};
}

} // namespace

SoftmaxXentResult softmax_xent(const Tensor& logits, const std::vector<int>& targets) {
    return softmax_xent_impl(logits, targets, nullptr, logits.dim(0));
}

SoftmaxXentResult softmax_xent_rows(const Tensor& logits, const std::vector<int>& targets,
                                    const std::vector<unsigned char>& active, int denom) {
    return softmax_xent_impl(logits, targets, &active, denom);
}

} // namespace gemcap
