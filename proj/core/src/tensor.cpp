#include "gemcap/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "gemcap/error.hpp"

namespace gemcap {
namespace {

std::size_t checked_count(const std::vector<int>& shape) {
    if (shape.empty())
        throw InvalidShape("tensor shape must be non-empty");
    std::size_t n = 1;
    for (int d : shape) {
        if (d < 1)
            throw InvalidShape("tensor dimension must be >= 1, got " + std::to_string(d));
        n *= static_cast<std::size_t>(d);
    }
    return n;
}

} // namespace

Tensor Tensor::zeros(std::vector<int> shape) {
    return constant(std::move(shape), 0.0);
}

Tensor Tensor::constant(std::vector<int> shape, double value) {
    Tensor t;
    const std::size_t n = checked_count(shape);
    t.shape_ = std::move(shape);
    t.data_.assign(n, value);
    return t;
}

Tensor Tensor::normal(std::vector<int> shape, double mean, double stddev, Rng& rng) {
    Tensor t;
    const std::size_t n = checked_count(shape);
    t.shape_ = std::move(shape);
    t.data_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        t.data_[i] = rng.normal(mean, stddev);
    return t;
}

Tensor Tensor::from_values(std::initializer_list<double> values) {
    Tensor t;
    t.shape_ = {static_cast<int>(values.size())};
    t.data_.assign(values.begin(), values.end());
    if (t.data_.empty())
        throw InvalidShape("1-D tensor needs at least one value");
    return t;
}

Tensor Tensor::from_data(std::vector<int> shape, std::vector<double> data) {
    Tensor t;
    const std::size_t n = checked_count(shape);
    if (n != data.size())
        throw InvalidShape("data length " + std::to_string(data.size()) +
                           " does not match shape element count " + std::to_string(n));
    t.shape_ = std::move(shape);
    t.data_ = std::move(data);
    return t;
}

Tensor Tensor::reshaped(std::vector<int> shape) const {
    const std::size_t n = checked_count(shape);
    if (n != data_.size())
        throw InvalidShape("reshape to " + std::to_string(n) + " elements from " +
                           std::to_string(data_.size()));
    Tensor t;
    t.shape_ = std::move(shape);
    t.data_ = data_;
    return t;
}

bool Tensor::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](double v) { return std::isfinite(v); });
}

void Tensor::fill(double value) {
    std::fill(data_.begin(), data_.end(), value);
}

std::string Tensor::shape_str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < shape_.size(); ++i)
        os << (i ? "," : "") << shape_[i];
    os << ']';
    return os.str();
}

int thread_budget() {
    static const int budget = [] {
        const char* env = std::getenv("GEMCAP_THREADS");
        if (!env || !*env)
            return 0;
        const int n = std::atoi(env);
        return n > 0 ? n : 0;
    }();
    return budget;
}

namespace {

// C[m,n] = A[m,k] * B[k,n], row-major. The k-loop is hoisted outside the
// j-loop so each pass streams a row of B; the compiler vectorizes the
// inner loop. Summation order per element is fixed (k ascending).
void matmul_rows(const double* a, const double* b, double* c,
                 int row_begin, int row_end, int k, int n) {
    for (int i = row_begin; i < row_end; ++i) {
        double* ci = c + static_cast<std::size_t>(i) * n;
        std::fill(ci, ci + n, 0.0);
        const double* ai = a + static_cast<std::size_t>(i) * k;
        for (int p = 0; p < k; ++p) {
            const double av = ai[p];
            const double* bp = b + static_cast<std::size_t>(p) * n;
            for (int j = 0; j < n; ++j)
                ci[j] += av * bp[j];
        }
    }
}

} // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
    if (a.rank() != 2 || b.rank() != 2)
        throw ShapeMismatch("matmul expects rank-2 tensors, got " + a.shape_str() +
                            " and " + b.shape_str());
    const int m = a.dim(0), k = a.dim(1), n = b.dim(1);
    if (b.dim(0) != k)
        throw ShapeMismatch("matmul inner dimensions differ: " + a.shape_str() +
                            " vs " + b.shape_str());

    Tensor c = Tensor::zeros({m, n});
    const int threads = thread_budget();
    const std::size_t work = static_cast<std::size_t>(m) * k * n;
    if (threads > 1 && m > 1 && work > 1u << 16) {
        const int nt = std::min(threads, m);
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nt));
        for (int t = 0; t < nt; ++t) {
            const int lo = static_cast<int>(static_cast<long long>(m) * t / nt);
            const int hi = static_cast<int>(static_cast<long long>(m) * (t + 1) / nt);
            pool.emplace_back(matmul_rows, a.data(), b.data(), c.data(), lo, hi, k, n);
        }
        for (auto& th : pool)
            th.join();
    } else {
        matmul_rows(a.data(), b.data(), c.data(), 0, m, k, n);
    }
    return c;
}

Tensor transpose(const Tensor& a) {
    if (a.rank() != 2)
        throw ShapeMismatch("transpose expects a rank-2 tensor, got " + a.shape_str());
    const int m = a.dim(0), n = a.dim(1);
    Tensor t = Tensor::zeros({n, m});
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            t.at(j, i) = a.at(i, j);
    return t;
}

namespace {

double apply(EwOp op, double x, double y) {
    switch (op) {
    case EwOp::Add: return x + y;
    case EwOp::Sub: return x - y;
    case EwOp::Mul: return x * y;
    case EwOp::Max: return x > y ? x : y;
    }
    return 0.0;
}

} // namespace

Tensor ew(EwOp op, const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b))
        throw ShapeMismatch("elementwise op on shapes " + a.shape_str() + " and " +
                            b.shape_str());
    Tensor out = a;
    double* o = out.data();
    const double* bv = b.data();
    for (std::size_t i = 0; i < out.size(); ++i)
        o[i] = apply(op, o[i], bv[i]);
    return out;
}

Tensor ew(EwOp op, const Tensor& a, double b) {
    Tensor out = a;
    double* o = out.data();
    for (std::size_t i = 0; i < out.size(); ++i)
        o[i] = apply(op, o[i], b);
    return out;
}

Tensor reduce(ReduceOp op, const Tensor& a, int axis) {
    if (axis < 0 || axis >= a.rank())
        throw InvalidAxis("reduce axis " + std::to_string(axis) + " out of range for " +
                          a.shape_str());

    const auto& shape = a.shape();
    std::vector<int> out_shape;
    for (int d = 0; d < a.rank(); ++d)
        if (d != axis)
            out_shape.push_back(shape[static_cast<std::size_t>(d)]);
    if (out_shape.empty())
        out_shape.push_back(1);

    std::size_t outer = 1, inner = 1;
    for (int d = 0; d < axis; ++d)
        outer *= static_cast<std::size_t>(shape[static_cast<std::size_t>(d)]);
    for (int d = axis + 1; d < a.rank(); ++d)
        inner *= static_cast<std::size_t>(shape[static_cast<std::size_t>(d)]);
    const std::size_t len = static_cast<std::size_t>(shape[static_cast<std::size_t>(axis)]);

    Tensor out = Tensor::zeros(out_shape);
    const double* src = a.data();
    double* dst = out.data();
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t i = 0; i < inner; ++i) {
            const double* base = src + o * len * inner + i;
            switch (op) {
            case ReduceOp::Sum:
            case ReduceOp::Mean: {
                double acc = 0.0;
                for (std::size_t x = 0; x < len; ++x)
                    acc += base[x * inner];
                if (op == ReduceOp::Mean)
                    acc /= static_cast<double>(len);
                dst[o * inner + i] = acc;
                break;
            }
            case ReduceOp::Argmax: {
                std::size_t best = 0;
                double best_v = base[0];
                for (std::size_t x = 1; x < len; ++x) {
                    // strict > keeps the lowest index among ties
                    if (base[x * inner] > best_v) {
                        best_v = base[x * inner];
                        best = x;
                    }
                }
                dst[o * inner + i] = static_cast<double>(best);
                break;
            }
            }
        }
    }
    return out;
}

} // namespace gemcap
