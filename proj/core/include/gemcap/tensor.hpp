#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "gemcap/rng.hpp"

namespace gemcap {

/// Dense N-dimensional array of 64-bit reals, row-major.
///
/// Tensors are plain values: copyable, movable, no aliasing. Everything in
/// the project (images, activations, parameters, gradients) lives in one.
class Tensor {
public:
    Tensor() = default;

    /// Zero-filled tensor of the given shape.
    static Tensor zeros(std::vector<int> shape);

    /// Constant-filled tensor.
    static Tensor constant(std::vector<int> shape, double value);

    /// Normal(mean, stddev) fill; elements drawn in row-major order.
    static Tensor normal(std::vector<int> shape, double mean, double stddev, Rng& rng);

    /// 1-D tensor from a list of values.
    static Tensor from_values(std::initializer_list<double> values);

    /// Tensor of the given shape wrapping the given row-major data.
    static Tensor from_data(std::vector<int> shape, std::vector<double> data);

    const std::vector<int>& shape() const { return shape_; }
    int rank() const { return static_cast<int>(shape_.size()); }
    int dim(int axis) const { return shape_[static_cast<std::size_t>(axis)]; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::span<double> values() { return data_; }
    std::span<const double> values() const { return data_; }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    /// Element access for rank-2 tensors.
    double& at(int i, int j) { return data_[static_cast<std::size_t>(i) * shape_[1] + j]; }
    double at(int i, int j) const { return data_[static_cast<std::size_t>(i) * shape_[1] + j]; }

    /// Reinterpret as a new shape with the same element count.
    Tensor reshaped(std::vector<int> shape) const;

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

    /// True when every element is finite.
    bool all_finite() const;

    void fill(double value);

    std::string shape_str() const;

    bool operator==(const Tensor& other) const = default;

private:
    std::vector<int> shape_;
    std::vector<double> data_;
};

enum class EwOp { Add, Sub, Mul, Max };
enum class ReduceOp { Sum, Mean, Argmax };

/// Standard matrix product of two rank-2 tensors, [m,k] x [k,n] -> [m,n].
Tensor matmul(const Tensor& a, const Tensor& b);

/// Transpose of a rank-2 tensor.
Tensor transpose(const Tensor& a);

/// Elementwise op over two tensors of identical shape.
Tensor ew(EwOp op, const Tensor& a, const Tensor& b);

/// Elementwise op against a scalar broadcast over all elements. This is the
/// only broadcast the library supports.
Tensor ew(EwOp op, const Tensor& a, double b);

/// Reduction along one axis; the axis is removed from the shape. Argmax
/// returns the lowest index among ties.
Tensor reduce(ReduceOp op, const Tensor& a, int axis);

/// Number of worker threads for matmul row partitioning, from the
/// GEMCAP_THREADS environment variable. 0 or unset means serial. Results
/// are bit-identical at any setting: each output element is one dot
/// product with a fixed summation order.
int thread_budget();

} // namespace gemcap
