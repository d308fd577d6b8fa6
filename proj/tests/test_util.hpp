#pragma once

#include <cmath>
#include <cstddef>

#include "gemcap/tensor.hpp"

namespace gemcap::testutil {

inline double dot(const Tensor& a, const Tensor& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

/// Random linear functional used to reduce layer outputs to a scalar loss
/// for gradient checking; dL/dy is then the projection itself.
inline Tensor projection(const std::vector<int>& shape, Rng& rng) {
    return Tensor::normal(shape, 0.0, 1.0, rng);
}

} // namespace gemcap::testutil
