#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gemcap/tensor.hpp"

namespace gemcap {

/// One tensor whose analytic gradient should be verified: a parameter or
/// an input. `value` is perturbed in place; `analytic` is read after the
/// caller's backward pass has populated it.
struct GradProbe {
    std::string name;
    Tensor* value;
    const Tensor* analytic;
};

struct GradCheckReport {
    double max_rel_err = 0.0;
    bool pass = true;
    std::size_t coords_checked = 0;
    std::string worst; // "tensor[index]" of the largest error
};

/// Central-difference gradient verification.
///
/// `compute_grads` must zero all gradients and run one forward+backward at
/// the current point, leaving analytic gradients behind each probe.
/// `loss` must evaluate the same scalar objective at the current point
/// without touching gradients. Every coordinate of every probe is checked:
/// numeric = (loss(v+eps) - loss(v-eps)) / (2 eps) and
/// rel_err = |analytic - numeric| / max(|analytic|, |numeric|, 1e-8).
/// A coordinate over tolerance is re-probed at 10x eps and keeps the
/// smaller error: coordinates with near-zero true gradients are otherwise
/// unverifiable (cancellation noise at the small step exceeds the 1e-8
/// floor), while a wrong backward pass fails at every step size.
GradCheckReport grad_check(const std::function<double()>& loss,
                           const std::function<void()>& compute_grads,
                           const std::vector<GradProbe>& probes,
                           double eps = 1e-3, double tol = 1e-4);

} // namespace gemcap
