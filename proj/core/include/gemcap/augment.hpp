#pragma once

#include <array>
#include <string>

#include "gemcap/rng.hpp"
#include "gemcap/tensor.hpp"

namespace gemcap {

/// One image augmentation with its concrete magnitude. Bounds are hard
/// caps: quarter-turn count in {1,2,3}, shifts within +-0.30 of the image
/// extent, cut area at most 0.15, zoom within +-0.05, color gains within
/// [0.95, 1.05], brightness factor within [0.2, 1.8]. Every op preserves
/// the image shape and the [0,1] range.
struct AugmentOp {
    enum class Kind {
        Rotate90,
        WidthShift,
        HeightShift,
        Cut,
        Zoom,
        ColorJitter,
        FlipH,
        FlipV,
        Brightness,
    };

    Kind kind = Kind::FlipH;
    double amount = 0.0;                      // see kind-specific meaning above
    std::array<double, 3> gains = {1, 1, 1};  // ColorJitter only

    bool operator==(const AugmentOp&) const = default;
};

std::string augment_kind_name(AugmentOp::Kind kind);
AugmentOp::Kind augment_kind_from_name(const std::string& name);

/// Uniformly samples one of the nine ops with a magnitude inside its cap.
AugmentOp sample_augment_op(Rng& rng);

/// Applies the op to a [3,h,w] image in [0,1]. Regions vacated by shifts,
/// zoom-out and cuts are filled with the image's own background (the
/// top-left corner pixel). The rng places the cut rectangle; other ops
/// ignore it. Rotate90 requires a square image.
Tensor apply_augment(const Tensor& image, const AugmentOp& op, Rng& rng);

} // namespace gemcap
