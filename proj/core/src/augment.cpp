#include "gemcap/augment.hpp"

#include <algorithm>
#include <cmath>

#include "gemcap/error.hpp"

namespace gemcap {

std::string augment_kind_name(AugmentOp::Kind kind) {
    switch (kind) {
    case AugmentOp::Kind::Rotate90: return "rotate90";
    case AugmentOp::Kind::WidthShift: return "width_shift";
    case AugmentOp::Kind::HeightShift: return "height_shift";
    case AugmentOp::Kind::Cut: return "cut";
    case AugmentOp::Kind::Zoom: return "zoom";
    case AugmentOp::Kind::ColorJitter: return "color_jitter";
    case AugmentOp::Kind::FlipH: return "flip_h";
    case AugmentOp::Kind::FlipV: return "flip_v";
    case AugmentOp::Kind::Brightness: return "brightness";
    }
    return "?";
}

AugmentOp::Kind augment_kind_from_name(const std::string& name) {
    for (int k = 0; k <= static_cast<int>(AugmentOp::Kind::Brightness); ++k)
        if (augment_kind_name(static_cast<AugmentOp::Kind>(k)) == name)
            return static_cast<AugmentOp::Kind>(k);
    throw Error("unknown augmentation: " + name);
}

AugmentOp sample_augment_op(Rng& rng) {
    AugmentOp op;
    op.kind = static_cast<AugmentOp::Kind>(rng.next_below(9));
    switch (op.kind) {
    case AugmentOp::Kind::Rotate90:
        op.amount = static_cast<double>(1 + rng.next_below(3));
        break;
    case AugmentOp::Kind::WidthShift:
    case AugmentOp::Kind::HeightShift:
        op.amount = rng.uniform(-0.30, 0.30);
        break;
    case AugmentOp::Kind::Cut:
        op.amount = rng.uniform(0.02, 0.15);
        break;
    case AugmentOp::Kind::Zoom:
        op.amount = rng.uniform(-0.05, 0.05);
        break;
    case AugmentOp::Kind::ColorJitter:
        for (double& g : op.gains)
            g = rng.uniform(0.95, 1.05);
        break;
    case AugmentOp::Kind::Brightness:
        op.amount = rng.uniform(0.2, 1.8);
        break;
    case AugmentOp::Kind::FlipH:
    case AugmentOp::Kind::FlipV:
        break;
    }
    return op;
}

namespace {

struct View {
    const Tensor* src;
    int h, w;
    double at(int c, int y, int x) const {
        return (*src)[(static_cast<std::size_t>(c) * h + y) * w + x];
    }
};

double& px(Tensor& img, int c, int y, int x) {
    return img[(static_cast<std::size_t>(c) * img.dim(1) + y) * img.dim(2) + x];
}

void clamp01(Tensor& img) {
    for (double& v : img.values())
        v = std::min(1.0, std::max(0.0, v));
}

} // namespace

Tensor apply_augment(const Tensor& image, const AugmentOp& op, Rng& rng) {
    if (image.rank() != 3 || image.dim(0) != 3)
        throw InvalidShape("augment expects [3,h,w], got " + image.shape_str());
    const int h = image.dim(1), w = image.dim(2);
    const View in{&image, h, w};
    const double fill[3] = {in.at(0, 0, 0), in.at(1, 0, 0), in.at(2, 0, 0)};

    Tensor out = image;
    switch (op.kind) {
    case AugmentOp::Kind::Rotate90: {
        if (h != w)
            throw InvalidShape("rotate90 requires a square image");
        const int k = static_cast<int>(op.amount) % 4;
        const Tensor* cur = &image;
        Tensor tmp;
        for (int turn = 0; turn < k; ++turn) {
            tmp = Tensor::zeros({3, h, w});
            for (int c = 0; c < 3; ++c)
                for (int y = 0; y < h; ++y)
                    for (int x = 0; x < w; ++x)
                        // quarter turn counterclockwise
                        px(tmp, c, y, x) =
                            (*cur)[(static_cast<std::size_t>(c) * h + x) * w + (w - 1 - y)];
            out = tmp;
            cur = &out;
        }
        break;
    }
    case AugmentOp::Kind::WidthShift:
    case AugmentOp::Kind::HeightShift: {
        const bool horizontal = op.kind == AugmentOp::Kind::WidthShift;
        const int d = static_cast<int>(std::lround(op.amount * (horizontal ? w : h)));
        for (int c = 0; c < 3; ++c)
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    const int sy = horizontal ? y : y - d;
                    const int sx = horizontal ? x - d : x;
                    px(out, c, y, x) = (sx >= 0 && sx < w && sy >= 0 && sy < h)
                                           ? in.at(c, sy, sx)
                                           : fill[c];
                }
        break;
    }
    case AugmentOp::Kind::Cut: {
        const double area = std::min(op.amount, 0.15);
        const double aspect = rng.uniform(0.5, 2.0);
        int rw = std::max(1, static_cast<int>(std::lround(std::sqrt(area * aspect) * w)));
        int rh = std::max(1, static_cast<int>(std::lround(std::sqrt(area / aspect) * h)));
        rw = std::min(rw, w);
        rh = std::min(rh, h);
        const int x0 = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(w - rw + 1)));
        const int y0 = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(h - rh + 1)));
        for (int c = 0; c < 3; ++c)
            for (int y = y0; y < y0 + rh; ++y)
                for (int x = x0; x < x0 + rw; ++x)
                    px(out, c, y, x) = fill[c];
        break;
    }
    case AugmentOp::Kind::Zoom: {
        const double f = 1.0 + op.amount;
        const double cx = (w - 1) * 0.5, cy = (h - 1) * 0.5;
        for (int c = 0; c < 3; ++c)
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    const int sx = static_cast<int>(std::lround(cx + (x - cx) / f));
                    const int sy = static_cast<int>(std::lround(cy + (y - cy) / f));
                    px(out, c, y, x) = (sx >= 0 && sx < w && sy >= 0 && sy < h)
                                           ? in.at(c, sy, sx)
                                           : fill[c];
                }
        break;
    }
    case AugmentOp::Kind::ColorJitter:
        for (int c = 0; c < 3; ++c)
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x)
                    px(out, c, y, x) = in.at(c, y, x) * op.gains[static_cast<std::size_t>(c)];
        break;
    case AugmentOp::Kind::FlipH:
        for (int c = 0; c < 3; ++c)
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x)
                    px(out, c, y, x) = in.at(c, y, w - 1 - x);
        break;
    case AugmentOp::Kind::FlipV:
        for (int c = 0; c < 3; ++c)
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x)
                    px(out, c, y, x) = in.at(c, h - 1 - y, x);
        break;
    case AugmentOp::Kind::Brightness:
        for (double& v : out.values())
            v *= op.amount;
        break;
    }

    clamp01(out);
    return out;
}

} // namespace gemcap
