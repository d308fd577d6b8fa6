#include "gemcap/render.hpp"

#include <cmath>
#include <numbers>

#include "gemcap/error.hpp"

namespace gemcap {

std::string class_name(JewelryClass c) {
    switch (c) {
    case JewelryClass::Necklace: return "necklace";
    case JewelryClass::Ring: return "ring";
    case JewelryClass::Earrings: return "earrings";
    case JewelryClass::Bracelet: return "bracelet";
    }
    return "?";
}

JewelryClass class_from_name(const std::string& name) {
    for (JewelryClass c : kClassOrder)
        if (class_name(c) == name)
            return c;
    throw ClassError("unknown jewelry class: " + name);
}

int class_index(JewelryClass c) {
    for (int i = 0; i < 4; ++i)
        if (kClassOrder[static_cast<std::size_t>(i)] == c)
            return i;
    return -1;
}

namespace {

using Color = std::array<double, 3>;

// Metal albedos kept below ~0.6 so a 1.8x brightness pass stays unclamped
// and the hue ratios survive; white gold runs warm, silver runs cool.
Color material_color(const std::string& material) {
    if (material == "yellow gold") return {0.55, 0.42, 0.10};
    if (material == "rose gold") return {0.52, 0.29, 0.26};
    if (material == "white gold") return {0.60, 0.59, 0.52};
    if (material == "silver") return {0.42, 0.45, 0.52};
    throw LexiconMiss("renderer has no palette for material: " + material);
}

struct StoneEntry {
    const char* term;
    Color color;
};

// One well-separated hue per stone; stones draw flat (no shading) so the
// disc interior is exactly the base color.
constexpr StoneEntry kStones[] = {
    {"pearl", {0.82, 0.78, 0.70}},
    {"diamond", {0.78, 0.86, 0.97}},
    {"ruby", {0.80, 0.04, 0.12}},
    {"emerald", {0.02, 0.60, 0.25}},
    {"alexandrite", {0.55, 0.10, 0.60}},
    {"sapphire", {0.05, 0.15, 0.80}},
    {"oriental catseye", {0.85, 0.75, 0.10}},
    {"amethyst", {0.55, 0.35, 0.80}},
    {"topaz", {0.30, 0.70, 0.95}},
    {"tourmaline", {0.85, 0.30, 0.55}},
    {"aquamarine", {0.35, 0.85, 0.80}},
    {"chrysoprase", {0.50, 0.85, 0.35}},
    {"peridot", {0.72, 0.80, 0.15}},
    {"opal", {0.90, 0.70, 0.85}},
    {"zircon", {0.60, 0.40, 0.20}},
    {"jade", {0.25, 0.50, 0.45}},
};

struct Canvas {
    Tensor* img;
    int h, w;
    double scale; // min(h, w)

    void put(int x, int y, const Color& c) {
        if (x < 0 || x >= w || y < 0 || y >= h)
            return;
        for (int ch = 0; ch < 3; ++ch)
            (*img)[(static_cast<std::size_t>(ch) * h + y) * w + x] = c[static_cast<std::size_t>(ch)];
    }

    // filled ellipse with multiplicative shading texture
    void ellipse(double cx, double cy, double rx, double ry, const Color& c, double shade_freq) {
        const int x0 = std::max(0, static_cast<int>(std::floor((cx - rx) * w)));
        const int x1 = std::min(w - 1, static_cast<int>(std::ceil((cx + rx) * w)));
        const int y0 = std::max(0, static_cast<int>(std::floor((cy - ry) * h)));
        const int y1 = std::min(h - 1, static_cast<int>(std::ceil((cy + ry) * h)));
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) {
                const double dx = (x + 0.5) / w - cx, dy = (y + 0.5) / h - cy;
                if (dx * dx / (rx * rx) + dy * dy / (ry * ry) > 1.0)
                    continue;
                const double s =
                    shade_freq > 0
                        ? 0.84 + 0.16 * std::sin(shade_freq * (dx + dy) / (rx + ry) * 6.0)
                        : 1.0;
                put(x, y, {c[0] * s, c[1] * s, c[2] * s});
            }
    }

    // flat disc: exact base color inside, darker 1px rim, white sparkle
    void stone_disc(double cx, double cy, double r, const Color& c) {
        const double rim = std::max(1.0 / scale, r * 0.18);
        const int x0 = std::max(0, static_cast<int>(std::floor((cx - r) * w)) - 1);
        const int x1 = std::min(w - 1, static_cast<int>(std::ceil((cx + r) * w)) + 1);
        const int y0 = std::max(0, static_cast<int>(std::floor((cy - r) * h)) - 1);
        const int y1 = std::min(h - 1, static_cast<int>(std::ceil((cy + r) * h)) + 1);
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) {
                const double dx = (x + 0.5) / w - cx, dy = (y + 0.5) / h - cy;
                const double d = std::sqrt(dx * dx + dy * dy);
                if (d > r)
                    continue;
                if (d > r - rim)
                    put(x, y, {c[0] * 0.55, c[1] * 0.55, c[2] * 0.55});
                else
                    put(x, y, c);
            }
        // sparkle towards the upper left
        const double sx = cx - r * 0.33, sy = cy - r * 0.33;
        const int px = static_cast<int>(sx * w), py = static_cast<int>(sy * h);
        put(px, py, {0.98, 0.98, 0.98});
    }
};

struct JitterSource {
    Rng rng;
    explicit JitterSource(std::uint64_t seed) : rng(seed) {}
    double wiggle(double base, double amount) { return base + rng.uniform(-amount, amount); }
};

void draw_ring(Canvas& cv, JitterSource& j, const Color& metal, const RenderSpec& spec) {
    const double cx = j.wiggle(0.50, 0.04), cy = j.wiggle(0.53, 0.03);
    const double R = j.wiggle(0.29, 0.03);
    const double r = R * j.wiggle(0.60, 0.05);
    // annulus = outer ellipse minus inner hole, shaded by angle
    const int x0 = std::max(0, static_cast<int>(std::floor((cx - R) * cv.w)));
    const int x1 = std::min(cv.w - 1, static_cast<int>(std::ceil((cx + R) * cv.w)));
    const int y0 = std::max(0, static_cast<int>(std::floor((cy - R) * cv.h)));
    const int y1 = std::min(cv.h - 1, static_cast<int>(std::ceil((cy + R) * cv.h)));
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            const double dx = (x + 0.5) / cv.w - cx, dy = (y + 0.5) / cv.h - cy;
            const double d = std::sqrt(dx * dx + dy * dy);
            if (d > R || d < r)
                continue;
            const double s = 0.82 + 0.18 * std::cos(std::atan2(dy, dx) * 2.0);
            cv.put(x, y, {metal[0] * s, metal[1] * s, metal[2] * s});
        }
    if (!spec.stone.empty()) {
        const Color c = stone_color(spec.stone);
        cv.stone_disc(cx, cy - (R + r) * 0.5, 0.085, c);
    }
}

void draw_earrings(Canvas& cv, JitterSource& j, const Color& metal, const RenderSpec& spec) {
    const double off = j.wiggle(0.19, 0.02);
    const double cy = j.wiggle(0.36, 0.03);
    const double rx = j.wiggle(0.095, 0.012), ry = j.wiggle(0.135, 0.015);
    const Color dark = {metal[0] * 0.8, metal[1] * 0.8, metal[2] * 0.8};
    for (double cx : {0.5 - off, 0.5 + off}) {
        // hook: thin stem above the drop
        for (double t = 0.0; t < 0.085; t += 0.5 / cv.scale) {
            const int px = static_cast<int>(cx * cv.w);
            const int py = static_cast<int>((cy - ry - t) * cv.h);
            cv.put(px, py, dark);
            cv.put(px + 1, py, dark);
        }
        cv.ellipse(cx, cy, rx, ry, metal, 2.0);
        if (!spec.stone.empty())
            cv.stone_disc(cx, cy + ry * 0.1, 0.048, stone_color(spec.stone));
    }
}

void draw_necklace(Canvas& cv, JitterSource& j, const Color& metal, const RenderSpec& spec) {
    const double x0 = j.wiggle(0.16, 0.02), x1 = j.wiggle(0.84, 0.02);
    const double ytop = j.wiggle(0.22, 0.02);
    const double sag = j.wiggle(0.38, 0.04);
    const int beads = 26;
    const double bead_r = j.wiggle(0.020, 0.003);
    for (int i = 0; i < beads; ++i) {
        const double t = static_cast<double>(i) / (beads - 1);
        const double bx = x0 + (x1 - x0) * t;
        const double by = ytop + sag * 4.0 * t * (1.0 - t);
        const double s = 0.85 + 0.15 * std::cos(t * 9.0);
        cv.ellipse(bx, by, bead_r, bead_r, {metal[0] * s, metal[1] * s, metal[2] * s}, 0.0);
    }
    if (!spec.stone.empty()) {
        const double px = (x0 + x1) * 0.5;
        const double py = ytop + sag + 0.055;
        cv.stone_disc(px, py, 0.065, stone_color(spec.stone));
    }
}

void draw_bracelet(Canvas& cv, JitterSource& j, const Color& metal, const RenderSpec& spec) {
    const double cx = j.wiggle(0.50, 0.02), cy = j.wiggle(0.52, 0.02);
    const double rx = j.wiggle(0.30, 0.02), ry = j.wiggle(0.23, 0.02);
    const double band = j.wiggle(0.13, 0.02);     // relative band half-width
    const double gap_at = j.wiggle(-std::numbers::pi / 2, 0.35);
    const double gap_half = j.wiggle(0.42, 0.06); // radians

    const int px0 = std::max(0, static_cast<int>(std::floor((cx - rx * (1 + band)) * cv.w)));
    const int px1 = std::min(cv.w - 1, static_cast<int>(std::ceil((cx + rx * (1 + band)) * cv.w)));
    const int py0 = std::max(0, static_cast<int>(std::floor((cy - ry * (1 + band)) * cv.h)));
    const int py1 = std::min(cv.h - 1, static_cast<int>(std::ceil((cy + ry * (1 + band)) * cv.h)));
    for (int y = py0; y <= py1; ++y)
        for (int x = px0; x <= px1; ++x) {
            const double dx = (x + 0.5) / cv.w - cx, dy = (y + 0.5) / cv.h - cy;
            const double e = std::sqrt(dx * dx / (rx * rx) + dy * dy / (ry * ry));
            if (std::abs(e - 1.0) > band)
                continue;
            double ang = std::atan2(dy, dx) - gap_at;
            while (ang > std::numbers::pi)
                ang -= 2 * std::numbers::pi;
            while (ang < -std::numbers::pi)
                ang += 2 * std::numbers::pi;
            if (std::abs(ang) < gap_half)
                continue; // the opening
            const double s = 0.82 + 0.18 * std::sin(ang * 3.0);
            cv.put(x, y, {metal[0] * s, metal[1] * s, metal[2] * s});
        }
    if (!spec.stone.empty()) {
        const Color c = stone_color(spec.stone);
        for (int k = 0; k < spec.stone_count; ++k) {
            const double ang = gap_at + std::numbers::pi + (k - (spec.stone_count - 1) * 0.5) * 0.8;
            cv.stone_disc(cx + rx * std::cos(ang), cy + ry * std::sin(ang), 0.042, c);
        }
    }
}

} // namespace

const std::array<std::string, 4>& render_materials() {
    static const std::array<std::string, 4> mats = {"yellow gold", "rose gold", "white gold",
                                                    "silver"};
    return mats;
}

std::array<double, 3> stone_color(const std::string& stone) {
    for (const auto& e : kStones)
        if (stone == e.term)
            return e.color;
    throw LexiconMiss("renderer has no palette for stone: " + stone);
}

Tensor render_sample(const RenderSpec& spec, int h, int w) {
    if (h < 32 || w < 32)
        throw InvalidShape("render size must be at least 32x32");
    material_color(spec.material); // validates the material early
    if (!spec.stone.empty())
        stone_color(spec.stone);

    Tensor img = Tensor::constant({3, h, w}, spec.background_shade);
    Canvas cv{&img, h, w, static_cast<double>(std::min(h, w))};
    JitterSource jitter(spec.geometry_jitter_seed);
    const Color metal = material_color(spec.material);

    switch (spec.jewelry_class) {
    case JewelryClass::Ring: draw_ring(cv, jitter, metal, spec); break;
    case JewelryClass::Earrings: draw_earrings(cv, jitter, metal, spec); break;
    case JewelryClass::Necklace: draw_necklace(cv, jitter, metal, spec); break;
    case JewelryClass::Bracelet: draw_bracelet(cv, jitter, metal, spec); break;
    }
    return img;
}

RenderSpec sample_render_spec(JewelryClass cls, Rng& rng) {
    RenderSpec spec;
    spec.jewelry_class = cls;
    spec.material = render_materials()[rng.next_below(4)];
    if (rng.next_below(4) != 0) {
        spec.stone = kStones[rng.next_below(std::size(kStones))].term;
        switch (cls) {
        case JewelryClass::Earrings: spec.stone_count = 2; break;
        case JewelryClass::Bracelet: spec.stone_count = 3; break;
        default: spec.stone_count = 1; break;
        }
    }
    spec.background_shade = rng.uniform(0.05, 0.30);
    spec.geometry_jitter_seed = rng.next_u64();
    return spec;
}

JewelryRecord record_from_spec(const RenderSpec& spec, Rng& rng) {
    static const std::vector<std::string> sup_pool = {
        "exquisite", "elegant", "beautiful", "stunning", "radiant", "luxurious", "dazzling",
        "sustainable"};

    JewelryRecord r;
    r.jewelry_type = class_name(spec.jewelry_class);
    r.materials = {spec.material};
    if (!spec.stone.empty()) {
        r.stones.assign(static_cast<std::size_t>(spec.stone_count), spec.stone);
        if (spec.jewelry_class == JewelryClass::Necklace)
            r.features.push_back("pendant");
        else if (spec.jewelry_class == JewelryClass::Ring)
            r.features.push_back("central");
    }
    const std::size_t n_sups = 1 + rng.next_below(2);
    for (std::size_t i = 0; i < n_sups; ++i)
        r.style_adjectives.push_back(sup_pool[rng.next_below(sup_pool.size())]);
    return r;
}

} // namespace gemcap
