#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "gemcap/lexicon.hpp"
#include "gemcap/rng.hpp"
#include "gemcap/tensor.hpp"

namespace gemcap {

enum class JewelryClass { Necklace, Ring, Earrings, Bracelet };

/// Fixed class order used everywhere (confusion matrices, class tokens).
constexpr std::array<JewelryClass, 4> kClassOrder = {
    JewelryClass::Necklace, JewelryClass::Ring, JewelryClass::Earrings, JewelryClass::Bracelet};

std::string class_name(JewelryClass c); // lexicon term, e.g. "necklace"
JewelryClass class_from_name(const std::string& name);
int class_index(JewelryClass c);

/// Everything the renderer needs to draw one jewelry item, and the
/// semantic source captions are generated from.
struct RenderSpec {
    JewelryClass jewelry_class = JewelryClass::Necklace;
    std::string material = "yellow gold"; // one of the four render metals
    std::string stone;                    // empty means no stone
    int stone_count = 0;
    double background_shade = 0.15; // [0,1]
    std::uint64_t geometry_jitter_seed = 0;

    bool operator==(const RenderSpec&) const = default;
};

/// The four metals the renderer knows palettes for.
const std::array<std::string, 4>& render_materials();

/// Base RGB of a stone term; throws LexiconMiss for unknown stones.
std::array<double, 3> stone_color(const std::string& stone);

/// Deterministic rasterization of a spec onto an h x w RGB canvas in
/// [0,1]. Ring: filled annulus; earrings: two mirrored drops in the upper
/// half; necklace: hanging arc of beads; bracelet: open thick ellipse
/// with a gap. The material picks the metal palette, stones render as
/// small flat high-saturation discs, geometry wiggles with the jitter
/// seed.
Tensor render_sample(const RenderSpec& spec, int h, int w);

/// Uniform spec sampler used by the dataset builder: material uniform
/// over the four metals, stone absent with probability 1/4 otherwise
/// uniform over the full stone table, stone count fixed by class
/// (earrings 2, bracelet 3, otherwise 1).
RenderSpec sample_render_spec(JewelryClass cls, Rng& rng);

/// Semantic record for caption generation: class term, material, stones
/// repeated stone_count times, class-determined features (a pendant for a
/// stone-bearing necklace, a central setting for a stone-bearing ring)
/// and superlatives drawn from a fixed pool with the given rng.
JewelryRecord record_from_spec(const RenderSpec& spec, Rng& rng);

} // namespace gemcap
