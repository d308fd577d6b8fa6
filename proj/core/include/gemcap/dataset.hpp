#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gemcap/augment.hpp"
#include "gemcap/lexicon.hpp"
#include "gemcap/render.hpp"

namespace gemcap {

enum class Split { Train, Val, Test };

std::string split_name(Split s);
Split split_from_name(const std::string& name);

/// Provenance of an augmented sample: which original it came from and by
/// which op. Originals have no provenance entry.
struct AugmentedFrom {
    std::string parent_id;
    AugmentOp op;

    bool operator==(const AugmentedFrom&) const = default;
};

/// One dataset row: image on disk, class label, the three gold captions
/// and the split tag. Captions are validated against their level grammar
/// when the dataset is built.
struct Sample {
    std::string id;
    std::string image_path; // relative to the manifest's directory
    JewelryClass class_label = JewelryClass::Necklace;
    std::string caption_basic, caption_normal, caption_complete;
    Split split = Split::Train;
    RenderSpec spec;
    std::optional<AugmentedFrom> provenance;

    bool operator==(const Sample&) const = default;
};

struct Manifest {
    std::vector<Sample> samples;

    bool operator==(const Manifest&) const = default;
};

struct DatasetConfig {
    int n_base = 100;          // rendered originals, stratified over the 4 classes
    int augment_multiplier = 0; // augmented children per original
    int height = 64;
    int width = 64;
    std::uint64_t master_seed = 0;
};

/// Renders n_base originals (class = index mod 4, specs sampled from
/// per-sample child streams of the master seed), expands each by
/// augment_multiplier children, writes PNGs under out_dir/images/ and
/// returns the manifest. Caption streams are seeded by a hash of the
/// sample's semantic fields, so samples with identical semantics carry
/// identical captions; the whole build is a pure function of
/// (config, lexicon).
Manifest build_dataset(const DatasetConfig& config, const std::string& out_dir,
                       const Lexicon& lexicon);

/// The per-stratum count rule: train = floor(f0*n), val = floor(f1*n),
/// test = remainder.
std::array<int, 3> split_counts(int n, std::array<double, 3> fractions);

/// Tags every sample with a split. Assignment happens at the original
/// level, stratified per class with a shuffle drawn from the seed;
/// augmented children inherit their parent's split. Throws
/// StratificationError when one of the four classes has no originals.
void split_dataset(Manifest& manifest, std::array<double, 3> fractions,
                   std::uint64_t master_seed);

/// JSON Lines persistence: one sample per line with fields id, path,
/// split, class, caption_basic, caption_normal, caption_complete, spec,
/// provenance. read(write(m)) == m; parse failures carry line numbers.
void write_manifest(const Manifest& manifest, const std::string& path);
Manifest read_manifest(const std::string& path);

/// Loads a sample's PNG relative to the directory the manifest lives in.
Tensor load_sample_image(const Sample& sample, const std::string& manifest_dir);

/// Indices of one split in manifest order.
std::vector<std::size_t> split_indices(const Manifest& manifest, Split split);

} // namespace gemcap
