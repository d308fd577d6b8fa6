#include "gemcap/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <unordered_set>
#include <sstream>

#include <json.hpp>

#include "gemcap/error.hpp"
#include "gemcap/grammar.hpp"
#include "gemcap/image_io.hpp"

namespace fs = std::filesystem;

namespace gemcap {

std::string split_name(Split s) {
    switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
    }
    return "?";
}

Split split_from_name(const std::string& name) {
    if (name == "train") return Split::Train;
    if (name == "val") return Split::Val;
    if (name == "test") return Split::Test;
    throw ManifestParseError("unknown split: " + name);
}

namespace {

std::uint64_t caption_stream_seed(const RenderSpec& spec) {
    // keyed by semantics only: same (class, material, stone, count) means
    // the same captions, which keeps the image->caption map a function
    std::string key = class_name(spec.jewelry_class);
    key += '|';
    key += spec.material;
    key += '|';
    key += spec.stone;
    key += '|';
    key += std::to_string(spec.stone_count);
    return stable_hash(key);
}

void attach_captions(Sample& sample, const Lexicon& lexicon) {
    Rng caption_rng(caption_stream_seed(sample.spec));
    const JewelryRecord record = record_from_spec(sample.spec, caption_rng);
    sample.caption_basic =
        generate_description(record, DescriptionLevel::Basic, false, caption_rng, lexicon);
    sample.caption_normal =
        generate_description(record, DescriptionLevel::Normal, false, caption_rng, lexicon);
    sample.caption_complete =
        generate_description(record, DescriptionLevel::Complete, true, caption_rng, lexicon);

    const std::pair<const std::string*, DescriptionLevel> checks[] = {
        {&sample.caption_basic, DescriptionLevel::Basic},
        {&sample.caption_normal, DescriptionLevel::Normal},
        {&sample.caption_complete, DescriptionLevel::Complete},
    };
    for (const auto& [caption, level] : checks) {
        const ValidationResult res = validate_description(*caption, level, lexicon);
        if (!res)
            throw DatasetError("generated caption fails its own grammar (" + *caption +
                               "): " + res.reason);
    }
}

nlohmann::json spec_to_json(const RenderSpec& spec) {
    nlohmann::json j;
    j["class"] = class_name(spec.jewelry_class);
    j["material"] = spec.material;
    j["stone"] = spec.stone;
    j["stone_count"] = spec.stone_count;
    j["background_shade"] = spec.background_shade;
    j["jitter_seed"] = spec.geometry_jitter_seed;
    return j;
}

RenderSpec spec_from_json(const nlohmann::json& j) {
    RenderSpec spec;
    spec.jewelry_class = class_from_name(j.at("class").get<std::string>());
    spec.material = j.at("material").get<std::string>();
    spec.stone = j.at("stone").get<std::string>();
    spec.stone_count = j.at("stone_count").get<int>();
    spec.background_shade = j.at("background_shade").get<double>();
    spec.geometry_jitter_seed = j.at("jitter_seed").get<std::uint64_t>();
    return spec;
}

nlohmann::json op_to_json(const AugmentOp& op) {
    nlohmann::json j;
    j["kind"] = augment_kind_name(op.kind);
    j["amount"] = op.amount;
    j["gains"] = op.gains;
    return j;
}

AugmentOp op_from_json(const nlohmann::json& j) {
    AugmentOp op;
    op.kind = augment_kind_from_name(j.at("kind").get<std::string>());
    op.amount = j.at("amount").get<double>();
    op.gains = j.at("gains").get<std::array<double, 3>>();
    return op;
}

} // namespace

Manifest build_dataset(const DatasetConfig& config, const std::string& out_dir,
                       const Lexicon& lexicon) {
    if (config.n_base < 4)
        throw DatasetError("need at least one original per class (n_base >= 4)");
    if (config.augment_multiplier < 0)
        throw DatasetError("augment_multiplier must be >= 0");

    fs::create_directories(fs::path(out_dir) / "images");

    Manifest manifest;
    manifest.samples.reserve(static_cast<std::size_t>(config.n_base) *
                             (1 + static_cast<std::size_t>(config.augment_multiplier)));

    for (int i = 0; i < config.n_base; ++i) {
        Rng sample_rng = Rng::split(config.master_seed, static_cast<std::uint64_t>(i));
        const JewelryClass cls = kClassOrder[static_cast<std::size_t>(i % 4)];

        Sample original;
        {
            std::ostringstream id;
            id << "s" << std::setw(6) << std::setfill('0') << i;
            original.id = id.str();
        }
        original.spec = sample_render_spec(cls, sample_rng);
        original.class_label = cls;
        original.image_path = "images/" + original.id + ".png";
        attach_captions(original, lexicon);

        const Tensor image = render_sample(original.spec, config.height, config.width);
        write_png((fs::path(out_dir) / original.image_path).string(), image);
        manifest.samples.push_back(original);

        const std::uint64_t family_seed = sample_rng.state();
        for (int j = 1; j <= config.augment_multiplier; ++j) {
            Rng child_rng = Rng::split(family_seed, static_cast<std::uint64_t>(j));
            Sample child = original;
            child.id = original.id + "-a" + std::to_string(j);
            child.image_path = "images/" + child.id + ".png";
            child.provenance = AugmentedFrom{original.id, sample_augment_op(child_rng)};
            const Tensor augmented = apply_augment(image, child.provenance->op, child_rng);
            write_png((fs::path(out_dir) / child.image_path).string(), augmented);
            manifest.samples.push_back(std::move(child));
        }
    }
    return manifest;
}

std::array<int, 3> split_counts(int n, std::array<double, 3> fractions) {
    const double sum = fractions[0] + fractions[1] + fractions[2];
    if (std::abs(sum - 1.0) > 1e-9)
        throw DatasetError("split fractions must sum to 1");
    // the 1e-9 nudge keeps exact products like 0.15*20 from flooring down
    const int train = static_cast<int>(std::floor(fractions[0] * n + 1e-9));
    const int val = static_cast<int>(std::floor(fractions[1] * n + 1e-9));
    return {train, val, n - train - val};
}

void split_dataset(Manifest& manifest, std::array<double, 3> fractions,
                   std::uint64_t master_seed) {
    std::array<std::vector<std::size_t>, 4> originals_by_class;
    for (std::size_t i = 0; i < manifest.samples.size(); ++i) {
        const Sample& s = manifest.samples[i];
        if (!s.provenance)
            originals_by_class[static_cast<std::size_t>(class_index(s.class_label))].push_back(i);
    }
    for (std::size_t c = 0; c < 4; ++c)
        if (originals_by_class[c].empty())
            throw StratificationError("class '" +
                                      class_name(kClassOrder[c]) +
                                      "' has no original samples");

    std::map<std::string, Split> split_of_original;
    for (std::size_t c = 0; c < 4; ++c) {
        auto& ids = originals_by_class[c];
        Rng rng = Rng::split(master_seed, 1000003 + c); // distinct stream per class
        for (std::size_t i = ids.size(); i > 1; --i)
            std::swap(ids[i - 1], ids[rng.next_below(i)]);

        const auto [n_train, n_val, n_test] = split_counts(static_cast<int>(ids.size()), fractions);
        (void)n_test;
        for (std::size_t k = 0; k < ids.size(); ++k) {
            Split split = Split::Test;
            if (k < static_cast<std::size_t>(n_train))
                split = Split::Train;
            else if (k < static_cast<std::size_t>(n_train + n_val))
                split = Split::Val;
            manifest.samples[ids[k]].split = split;
            split_of_original[manifest.samples[ids[k]].id] = split;
        }
    }

    for (Sample& s : manifest.samples)
        if (s.provenance)
            s.split = split_of_original.at(s.provenance->parent_id);
}

void write_manifest(const Manifest& manifest, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ManifestParseError("cannot open for writing: " + path);
    for (const Sample& s : manifest.samples) {
        nlohmann::json j;
        j["id"] = s.id;
        j["path"] = s.image_path;
        j["split"] = split_name(s.split);
        j["class"] = class_name(s.class_label);
        j["caption_basic"] = s.caption_basic;
        j["caption_normal"] = s.caption_normal;
        j["caption_complete"] = s.caption_complete;
        j["spec"] = spec_to_json(s.spec);
        if (s.provenance) {
            j["provenance"] = {{"kind", "augmented"},
                               {"parent", s.provenance->parent_id},
                               {"op", op_to_json(s.provenance->op)}};
        } else {
            j["provenance"] = {{"kind", "original"}};
        }
        out << j.dump() << '\n';
    }
}

Manifest read_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ManifestParseError("cannot open: " + path);

    Manifest manifest;
    std::string line;
    int line_no = 0;
    std::unordered_set<std::string> seen_ids;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
            Sample s;
            s.id = j.at("id").get<std::string>();
            s.image_path = j.at("path").get<std::string>();
            s.split = split_from_name(j.at("split").get<std::string>());
            s.class_label = class_from_name(j.at("class").get<std::string>());
            s.caption_basic = j.at("caption_basic").get<std::string>();
            s.caption_normal = j.at("caption_normal").get<std::string>();
            s.caption_complete = j.at("caption_complete").get<std::string>();
            s.spec = spec_from_json(j.at("spec"));
            const auto& prov = j.at("provenance");
            if (prov.at("kind").get<std::string>() == "augmented")
                s.provenance = AugmentedFrom{prov.at("parent").get<std::string>(),
                                             op_from_json(prov.at("op"))};
            manifest.samples.push_back(std::move(s));
        } catch (const nlohmann::json::exception& e) {
            throw ManifestParseError("manifest line " + std::to_string(line_no) + ": " +
                                     e.what());
        }
        const std::string& id = manifest.samples.back().id;
        if (!seen_ids.insert(id).second)
            throw ManifestParseError("manifest line " + std::to_string(line_no) +
                                     ": duplicate id " + id);
    }
    return manifest;
}

Tensor load_sample_image(const Sample& sample, const std::string& manifest_dir) {
    return read_png((fs::path(manifest_dir) / sample.image_path).string());
}

std::vector<std::size_t> split_indices(const Manifest& manifest, Split split) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < manifest.samples.size(); ++i)
        if (manifest.samples[i].split == split)
            out.push_back(i);
    return out;
}

} // namespace gemcap
