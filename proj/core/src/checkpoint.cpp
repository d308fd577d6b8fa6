#include "gemcap/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include <json.hpp>

#include "gemcap/error.hpp"

namespace gemcap {
namespace {

constexpr char kMagic[6] = {'G', 'E', 'M', 'C', 'A', 'P'};
constexpr unsigned char kVersion = 1;

nlohmann::json config_to_json(const ModelConfig& cfg) {
    nlohmann::json j;
    j["encoder"] = {{"channels", cfg.encoder.channels},
                    {"height", cfg.encoder.height},
                    {"width", cfg.encoder.width},
                    {"blocks", cfg.encoder.blocks},
                    {"feature_dim", cfg.encoder.feature_dim},
                    {"scale_name", cfg.encoder.scale_name}};
    j["decoder"] = {{"cell", cell_name(cfg.decoder.cell)},
                    {"hidden", cfg.decoder.hidden},
                    {"embed_dim", cfg.decoder.embed_dim},
                    {"max_len", cfg.decoder.max_len}};
    j["task"] = {{"kind", task_name(cfg.task.kind)}, {"level", level_name(cfg.task.level)}};
    return j;
}

ModelConfig config_from_json(const nlohmann::json& j) {
    ModelConfig cfg;
    const auto& e = j.at("encoder");
    cfg.encoder.channels = e.at("channels").get<int>();
    cfg.encoder.height = e.at("height").get<int>();
    cfg.encoder.width = e.at("width").get<int>();
    cfg.encoder.blocks = e.at("blocks").get<std::vector<int>>();
    cfg.encoder.feature_dim = e.at("feature_dim").get<int>();
    cfg.encoder.scale_name = e.at("scale_name").get<std::string>();
    const auto& d = j.at("decoder");
    cfg.decoder.cell = cell_from_name(d.at("cell").get<std::string>());
    cfg.decoder.hidden = d.at("hidden").get<int>();
    cfg.decoder.embed_dim = d.at("embed_dim").get<int>();
    cfg.decoder.max_len = d.at("max_len").get<int>();
    const auto& t = j.at("task");
    cfg.task.kind = task_from_name(t.at("kind").get<std::string>());
    cfg.task.level = level_from_name(t.at("level").get<std::string>());
    return cfg;
}

} // namespace

void save_checkpoint(CaptionModel& model, const CheckpointMeta& meta, const std::string& path) {
    nlohmann::json j;
    j["config"] = config_to_json(model.config());
    j["vocab"] = model.vocab().tokens();
    j["metrics"] = {{"best_val_loss", meta.best_val_loss},
                    {"best_val_ccr", meta.best_val_ccr},
                    {"epoch", meta.epoch}};
    nlohmann::json params = nlohmann::json::array();
    for (const Param* p : model.params())
        params.push_back({{"name", p->name}, {"shape", p->value.shape()}});
    j["params"] = params;
    const std::string header = j.dump();

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw CheckpointFormatError("cannot open for writing: " + path);
    out.write(kMagic, sizeof(kMagic));
    out.put(static_cast<char>(kVersion));
    const std::uint32_t len = static_cast<std::uint32_t>(header.size());
    unsigned char len_le[4] = {static_cast<unsigned char>(len),
                               static_cast<unsigned char>(len >> 8),
                               static_cast<unsigned char>(len >> 16),
                               static_cast<unsigned char>(len >> 24)};
    out.write(reinterpret_cast<const char*>(len_le), 4);
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    for (const Param* p : model.params())
        out.write(reinterpret_cast<const char*>(p->value.data()),
                  static_cast<std::streamsize>(p->value.size() * sizeof(double)));
    if (!out)
        throw CheckpointFormatError("short write: " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw CheckpointFormatError("cannot open: " + path);

    char magic[6];
    if (!in.read(magic, 6) || std::memcmp(magic, kMagic, 6) != 0)
        throw CheckpointFormatError("bad checkpoint magic in " + path);
    const int version = in.get();
    if (version != kVersion)
        throw CheckpointFormatError("unsupported checkpoint version " +
                                    std::to_string(version));

    unsigned char len_le[4];
    if (!in.read(reinterpret_cast<char*>(len_le), 4))
        throw CheckpointCorrupt("truncated header length in " + path);
    const std::uint32_t len = static_cast<std::uint32_t>(len_le[0]) |
                              (static_cast<std::uint32_t>(len_le[1]) << 8) |
                              (static_cast<std::uint32_t>(len_le[2]) << 16) |
                              (static_cast<std::uint32_t>(len_le[3]) << 24);
    std::string header(len, '\0');
    if (!in.read(header.data(), len))
        throw CheckpointCorrupt("truncated metadata in " + path);

    nlohmann::json j;
    try {
        j = nlohmann::json::parse(header);
    } catch (const nlohmann::json::exception& e) {
        throw CheckpointCorrupt(std::string("metadata is not valid JSON: ") + e.what());
    }

    CheckpointMeta meta;
    meta.best_val_loss = j.at("metrics").at("best_val_loss").get<double>();
    meta.best_val_ccr = j.at("metrics").at("best_val_ccr").get<double>();
    meta.epoch = j.at("metrics").at("epoch").get<int>();

    LoadedCheckpoint loaded{
        CaptionModel(config_from_json(j.at("config")),
                     Vocabulary::from_table(j.at("vocab").get<std::vector<std::string>>()), 0),
        meta};

    const auto declared = j.at("params");
    const std::vector<Param*> params = loaded.model.params();
    if (declared.size() != params.size())
        throw CheckpointCorrupt("parameter count mismatch in " + path);
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (declared[i].at("name").get<std::string>() != params[i]->name ||
            declared[i].at("shape").get<std::vector<int>>() != params[i]->value.shape())
            throw CheckpointCorrupt("parameter layout mismatch at index " + std::to_string(i));
        if (!in.read(reinterpret_cast<char*>(params[i]->value.data()),
                     static_cast<std::streamsize>(params[i]->value.size() * sizeof(double))))
            throw CheckpointCorrupt("truncated parameter payload in " + path);
    }
    in.peek();
    if (!in.eof())
        throw CheckpointCorrupt("trailing bytes after parameter payload in " + path);
    return loaded;
}

} // namespace gemcap
