#include "fredo/checkpoint.hpp"

#include <fstream>
#include <vector>

#include <json.hpp>

#include "fredo/errors.hpp"

namespace fredo {

namespace {

using nlohmann::json;

json tensor_to_json(const std::vector<double>& data, std::vector<std::size_t> shape) {
    return json{{"shape", shape}, {"data", data}};
}

std::vector<double> tensor_from_json(const json& j, std::vector<std::size_t> expect_shape,
                                     const std::string& name) {
    const auto shape = j.at("shape").get<std::vector<std::size_t>>();
    if (shape != expect_shape) {
        throw ConfigError("checkpoint tensor " + name + " has unexpected shape");
    }
    auto data = j.at("data").get<std::vector<double>>();
    std::size_t count = 1;
    for (std::size_t d : shape) count *= d;
    if (data.size() != count) {
        throw ConfigError("checkpoint tensor " + name + " has wrong element count");
    }
    return data;
}

json config_to_json(const ForecasterConfig& cfg) {
    return json{
        {"input_len", cfg.input_len},   {"output_len", cfg.output_len},
        {"period", cfg.period},         {"cycles", cfg.cycles},
        {"depth", cfg.depth},           {"domain", to_string(cfg.domain)},
        {"lr", cfg.lr},                 {"batch_size", cfg.batch_size},
        {"patience", cfg.patience},     {"max_epochs", cfg.max_epochs},
        {"seed", cfg.seed},
    };
}

ForecasterConfig config_from_json(const json& j) {
    ForecasterConfig cfg;
    cfg.input_len = j.at("input_len").get<std::size_t>();
    cfg.output_len = j.at("output_len").get<std::size_t>();
    cfg.period = j.at("period").get<std::size_t>();
    cfg.cycles = j.at("cycles").get<std::size_t>();
    cfg.depth = j.at("depth").get<std::size_t>();
    cfg.domain = domain_mode_from_string(j.at("domain").get<std::string>());
    cfg.lr = j.at("lr").get<double>();
    cfg.batch_size = j.at("batch_size").get<std::size_t>();
    cfg.patience = j.at("patience").get<std::size_t>();
    cfg.max_epochs = j.at("max_epochs").get<std::size_t>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.validate();
    return cfg;
}

} // namespace

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
    json tensors_json;
    const ModelParams& p = ckpt.params;
    tensors_json["input_proj.weight"] =
        tensor_to_json(p.input_proj.weights, {p.input_proj.out_dim, p.input_proj.in_dim});
    tensors_json["input_proj.bias"] = tensor_to_json(p.input_proj.bias, {p.input_proj.out_dim});
    for (std::size_t b = 0; b < p.mixers.size(); ++b) {
        const std::string prefix = "mixers." + std::to_string(b) + ".";
        const MixerBlock& block = p.mixers[b];
        tensors_json[prefix + "first.weight"] =
            tensor_to_json(block.first.weights, {block.first.out_dim, block.first.in_dim});
        tensors_json[prefix + "first.bias"] = tensor_to_json(block.first.bias, {block.first.out_dim});
        tensors_json[prefix + "second.weight"] =
            tensor_to_json(block.second.weights, {block.second.out_dim, block.second.in_dim});
        tensors_json[prefix + "second.bias"] =
            tensor_to_json(block.second.bias, {block.second.out_dim});
    }

    const json doc{
        {"format_version", kCheckpointFormatVersion},
        {"config", config_to_json(ckpt.config)},
        {"tensors", tensors_json},
    };
    std::ofstream out(path);
    if (!out.is_open()) {
        throw Error("cannot write checkpoint: " + path.string());
    }
    out << doc.dump(2) << "\n";
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in.is_open()) {
        throw MissingFile(path.string());
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("malformed checkpoint " + path.string() + ": " + e.what());
    }

    if (doc.at("format_version").get<int>() != kCheckpointFormatVersion) {
        throw ConfigError("unsupported checkpoint format version");
    }
    Checkpoint ckpt;
    ckpt.config = config_from_json(doc.at("config"));
    const ForecasterConfig& cfg = ckpt.config;
    ckpt.params = make_params(cfg.input_len, cfg.output_len, cfg.depth);

    const json& tensors_json = doc.at("tensors");
    ModelParams& p = ckpt.params;
    p.input_proj.weights = tensor_from_json(tensors_json.at("input_proj.weight"),
                                            {cfg.output_len, cfg.input_len}, "input_proj.weight");
    p.input_proj.bias = tensor_from_json(tensors_json.at("input_proj.bias"),
                                         {cfg.output_len}, "input_proj.bias");
    for (std::size_t b = 0; b < cfg.depth; ++b) {
        const std::string prefix = "mixers." + std::to_string(b) + ".";
        MixerBlock& block = p.mixers[b];
        block.first.weights = tensor_from_json(tensors_json.at(prefix + "first.weight"),
                                               {cfg.output_len, cfg.output_len},
                                               prefix + "first.weight");
        block.first.bias = tensor_from_json(tensors_json.at(prefix + "first.bias"),
                                            {cfg.output_len}, prefix + "first.bias");
        block.second.weights = tensor_from_json(tensors_json.at(prefix + "second.weight"),
                                                {cfg.output_len, cfg.output_len},
                                                prefix + "second.weight");
        block.second.bias = tensor_from_json(tensors_json.at(prefix + "second.bias"),
                                             {cfg.output_len}, prefix + "second.bias");
    }
    return ckpt;
}

} // namespace fredo
