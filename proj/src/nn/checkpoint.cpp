#include "posegun/nn/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include <json.hpp>

namespace posegun::nn {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'P', 'G', 'C', 'K', 'P', 'T', '0', '1'};

std::string hex_u64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "0x%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t parse_hex_u64(const std::string &s) {
  return std::stoull(s, nullptr, 16);
}

template <typename T> void write_raw(std::ostream &out, const T &v) {
  out.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

template <typename T> T read_raw(std::istream &in, const char *what) {
  T v{};
  if (!in.read(reinterpret_cast<char *>(&v), sizeof(T))) {
    throw CheckpointError(std::string("truncated checkpoint: ") + what);
  }
  return v;
}

} // namespace

TrainingMeta meta_from_result(const TrainResult &result,
                              const TrainConfig &cfg) {
  TrainingMeta meta;
  meta.epochs = cfg.epochs;
  meta.seed = cfg.seed;
  meta.final_loss = result.final_loss;
  meta.loss_trace = result.epoch_losses;
  meta.dataset_fingerprint = result.dataset_fingerprint;
  meta.samples = result.samples;
  return meta;
}

void save_checkpoint(const Model &model, const TrainingMeta &meta,
                     const std::filesystem::path &path) {
  const json header{
      {"config",
       {{"variant", to_string(model.config().variant)},
        {"backbone", to_string(model.config().backbone)},
        {"init_seed", model.config().init_seed}}},
      {"training",
       {{"epochs", meta.epochs},
        {"seed", meta.seed},
        {"final_loss", meta.final_loss},
        {"loss_trace", meta.loss_trace},
        {"dataset_fingerprint", hex_u64(meta.dataset_fingerprint)},
        {"samples", meta.samples}}}};
  const std::string header_text = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw WriteError("cannot write checkpoint: " + path.string());
  }
  out.write(kMagic, sizeof(kMagic));
  write_raw(out, static_cast<std::uint64_t>(header_text.size()));
  out.write(header_text.data(),
            static_cast<std::streamsize>(header_text.size()));
  const auto &weights = model.parameters();
  write_raw(out, static_cast<std::uint64_t>(weights.size()));
  out.write(reinterpret_cast<const char *>(weights.data()),
            static_cast<std::streamsize>(weights.size() * sizeof(double)));
  if (!out) {
    throw WriteError("short write: " + path.string());
  }
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open checkpoint: " + path.string());
  }
  char magic[8] = {};
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw CheckpointError("not a checkpoint file (bad magic/version): " +
                          path.string());
  }
  const auto header_len = read_raw<std::uint64_t>(in, "header length");
  if (header_len > (1u << 26)) {
    throw CheckpointError("implausible header size: " + path.string());
  }
  std::string header_text(header_len, '\0');
  if (!in.read(header_text.data(),
               static_cast<std::streamsize>(header_len))) {
    throw CheckpointError("truncated checkpoint: header");
  }
  json header;
  try {
    header = json::parse(header_text);
  } catch (const json::parse_error &e) {
    throw CheckpointError(std::string("corrupt checkpoint header: ") +
                          e.what());
  }

  ModelConfig cfg;
  TrainingMeta meta;
  try {
    const json &c = header.at("config");
    cfg.variant = variant_from_string(c.at("variant").get<std::string>());
    cfg.backbone = backbone_from_string(c.at("backbone").get<std::string>());
    cfg.init_seed = c.at("init_seed").get<std::uint64_t>();
    const json &t = header.at("training");
    meta.epochs = t.at("epochs").get<int>();
    meta.seed = t.at("seed").get<std::uint64_t>();
    meta.final_loss = t.at("final_loss").get<double>();
    meta.loss_trace = t.at("loss_trace").get<std::vector<double>>();
    meta.dataset_fingerprint =
        parse_hex_u64(t.at("dataset_fingerprint").get<std::string>());
    meta.samples = t.at("samples").get<int>();
  } catch (const std::exception &e) {
    throw CheckpointError(std::string("invalid checkpoint header: ") +
                          e.what());
  }

  LoadedCheckpoint loaded{Model::build(cfg, /*init_weights=*/false),
                          std::move(meta)};
  const auto weight_count = read_raw<std::uint64_t>(in, "weight count");
  if (weight_count != loaded.model.param_count()) {
    throw CheckpointError(
        "checkpoint weight blob does not match declared config: has " +
        std::to_string(weight_count) + " weights, config needs " +
        std::to_string(loaded.model.param_count()));
  }
  auto &weights = loaded.model.parameters();
  if (!in.read(reinterpret_cast<char *>(weights.data()),
               static_cast<std::streamsize>(weights.size() * sizeof(double)))) {
    throw CheckpointError("truncated checkpoint: weight blob");
  }
  return loaded;
}

} // namespace posegun::nn
