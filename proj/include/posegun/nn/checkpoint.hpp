#pragma once

#include <filesystem>

#include "posegun/nn/model.hpp"
#include "posegun/nn/train.hpp"

namespace posegun::nn {

struct TrainingMeta {
  int epochs = 0;
  std::uint64_t seed = 0;
  double final_loss = 0.0;
  std::vector<double> loss_trace;
  std::uint64_t dataset_fingerprint = 0;
  int samples = 0;
};

TrainingMeta meta_from_result(const TrainResult &result,
                              const TrainConfig &cfg);

struct LoadedCheckpoint {
  Model model;
  TrainingMeta meta;
};

/// Self-describing binary container: magic+version tag, a JSON header with
/// the model config and training metadata, then the raw weight blob. The
/// round-trip is bit-exact.
void save_checkpoint(const Model &model, const TrainingMeta &meta,
                     const std::filesystem::path &path);

/// Rebuilds the model from the stored config and validates that the weight
/// blob matches it; anything corrupt, truncated, or inconsistent throws
/// CheckpointError.
LoadedCheckpoint load_checkpoint(const std::filesystem::path &path);

} // namespace posegun::nn
