#pragma once

#include <filesystem>
#include <string>

#include "posegun/hand_region.hpp"
#include "posegun/nn/train.hpp"
#include "posegun/pose_render.hpp"
#include "posegun/transforms.hpp"

namespace posegun {

/// Everything the CLI can read from a config file. Flags override these
/// values; these values override the built-in defaults.
struct ToolConfig {
  RegionParams region;
  RenderParams render;
  nn::TrainConfig train;
  std::string variant = "hrc";
  std::string backbone = "full";
  double dark_value_scale = kDefaultDarkScale;
  bool far_centered = false;
  double eval_iomin = 0.5;
  double eval_score = 0.5;
  int jobs = 1;
};

inline constexpr const char *kConfigEnvVar = "POSEGUN_CONFIG";

/// Loads a JSON config file; absent keys keep their defaults.
ToolConfig load_tool_config(const std::filesystem::path &path);

} // namespace posegun
