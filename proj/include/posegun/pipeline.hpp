#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "posegun/nn/model.hpp"
#include "posegun/pose_io.hpp"

namespace posegun {

/// One classified region, kept for every region whether or not it became a
/// detection.
struct RegionDiagnostic {
  BBox box;
  HandSide side = HandSide::right;
  int person_id = 0;
  double score = 0.0;
  Label label = Label::no_handgun;
  bool pose_degraded = false; // HRC+P fell back to an all-zero pose half
};

struct DetectionResult {
  std::string image_id;
  std::vector<Detection> detections;
  std::vector<RegionDiagnostic> diagnostics;
};

/// Full per-image pass: skeletons -> hand regions -> (pose halves) ->
/// classification -> handgun boxes. Emitted boxes are exactly the clipped
/// region boxes; nothing is regressed. Skeletons that cannot be normalized
/// under HRC+P are classified with an all-zero pose half and flagged.
DetectionResult detect(const ImageU8 &image,
                       const std::vector<Skeleton> &skeletons,
                       const nn::Model &model, const RegionParams &params,
                       const RenderParams &render = {},
                       const std::string &image_id = {});

struct BatchDetectResult {
  std::vector<DetectionResult> results; // manifest order
  std::vector<std::string> warnings;    // skipped entries
};

BatchDetectResult detect_batch(const DatasetManifest &manifest,
                               const nn::Model &model,
                               const RegionParams &params,
                               const RenderParams &render = {}, int jobs = 1);

/// Detections file: CSV with header image_id,x_min,y_min,x_max,y_max,score;
/// scores printed with full round-trip precision.
void write_detections_csv(const std::vector<DetectionResult> &results,
                          const std::filesystem::path &path);

std::map<std::string, std::vector<Detection>>
read_detections_csv(const std::filesystem::path &path);

/// Per-image diagnostics sidecar, one JSON record per line.
void write_diagnostics_jsonl(const std::vector<DetectionResult> &results,
                             const std::filesystem::path &path);

} // namespace posegun
