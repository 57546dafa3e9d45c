#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "posegun/hand_region.hpp"
#include "posegun/image.hpp"
#include "posegun/pose_io.hpp"
#include "posegun/pose_render.hpp"

namespace posegun {

enum class Label { handgun, no_handgun };

std::string to_string(Label label);
Label label_from_string(const std::string &s);

inline constexpr int kRegionCropSize = 256;
inline constexpr double kLabelIominThreshold = 0.5;

/// Where a region crop came from; unique within one dataset build.
struct RegionSource {
  std::string image_id;
  int person_id = 0;
  HandSide side = HandSide::right;

  friend auto operator<=>(const RegionSource &, const RegionSource &) = default;
};

/// One classifier training sample: the 256x256 crop, its IoMin-derived
/// label, and (for the pose-fused dataset) the matching pose half.
struct LabeledRegion {
  ImageU8 crop; // 256x256x3
  Label label = Label::no_handgun;
  std::optional<PoseHalf> pose_half;
  RegionSource source;
};

/// handgun iff some ground-truth box overlaps the region at
/// iomin >= threshold; no_handgun otherwise (vacuously when gts is empty).
Label label_region(const BBox &region_box,
                   const std::vector<GroundTruthBox> &gts,
                   double threshold = kLabelIominThreshold);

/// Clips the box to the image and resamples to 256x256 (bilinear, aspect
/// ratio not preserved). Throws DataError when the box misses the image.
ImageU8 crop_and_resize(const ImageU8 &image, const BBox &box);

struct DatasetBuildResult {
  std::vector<LabeledRegion> regions; // sorted by source triple
  std::vector<std::string> warnings;  // skipped entries / pose exclusions
  int handgun_count = 0;
  int no_handgun_count = 0;
  int pose_skipped_regions = 0; // excluded from a --with-pose build
  bool with_pose = false;
};

/// Runs the whole labelling procedure over a manifest: extract regions,
/// clip, label against ground truth, crop-resize, and (optionally) attach
/// the selected pose half. Entry-level failures are skipped and reported
/// in `warnings` rather than aborting the build.
DatasetBuildResult build_region_dataset(const DatasetManifest &manifest,
                                        const RegionParams &params,
                                        bool with_pose,
                                        const RenderParams &render = {});

/// Directory layout: index.jsonl (one record per region), crops/*.ppm,
/// pose/*.pbm, meta.json.
void write_region_dataset(const DatasetBuildResult &result,
                          const std::filesystem::path &dir);

std::vector<LabeledRegion>
load_region_dataset(const std::filesystem::path &dir);

/// Debug export: one lossless 1-bit canvas per normalizable person, named
/// <image-id>_p<person-id>.pbm. Returns how many were written.
int export_canvases(const DatasetManifest &manifest,
                    const RenderParams &render,
                    const std::filesystem::path &dir);

} // namespace posegun
