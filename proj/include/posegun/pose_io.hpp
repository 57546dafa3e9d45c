#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "posegun/errors.hpp"
#include "posegun/geometry.hpp"
#include "posegun/skeleton.hpp"

namespace posegun {

/// Parses the pose-estimator output format: a JSON object with a `people`
/// array, each person carrying `pose_keypoints_2d` with exactly 75 numbers
/// in (x, y, confidence) x 25 order. person_id is the 0-based record index;
/// confidences are clamped to [0,1].
std::vector<Skeleton> parse_keypoint_file(const std::string &content);

/// Inverse of parse_keypoint_file; round-trips skeletons exactly.
std::string serialize_keypoint_file(const std::vector<Skeleton> &skeletons);

std::vector<Skeleton> load_keypoint_file(const std::filesystem::path &path);
void save_keypoint_file(const std::vector<Skeleton> &skeletons,
                        const std::filesystem::path &path);

/// One manifest record: the image, its ground-truth handgun boxes, and the
/// keypoint file produced by the pose estimator.
struct ManifestEntry {
  std::string image_id;    // the `image` field as written in the manifest
  std::filesystem::path image_path;     // resolved against the manifest dir
  std::filesystem::path keypoints_path; // resolved against the manifest dir
  std::vector<GroundTruthBox> boxes;
};

struct DatasetManifest {
  std::filesystem::path base_dir;
  std::vector<ManifestEntry> entries;
};

/// Loads a JSONL manifest: one record per line with fields `image` (path),
/// `keypoints` (path), `boxes` (list of [x_min, y_min, x_max, y_max]).
/// Relative paths resolve against the manifest's directory; referenced files
/// must exist.
DatasetManifest load_manifest(const std::filesystem::path &path);

/// Writes a manifest in the same JSONL format, paths stored as given.
void save_manifest(const std::vector<ManifestEntry> &entries,
                   const std::filesystem::path &path);

/// Convenience: parse the entry's keypoint file.
std::vector<Skeleton> load_skeletons(const ManifestEntry &entry);

} // namespace posegun
