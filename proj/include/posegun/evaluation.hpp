#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "posegun/geometry.hpp"

namespace posegun {

inline constexpr double kEvalIominThreshold = 0.5;
inline constexpr double kEvalScoreThreshold = 0.5;

struct MatchResult {
  int tp = 0;
  int fp = 0;
  int fn = 0;
  // (detection index, matched gt index); -1 gt index marks a false positive.
  std::vector<std::pair<int, int>> assignments;
};

/// Greedy one-to-one matching for a single image: detections in descending
/// score order each claim the unmatched ground-truth box of highest
/// iomin >= threshold.
MatchResult match_detections(const std::vector<Detection> &dets,
                             const std::vector<BBox> &gts,
                             double iomin_threshold = kEvalIominThreshold);

struct PrPoint {
  double recall = 0.0;
  double precision = 1.0;
};

struct EvalReport {
  double precision_05 = 1.0;
  double recall_05 = 0.0;
  double ap = 0.0; // percentage in [0,100]
  std::vector<PrPoint> pr_curve; // recall-ascending, starts at (0,1)
  int tp = 0, fp = 0, fn = 0;    // counts at the score threshold
  int total_gt = 0;
};

/// Detections and ground truth grouped per image. Every annotated image must
/// appear in `gts` (possibly with an empty box list) so its misses count.
struct EvalInput {
  std::map<std::string, std::vector<Detection>> detections;
  std::map<std::string, std::vector<BBox>> ground_truth;
};

/// Precision/recall at the score threshold plus all-point-interpolated AP
/// over the full score sweep. Throws EvalError when the dataset has no
/// ground-truth boxes at all.
EvalReport evaluate(const EvalInput &input,
                    double iomin_threshold = kEvalIominThreshold,
                    double score_threshold = kEvalScoreThreshold);

/// Two-column `recall,precision` text file, recall-ascending.
void emit_pr_curve(const EvalReport &report,
                   const std::filesystem::path &path);

} // namespace posegun
