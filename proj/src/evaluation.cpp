#include "posegun/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

namespace posegun {

MatchResult match_detections(const std::vector<Detection> &dets,
                             const std::vector<BBox> &gts,
                             double iomin_threshold) {
  std::vector<int> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return dets[a].score > dets[b].score;
  });

  MatchResult result;
  std::vector<bool> gt_taken(gts.size(), false);
  for (const int di : order) {
    int best_gt = -1;
    double best_overlap = 0.0;
    for (std::size_t gi = 0; gi < gts.size(); ++gi) {
      if (gt_taken[gi]) {
        continue;
      }
      const double overlap = iomin(dets[di].box, gts[gi]);
      if (overlap >= iomin_threshold && overlap > best_overlap) {
        best_overlap = overlap;
        best_gt = static_cast<int>(gi);
      }
    }
    if (best_gt >= 0) {
      gt_taken[best_gt] = true;
      ++result.tp;
      result.assignments.emplace_back(di, best_gt);
    } else {
      ++result.fp;
      result.assignments.emplace_back(di, -1);
    }
  }
  result.fn = static_cast<int>(gts.size()) - result.tp;
  return result;
}

namespace {

struct ScoredFlag {
  double score;
  bool is_tp;
};

// Every detection's TP/FP flag under full greedy matching. Greedy decisions
// for high scores never depend on lower-scored detections, so the flags
// double as the incremental result of any score-threshold prefix.
std::vector<ScoredFlag> flag_all_detections(const EvalInput &input,
                                            double iomin_threshold) {
  std::vector<ScoredFlag> flags;
  for (const auto &[image_id, dets] : input.detections) {
    const auto gt_it = input.ground_truth.find(image_id);
    if (gt_it == input.ground_truth.end()) {
      throw DataError("detections reference unknown image id: " + image_id);
    }
    const MatchResult match =
        match_detections(dets, gt_it->second, iomin_threshold);
    for (const auto &[di, gi] : match.assignments) {
      flags.push_back({dets[di].score, gi >= 0});
    }
  }
  std::stable_sort(flags.begin(), flags.end(),
                   [](const ScoredFlag &a, const ScoredFlag &b) {
                     return a.score > b.score;
                   });
  return flags;
}

} // namespace

EvalReport evaluate(const EvalInput &input, double iomin_threshold,
                    double score_threshold) {
  EvalReport report;
  for (const auto &[image_id, gts] : input.ground_truth) {
    report.total_gt += static_cast<int>(gts.size());
  }
  if (report.total_gt == 0) {
    throw EvalError("evaluation undefined: dataset has no ground-truth boxes");
  }

  // Precision / recall at the fixed prediction score threshold.
  for (const auto &[image_id, gts] : input.ground_truth) {
    std::vector<Detection> kept;
    const auto det_it = input.detections.find(image_id);
    if (det_it != input.detections.end()) {
      for (const Detection &d : det_it->second) {
        if (d.score >= score_threshold) {
          kept.push_back(d);
        }
      }
    }
    const MatchResult match = match_detections(kept, gts, iomin_threshold);
    report.tp += match.tp;
    report.fp += match.fp;
    report.fn += match.fn;
  }
  report.precision_05 =
      (report.tp + report.fp) == 0
          ? 1.0
          : static_cast<double>(report.tp) / (report.tp + report.fp);
  report.recall_05 = static_cast<double>(report.tp) / (report.tp + report.fn);

  // Score sweep over all distinct detection scores, descending.
  const std::vector<ScoredFlag> flags =
      flag_all_detections(input, iomin_threshold);
  report.pr_curve.push_back({0.0, 1.0});
  std::vector<PrPoint> sweep;
  int ctp = 0, cfp = 0;
  std::size_t i = 0;
  while (i < flags.size()) {
    const double threshold = flags[i].score;
    for (; i < flags.size() && flags[i].score == threshold; ++i) {
      (flags[i].is_tp ? ctp : cfp)++;
    }
    sweep.push_back({static_cast<double>(ctp) / report.total_gt,
                     static_cast<double>(ctp) / (ctp + cfp)});
  }
  report.pr_curve.insert(report.pr_curve.end(), sweep.begin(), sweep.end());

  // Monotone precision envelope, integrated without interpolation between
  // recall steps (all-point PASCAL convention).
  double env = 0.0;
  std::vector<double> enveloped(sweep.size());
  for (std::size_t k = sweep.size(); k-- > 0;) {
    env = std::max(env, sweep[k].precision);
    enveloped[k] = env;
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t k = 0; k < sweep.size(); ++k) {
    ap += (sweep[k].recall - prev_recall) * enveloped[k];
    prev_recall = sweep[k].recall;
  }
  report.ap = ap * 100.0;
  return report;
}

void emit_pr_curve(const EvalReport &report,
                   const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw WriteError("cannot write PR curve: " + path.string());
  }
  out << "recall,precision\n";
  char buf[64];
  for (const PrPoint &p : report.pr_curve) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", p.recall, p.precision);
    out << buf;
  }
  if (!out) {
    throw WriteError("short write: " + path.string());
  }
}

} // namespace posegun
