#include "posegun/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "posegun/parallel.hpp"

namespace posegun {

using nlohmann::json;

DetectionResult detect(const ImageU8 &image,
                       const std::vector<Skeleton> &skeletons,
                       const nn::Model &model, const RegionParams &params,
                       const RenderParams &render,
                       const std::string &image_id) {
  params.validate();
  render.validate();
  const bool fused = model.config().variant == nn::Variant::hrc_p;

  DetectionResult result;
  result.image_id = image_id;
  for (const Skeleton &skeleton : skeletons) {
    std::vector<HandRegion> regions;
    for (const HandRegion &raw : extract_hand_regions(skeleton, params)) {
      if (auto clipped = clip_to_image(raw, image.width, image.height)) {
        regions.push_back(*clipped);
      }
    }
    if (regions.empty()) {
      continue;
    }

    bool have_pose = false;
    NormalizedSkeleton ns;
    PoseCanvas canvas;
    if (fused) {
      try {
        ns = normalize_skeleton(skeleton);
        canvas = render_canvas(ns, render);
        have_pose = true;
      } catch (const NormalizationError &) {
        // fall back to the all-zero pose half below
      }
    }

    for (const HandRegion &region : regions) {
      const ImageU8 crop = crop_and_resize(image, region.box);
      nn::Prediction pred;
      bool degraded = false;
      if (!fused) {
        pred = model.predict(crop, nullptr);
      } else if (have_pose && region.anchor_wrist.defined()) {
        const PoseHalf half =
            select_half(region, ns, canvas, render.px_per_unit);
        pred = model.predict(crop, &half);
      } else {
        const PoseHalf zero_half; // all zeros
        pred = model.predict(crop, &zero_half);
        degraded = true;
      }

      result.diagnostics.push_back({region.box, region.side, region.person_id,
                                    pred.score, pred.label, degraded});
      if (pred.label == Label::handgun) {
        result.detections.emplace_back(region.box, pred.score);
      }
    }
  }
  return result;
}

BatchDetectResult detect_batch(const DatasetManifest &manifest,
                               const nn::Model &model,
                               const RegionParams &params,
                               const RenderParams &render, int jobs) {
  struct Slot {
    DetectionResult result;
    std::string warning;
    bool ok = false;
  };
  std::vector<Slot> slots(manifest.entries.size());
  parallel_for(manifest.entries.size(), jobs, [&](std::size_t i) {
    const ManifestEntry &entry = manifest.entries[i];
    try {
      const ImageU8 image = read_pnm(entry.image_path);
      const std::vector<Skeleton> skeletons = load_skeletons(entry);
      slots[i].result =
          detect(image, skeletons, model, params, render, entry.image_id);
      slots[i].ok = true;
    } catch (const Error &e) {
      slots[i].warning =
          "skipped entry " + entry.image_id + ": " + e.what();
    }
  });

  BatchDetectResult batch;
  for (Slot &slot : slots) {
    if (slot.ok) {
      batch.results.push_back(std::move(slot.result));
    } else {
      batch.warnings.push_back(std::move(slot.warning));
    }
  }
  return batch;
}

void write_detections_csv(const std::vector<DetectionResult> &results,
                          const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw WriteError("cannot write detections file: " + path.string());
  }
  out << "image_id,x_min,y_min,x_max,y_max,score\n";
  char buf[160];
  for (const DetectionResult &r : results) {
    for (const Detection &d : r.detections) {
      std::snprintf(buf, sizeof(buf), ",%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    d.box.x_min, d.box.y_min, d.box.x_max, d.box.y_max,
                    d.score);
      out << r.image_id << buf;
    }
  }
  if (!out) {
    throw WriteError("short write: " + path.string());
  }
}

std::map<std::string, std::vector<Detection>>
read_detections_csv(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open detections file: " + path.string());
  }
  std::string line;
  if (!std::getline(in, line) ||
      line != "image_id,x_min,y_min,x_max,y_max,score") {
    throw ParseError("bad detections file header: " + path.string());
  }
  std::map<std::string, std::vector<Detection>> grouped;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (fields.size() != 6) {
      throw ParseError("detections line " + std::to_string(line_no) +
                       ": expected 6 fields");
    }
    try {
      grouped[fields[0]].emplace_back(
          BBox(std::stod(fields[1]), std::stod(fields[2]),
               std::stod(fields[3]), std::stod(fields[4])),
          std::stod(fields[5]));
    } catch (const std::invalid_argument &) {
      throw ParseError("detections line " + std::to_string(line_no) +
                       ": bad number");
    }
  }
  return grouped;
}

void write_diagnostics_jsonl(const std::vector<DetectionResult> &results,
                             const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw WriteError("cannot write diagnostics file: " + path.string());
  }
  for (const DetectionResult &r : results) {
    json regions = json::array();
    for (const RegionDiagnostic &d : r.diagnostics) {
      regions.push_back({{"box", {d.box.x_min, d.box.y_min, d.box.x_max,
                                  d.box.y_max}},
                         {"side", to_string(d.side)},
                         {"person_id", d.person_id},
                         {"score", d.score},
                         {"label", to_string(d.label)},
                         {"pose_degraded", d.pose_degraded}});
    }
    out << json{{"image_id", r.image_id}, {"regions", std::move(regions)}}
               .dump()
        << '\n';
  }
}

} // namespace posegun
