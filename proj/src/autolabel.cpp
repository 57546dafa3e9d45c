#include "posegun/autolabel.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "posegun/parallel.hpp"

namespace posegun {

using nlohmann::json;

std::string to_string(Label label) {
  return label == Label::handgun ? "handgun" : "no_handgun";
}

Label label_from_string(const std::string &s) {
  if (s == "handgun") {
    return Label::handgun;
  }
  if (s == "no_handgun") {
    return Label::no_handgun;
  }
  throw DataError("unknown label: " + s);
}

Label label_region(const BBox &region_box,
                   const std::vector<GroundTruthBox> &gts, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw DataError("label threshold must be in (0,1]");
  }
  for (const GroundTruthBox &gt : gts) {
    if (iomin(region_box, gt.box) >= threshold) {
      return Label::handgun;
    }
  }
  return Label::no_handgun;
}

ImageU8 crop_and_resize(const ImageU8 &image, const BBox &box) {
  return crop_resize_bilinear(image, box, kRegionCropSize, kRegionCropSize);
}

namespace {

struct EntryOutput {
  std::vector<LabeledRegion> regions;
  std::vector<std::string> warnings;
  int pose_skipped = 0;
};

EntryOutput process_entry(const ManifestEntry &entry,
                          const RegionParams &params, bool with_pose,
                          const RenderParams &render) {
  EntryOutput out;
  ImageU8 image;
  std::vector<Skeleton> skeletons;
  try {
    image = read_pnm(entry.image_path);
    skeletons = load_skeletons(entry);
  } catch (const Error &e) {
    out.warnings.push_back("skipped entry " + entry.image_id + ": " +
                           e.what());
    return out;
  }
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
    if (with_pose) {
      try {
        ns = normalize_skeleton(skeleton);
        canvas = render_canvas(ns, render);
        have_pose = true;
      } catch (const NormalizationError &e) {
        out.warnings.push_back("entry " + entry.image_id + " person " +
                               std::to_string(skeleton.person_id) +
                               ": excluded from pose dataset: " + e.what());
      }
    }
    if (with_pose && !have_pose) {
      out.pose_skipped += static_cast<int>(regions.size());
      continue;
    }

    for (const HandRegion &region : regions) {
      LabeledRegion sample;
      sample.crop = crop_and_resize(image, region.box);
      sample.label = label_region(region.box, entry.boxes);
      sample.source = {entry.image_id, region.person_id, region.side};
      if (with_pose) {
        sample.pose_half = select_half(region, ns, canvas, render.px_per_unit);
      }
      out.regions.push_back(std::move(sample));
    }
  }
  return out;
}

} // namespace

DatasetBuildResult build_region_dataset(const DatasetManifest &manifest,
                                        const RegionParams &params,
                                        bool with_pose,
                                        const RenderParams &render) {
  params.validate();
  render.validate();
  std::vector<EntryOutput> outputs(manifest.entries.size());
  parallel_for(manifest.entries.size(), 1, [&](std::size_t i) {
    outputs[i] = process_entry(manifest.entries[i], params, with_pose, render);
  });

  DatasetBuildResult result;
  result.with_pose = with_pose;
  for (EntryOutput &out : outputs) {
    std::move(out.regions.begin(), out.regions.end(),
              std::back_inserter(result.regions));
    std::move(out.warnings.begin(), out.warnings.end(),
              std::back_inserter(result.warnings));
    result.pose_skipped_regions += out.pose_skipped;
  }
  std::sort(result.regions.begin(), result.regions.end(),
            [](const LabeledRegion &a, const LabeledRegion &b) {
              return a.source < b.source;
            });
  for (const LabeledRegion &r : result.regions) {
    (r.label == Label::handgun ? result.handgun_count
                               : result.no_handgun_count)++;
  }
  return result;
}

namespace {

std::string sanitize(const std::string &s) {
  std::string out = s;
  for (char &c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '.' || c == '-' || c == '_';
    if (!ok) {
      c = '_';
    }
  }
  return out;
}

std::string region_stem(std::size_t index, const RegionSource &src) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "r%05zu", index);
  return std::string(buf) + "_" + sanitize(src.image_id) + "_p" +
         std::to_string(src.person_id) + "_" + to_string(src.side);
}

} // namespace

void write_region_dataset(const DatasetBuildResult &result,
                          const std::filesystem::path &dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "crops");
  if (result.with_pose) {
    fs::create_directories(dir / "pose");
  }
  std::ofstream index(dir / "index.jsonl", std::ios::binary);
  if (!index) {
    throw WriteError("cannot write dataset index in " + dir.string());
  }
  for (std::size_t i = 0; i < result.regions.size(); ++i) {
    const LabeledRegion &r = result.regions[i];
    const std::string stem = region_stem(i, r.source);
    const std::string crop_rel = "crops/" + stem + ".ppm";
    write_pnm(r.crop, dir / crop_rel);
    std::string pose_rel;
    std::string pose_side;
    if (r.pose_half) {
      pose_rel = "pose/" + stem + ".pbm";
      pose_side = to_string(r.pose_half->side);
      write_pbm(to_image(*r.pose_half), dir / pose_rel);
    }
    const json rec{{"crop", crop_rel},
                   {"pose_half", pose_rel},
                   {"pose_side", pose_side},
                   {"label", to_string(r.label)},
                   {"image_id", r.source.image_id},
                   {"person_id", r.source.person_id},
                   {"side", to_string(r.source.side)}};
    index << rec.dump() << '\n';
  }

  const json meta{{"handgun", result.handgun_count},
                  {"no_handgun", result.no_handgun_count},
                  {"with_pose", result.with_pose},
                  {"pose_skipped_regions", result.pose_skipped_regions},
                  {"warnings", result.warnings}};
  std::ofstream meta_out(dir / "meta.json", std::ios::binary);
  meta_out << meta.dump(2) << '\n';
}

int export_canvases(const DatasetManifest &manifest,
                    const RenderParams &render,
                    const std::filesystem::path &dir) {
  render.validate();
  std::filesystem::create_directories(dir);
  int written = 0;
  for (const ManifestEntry &entry : manifest.entries) {
    std::vector<Skeleton> skeletons;
    try {
      skeletons = load_skeletons(entry);
    } catch (const Error &) {
      continue;
    }
    for (const Skeleton &skeleton : skeletons) {
      try {
        const PoseCanvas canvas =
            render_canvas(normalize_skeleton(skeleton), render);
        const std::string name = sanitize(entry.image_id) + "_p" +
                                 std::to_string(skeleton.person_id) + ".pbm";
        write_pbm(to_image(canvas), dir / name);
        ++written;
      } catch (const NormalizationError &) {
        // nothing to draw for this person
      }
    }
  }
  return written;
}

std::vector<LabeledRegion>
load_region_dataset(const std::filesystem::path &dir) {
  std::ifstream index(dir / "index.jsonl");
  if (!index) {
    throw IoError("cannot open dataset index in " + dir.string());
  }
  std::vector<LabeledRegion> regions;
  std::string line;
  int line_no = 0;
  while (std::getline(index, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error &e) {
      throw ParseError("dataset index line " + std::to_string(line_no) +
                       ": " + e.what());
    }
    LabeledRegion r;
    r.crop = read_pnm(dir / rec["crop"].get<std::string>());
    if (r.crop.width != kRegionCropSize || r.crop.height != kRegionCropSize) {
      throw DataError("dataset crop is not 256x256: " +
                      rec["crop"].get<std::string>());
    }
    r.label = label_from_string(rec["label"].get<std::string>());
    const std::string pose_rel = rec.value("pose_half", std::string());
    if (!pose_rel.empty()) {
      const HandSide side =
          hand_side_from_string(rec.value("pose_side", std::string("right")));
      r.pose_half = pose_half_from_image(read_pbm(dir / pose_rel), side);
    }
    r.source = {rec["image_id"].get<std::string>(),
                rec["person_id"].get<int>(),
                hand_side_from_string(rec["side"].get<std::string>())};
    regions.push_back(std::move(r));
  }
  return regions;
}

} // namespace posegun
