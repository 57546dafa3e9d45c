#include "posegun/pose_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace posegun {

using nlohmann::json;

std::vector<Skeleton> parse_keypoint_file(const std::string &content) {
  json doc;
  try {
    doc = json::parse(content);
  } catch (const json::parse_error &e) {
    throw ParseError(std::string("malformed keypoint file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("people")) {
    throw ParseError("keypoint file missing top-level 'people' key");
  }
  const json &people = doc["people"];
  if (!people.is_array()) {
    throw ParseError("'people' must be an array");
  }
  std::vector<Skeleton> skeletons;
  skeletons.reserve(people.size());
  for (std::size_t i = 0; i < people.size(); ++i) {
    const json &person = people[i];
    const std::string where = "person record " + std::to_string(i);
    if (!person.is_object() || !person.contains("pose_keypoints_2d")) {
      throw ParseError(where + ": missing 'pose_keypoints_2d'");
    }
    const json &flat = person["pose_keypoints_2d"];
    if (!flat.is_array()) {
      throw ParseError(where + ": 'pose_keypoints_2d' must be an array");
    }
    if (flat.size() != 3 * body25::kKeypointCount) {
      throw ParseError(where + ": expected 75 values, got " +
                       std::to_string(flat.size()));
    }
    Skeleton s;
    s.person_id = static_cast<int>(i);
    for (int k = 0; k < body25::kKeypointCount; ++k) {
      const json &jx = flat[3 * k];
      const json &jy = flat[3 * k + 1];
      const json &jc = flat[3 * k + 2];
      if (!jx.is_number() || !jy.is_number() || !jc.is_number()) {
        throw ParseError(where + ": non-numeric keypoint entry at index " +
                         std::to_string(3 * k));
      }
      s.keypoints[k] = Keypoint2D(jx.get<double>(), jy.get<double>(),
                                  jc.get<double>());
    }
    skeletons.push_back(s);
  }
  return skeletons;
}

std::string serialize_keypoint_file(const std::vector<Skeleton> &skeletons) {
  json people = json::array();
  for (const Skeleton &s : skeletons) {
    json flat = json::array();
    for (const Keypoint2D &kp : s.keypoints) {
      flat.push_back(kp.x);
      flat.push_back(kp.y);
      flat.push_back(kp.confidence);
    }
    people.push_back(json{{"pose_keypoints_2d", std::move(flat)}});
  }
  return json{{"people", std::move(people)}}.dump();
}

std::vector<Skeleton> load_keypoint_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open keypoint file: " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_keypoint_file(buf.str());
}

void save_keypoint_file(const std::vector<Skeleton> &skeletons,
                        const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw WriteError("cannot write keypoint file: " + path.string());
  }
  out << serialize_keypoint_file(skeletons) << '\n';
}

DatasetManifest load_manifest(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open manifest: " + path.string());
  }
  DatasetManifest manifest;
  manifest.base_dir = path.has_parent_path() ? path.parent_path()
                                             : std::filesystem::path(".");
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error &e) {
      throw ParseError("manifest line " + std::to_string(line_no) + ": " +
                       e.what());
    }
    const std::string where = "manifest line " + std::to_string(line_no);
    if (!rec.is_object() || !rec.contains("image") ||
        !rec.contains("keypoints") || !rec.contains("boxes")) {
      throw ParseError(where + ": need fields image, keypoints, boxes");
    }
    ManifestEntry entry;
    entry.image_id = rec["image"].get<std::string>();
    const auto resolve = [&](const std::string &p) {
      std::filesystem::path fp(p);
      return fp.is_absolute() ? fp : manifest.base_dir / fp;
    };
    entry.image_path = resolve(entry.image_id);
    entry.keypoints_path = resolve(rec["keypoints"].get<std::string>());
    for (const json &b : rec["boxes"]) {
      if (!b.is_array() || b.size() != 4) {
        throw DataError(where + ": box must be [x_min,y_min,x_max,y_max]");
      }
      try {
        entry.boxes.push_back(GroundTruthBox{
            BBox(b[0].get<double>(), b[1].get<double>(), b[2].get<double>(),
                 b[3].get<double>()),
            entry.image_id});
      } catch (const GeometryError &e) {
        throw DataError(where + ": " + e.what());
      }
    }
    if (!std::filesystem::exists(entry.image_path)) {
      throw IoError(where + ": missing image file " +
                    entry.image_path.string());
    }
    if (!std::filesystem::exists(entry.keypoints_path)) {
      throw IoError(where + ": missing keypoint file " +
                    entry.keypoints_path.string());
    }
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

void save_manifest(const std::vector<ManifestEntry> &entries,
                   const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw WriteError("cannot write manifest: " + path.string());
  }
  for (const ManifestEntry &e : entries) {
    json boxes = json::array();
    for (const GroundTruthBox &gt : e.boxes) {
      boxes.push_back({gt.box.x_min, gt.box.y_min, gt.box.x_max,
                       gt.box.y_max});
    }
    const json rec{{"image", e.image_id},
                   {"keypoints", e.keypoints_path.string()},
                   {"boxes", std::move(boxes)}};
    out << rec.dump() << '\n';
  }
}

std::vector<Skeleton> load_skeletons(const ManifestEntry &entry) {
  return load_keypoint_file(entry.keypoints_path);
}

} // namespace posegun
