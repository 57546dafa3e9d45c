#include "posegun/config.hpp"

#include <fstream>

#include <json.hpp>

namespace posegun {

using nlohmann::json;

ToolConfig load_tool_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config file: " + path.string());
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error &e) {
    throw ParseError("config file " + path.string() + ": " + e.what());
  }

  ToolConfig cfg;
  if (doc.contains("region")) {
    const json &r = doc["region"];
    cfg.region.conf_threshold =
        r.value("conf_threshold", cfg.region.conf_threshold);
    cfg.region.extension_k = r.value("extension_k", cfg.region.extension_k);
    cfg.region.scale_s = r.value("scale_s", cfg.region.scale_s);
    cfg.region.merge_iou = r.value("merge_iou", cfg.region.merge_iou);
  }
  if (doc.contains("render")) {
    const json &r = doc["render"];
    cfg.render.px_per_unit = r.value("px_per_unit", cfg.render.px_per_unit);
    cfg.render.limb_thickness =
        r.value("limb_thickness", cfg.render.limb_thickness);
    cfg.render.point_radius = r.value("point_radius", cfg.render.point_radius);
  }
  if (doc.contains("train")) {
    const json &t = doc["train"];
    cfg.train.batch_size = t.value("batch_size", cfg.train.batch_size);
    cfg.train.epochs = t.value("epochs", cfg.train.epochs);
    cfg.train.learning_rate =
        t.value("learning_rate", cfg.train.learning_rate);
    cfg.train.seed = t.value("seed", cfg.train.seed);
    cfg.variant = t.value("variant", cfg.variant);
    cfg.backbone = t.value("backbone", cfg.backbone);
  }
  if (doc.contains("transform")) {
    const json &t = doc["transform"];
    cfg.dark_value_scale = t.value("value_scale", cfg.dark_value_scale);
    cfg.far_centered = t.value("far_centered", cfg.far_centered);
  }
  if (doc.contains("eval")) {
    const json &e = doc["eval"];
    cfg.eval_iomin = e.value("iomin_threshold", cfg.eval_iomin);
    cfg.eval_score = e.value("score_threshold", cfg.eval_score);
  }
  cfg.jobs = doc.value("jobs", cfg.jobs);
  return cfg;
}

} // namespace posegun
