// Command-line front end: dataset building, training, detection,
// evaluation, and the experiment transforms.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "posegun/autolabel.hpp"
#include "posegun/config.hpp"
#include "posegun/evaluation.hpp"
#include "posegun/nn/checkpoint.hpp"
#include "posegun/pipeline.hpp"
#include "posegun/transforms.hpp"

namespace {

using namespace posegun;
using nlohmann::json;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitRuntime = 3;

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

// ---------------------------------------------------------------------------
// extract-regions
// ---------------------------------------------------------------------------

void cmd_extract_regions(const std::string &manifest_path,
                         const RegionParams &params,
                         const std::filesystem::path &out_dir) {
  params.validate();
  const DatasetManifest manifest = load_manifest(manifest_path);

  struct Row {
    std::string image_id;
    HandRegion region;
    ImageU8 crop;
  };
  std::vector<Row> rows;
  for (const ManifestEntry &entry : manifest.entries) {
    const ImageU8 image = read_pnm(entry.image_path);
    for (const Skeleton &skeleton : load_skeletons(entry)) {
      for (const HandRegion &raw : extract_hand_regions(skeleton, params)) {
        if (auto clipped = clip_to_image(raw, image.width, image.height)) {
          rows.push_back({entry.image_id, *clipped,
                          crop_and_resize(image, clipped->box)});
        }
      }
    }
  }

  std::filesystem::create_directories(out_dir / "crops");
  std::ofstream index(out_dir / "index.jsonl", std::ios::binary);
  if (!index) {
    throw WriteError("cannot write region index in " + out_dir.string());
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row &row = rows[i];
    char prefix[16];
    std::snprintf(prefix, sizeof(prefix), "r%05zu", i);
    const std::string crop_rel =
        "crops/" + std::string(prefix) + "_" + sanitize(row.image_id) + "_p" +
        std::to_string(row.region.person_id) + "_" +
        to_string(row.region.side) + ".ppm";
    write_pnm(row.crop, out_dir / crop_rel);
    const json rec{{"image_id", row.image_id},
                   {"person_id", row.region.person_id},
                   {"side", to_string(row.region.side)},
                   {"box",
                    {row.region.box.x_min, row.region.box.y_min,
                     row.region.box.x_max, row.region.box.y_max}},
                   {"crop", crop_rel}};
    index << rec.dump() << '\n';
  }
  std::cout << "extracted " << rows.size() << " regions from "
            << manifest.entries.size() << " images\n";
}

// ---------------------------------------------------------------------------
// build-dataset
// ---------------------------------------------------------------------------

void cmd_build_dataset(const std::string &manifest_path,
                       const RegionParams &params, const RenderParams &render,
                       bool with_pose, bool dump_canvases,
                       const std::filesystem::path &out_dir) {
  const DatasetManifest manifest = load_manifest(manifest_path);
  const DatasetBuildResult result =
      build_region_dataset(manifest, params, with_pose, render);
  write_region_dataset(result, out_dir);
  if (dump_canvases) {
    export_canvases(manifest, render, out_dir / "canvases");
  }
  for (const std::string &w : result.warnings) {
    std::cerr << "warning: " << w << '\n';
  }
  std::cout << "dataset: " << result.handgun_count << " handgun, "
            << result.no_handgun_count << " no_handgun";
  if (with_pose) {
    std::cout << ", " << result.pose_skipped_regions
              << " regions excluded from pose dataset";
  }
  std::cout << '\n';
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

void cmd_train(const std::filesystem::path &dataset_dir,
               const std::string &variant, const std::string &backbone,
               const nn::TrainConfig &train_cfg,
               const std::filesystem::path &out_ckpt) {
  train_cfg.validate();
  const std::vector<LabeledRegion> data = load_region_dataset(dataset_dir);

  nn::ModelConfig model_cfg;
  model_cfg.variant = nn::variant_from_string(variant);
  model_cfg.backbone = nn::backbone_from_string(backbone);
  model_cfg.init_seed = train_cfg.seed;

  std::cout << "train: variant=" << variant << " backbone=" << backbone
            << " batch_size=" << train_cfg.batch_size
            << " epochs=" << train_cfg.epochs
            << " learning_rate=" << train_cfg.learning_rate
            << " seed=" << train_cfg.seed << " samples=" << data.size()
            << '\n';

  nn::Model model = nn::Model::build(model_cfg);
  const nn::TrainResult result = nn::train(model, data, train_cfg);
  nn::save_checkpoint(model, nn::meta_from_result(result, train_cfg),
                      out_ckpt);

  std::filesystem::path loss_path = out_ckpt;
  loss_path += ".loss.csv";
  std::ofstream loss_out(loss_path, std::ios::binary);
  if (!loss_out) {
    throw WriteError("cannot write loss trace: " + loss_path.string());
  }
  loss_out << "epoch,loss\n";
  char buf[64];
  for (std::size_t e = 0; e < result.epoch_losses.size(); ++e) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", e + 1,
                  result.epoch_losses[e]);
    loss_out << buf;
  }
  std::cout << "final_loss=" << result.final_loss << " checkpoint="
            << out_ckpt.string() << '\n';
}

// ---------------------------------------------------------------------------
// detect
// ---------------------------------------------------------------------------

void cmd_detect(const std::string &manifest_path,
                const std::filesystem::path &ckpt_path,
                const RegionParams &params, const RenderParams &render,
                int jobs, const std::filesystem::path &out_file) {
  const DatasetManifest manifest = load_manifest(manifest_path);
  const nn::LoadedCheckpoint loaded = nn::load_checkpoint(ckpt_path);
  const BatchDetectResult batch =
      detect_batch(manifest, loaded.model, params, render, jobs);
  write_detections_csv(batch.results, out_file);
  std::filesystem::path diag_path = out_file;
  diag_path += ".diag.jsonl";
  write_diagnostics_jsonl(batch.results, diag_path);
  for (const std::string &w : batch.warnings) {
    std::cerr << "warning: " << w << '\n';
  }
  std::size_t total = 0;
  for (const DetectionResult &r : batch.results) {
    total += r.detections.size();
  }
  std::cout << "detections: " << total << " over " << batch.results.size()
            << " images\n";
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

void cmd_eval(const std::filesystem::path &detections_path,
              const std::string &manifest_path, double iomin_thr,
              double score_thr, const std::filesystem::path &report_path,
              const std::filesystem::path &pr_path) {
  const DatasetManifest manifest = load_manifest(manifest_path);
  EvalInput input;
  input.detections = read_detections_csv(detections_path);
  for (const ManifestEntry &entry : manifest.entries) {
    auto &gts = input.ground_truth[entry.image_id];
    for (const GroundTruthBox &gt : entry.boxes) {
      gts.push_back(gt.box);
    }
  }
  const EvalReport report = evaluate(input, iomin_thr, score_thr);

  if (!report_path.empty()) {
    const json doc{{"precision_05", report.precision_05},
                   {"recall_05", report.recall_05},
                   {"ap", report.ap},
                   {"tp", report.tp},
                   {"fp", report.fp},
                   {"fn", report.fn},
                   {"total_gt", report.total_gt}};
    std::ofstream out(report_path, std::ios::binary);
    if (!out) {
      throw WriteError("cannot write report: " + report_path.string());
    }
    out << doc.dump(2) << '\n';
  }
  if (!pr_path.empty()) {
    emit_pr_curve(report, pr_path);
  }
  std::printf("precision@%.2g=%.4f recall@%.2g=%.4f AP=%.2f (tp=%d fp=%d "
              "fn=%d)\n",
              score_thr, report.precision_05, score_thr, report.recall_05,
              report.ap, report.tp, report.fp, report.fn);
}

// ---------------------------------------------------------------------------
// transform
// ---------------------------------------------------------------------------

void cmd_transform(const std::string &manifest_path, const std::string &op,
                   double value_scale, bool centered,
                   const std::filesystem::path &out_dir) {
  const DatasetManifest manifest = load_manifest(manifest_path);

  struct Entry {
    ManifestEntry meta; // paths relative to out_dir
    ImageU8 image;
    std::vector<Skeleton> skeletons;
  };
  std::vector<Entry> outputs;
  for (const ManifestEntry &entry : manifest.entries) {
    const ImageU8 image = read_pnm(entry.image_path);
    const std::vector<Skeleton> skeletons = load_skeletons(entry);
    std::vector<BBox> boxes;
    for (const GroundTruthBox &gt : entry.boxes) {
      boxes.push_back(gt.box);
    }

    Entry out;
    if (op == "flip") {
      TransformedEntry t = hflip(image, boxes, skeletons);
      out.image = std::move(t.image);
      boxes = std::move(t.boxes);
      out.skeletons = std::move(t.skeletons);
    } else if (op == "dark") {
      out.image = darken(image, value_scale);
      out.skeletons = skeletons; // geometry unchanged
    } else { // far
      TransformedEntry t = far_transform(image, boxes, skeletons, centered);
      out.image = std::move(t.image);
      boxes = std::move(t.boxes);
      out.skeletons = std::move(t.skeletons);
    }

    out.meta.image_id = entry.image_id;
    out.meta.image_path = entry.image_id; // same relative layout
    out.meta.keypoints_path =
        std::filesystem::relative(entry.keypoints_path, manifest.base_dir);
    for (const BBox &b : boxes) {
      out.meta.boxes.push_back(GroundTruthBox{b, entry.image_id});
    }
    outputs.push_back(std::move(out));
  }

  std::vector<ManifestEntry> new_entries;
  for (const Entry &out : outputs) {
    const auto image_path = out_dir / out.meta.image_path;
    const auto keypoints_path = out_dir / out.meta.keypoints_path;
    std::filesystem::create_directories(image_path.parent_path());
    std::filesystem::create_directories(keypoints_path.parent_path());
    write_pnm(out.image, image_path);
    save_keypoint_file(out.skeletons, keypoints_path);
    new_entries.push_back(out.meta);
  }
  save_manifest(new_entries, out_dir / "manifest.jsonl");
  std::cout << "transformed " << outputs.size() << " entries with op=" << op
            << " into " << out_dir.string() << '\n';
}

std::string config_path_from(int argc, char **argv) {
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      return argv[i + 1];
    }
  }
  if (const char *env = std::getenv(kConfigEnvVar)) {
    return env;
  }
  return {};
}

} // namespace

int main(int argc, char **argv) {
  ToolConfig cfg;
  try {
    const std::string config_path = config_path_from(argc, argv);
    if (!config_path.empty()) {
      cfg = load_tool_config(config_path);
    }
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }

  CLI::App app{"Pose-fused handgun detection pipeline"};
  app.require_subcommand(1);
  std::string config_opt;
  app.add_option("--config", config_opt,
                 "JSON config file (or " + std::string(kConfigEnvVar) + ")");
  app.add_option("--jobs", cfg.jobs, "Worker thread cap");

  // Region geometry flags shared by the extraction-based commands.
  RegionParams region = cfg.region;
  RenderParams render = cfg.render;
  const auto add_region_flags = [&](CLI::App *sub) {
    sub->add_option("--conf-threshold", region.conf_threshold,
                    "Keypoint confidence gate");
    sub->add_option("--extension-k", region.extension_k,
                    "Box center extension past the wrist");
    sub->add_option("--scale-s", region.scale_s,
                    "Box side per forearm length");
    sub->add_option("--merge-iou", region.merge_iou,
                    "Two-hand merge IoU threshold");
  };

  // extract-regions
  std::string manifest_arg, out_arg;
  auto *extract = app.add_subcommand("extract-regions",
                                     "Extract hand-region boxes and crops");
  extract->add_option("manifest", manifest_arg)->required();
  extract->add_option("--out", out_arg, "Output directory")->required();
  add_region_flags(extract);

  // build-dataset
  bool with_pose = false, dump_canvases = false;
  auto *build = app.add_subcommand(
      "build-dataset", "Build the auto-labelled region classification set");
  build->add_option("manifest", manifest_arg)->required();
  build->add_option("--out", out_arg)->required();
  build->add_flag("--with-pose", with_pose, "Attach pose halves");
  build->add_flag("--dump-canvases", dump_canvases,
                  "Also export 1-bit pose canvases");
  add_region_flags(build);

  // train
  std::string dataset_arg, ckpt_arg;
  std::string variant = cfg.variant, backbone = cfg.backbone;
  nn::TrainConfig train_cfg = cfg.train;
  auto *train = app.add_subcommand("train", "Train a region classifier");
  train->add_option("dataset_dir", dataset_arg)->required();
  train->add_option("--out", ckpt_arg, "Checkpoint output path")->required();
  train->add_option("--variant", variant)
      ->check(CLI::IsMember({"hrc", "hrc_p"}));
  train->add_option("--backbone", backbone)
      ->check(CLI::IsMember({"full", "reduced"}));
  train->add_option("--epochs", train_cfg.epochs);
  train->add_option("--batch-size", train_cfg.batch_size);
  train->add_option("--lr", train_cfg.learning_rate);
  train->add_option("--seed", train_cfg.seed);

  // detect
  auto *detect = app.add_subcommand("detect", "Run detection over a manifest");
  detect->add_option("manifest", manifest_arg)->required();
  detect->add_option("--ckpt", ckpt_arg)->required();
  detect->add_option("--out", out_arg, "Detections CSV path")->required();
  add_region_flags(detect);

  // eval
  std::string dets_arg, report_arg, pr_arg;
  double iomin_thr = cfg.eval_iomin, score_thr = cfg.eval_score;
  auto *eval = app.add_subcommand("eval", "Score detections against a manifest");
  eval->add_option("detections", dets_arg)->required();
  eval->add_option("manifest", manifest_arg)->required();
  eval->add_option("--iomin", iomin_thr, "IoMin match threshold");
  eval->add_option("--score", score_thr, "Prediction score threshold");
  eval->add_option("--out", report_arg, "JSON report path");
  eval->add_option("--pr-curve", pr_arg, "PR curve CSV path");

  // transform
  std::string op;
  double value_scale = cfg.dark_value_scale;
  bool centered = cfg.far_centered;
  auto *transform =
      app.add_subcommand("transform", "Apply flip / dark / far to a dataset");
  transform->add_option("manifest", manifest_arg)->required();
  transform->add_option("--op", op)
      ->required()
      ->check(CLI::IsMember({"flip", "dark", "far"}));
  transform->add_option("--value-scale", value_scale,
                        "HSV value factor for --op dark");
  transform->add_flag("--centered", centered,
                      "Center the half-size content for --op far");
  transform->add_option("--out", out_arg)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (extract->parsed()) {
      cmd_extract_regions(manifest_arg, region, out_arg);
    } else if (build->parsed()) {
      cmd_build_dataset(manifest_arg, region, render, with_pose,
                        dump_canvases, out_arg);
    } else if (train->parsed()) {
      cmd_train(dataset_arg, variant, backbone, train_cfg, ckpt_arg);
    } else if (detect->parsed()) {
      cmd_detect(manifest_arg, ckpt_arg, region, render, cfg.jobs, out_arg);
    } else if (eval->parsed()) {
      cmd_eval(dets_arg, manifest_arg, iomin_thr, score_thr, report_arg,
               pr_arg);
    } else if (transform->parsed()) {
      cmd_transform(manifest_arg, op, value_scale, centered, out_arg);
    }
  } catch (const WriteError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
