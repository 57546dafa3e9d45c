#include "posegun/nn/model.hpp"

#include <cmath>
#include <random>

namespace posegun::nn {

std::string to_string(Variant v) {
  return v == Variant::hrc ? "hrc" : "hrc_p";
}

std::string to_string(BackboneScale s) {
  return s == BackboneScale::full ? "full" : "reduced";
}

Variant variant_from_string(const std::string &s) {
  if (s == "hrc") {
    return Variant::hrc;
  }
  if (s == "hrc_p") {
    return Variant::hrc_p;
  }
  throw DataError("unknown model variant: " + s);
}

BackboneScale backbone_from_string(const std::string &s) {
  if (s == "full") {
    return BackboneScale::full;
  }
  if (s == "reduced") {
    return BackboneScale::reduced;
  }
  throw DataError("unknown backbone scale: " + s);
}

namespace {

// 52-conv residual feature extractor: stem conv, then five stages of a
// stride-2 downsampling conv followed by 1/2/8/8/4 bottleneck blocks.
// With the classifier head this is the 53-layer backbone.
void build_full_backbone(FeatureNet &net, ParamStore &store) {
  net.add_conv(store, 3, 32, 3, 1);
  const int stage_blocks[5] = {1, 2, 8, 8, 4};
  int ch = 32;
  for (int stage = 0; stage < 5; ++stage) {
    net.add_conv(store, ch, ch * 2, 3, 2);
    ch *= 2;
    for (int b = 0; b < stage_blocks[stage]; ++b) {
      net.add_residual(store, ch);
    }
  }
}

// Desk-scale stand-in with the same interface: 8 stride-2 convs.
void build_reduced_backbone(FeatureNet &net, ParamStore &store) {
  const int widths[8] = {8, 16, 24, 32, 48, 64, 96, 128};
  int in_c = 3;
  for (int w : widths) {
    net.add_conv(store, in_c, w, 3, 2);
    in_c = w;
  }
}

// Pose branch: five stride-2 stages over the 256x512 binary half, pooled
// to a feature vector matching the appearance feature length.
void build_pose_branch(FeatureNet &net, ParamStore &store,
                       BackboneScale scale) {
  const int full_widths[5] = {16, 32, 64, 128, 256};
  const int reduced_widths[5] = {8, 16, 32, 64, 128};
  const int *widths =
      scale == BackboneScale::full ? full_widths : reduced_widths;
  int in_c = 1;
  for (int i = 0; i < 5; ++i) {
    net.add_conv(store, in_c, widths[i], 3, 2);
    in_c = widths[i];
  }
}

void he_init(std::vector<double> &values, const FeatureNet &net,
             std::mt19937_64 &rng) {
  for (const ConvBlock &block : net.blocks()) {
    std::normal_distribution<double> dist(
        0.0, std::sqrt(2.0 / static_cast<double>(block.fan_in())));
    double *w = values.data() + block.weight_offset();
    for (std::size_t i = 0; i < block.weight_count(); ++i) {
      w[i] = dist(rng);
    }
    // biases stay zero
  }
}

} // namespace

Model Model::build(const ModelConfig &cfg, bool init_weights) {
  Model m;
  m.cfg_ = cfg;
  if (cfg.backbone == BackboneScale::full) {
    build_full_backbone(m.appearance_, m.params_);
  } else {
    build_reduced_backbone(m.appearance_, m.params_);
  }
  int head_in = m.appearance_.feature_dim();
  if (cfg.variant == Variant::hrc_p) {
    m.pose_net_.emplace();
    build_pose_branch(*m.pose_net_, m.params_, cfg.backbone);
    head_in += m.pose_net_->feature_dim();
  }
  m.head_ = Dense(m.params_, head_in, kClassCount);

  if (init_weights) {
    std::mt19937_64 rng(cfg.init_seed);
    he_init(m.params_.values(), m.appearance_, rng);
    if (m.pose_net_) {
      he_init(m.params_.values(), *m.pose_net_, rng);
    }
    std::normal_distribution<double> dist(
        0.0, std::sqrt(2.0 / static_cast<double>(head_in)));
    double *w = m.params_.values().data() + m.head_.weight_offset();
    for (int i = 0; i < head_in * kClassCount; ++i) {
      w[i] = dist(rng);
    }
  }
  return m;
}

void Model::validate_inputs(const Tensor &region, const Tensor *pose) const {
  if (!region.same_shape(3, kRegionCropSize, kRegionCropSize)) {
    throw InputError("region input must be 3x256x256");
  }
  if (cfg_.variant == Variant::hrc) {
    if (pose != nullptr) {
      throw InputError("HRC accepts only the region input");
    }
  } else {
    if (pose == nullptr) {
      throw InputError("HRC+P requires a pose half input");
    }
    if (!pose->same_shape(1, PoseHalf::kHeight, PoseHalf::kWidth)) {
      throw InputError("pose input must be 1x512x256");
    }
  }
}

std::vector<double> Model::forward_logits(const Tensor &region,
                                          const Tensor *pose,
                                          ForwardState *state) const {
  validate_inputs(region, pose);
  const double *p = params_.data();
  std::vector<double> feat = appearance_.forward(
      region, p, state ? &state->app_tape : nullptr);
  if (pose_net_) {
    std::vector<double> pose_feat =
        pose_net_->forward(*pose, p, state ? &state->pose_tape : nullptr);
    feat.insert(feat.end(), pose_feat.begin(), pose_feat.end());
  }
  if (state) {
    state->features = feat;
  }
  return head_.forward(feat, p);
}

std::array<double, kClassCount> Model::probabilities(const Tensor &region,
                                                     const Tensor *pose) const {
  const std::vector<double> probs = softmax(forward_logits(region, pose, nullptr));
  return {probs[0], probs[1]};
}

Prediction Model::predict(const ImageU8 &crop, const PoseHalf *pose_half) const {
  const Tensor region = tensor_from_crop(crop);
  Prediction out;
  if (cfg_.variant == Variant::hrc_p) {
    if (pose_half == nullptr) {
      throw InputError("HRC+P requires a pose half input");
    }
    const Tensor pose = tensor_from_pose_half(*pose_half);
    out.probs = probabilities(region, &pose);
  } else {
    if (pose_half != nullptr) {
      throw InputError("HRC accepts only the region input");
    }
    out.probs = probabilities(region, nullptr);
  }
  out.score = out.probs[kHandgunClass];
  out.label = out.score >= kScoreCut ? Label::handgun : Label::no_handgun;
  return out;
}

double Model::loss_and_backward(const Tensor &region, const Tensor *pose,
                                int target_class,
                                std::vector<double> &grads) const {
  if (grads.size() != param_count()) {
    throw InputError("gradient buffer size mismatch");
  }
  ForwardState state;
  const std::vector<double> logits = forward_logits(region, pose, &state);
  const std::vector<double> probs = softmax(logits);
  const double loss = cross_entropy(probs, target_class);

  std::vector<double> dlogits = probs;
  dlogits[static_cast<std::size_t>(target_class)] -= 1.0;

  const double *p = params_.data();
  double *g = grads.data();
  const std::vector<double> dfeat =
      head_.backward(dlogits, state.features, p, g);

  const int app_dim = appearance_.feature_dim();
  std::vector<double> dapp(dfeat.begin(), dfeat.begin() + app_dim);
  appearance_.backward(dapp, state.app_tape, p, g);
  if (pose_net_) {
    std::vector<double> dpose(dfeat.begin() + app_dim, dfeat.end());
    pose_net_->backward(dpose, state.pose_tape, p, g);
  }
  return loss;
}

Tensor tensor_from_crop(const ImageU8 &crop) {
  if (crop.channels != 3 || crop.width != kRegionCropSize ||
      crop.height != kRegionCropSize) {
    throw InputError("crop must be a 256x256 RGB image");
  }
  Tensor t(3, crop.height, crop.width);
  for (int y = 0; y < crop.height; ++y) {
    for (int x = 0; x < crop.width; ++x) {
      for (int c = 0; c < 3; ++c) {
        t.at(c, y, x) = crop.at(x, y, c) / 255.0;
      }
    }
  }
  return t;
}

Tensor tensor_from_pose_half(const PoseHalf &half) {
  Tensor t(1, PoseHalf::kHeight, PoseHalf::kWidth);
  for (int y = 0; y < PoseHalf::kHeight; ++y) {
    for (int x = 0; x < PoseHalf::kWidth; ++x) {
      t.at(0, y, x) = half.at(x, y) ? 1.0 : 0.0;
    }
  }
  return t;
}

Tensor zero_pose_tensor() {
  return Tensor(1, PoseHalf::kHeight, PoseHalf::kWidth);
}

} // namespace posegun::nn
