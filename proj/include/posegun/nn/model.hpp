#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "posegun/autolabel.hpp"
#include "posegun/nn/layers.hpp"

namespace posegun::nn {

enum class Variant { hrc, hrc_p };
enum class BackboneScale { full, reduced };

std::string to_string(Variant v);
std::string to_string(BackboneScale s);
Variant variant_from_string(const std::string &s);
BackboneScale backbone_from_string(const std::string &s);

inline constexpr int kClassCount = 2;
inline constexpr int kHandgunClass = 0; // probability index of "handgun"
inline constexpr double kScoreCut = 0.5;

struct ModelConfig {
  Variant variant = Variant::hrc;
  BackboneScale backbone = BackboneScale::full;
  std::uint64_t init_seed = 0;
};

struct Prediction {
  Label label = Label::no_handgun;
  double score = 0.0; // handgun probability
  std::array<double, kClassCount> probs{};
};

/// The region classifier. HRC runs the appearance backbone alone; HRC+P
/// adds the pose branch over the 256x512 binary half and fuses the pooled
/// features through a single fully-connected head. All forward passes are
/// const; training accumulates gradients through loss_and_backward.
class Model {
public:
  static Model build(const ModelConfig &cfg, bool init_weights = true);

  const ModelConfig &config() const { return cfg_; }

  std::size_t param_count() const { return params_.size(); }
  double param(std::size_t i) const { return params_.values()[i]; }
  void set_param(std::size_t i, double v) { params_.values()[i] = v; }
  std::vector<double> &parameters() { return params_.values(); }
  const std::vector<double> &parameters() const { return params_.values(); }

  /// Class probabilities for one sample. `pose` must be null for HRC and
  /// non-null for HRC+P.
  std::array<double, kClassCount> probabilities(const Tensor &region,
                                                const Tensor *pose) const;

  Prediction predict(const ImageU8 &crop, const PoseHalf *pose_half) const;

  /// Cross-entropy loss for one sample; accumulates d(loss)/d(params) into
  /// `grads` (which must have param_count() entries).
  double loss_and_backward(const Tensor &region, const Tensor *pose,
                           int target_class, std::vector<double> &grads) const;

  int appearance_conv_count() const { return appearance_.conv_count(); }
  int appearance_feature_dim() const { return appearance_.feature_dim(); }
  int pose_feature_dim() const {
    return pose_net_ ? pose_net_->feature_dim() : 0;
  }

private:
  Model() = default;

  struct ForwardState {
    FeatureNet::Tape app_tape;
    FeatureNet::Tape pose_tape;
    std::vector<double> features; // concatenated head input
    std::vector<double> probs;
  };

  std::vector<double> forward_logits(const Tensor &region, const Tensor *pose,
                                     ForwardState *state) const;
  void validate_inputs(const Tensor &region, const Tensor *pose) const;

  ModelConfig cfg_;
  ParamStore params_;
  FeatureNet appearance_;
  std::optional<FeatureNet> pose_net_;
  Dense head_;
};

/// RGB crop scaled to [0,1], shape 3 x 256 x 256.
Tensor tensor_from_crop(const ImageU8 &crop);

/// Binary half as a single-channel 0/1 map, shape 1 x 512 x 256.
Tensor tensor_from_pose_half(const PoseHalf &half);

/// All-zero pose input, used when normalization fails at detection time.
Tensor zero_pose_tensor();

} // namespace posegun::nn
