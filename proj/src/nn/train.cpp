#include "posegun/nn/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace posegun::nn {

void TrainConfig::validate() const {
  if (batch_size < 1) {
    throw DataError("batch_size must be >= 1");
  }
  if (epochs < 1) {
    throw DataError("epochs must be >= 1");
  }
  if (!(learning_rate > 0.0)) {
    throw DataError("learning_rate must be positive");
  }
}

namespace {

std::uint64_t fnv1a64(const void *bytes, std::size_t n, std::uint64_t h) {
  const auto *p = static_cast<const unsigned char *>(bytes);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct Adam {
  std::vector<double> m, v;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  long t = 0;

  explicit Adam(std::size_t n) : m(n, 0.0), v(n, 0.0) {}

  void step(std::vector<double> &params, const std::vector<double> &grads,
            double lr) {
    ++t;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double g = grads[i];
      m[i] = beta1 * m[i] + (1.0 - beta1) * g;
      v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      params[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
  }
};

} // namespace

std::uint64_t dataset_fingerprint(const std::vector<LabeledRegion> &data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const LabeledRegion &r : data) {
    h = fnv1a64(r.crop.data.data(), r.crop.data.size(), h);
    const unsigned char label = r.label == Label::handgun ? 1 : 0;
    h = fnv1a64(&label, 1, h);
    if (r.pose_half) {
      h = fnv1a64(r.pose_half->pixels.data(), r.pose_half->pixels.size(), h);
    }
    h = fnv1a64(r.source.image_id.data(), r.source.image_id.size(), h);
    const int pid = r.source.person_id;
    h = fnv1a64(&pid, sizeof(pid), h);
  }
  return h;
}

TrainResult train(Model &model, const std::vector<LabeledRegion> &data,
                  const TrainConfig &cfg) {
  cfg.validate();
  if (data.empty()) {
    throw DataError("training dataset is empty");
  }
  const bool needs_pose = model.config().variant == Variant::hrc_p;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (needs_pose && !data[i].pose_half) {
      throw DataError("dataset item " + std::to_string(i) +
                      " has no pose half; HRC+P needs a --with-pose dataset");
    }
  }

  TrainResult result;
  result.samples = static_cast<int>(data.size());
  result.dataset_fingerprint = dataset_fingerprint(data);

  std::mt19937_64 rng(cfg.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  Adam adam(model.param_count());
  std::vector<double> grads(model.param_count(), 0.0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    std::size_t pos = 0;
    while (pos < order.size()) {
      const std::size_t batch_n =
          std::min<std::size_t>(cfg.batch_size, order.size() - pos);
      std::fill(grads.begin(), grads.end(), 0.0);
      for (std::size_t b = 0; b < batch_n; ++b) {
        const LabeledRegion &item = data[order[pos + b]];
        const Tensor region = tensor_from_crop(item.crop);
        const int target = item.label == Label::handgun ? kHandgunClass : 1;
        if (needs_pose) {
          const Tensor pose = tensor_from_pose_half(*item.pose_half);
          epoch_loss += model.loss_and_backward(region, &pose, target, grads);
        } else {
          epoch_loss += model.loss_and_backward(region, nullptr, target, grads);
        }
      }
      const double inv = 1.0 / static_cast<double>(batch_n);
      for (double &g : grads) {
        g *= inv;
      }
      adam.step(model.parameters(), grads, cfg.learning_rate);
      pos += batch_n;
    }
    result.epoch_losses.push_back(epoch_loss /
                                  static_cast<double>(data.size()));
  }
  result.final_loss = result.epoch_losses.back();
  return result;
}

} // namespace posegun::nn
