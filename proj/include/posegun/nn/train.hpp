#pragma once

#include <cstdint>
#include <vector>

#include "posegun/nn/model.hpp"

namespace posegun::nn {

/// Classifier training recipe: batches of 4 for 60 epochs under Adam with
/// categorical cross-entropy.
struct TrainConfig {
  int batch_size = 4;
  int epochs = 60;
  double learning_rate = 1e-4;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainResult {
  std::vector<double> epoch_losses; // mean sample loss per epoch
  double final_loss = 0.0;
  std::uint64_t dataset_fingerprint = 0;
  int samples = 0;
};

/// Order-insensitive it is not: items hash in the order given, which the
/// dataset builder fixes by sorting on the source triple.
std::uint64_t dataset_fingerprint(const std::vector<LabeledRegion> &data);

/// Minimizes cross-entropy over the dataset in place. Shuffling and weight
/// updates are driven entirely by cfg.seed, so identical seed + data +
/// single-threaded execution reproduce the loss trace exactly.
TrainResult train(Model &model, const std::vector<LabeledRegion> &data,
                  const TrainConfig &cfg);

} // namespace posegun::nn
