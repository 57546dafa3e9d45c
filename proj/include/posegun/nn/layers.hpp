#pragma once

#include <cstddef>
#include <vector>

#include "posegun/nn/tensor.hpp"

namespace posegun::nn {

inline constexpr double kLeakySlope = 0.1;

/// Flat parameter arena. Layers hold offsets into it, which keeps the
/// optimizer, the checkpoint blob, and finite-difference probing trivial.
class ParamStore {
public:
  std::size_t add(std::size_t n) {
    const std::size_t off = values_.size();
    values_.resize(off + n, 0.0);
    return off;
  }

  std::size_t size() const { return values_.size(); }
  double *data() { return values_.data(); }
  const double *data() const { return values_.data(); }
  std::vector<double> &values() { return values_; }
  const std::vector<double> &values() const { return values_; }

private:
  std::vector<double> values_;
};

/// 2D convolution (square kernel, same padding k/2) followed by a leaky
/// ReLU. Forward/backward are const; per-call state lives in the Tape so a
/// frozen model can run concurrently.
class ConvBlock {
public:
  struct Tape {
    Tensor in;
    Tensor out; // post-activation; sign recovers the ReLU slope
  };

  ConvBlock() = default;
  ConvBlock(ParamStore &store, int in_c, int out_c, int k, int stride);

  /// y = leaky_relu(conv(x)); when tape is non-null, saves what backward
  /// needs.
  Tensor forward(const Tensor &x, const double *params, Tape *tape) const;

  /// Consumes d(loss)/d(out), accumulates weight gradients into `grads`
  /// (same layout as the ParamStore) and returns d(loss)/d(in).
  Tensor backward(Tensor dy, const Tape &tape, const double *params,
                  double *grads) const;

  int in_channels() const { return in_c_; }
  int out_channels() const { return out_c_; }
  int kernel() const { return k_; }
  int fan_in() const { return in_c_ * k_ * k_; }
  std::size_t weight_offset() const { return w_off_; }
  std::size_t weight_count() const {
    return static_cast<std::size_t>(out_c_) * in_c_ * k_ * k_;
  }
  std::size_t bias_offset() const { return b_off_; }

private:
  int in_c_ = 0, out_c_ = 0, k_ = 0, stride_ = 1, pad_ = 0;
  std::size_t w_off_ = 0, b_off_ = 0;
};

/// Fully-connected layer y = W x + b (no activation).
class Dense {
public:
  Dense() = default;
  Dense(ParamStore &store, int in_dim, int out_dim);

  std::vector<double> forward(const std::vector<double> &x,
                              const double *params) const;
  std::vector<double> backward(const std::vector<double> &dy,
                               const std::vector<double> &x,
                               const double *params, double *grads) const;

  int in_dim() const { return in_dim_; }
  int out_dim() const { return out_dim_; }
  std::size_t weight_offset() const { return w_off_; }

private:
  int in_dim_ = 0, out_dim_ = 0;
  std::size_t w_off_ = 0, b_off_ = 0;
};

/// A plain convolutional stack with optional residual blocks, ending in
/// global average pooling. Residual blocks are the two-conv bottleneck of
/// the 53-layer feature extractor: 1x1 halving + 3x3 restoring + skip add.
class FeatureNet {
public:
  struct Tape {
    std::vector<ConvBlock::Tape> conv_tapes;
    int map_h = 0, map_w = 0; // pre-pool spatial dims
  };

  void add_conv(ParamStore &store, int in_c, int out_c, int k, int stride);
  void add_residual(ParamStore &store, int channels);

  /// Full pass to the pooled feature vector.
  std::vector<double> forward(const Tensor &x, const double *params,
                              Tape *tape) const;

  /// Backward from d(loss)/d(feature); returns d(loss)/d(input).
  Tensor backward(const std::vector<double> &dfeat, const Tape &tape,
                  const double *params, double *grads) const;

  int feature_dim() const { return out_channels_; }
  int conv_count() const;
  const std::vector<ConvBlock> &blocks() const { return blocks_; }

private:
  struct Item {
    bool residual = false;
    int first_block = 0; // index into blocks_; residual items use two
  };
  std::vector<Item> items_;
  std::vector<ConvBlock> blocks_;
  int out_channels_ = 0;
};

// Numerically stable 2-way softmax / cross-entropy helpers.
std::vector<double> softmax(const std::vector<double> &logits);
double cross_entropy(const std::vector<double> &probs, int target);

} // namespace posegun::nn
