#include "posegun/nn/layers.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Core>

#include "posegun/errors.hpp"

namespace posegun::nn {

using RowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using ConstMapMat = Eigen::Map<const RowMat>;

namespace {

int conv_out_dim(int in, int k, int stride, int pad) {
  return (in + 2 * pad - k) / stride + 1;
}

// Patch matrix: rows = in_c*k*k, cols = out_h*out_w, zero padding.
void im2col(const Tensor &x, int k, int stride, int pad, int out_h, int out_w,
            std::vector<double> &cols) {
  const std::size_t n = static_cast<std::size_t>(out_h) * out_w;
  cols.assign(static_cast<std::size_t>(x.c) * k * k * n, 0.0);
  std::size_t row = 0;
  for (int ci = 0; ci < x.c; ++ci) {
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx, ++row) {
        double *dst = cols.data() + row * n;
        for (int oy = 0; oy < out_h; ++oy) {
          const int iy = oy * stride - pad + ky;
          if (iy < 0 || iy >= x.h) {
            continue;
          }
          const double *src = &x.data[(static_cast<std::size_t>(ci) * x.h + iy) * x.w];
          double *out_row = dst + static_cast<std::size_t>(oy) * out_w;
          for (int ox = 0; ox < out_w; ++ox) {
            const int ix = ox * stride - pad + kx;
            if (ix >= 0 && ix < x.w) {
              out_row[ox] = src[ix];
            }
          }
        }
      }
    }
  }
}

// Scatter-add of the patch-gradient matrix back onto the input gradient.
void col2im(const std::vector<double> &cols, int k, int stride, int pad,
            int out_h, int out_w, Tensor &dx) {
  const std::size_t n = static_cast<std::size_t>(out_h) * out_w;
  std::size_t row = 0;
  for (int ci = 0; ci < dx.c; ++ci) {
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx, ++row) {
        const double *src = cols.data() + row * n;
        for (int oy = 0; oy < out_h; ++oy) {
          const int iy = oy * stride - pad + ky;
          if (iy < 0 || iy >= dx.h) {
            continue;
          }
          double *dst = &dx.data[(static_cast<std::size_t>(ci) * dx.h + iy) * dx.w];
          const double *in_row = src + static_cast<std::size_t>(oy) * out_w;
          for (int ox = 0; ox < out_w; ++ox) {
            const int ix = ox * stride - pad + kx;
            if (ix >= 0 && ix < dx.w) {
              dst[ix] += in_row[ox];
            }
          }
        }
      }
    }
  }
}

} // namespace

ConvBlock::ConvBlock(ParamStore &store, int in_c, int out_c, int k, int stride)
    : in_c_(in_c), out_c_(out_c), k_(k), stride_(stride), pad_(k / 2) {
  w_off_ = store.add(weight_count());
  b_off_ = store.add(static_cast<std::size_t>(out_c));
}

Tensor ConvBlock::forward(const Tensor &x, const double *params,
                          Tape *tape) const {
  if (x.c != in_c_) {
    throw InputError("conv input channel mismatch");
  }
  const int out_h = conv_out_dim(x.h, k_, stride_, pad_);
  const int out_w = conv_out_dim(x.w, k_, stride_, pad_);
  const std::size_t n = static_cast<std::size_t>(out_h) * out_w;

  std::vector<double> cols;
  im2col(x, k_, stride_, pad_, out_h, out_w, cols);

  Tensor y(out_c_, out_h, out_w);
  ConstMapMat w_mat(params + w_off_, out_c_, fan_in());
  ConstMapMat c_mat(cols.data(), fan_in(), static_cast<Eigen::Index>(n));
  MapMat y_mat(y.data.data(), out_c_, static_cast<Eigen::Index>(n));
  y_mat.noalias() = w_mat * c_mat;

  const double *bias = params + b_off_;
  for (int oc = 0; oc < out_c_; ++oc) {
    double *row = y.data.data() + static_cast<std::size_t>(oc) * n;
    const double b = bias[oc];
    for (std::size_t i = 0; i < n; ++i) {
      const double v = row[i] + b;
      row[i] = v > 0.0 ? v : kLeakySlope * v;
    }
  }
  if (tape) {
    tape->in = x;
    tape->out = y;
  }
  return y;
}

Tensor ConvBlock::backward(Tensor dy, const Tape &tape, const double *params,
                           double *grads) const {
  const int out_h = dy.h;
  const int out_w = dy.w;
  const std::size_t n = static_cast<std::size_t>(out_h) * out_w;

  // Leaky ReLU: slope recovered from the saved activation's sign.
  for (std::size_t i = 0; i < dy.data.size(); ++i) {
    if (tape.out.data[i] <= 0.0) {
      dy.data[i] *= kLeakySlope;
    }
  }

  // Bias gradient.
  double *db = grads + b_off_;
  for (int oc = 0; oc < out_c_; ++oc) {
    const double *row = dy.data.data() + static_cast<std::size_t>(oc) * n;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += row[i];
    }
    db[oc] += sum;
  }

  std::vector<double> cols;
  im2col(tape.in, k_, stride_, pad_, out_h, out_w, cols);

  ConstMapMat dy_mat(dy.data.data(), out_c_, static_cast<Eigen::Index>(n));
  ConstMapMat c_mat(cols.data(), fan_in(), static_cast<Eigen::Index>(n));
  MapMat dw_mat(grads + w_off_, out_c_, fan_in());
  dw_mat.noalias() += dy_mat * c_mat.transpose();

  ConstMapMat w_mat(params + w_off_, out_c_, fan_in());
  std::vector<double> dcols(cols.size());
  MapMat dc_mat(dcols.data(), fan_in(), static_cast<Eigen::Index>(n));
  dc_mat.noalias() = w_mat.transpose() * dy_mat;

  Tensor dx(tape.in.c, tape.in.h, tape.in.w);
  col2im(dcols, k_, stride_, pad_, out_h, out_w, dx);
  return dx;
}

Dense::Dense(ParamStore &store, int in_dim, int out_dim)
    : in_dim_(in_dim), out_dim_(out_dim) {
  w_off_ = store.add(static_cast<std::size_t>(in_dim) * out_dim);
  b_off_ = store.add(static_cast<std::size_t>(out_dim));
}

std::vector<double> Dense::forward(const std::vector<double> &x,
                                   const double *params) const {
  std::vector<double> y(out_dim_);
  const double *w = params + w_off_;
  const double *b = params + b_off_;
  for (int o = 0; o < out_dim_; ++o) {
    double acc = b[o];
    const double *row = w + static_cast<std::size_t>(o) * in_dim_;
    for (int i = 0; i < in_dim_; ++i) {
      acc += row[i] * x[i];
    }
    y[o] = acc;
  }
  return y;
}

std::vector<double> Dense::backward(const std::vector<double> &dy,
                                    const std::vector<double> &x,
                                    const double *params,
                                    double *grads) const {
  const double *w = params + w_off_;
  double *dw = grads + w_off_;
  double *db = grads + b_off_;
  std::vector<double> dx(in_dim_, 0.0);
  for (int o = 0; o < out_dim_; ++o) {
    db[o] += dy[o];
    double *dw_row = dw + static_cast<std::size_t>(o) * in_dim_;
    const double *w_row = w + static_cast<std::size_t>(o) * in_dim_;
    const double g = dy[o];
    for (int i = 0; i < in_dim_; ++i) {
      dw_row[i] += g * x[i];
      dx[i] += g * w_row[i];
    }
  }
  return dx;
}

void FeatureNet::add_conv(ParamStore &store, int in_c, int out_c, int k,
                          int stride) {
  Item item;
  item.residual = false;
  item.first_block = static_cast<int>(blocks_.size());
  blocks_.emplace_back(store, in_c, out_c, k, stride);
  items_.push_back(item);
  out_channels_ = out_c;
}

void FeatureNet::add_residual(ParamStore &store, int channels) {
  Item item;
  item.residual = true;
  item.first_block = static_cast<int>(blocks_.size());
  blocks_.emplace_back(store, channels, channels / 2, 1, 1);
  blocks_.emplace_back(store, channels / 2, channels, 3, 1);
  items_.push_back(item);
  out_channels_ = channels;
}

int FeatureNet::conv_count() const { return static_cast<int>(blocks_.size()); }

std::vector<double> FeatureNet::forward(const Tensor &x, const double *params,
                                        Tape *tape) const {
  if (tape) {
    tape->conv_tapes.resize(blocks_.size());
  }
  Tensor cur = x;
  for (const Item &item : items_) {
    const ConvBlock &b0 = blocks_[item.first_block];
    auto *t0 = tape ? &tape->conv_tapes[item.first_block] : nullptr;
    if (!item.residual) {
      cur = b0.forward(cur, params, t0);
      continue;
    }
    const ConvBlock &b1 = blocks_[item.first_block + 1];
    auto *t1 = tape ? &tape->conv_tapes[item.first_block + 1] : nullptr;
    Tensor mid = b0.forward(cur, params, t0);
    Tensor out = b1.forward(mid, params, t1);
    for (std::size_t i = 0; i < out.data.size(); ++i) {
      out.data[i] += cur.data[i];
    }
    cur = std::move(out);
  }

  // Global average pool.
  const std::size_t hw = static_cast<std::size_t>(cur.h) * cur.w;
  std::vector<double> feat(out_channels_);
  for (int c = 0; c < out_channels_; ++c) {
    const double *plane = cur.data.data() + c * hw;
    double sum = 0.0;
    for (std::size_t i = 0; i < hw; ++i) {
      sum += plane[i];
    }
    feat[c] = sum / static_cast<double>(hw);
  }
  if (tape) {
    tape->map_h = cur.h;
    tape->map_w = cur.w;
  }
  return feat;
}

Tensor FeatureNet::backward(const std::vector<double> &dfeat, const Tape &tape,
                            const double *params, double *grads) const {
  // Un-pool: every spatial position shares the channel's mean gradient.
  const std::size_t hw = static_cast<std::size_t>(tape.map_h) * tape.map_w;
  Tensor dcur(out_channels_, tape.map_h, tape.map_w);
  for (int c = 0; c < out_channels_; ++c) {
    const double g = dfeat[c] / static_cast<double>(hw);
    double *plane = dcur.data.data() + c * hw;
    std::fill(plane, plane + hw, g);
  }

  for (auto it = items_.rbegin(); it != items_.rend(); ++it) {
    const ConvBlock &b0 = blocks_[it->first_block];
    const auto &t0 = tape.conv_tapes[it->first_block];
    if (!it->residual) {
      dcur = b0.backward(std::move(dcur), t0, params, grads);
      continue;
    }
    const ConvBlock &b1 = blocks_[it->first_block + 1];
    const auto &t1 = tape.conv_tapes[it->first_block + 1];
    Tensor dmid = b1.backward(dcur, t1, params, grads); // copy kept for skip
    Tensor dthrough = b0.backward(std::move(dmid), t0, params, grads);
    for (std::size_t i = 0; i < dcur.data.size(); ++i) {
      dcur.data[i] += dthrough.data[i];
    }
  }
  return dcur;
}

std::vector<double> softmax(const std::vector<double> &logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - m);
    sum += p[i];
  }
  for (double &v : p) {
    v /= sum;
  }
  return p;
}

double cross_entropy(const std::vector<double> &probs, int target) {
  constexpr double kFloor = 1e-300; // guards log(0) for saturated outputs
  return -std::log(std::max(probs[static_cast<std::size_t>(target)], kFloor));
}

} // namespace posegun::nn
