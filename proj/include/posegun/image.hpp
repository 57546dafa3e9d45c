#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "posegun/errors.hpp"
#include "posegun/geometry.hpp"

namespace posegun {

/// Interleaved 8-bit raster, 1 channel (gray / binary) or 3 channels (RGB).
/// Pixel (x, y) covers the unit square [x, x+1) x [y, y+1); its sample point
/// is the center (x + 0.5, y + 0.5).
struct ImageU8 {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> data; // width * height * channels, row-major

  ImageU8() = default;
  ImageU8(int w, int h, int c, std::uint8_t fill = 0);

  std::uint8_t &at(int x, int y, int c);
  std::uint8_t at(int x, int y, int c) const;

  bool operator==(const ImageU8 &other) const = default;
};

// --------------------------------------------------------------------------
// Netpbm container I/O. P6 for RGB, P5 for gray, P4 for 1-bit rasters
// (P4 pixels are stored as 0/1 in memory, 1 = set/black bit).
// --------------------------------------------------------------------------

ImageU8 read_pnm(const std::filesystem::path &path);
void write_pnm(const ImageU8 &img, const std::filesystem::path &path);

/// Writes a 1-channel 0/1 raster as packed 1-bit P4.
void write_pbm(const ImageU8 &bits, const std::filesystem::path &path);
ImageU8 read_pbm(const std::filesystem::path &path);

// --------------------------------------------------------------------------
// Resampling
// --------------------------------------------------------------------------

/// Bilinear sample at continuous point (x, y); border pixels are clamped.
double bilinear_sample(const ImageU8 &img, double x, double y, int channel);

/// Resamples the continuous box region of `img` to out_w x out_h with
/// bilinear interpolation. The box is clipped to the image bounds first;
/// throws DataError when the clipped region has zero area.
ImageU8 crop_resize_bilinear(const ImageU8 &img, const BBox &box, int out_w,
                             int out_h);

/// Halves both image dimensions by 2x2 block averaging (exact integer
/// rounding: (sum + 2) / 4). Odd trailing rows/columns average the pixels
/// that exist. Output size is ceil(w/2) x ceil(h/2).
ImageU8 downscale_half(const ImageU8 &img);

// --------------------------------------------------------------------------
// Color
// --------------------------------------------------------------------------

/// RGB in [0,1] -> (hue degrees [0,360), saturation [0,1], value [0,1]).
void rgb_to_hsv(double r, double g, double b, double &h, double &s, double &v);

void hsv_to_rgb(double h, double s, double v, double &r, double &g, double &b);

} // namespace posegun
