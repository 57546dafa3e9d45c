#include "posegun/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace posegun {

ImageU8::ImageU8(int w, int h, int c, std::uint8_t fill)
    : width(w), height(h), channels(c) {
  if (w <= 0 || h <= 0 || (c != 1 && c != 3)) {
    throw DataError("invalid image dimensions");
  }
  data.assign(static_cast<std::size_t>(w) * h * c, fill);
}

std::uint8_t &ImageU8::at(int x, int y, int c) {
  return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
}

std::uint8_t ImageU8::at(int x, int y, int c) const {
  return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
}

namespace {

// Skips whitespace and '#' comment lines between PNM header tokens.
int next_header_int(std::istream &in, const std::filesystem::path &path) {
  for (;;) {
    const int ch = in.peek();
    if (ch == EOF) {
      throw ParseError("truncated PNM header: " + path.string());
    }
    if (std::isspace(ch)) {
      in.get();
    } else if (ch == '#') {
      std::string line;
      std::getline(in, line);
    } else {
      break;
    }
  }
  int value = 0;
  if (!(in >> value)) {
    throw ParseError("bad PNM header token: " + path.string());
  }
  return value;
}

} // namespace

ImageU8 read_pnm(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open image: " + path.string());
  }
  char p = 0, kind = 0;
  in.get(p).get(kind);
  if (p != 'P' || (kind != '4' && kind != '5' && kind != '6')) {
    throw ParseError("unsupported image format (want P4/P5/P6): " +
                     path.string());
  }
  const int w = next_header_int(in, path);
  const int h = next_header_int(in, path);
  if (w <= 0 || h <= 0) {
    throw ParseError("bad PNM dimensions: " + path.string());
  }
  if (kind == '4') {
    in.get(); // single whitespace after header
    ImageU8 img(w, h, 1);
    const int row_bytes = (w + 7) / 8;
    std::vector<char> row(row_bytes);
    for (int y = 0; y < h; ++y) {
      if (!in.read(row.data(), row_bytes)) {
        throw ParseError("truncated P4 data: " + path.string());
      }
      for (int x = 0; x < w; ++x) {
        const int bit = (row[x / 8] >> (7 - x % 8)) & 1;
        img.at(x, y, 0) = static_cast<std::uint8_t>(bit);
      }
    }
    return img;
  }
  const int maxval = next_header_int(in, path);
  if (maxval != 255) {
    throw ParseError("unsupported PNM maxval (want 255): " + path.string());
  }
  in.get();
  const int channels = kind == '6' ? 3 : 1;
  ImageU8 img(w, h, channels);
  if (!in.read(reinterpret_cast<char *>(img.data.data()),
               static_cast<std::streamsize>(img.data.size()))) {
    throw ParseError("truncated PNM data: " + path.string());
  }
  return img;
}

void write_pnm(const ImageU8 &img, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw WriteError("cannot write image: " + path.string());
  }
  out << (img.channels == 3 ? "P6\n" : "P5\n")
      << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char *>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
  if (!out) {
    throw WriteError("short write: " + path.string());
  }
}

void write_pbm(const ImageU8 &bits, const std::filesystem::path &path) {
  if (bits.channels != 1) {
    throw DataError("write_pbm expects a 1-channel raster");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw WriteError("cannot write image: " + path.string());
  }
  out << "P4\n" << bits.width << ' ' << bits.height << '\n';
  const int row_bytes = (bits.width + 7) / 8;
  std::vector<char> row(row_bytes);
  for (int y = 0; y < bits.height; ++y) {
    std::fill(row.begin(), row.end(), 0);
    for (int x = 0; x < bits.width; ++x) {
      if (bits.at(x, y, 0) != 0) {
        row[x / 8] |= static_cast<char>(1 << (7 - x % 8));
      }
    }
    out.write(row.data(), row_bytes);
  }
  if (!out) {
    throw WriteError("short write: " + path.string());
  }
}

ImageU8 read_pbm(const std::filesystem::path &path) {
  ImageU8 img = read_pnm(path);
  if (img.channels != 1) {
    throw ParseError("not a bitmap: " + path.string());
  }
  return img;
}

double bilinear_sample(const ImageU8 &img, double x, double y, int channel) {
  // Convert to pixel-center coordinates.
  const double fx = x - 0.5;
  const double fy = y - 0.5;
  const int x0 = static_cast<int>(std::floor(fx));
  const int y0 = static_cast<int>(std::floor(fy));
  const double ax = fx - x0;
  const double ay = fy - y0;
  const auto clampi = [](int v, int hi) { return std::clamp(v, 0, hi); };
  const int cx0 = clampi(x0, img.width - 1);
  const int cx1 = clampi(x0 + 1, img.width - 1);
  const int cy0 = clampi(y0, img.height - 1);
  const int cy1 = clampi(y0 + 1, img.height - 1);
  const double v00 = img.at(cx0, cy0, channel);
  const double v10 = img.at(cx1, cy0, channel);
  const double v01 = img.at(cx0, cy1, channel);
  const double v11 = img.at(cx1, cy1, channel);
  const double top = v00 * (1.0 - ax) + v10 * ax;
  const double bot = v01 * (1.0 - ax) + v11 * ax;
  return top * (1.0 - ay) + bot * ay;
}

ImageU8 crop_resize_bilinear(const ImageU8 &img, const BBox &box, int out_w,
                             int out_h) {
  const auto clipped =
      intersect(box, BBox(0.0, 0.0, img.width, img.height));
  if (!clipped) {
    throw DataError("crop box lies outside the image");
  }
  ImageU8 out(out_w, out_h, img.channels);
  const double sx = clipped->width() / out_w;
  const double sy = clipped->height() / out_h;
  for (int y = 0; y < out_h; ++y) {
    const double src_y = clipped->y_min + (y + 0.5) * sy;
    for (int x = 0; x < out_w; ++x) {
      const double src_x = clipped->x_min + (x + 0.5) * sx;
      for (int c = 0; c < img.channels; ++c) {
        const double v = bilinear_sample(img, src_x, src_y, c);
        out.at(x, y, c) = static_cast<std::uint8_t>(
            std::clamp<long>(std::llround(v), 0, 255));
      }
    }
  }
  return out;
}

ImageU8 downscale_half(const ImageU8 &img) {
  const int ow = (img.width + 1) / 2;
  const int oh = (img.height + 1) / 2;
  ImageU8 out(ow, oh, img.channels);
  for (int y = 0; y < oh; ++y) {
    const int y0 = 2 * y;
    const int y1 = std::min(y0 + 1, img.height - 1);
    for (int x = 0; x < ow; ++x) {
      const int x0 = 2 * x;
      const int x1 = std::min(x0 + 1, img.width - 1);
      for (int c = 0; c < img.channels; ++c) {
        const int sum = img.at(x0, y0, c) + img.at(x1, y0, c) +
                        img.at(x0, y1, c) + img.at(x1, y1, c);
        out.at(x, y, c) = static_cast<std::uint8_t>((sum + 2) / 4);
      }
    }
  }
  return out;
}

void rgb_to_hsv(double r, double g, double b, double &h, double &s,
                double &v) {
  const double maxc = std::max({r, g, b});
  const double minc = std::min({r, g, b});
  const double d = maxc - minc;
  v = maxc;
  s = maxc > 0.0 ? d / maxc : 0.0;
  if (d <= 0.0) {
    h = 0.0;
    return;
  }
  if (maxc == r) {
    h = 60.0 * ((g - b) / d);
  } else if (maxc == g) {
    h = 60.0 * ((b - r) / d + 2.0);
  } else {
    h = 60.0 * ((r - g) / d + 4.0);
  }
  if (h < 0.0) {
    h += 360.0;
  }
}

void hsv_to_rgb(double h, double s, double v, double &r, double &g,
                double &b) {
  const double c = v * s;
  const double hp = h / 60.0;
  const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
  double r1 = 0.0, g1 = 0.0, b1 = 0.0;
  if (hp < 1.0) {
    r1 = c; g1 = x;
  } else if (hp < 2.0) {
    r1 = x; g1 = c;
  } else if (hp < 3.0) {
    g1 = c; b1 = x;
  } else if (hp < 4.0) {
    g1 = x; b1 = c;
  } else if (hp < 5.0) {
    r1 = x; b1 = c;
  } else {
    r1 = c; b1 = x;
  }
  const double m = v - c;
  r = r1 + m;
  g = g1 + m;
  b = b1 + m;
}

} // namespace posegun
