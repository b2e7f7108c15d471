#include "hazedefy/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hazedefy {

namespace {

void check_dims(int width, int height) {
  if (width < 0 || height < 0) {
    throw std::invalid_argument("negative image dimensions");
  }
}

constexpr std::array<float, 256> make_byte_lut() {
  std::array<float, 256> lut{};
  for (int i = 0; i < 256; ++i) lut[i] = static_cast<float>(i) / 255.0f;
  return lut;
}

constexpr std::array<float, 256> kByteToFloat = make_byte_lut();

struct Tap {
  int lo;
  int hi;
  float frac;
};

// Pixel-center source coordinates for one axis.
std::vector<Tap> make_taps(int src, int dst) {
  std::vector<Tap> taps(dst);
  const double scale = static_cast<double>(src) / dst;
  for (int i = 0; i < dst; ++i) {
    double s = (i + 0.5) * scale - 0.5;
    s = std::clamp(s, 0.0, static_cast<double>(src - 1));
    const int lo = static_cast<int>(std::floor(s));
    const int hi = std::min(lo + 1, src - 1);
    taps[i] = {lo, hi, static_cast<float>(s - lo)};
  }
  return taps;
}

}  // namespace

ImageU8::ImageU8(int width, int height)
    : width_(width), height_(height) {
  check_dims(width, height);
  data_.assign(pixel_count() * 3, 0);
}

ImageU8::ImageU8(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_dims(width, height);
  if (data_.size() != pixel_count() * 3) {
    throw std::invalid_argument("ImageU8: data length " + std::to_string(data_.size()) +
                                " does not match 3*" + std::to_string(width) + "*" +
                                std::to_string(height));
  }
}

ScalarMap::ScalarMap(int width, int height, float fill)
    : width_(width), height_(height) {
  check_dims(width, height);
  data_.assign(static_cast<std::size_t>(width) * height, fill);
}

ScalarMap::ScalarMap(int width, int height, std::vector<float> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_dims(width, height);
  if (data_.size() != static_cast<std::size_t>(width) * height) {
    throw std::invalid_argument("ScalarMap: data length does not match dimensions");
  }
}

ImageRGB::ImageRGB(int width, int height, float fill)
    : ImageRGB(width, height, {fill, fill, fill}) {}

ImageRGB::ImageRGB(int width, int height, std::array<float, 3> fill)
    : width_(width), height_(height) {
  check_dims(width, height);
  for (int c = 0; c < kChannels; ++c) planes_[c].assign(pixel_count(), fill[c]);
}

ImageRGB u8_to_float(const ImageU8& img) {
  ImageRGB out(img.width(), img.height());
  const auto src = img.data();
  auto r = out.plane(0);
  auto g = out.plane(1);
  auto b = out.plane(2);
  const std::size_t n = img.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = kByteToFloat[src[3 * i]];
    g[i] = kByteToFloat[src[3 * i + 1]];
    b[i] = kByteToFloat[src[3 * i + 2]];
  }
  return out;
}

std::uint8_t to_byte(float s) noexcept {
  // NaN maps to 0 through the clamp comparisons.
  const float clamped = s > 0.0f ? (s < 1.0f ? s : 1.0f) : 0.0f;
  return static_cast<std::uint8_t>(static_cast<double>(clamped) * 255.0 + 0.5);
}

ImageU8 float_to_u8(const ImageRGB& img) {
  ImageU8 out(img.width(), img.height());
  auto dst = out.data();
  const auto r = img.plane(0);
  const auto g = img.plane(1);
  const auto b = img.plane(2);
  const std::size_t n = img.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    dst[3 * i] = to_byte(r[i]);
    dst[3 * i + 1] = to_byte(g[i]);
    dst[3 * i + 2] = to_byte(b[i]);
  }
  return out;
}

ScalarMap to_grayscale(const ImageRGB& img) {
  ScalarMap out(img.width(), img.height());
  const auto r = img.plane(0);
  const auto g = img.plane(1);
  const auto b = img.plane(2);
  auto dst = out.data();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const double y = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i];
    dst[i] = std::clamp(static_cast<float>(y), 0.0f, 1.0f);
  }
  return out;
}

ImageRGB resize_bilinear(const ImageRGB& img, int out_width, int out_height) {
  if (out_width < 1 || out_height < 1) {
    throw std::invalid_argument("resize_bilinear: target dimensions must be >= 1, got " +
                                std::to_string(out_width) + "x" + std::to_string(out_height));
  }
  if (img.empty()) throw std::invalid_argument("resize_bilinear: empty source image");
  if (out_width == img.width() && out_height == img.height()) return img;

  const auto xs = make_taps(img.width(), out_width);
  const auto ys = make_taps(img.height(), out_height);
  ImageRGB out(out_width, out_height);
  const std::size_t sw = img.width();

  for (int c = 0; c < ImageRGB::kChannels; ++c) {
    const auto src = img.plane(c);
    auto dst = out.plane(c);
    for (int y = 0; y < out_height; ++y) {
      const Tap ty = ys[y];
      const float* row0 = src.data() + ty.lo * sw;
      const float* row1 = src.data() + ty.hi * sw;
      float* drow = dst.data() + static_cast<std::size_t>(y) * out_width;
      for (int x = 0; x < out_width; ++x) {
        const Tap tx = xs[x];
        const float top = row0[tx.lo] + (row0[tx.hi] - row0[tx.lo]) * tx.frac;
        const float bot = row1[tx.lo] + (row1[tx.hi] - row1[tx.lo]) * tx.frac;
        drow[x] = std::clamp(top + (bot - top) * ty.frac, 0.0f, 1.0f);
      }
    }
  }
  return out;
}

}  // namespace hazedefy
