#include "hazedefy/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace hazedefy {

namespace {

void require_same_size(const ImageRGB& a, const ImageRGB& b, const char* what) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw std::invalid_argument(std::string(what) + ": image dimensions differ");
  }
}

double psnr_from_mse(double mse) {
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

double squared_error(const ImageRGB& a, const ImageRGB& b, int border, std::size_t& count) {
  const int w = a.width();
  const int h = a.height();
  double sum = 0.0;
  count = 0;
  for (int c = 0; c < ImageRGB::kChannels; ++c) {
    for (int y = border; y < h - border; ++y) {
      for (int x = border; x < w - border; ++x) {
        const double d = static_cast<double>(a(x, y, c)) - b(x, y, c);
        sum += d * d;
        ++count;
      }
    }
  }
  return sum;
}

}  // namespace

ScalarMap transmission_map(const HazeSpec& spec, int width, int height) {
  ScalarMap t = std::visit(
      [&](const auto& value) -> ScalarMap {
        if constexpr (std::is_same_v<std::decay_t<decltype(value)>, float>) {
          return ScalarMap(width, height, value);
        } else {
          if (value.width() != width || value.height() != height) {
            throw std::invalid_argument("haze transmission map dimensions differ from image");
          }
          return value;
        }
      },
      spec.transmission);
  for (const float v : t.data()) {
    if (!(v >= 0.0f && v <= 1.0f)) throw std::invalid_argument("transmission outside [0,1]");
  }
  return t;
}

ImageRGB compose_haze(const ImageRGB& clean, const HazeSpec& spec) {
  const ScalarMap t = transmission_map(spec, clean.width(), clean.height());
  const auto tv = t.data();
  ImageRGB out(clean.width(), clean.height());
  for (int c = 0; c < ImageRGB::kChannels; ++c) {
    const float a = spec.airlight[c];
    const auto src = clean.plane(c);
    auto dst = out.plane(c);
    for (std::size_t i = 0; i < tv.size(); ++i) {
      dst[i] = std::clamp(src[i] * tv[i] + a * (1.0f - tv[i]), 0.0f, 1.0f);
    }
  }
  return out;
}

ScalarMap ramp_transmission(int width, int height, float from, float to, RampAxis axis) {
  ScalarMap t(width, height);
  const int steps = (axis == RampAxis::horizontal ? width : height) - 1;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const int pos = axis == RampAxis::horizontal ? x : y;
      const float f = steps > 0 ? static_cast<float>(pos) / steps : 0.0f;
      t(x, y) = from + (to - from) * f;
    }
  }
  return t;
}

ScalarMap depth_transmission(const ScalarMap& depth, double beta) {
  ScalarMap t(depth.width(), depth.height());
  std::transform(depth.data().begin(), depth.data().end(), t.data().begin(),
                 [beta](float d) { return static_cast<float>(std::exp(-beta * d)); });
  return t;
}

ImageRGB dark_prior_scene(int width, int height, const Airlight& sky, int sky_rows,
                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> value(0.0f, 1.0f);
  std::uniform_int_distribution<int> channel(0, 2);
  ImageRGB scene(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (y < sky_rows) {
        for (int c = 0; c < 3; ++c) scene(x, y, c) = sky[c];
        continue;
      }
      const int dark = channel(rng);
      for (int c = 0; c < 3; ++c) scene(x, y, c) = c == dark ? 0.0f : value(rng);
    }
  }
  return scene;
}

ImageRGB add_gaussian_noise(const ImageRGB& img, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> noise(0.0f, static_cast<float>(sigma));
  ImageRGB out = img;
  for (int c = 0; c < ImageRGB::kChannels; ++c) {
    for (float& s : out.plane(c)) s = std::clamp(s + noise(rng), 0.0f, 1.0f);
  }
  return out;
}

double psnr(const ImageRGB& a, const ImageRGB& b) { return psnr_interior(a, b, 0); }

double psnr_interior(const ImageRGB& a, const ImageRGB& b, int border) {
  require_same_size(a, b, "psnr");
  if (border < 0 || 2 * border >= a.width() || 2 * border >= a.height()) {
    throw std::invalid_argument("psnr: border leaves no interior");
  }
  std::size_t count = 0;
  const double sum = squared_error(a, b, border, count);
  return psnr_from_mse(sum / static_cast<double>(count));
}

double transmission_rmse(const ScalarMap& estimated, const ScalarMap& truth, int border) {
  if (estimated.width() != truth.width() || estimated.height() != truth.height()) {
    throw std::invalid_argument("transmission_rmse: dimensions differ");
  }
  const int w = truth.width();
  const int h = truth.height();
  if (border < 0 || 2 * border >= w || 2 * border >= h) {
    throw std::invalid_argument("transmission_rmse: border leaves no interior");
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (int y = border; y < h - border; ++y) {
    for (int x = border; x < w - border; ++x) {
      const double d = static_cast<double>(estimated(x, y)) - truth(x, y);
      sum += d * d;
      ++count;
    }
  }
  return std::sqrt(sum / static_cast<double>(count));
}

}  // namespace hazedefy
