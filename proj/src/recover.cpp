#include "hazedefy/recover.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hazedefy {

void PostParams::validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
}

ImageRGB recover_radiance(const ImageRGB& img, const Airlight& airlight, const ScalarMap& transmission) {
  if (transmission.width() != img.width() || transmission.height() != img.height()) {
    throw std::invalid_argument("recover_radiance: transmission and image dimensions differ");
  }
  const auto t = transmission.data();
  for (const float v : t) {
    if (!(v > 0.0f)) throw std::invalid_argument("recover_radiance: transmission sample <= 0");
  }
  ImageRGB out(img.width(), img.height());
  for (int c = 0; c < ImageRGB::kChannels; ++c) {
    const float a = airlight[c];
    const auto src = img.plane(c);
    auto dst = out.plane(c);
    for (std::size_t i = 0; i < t.size(); ++i) {
      // t == 1 passes the sample through untouched.
      const float j = t[i] == 1.0f ? src[i] : (src[i] - a) / t[i] + a;
      dst[i] = std::clamp(j, 0.0f, 1.0f);
    }
  }
  return out;
}

ImageRGB gamma_correct(const ImageRGB& img, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma_correct: gamma must be > 0");
  if (gamma == 1.0) return img;
  const float exponent = static_cast<float>(1.0 / gamma);
  ImageRGB out(img.width(), img.height());
  for (int c = 0; c < ImageRGB::kChannels; ++c) {
    const auto src = img.plane(c);
    auto dst = out.plane(c);
    std::transform(src.begin(), src.end(), dst.begin(), [exponent](float s) {
      const float v = std::clamp(s, 0.0f, 1.0f);
      return std::min(std::pow(v, exponent), 1.0f);
    });
  }
  return out;
}

ImageRGB gray_world_balance(const ImageRGB& img) {
  if (img.empty()) throw std::invalid_argument("gray_world_balance: empty image");
  std::array<double, 3> mean{};
  for (int c = 0; c < ImageRGB::kChannels; ++c) {
    const auto p = img.plane(c);
    mean[c] = std::accumulate(p.begin(), p.end(), 0.0) / static_cast<double>(p.size());
  }
  if (std::any_of(mean.begin(), mean.end(), [](double m) { return m < 1e-6; })) return img;
  const double gray = (mean[0] + mean[1] + mean[2]) / 3.0;

  ImageRGB out(img.width(), img.height());
  for (int c = 0; c < ImageRGB::kChannels; ++c) {
    const double scale = std::clamp(gray / mean[c], 0.5, 2.0);
    const auto src = img.plane(c);
    auto dst = out.plane(c);
    std::transform(src.begin(), src.end(), dst.begin(), [scale](float s) {
      return std::clamp(static_cast<float>(s * scale), 0.0f, 1.0f);
    });
  }
  return out;
}

}  // namespace hazedefy
