#pragma once

#include <cstdint>
#include <random>

#include "hazedefy/image.hpp"

namespace hazedefy::testing {

inline ScalarMap random_map(int w, int h, std::mt19937_64& rng, float lo = 0.0f, float hi = 1.0f) {
  std::uniform_real_distribution<float> u(lo, hi);
  ScalarMap m(w, h);
  for (float& v : m.data()) v = u(rng);
  return m;
}

inline ImageRGB random_image(int w, int h, std::mt19937_64& rng, float lo = 0.0f, float hi = 1.0f) {
  std::uniform_real_distribution<float> u(lo, hi);
  ImageRGB img(w, h);
  for (int c = 0; c < 3; ++c) {
    for (float& v : img.plane(c)) v = u(rng);
  }
  return img;
}

inline ImageU8 random_u8(int w, int h, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> u(0, 255);
  ImageU8 img(w, h);
  for (auto& b : img.data()) b = static_cast<std::uint8_t>(u(rng));
  return img;
}

inline bool all_in_unit(const ImageRGB& img) {
  for (int c = 0; c < 3; ++c) {
    for (const float v : img.plane(c)) {
      if (!(v >= 0.0f && v <= 1.0f)) return false;
    }
  }
  return true;
}

}  // namespace hazedefy::testing
