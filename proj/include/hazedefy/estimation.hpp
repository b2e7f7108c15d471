#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "hazedefy/image.hpp"
#include "hazedefy/morphology.hpp"

namespace hazedefy {

/// Global atmospheric light, one normalized component per channel.
struct Airlight {
  float r = 1.0f;
  float g = 1.0f;
  float b = 1.0f;

  float operator[](int c) const noexcept { return c == 0 ? r : (c == 1 ? g : b); }
  float max_component() const noexcept;
  std::array<float, 3> as_array() const noexcept { return {r, g, b}; }

  friend bool operator==(const Airlight&, const Airlight&) = default;
};

/// Lower bound applied to every airlight component so the transmission
/// division stays defined on black frames.
inline constexpr float kAirlightFloor = 1e-6f;

struct AirlightParams {
  double top_fraction = 0.001;  // share of pixels averaged, (0,1]
  double alpha = 0.8;           // overestimation guard, (0,1]

  void validate() const;
  /// max(1, floor(top_fraction * pixel_count))
  std::size_t selected_count(std::size_t pixel_count) const;
};

struct TransmissionParams {
  double omega = 0.5;   // haze retention, (0,1]; 0 is accepted and yields t = 1
  double t_min = 0.05;  // lower clamp, (0,1)

  void validate() const;
};

struct GuidedFilterParams {
  int radius = 40;
  double epsilon = 1e-3;

  void validate() const;
};

ScalarMap channel_min(const ImageRGB& img);

/// Patch minimum of the per-pixel channel minimum.
ScalarMap dark_channel(const ImageRGB& img, PatchRadius radius);

/// Indices of the K brightest dark-channel pixels, ordered by dark value
/// descending then linear index ascending.
std::vector<std::size_t> select_brightest(const ScalarMap& dark, std::size_t count);

/// alpha times the mean RGB over the brightest dark-channel pixels; each
/// component floored at kAirlightFloor.
Airlight estimate_airlight(const ImageRGB& img, const ScalarMap& dark, const AirlightParams& params);

/// t = max(1 - omega * min_c I / max(A), t_min), pointwise.
ScalarMap estimate_transmission(const ImageRGB& img, const Airlight& airlight,
                                const TransmissionParams& params);

/// Same, from a precomputed channel_min(img).
ScalarMap estimate_transmission(ScalarMap channel_minimum, const Airlight& airlight,
                                const TransmissionParams& params);

/// Windowed mean over a (2r+1)^2 square with replicate borders.
ScalarMap box_filter(const ScalarMap& src, int radius);

/// Box-filter guided filter of `input` steered by `guide`; output clamped to [0,1].
ScalarMap guided_filter(const ScalarMap& input, const ScalarMap& guide,
                        const GuidedFilterParams& params);

}  // namespace hazedefy
