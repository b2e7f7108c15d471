#pragma once

#include "hazedefy/estimation.hpp"
#include "hazedefy/image.hpp"

namespace hazedefy {

struct PostParams {
  double gamma = 1.2;
  bool white_balance = false;

  void validate() const;
};

/// J = (I - A) / t + A per channel, clamped to [0,1].
/// Throws std::invalid_argument if any t sample is <= 0 or dimensions differ.
ImageRGB recover_radiance(const ImageRGB& img, const Airlight& airlight, const ScalarMap& transmission);

/// s -> s^(1/gamma). Throws std::invalid_argument for gamma <= 0.
ImageRGB gamma_correct(const ImageRGB& img, double gamma);

/// Gray-world balance: channel c scaled by clamp(g / m_c, 0.5, 2.0) where m_c
/// is the channel mean and g the mean of the three. Returns the input when a
/// channel mean is below 1e-6.
ImageRGB gray_world_balance(const ImageRGB& img);

}  // namespace hazedefy
