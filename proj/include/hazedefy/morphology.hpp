#pragma once

#include <stdexcept>

#include "hazedefy/image.hpp"

namespace hazedefy {

/// Half-width of a square structuring element; the window side is 2r+1.
class PatchRadius {
 public:
  constexpr PatchRadius() = default;
  constexpr explicit PatchRadius(int radius) : radius_(radius) {
    if (radius < 0) throw std::invalid_argument("patch radius must be >= 0");
  }
  constexpr int value() const noexcept { return radius_; }
  constexpr int window() const noexcept { return 2 * radius_ + 1; }

 private:
  int radius_ = 7;
};

/// Square-window grayscale erosion with replicate borders.
///
/// Separable: a horizontal then a vertical van Herk/Gil-Werman running
/// minimum, so the cost per pixel does not depend on the radius. Bit-identical
/// to min_filter_naive.
ScalarMap min_filter(const ScalarMap& src, PatchRadius radius);

/// Direct per-pixel window scan. Reference for min_filter.
ScalarMap min_filter_naive(const ScalarMap& src, PatchRadius radius);

}  // namespace hazedefy
