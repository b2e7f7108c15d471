#pragma once

#include <cstdint>
#include <variant>

#include "hazedefy/estimation.hpp"
#include "hazedefy/image.hpp"

namespace hazedefy {

/// Ground truth for the scattering model I = J t + A (1 - t).
struct HazeSpec {
  Airlight airlight;
  std::variant<float, ScalarMap> transmission = 1.0f;
};

/// The transmission of `spec` as a full map; validates every value in [0,1].
ScalarMap transmission_map(const HazeSpec& spec, int width, int height);

/// I = J t + A (1 - t) per channel. Throws std::invalid_argument on
/// dimension mismatch or transmission outside [0,1].
ImageRGB compose_haze(const ImageRGB& clean, const HazeSpec& spec);

enum class RampAxis { horizontal, vertical };

/// Linear ramp from `from` at the first column/row to `to` at the last.
ScalarMap ramp_transmission(int width, int height, float from, float to, RampAxis axis);

/// t = exp(-beta * depth).
ScalarMap depth_transmission(const ScalarMap& depth, double beta);

/// Random scene whose dark channel is zero: every pixel has one channel at 0
/// and the rest uniform in [0,1]. The top `sky_rows` rows hold the sky colour,
/// which is haze-free airlight; keep sky_rows <= patch radius so every patch
/// still reaches a dark pixel.
ImageRGB dark_prior_scene(int width, int height, const Airlight& sky, int sky_rows,
                          std::uint64_t seed);

/// Adds N(0, sigma^2) noise per sample and clamps to [0,1].
ImageRGB add_gaussian_noise(const ImageRGB& img, double sigma, std::uint64_t seed);

/// 10 log10(1 / MSE) on the [0,1] scale; +infinity when the images match.
double psnr(const ImageRGB& a, const ImageRGB& b);

/// PSNR over pixels at least `border` away from every edge.
double psnr_interior(const ImageRGB& a, const ImageRGB& b, int border);

/// RMSE over the interior left after excluding a `border`-wide band.
double transmission_rmse(const ScalarMap& estimated, const ScalarMap& truth, int border);

}  // namespace hazedefy
