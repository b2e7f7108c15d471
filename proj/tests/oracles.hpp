#pragma once

// Brute-force references, written independently of the library code paths
// they check.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "hazedefy/estimation.hpp"
#include "hazedefy/image.hpp"

namespace hazedefy::oracle {

inline int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

/// Windowed mean, replicate border, double accumulation.
inline std::vector<double> window_mean(const ScalarMap& src, int r) {
  const int w = src.width();
  const int h = src.height();
  std::vector<double> out(src.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double sum = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) sum += src(clampi(x + dx, 0, w - 1), clampi(y + dy, 0, h - 1));
      }
      out[static_cast<std::size_t>(y) * w + x] = sum / ((2.0 * r + 1) * (2.0 * r + 1));
    }
  }
  return out;
}

/// Guided filter evaluated window by window: fit (a_k, b_k) by centred
/// two-pass statistics over each window k, then average a_k * I_i + b_k over
/// every window covering pixel i. Replicated border samples count as they
/// appear in the padded window.
inline ScalarMap guided_reference(const ScalarMap& p, const ScalarMap& guide, int r, double eps) {
  const int w = p.width();
  const int h = p.height();
  const double n = (2.0 * r + 1) * (2.0 * r + 1);
  std::vector<double> a(p.size());
  std::vector<double> b(p.size());
  for (int ky = 0; ky < h; ++ky) {
    for (int kx = 0; kx < w; ++kx) {
      double mi = 0.0;
      double mp = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          const int x = clampi(kx + dx, 0, w - 1);
          const int y = clampi(ky + dy, 0, h - 1);
          mi += guide(x, y);
          mp += p(x, y);
        }
      }
      mi /= n;
      mp /= n;
      double var = 0.0;
      double cov = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          const int x = clampi(kx + dx, 0, w - 1);
          const int y = clampi(ky + dy, 0, h - 1);
          const double di = guide(x, y) - mi;
          var += di * di;
          cov += di * (p(x, y) - mp);
        }
      }
      var /= n;
      cov /= n;
      const std::size_t k = static_cast<std::size_t>(ky) * w + kx;
      a[k] = cov / (var + eps);
      b[k] = mp - a[k] * mi;
    }
  }
  ScalarMap q(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double sum = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          const std::size_t k = static_cast<std::size_t>(clampi(y + dy, 0, h - 1)) * w + clampi(x + dx, 0, w - 1);
          sum += a[k] * guide(x, y) + b[k];
        }
      }
      q(x, y) = static_cast<float>(std::clamp(sum / n, 0.0, 1.0));
    }
  }
  return q;
}

/// Full sort of every pixel by (dark desc, index asc), mean of the first K.
inline Airlight airlight_by_full_sort(const ImageRGB& img, const ScalarMap& dark, double top_fraction,
                                      double alpha) {
  std::vector<std::size_t> order(dark.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto d = dark.data();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return d[x] > d[y]; });
  std::size_t k = static_cast<std::size_t>(top_fraction * static_cast<double>(dark.size()));
  k = std::max<std::size_t>(k, 1);
  double sum[3] = {0, 0, 0};
  for (std::size_t i = 0; i < k; ++i) {
    for (int c = 0; c < 3; ++c) sum[c] += img.plane(c)[order[i]];
  }
  float out[3];
  for (int c = 0; c < 3; ++c) out[c] = std::max(static_cast<float>(alpha * sum[c] / k), 1e-6f);
  return {out[0], out[1], out[2]};
}

}  // namespace hazedefy::oracle
