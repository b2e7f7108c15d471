#include "hazedefy/morphology.hpp"

#include <algorithm>
#include <vector>

namespace hazedefy {

namespace {

inline float fmin2(float a, float b) { return b < a ? b : a; }

// van Herk/Gil-Werman over a replicate-padded sequence of length n + 2r.
// g holds block-wise prefix minima, h block-wise suffix minima; each output
// window straddles at most two blocks.
void running_min_1d(const float* src, int n, int r, float* dst, std::vector<float>& g,
                    std::vector<float>& h) {
  const int k = 2 * r + 1;
  const int len = n + 2 * r;
  g.resize(len);
  h.resize(len);
  auto padded = [&](int j) { return src[std::clamp(j - r, 0, n - 1)]; };

  for (int j = 0; j < len; ++j) {
    const float v = padded(j);
    g[j] = (j % k == 0) ? v : fmin2(g[j - 1], v);
  }
  for (int j = len - 1; j >= 0; --j) {
    const float v = padded(j);
    h[j] = (j % k == k - 1 || j == len - 1) ? v : fmin2(h[j + 1], v);
  }
  for (int x = 0; x < n; ++x) dst[x] = fmin2(h[x], g[x + k - 1]);
}

void horizontal_pass(const ScalarMap& src, int r, ScalarMap& dst) {
  std::vector<float> g;
  std::vector<float> h;
  for (int y = 0; y < src.height(); ++y) {
    running_min_1d(src.row(y).data(), src.width(), r, dst.row(y).data(), g, h);
  }
}

// Same recurrence as running_min_1d with whole rows as elements, so the inner
// loops run contiguously over x.
void vertical_pass(const ScalarMap& src, int r, ScalarMap& dst) {
  const int n = src.height();
  const std::size_t w = src.width();
  const int k = 2 * r + 1;
  const int len = n + 2 * r;
  std::vector<float> g(static_cast<std::size_t>(len) * w);
  std::vector<float> h(static_cast<std::size_t>(len) * w);
  auto padded = [&](int j) { return src.row(std::clamp(j - r, 0, n - 1)).data(); };

  for (int j = 0; j < len; ++j) {
    const float* v = padded(j);
    float* gj = g.data() + j * w;
    if (j % k == 0) {
      std::copy(v, v + w, gj);
    } else {
      const float* prev = gj - w;
      for (std::size_t x = 0; x < w; ++x) gj[x] = fmin2(prev[x], v[x]);
    }
  }
  for (int j = len - 1; j >= 0; --j) {
    const float* v = padded(j);
    float* hj = h.data() + j * w;
    if (j % k == k - 1 || j == len - 1) {
      std::copy(v, v + w, hj);
    } else {
      const float* next = hj + w;
      for (std::size_t x = 0; x < w; ++x) hj[x] = fmin2(next[x], v[x]);
    }
  }
  for (int y = 0; y < n; ++y) {
    const float* hy = h.data() + y * w;
    const float* gy = g.data() + (y + k - 1) * w;
    float* out = dst.row(y).data();
    for (std::size_t x = 0; x < w; ++x) out[x] = fmin2(hy[x], gy[x]);
  }
}

}  // namespace

ScalarMap min_filter(const ScalarMap& src, PatchRadius radius) {
  const int r = radius.value();
  if (r == 0 || src.empty()) return src;
  ScalarMap tmp(src.width(), src.height());
  horizontal_pass(src, r, tmp);
  ScalarMap out(src.width(), src.height());
  vertical_pass(tmp, r, out);
  return out;
}

ScalarMap min_filter_naive(const ScalarMap& src, PatchRadius radius) {
  const int r = radius.value();
  const int w = src.width();
  const int h = src.height();
  ScalarMap out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      float m = src(x, y);
      for (int dy = -r; dy <= r; ++dy) {
        const int yy = std::clamp(y + dy, 0, h - 1);
        for (int dx = -r; dx <= r; ++dx) {
          m = fmin2(m, src(std::clamp(x + dx, 0, w - 1), yy));
        }
      }
      out(x, y) = m;
    }
  }
  return out;
}

}  // namespace hazedefy
