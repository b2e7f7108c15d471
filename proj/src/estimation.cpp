#include "hazedefy/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace hazedefy {

float Airlight::max_component() const noexcept { return std::max({r, g, b}); }

void AirlightParams::validate() const {
  if (!(top_fraction > 0.0 && top_fraction <= 1.0)) {
    throw std::invalid_argument("airlight top_fraction must be in (0,1]");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("airlight alpha must be in (0,1]");
  }
}

std::size_t AirlightParams::selected_count(std::size_t pixel_count) const {
  const auto k = static_cast<std::size_t>(std::floor(top_fraction * static_cast<double>(pixel_count)));
  return std::clamp<std::size_t>(k, 1, std::max<std::size_t>(pixel_count, 1));
}

void TransmissionParams::validate() const {
  if (!(omega >= 0.0 && omega <= 1.0)) throw std::invalid_argument("omega must be in [0,1]");
  if (!(t_min > 0.0 && t_min < 1.0)) throw std::invalid_argument("t_min must be in (0,1)");
}

void GuidedFilterParams::validate() const {
  if (radius < 1) throw std::invalid_argument("guided filter radius must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("guided filter epsilon must be > 0");
}

ScalarMap channel_min(const ImageRGB& img) {
  ScalarMap out(img.width(), img.height());
  const auto r = img.plane(0);
  const auto g = img.plane(1);
  const auto b = img.plane(2);
  auto dst = out.data();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const float rg = g[i] < r[i] ? g[i] : r[i];
    dst[i] = b[i] < rg ? b[i] : rg;
  }
  return out;
}

ScalarMap dark_channel(const ImageRGB& img, PatchRadius radius) {
  return min_filter(channel_min(img), radius);
}

std::vector<std::size_t> select_brightest(const ScalarMap& dark, std::size_t count) {
  const auto values = dark.data();
  count = std::min(count, values.size());
  std::vector<std::size_t> picked;
  if (count == 0) return picked;
  picked.reserve(count);

  // The K-th largest value splits the set: everything above it is taken,
  // ties at it are filled in index order.
  std::vector<float> scratch(values.begin(), values.end());
  std::nth_element(scratch.begin(), scratch.begin() + (count - 1), scratch.end(),
                   std::greater<float>());
  const float kth = scratch[count - 1];
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > kth) picked.push_back(i);
  }
  for (std::size_t i = 0; i < values.size() && picked.size() < count; ++i) {
    if (values[i] == kth) picked.push_back(i);
  }
  std::sort(picked.begin(), picked.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  });
  return picked;
}

Airlight estimate_airlight(const ImageRGB& img, const ScalarMap& dark, const AirlightParams& params) {
  if (dark.width() != img.width() || dark.height() != img.height()) {
    throw std::invalid_argument("estimate_airlight: dark channel and image dimensions differ");
  }
  const auto picked = select_brightest(dark, params.selected_count(img.pixel_count()));
  std::array<double, 3> sum{0.0, 0.0, 0.0};
  for (const std::size_t i : picked) {
    for (int c = 0; c < 3; ++c) sum[c] += img.plane(c)[i];
  }
  std::array<float, 3> a{};
  for (int c = 0; c < 3; ++c) {
    const double mean = picked.empty() ? 0.0 : sum[c] / static_cast<double>(picked.size());
    a[c] = std::max(static_cast<float>(params.alpha * mean), kAirlightFloor);
  }
  return {a[0], a[1], a[2]};
}

ScalarMap estimate_transmission(const ImageRGB& img, const Airlight& airlight,
                                const TransmissionParams& params) {
  return estimate_transmission(channel_min(img), airlight, params);
}

ScalarMap estimate_transmission(ScalarMap channel_minimum, const Airlight& airlight,
                                const TransmissionParams& params) {
  const float amax = std::max(airlight.max_component(), kAirlightFloor);
  const float scale = static_cast<float>(params.omega) / amax;
  const float t_min = static_cast<float>(params.t_min);
  ScalarMap out = std::move(channel_minimum);
  for (float& v : out.data()) {
    const float t = 1.0f - scale * v;
    v = std::min(std::max(t, t_min), 1.0f);
  }
  return out;
}

namespace {

// Replicate-border box mean on a double buffer, separable running sums.
std::vector<double> box_mean(const std::vector<double>& src, int w, int h, int r) {
  if (r == 0) return src;
  const double norm = 1.0 / (static_cast<double>(2 * r + 1) * (2 * r + 1));
  std::vector<double> tmp(src.size());
  for (int y = 0; y < h; ++y) {
    const double* in = src.data() + static_cast<std::size_t>(y) * w;
    double* out = tmp.data() + static_cast<std::size_t>(y) * w;
    double sum = 0.0;
    for (int d = -r; d <= r; ++d) sum += in[std::clamp(d, 0, w - 1)];
    for (int x = 0; x < w; ++x) {
      out[x] = sum;
      sum += in[std::min(x + r + 1, w - 1)] - in[std::max(x - r, 0)];
    }
  }
  std::vector<double> out(src.size());
  std::vector<double> acc(w, 0.0);
  auto row = [&](int y) { return tmp.data() + static_cast<std::size_t>(std::clamp(y, 0, h - 1)) * w; };
  for (int d = -r; d <= r; ++d) {
    const double* in = row(d);
    for (int x = 0; x < w; ++x) acc[x] += in[x];
  }
  for (int y = 0; y < h; ++y) {
    double* dst = out.data() + static_cast<std::size_t>(y) * w;
    const double* add = row(y + r + 1);
    const double* sub = row(y - r);
    for (int x = 0; x < w; ++x) {
      dst[x] = acc[x] * norm;
      acc[x] += add[x] - sub[x];
    }
  }
  return out;
}

std::vector<double> to_double(const ScalarMap& m) {
  return {m.data().begin(), m.data().end()};
}

}  // namespace

ScalarMap box_filter(const ScalarMap& src, int radius) {
  if (radius < 0) throw std::invalid_argument("box_filter: radius must be >= 0");
  if (radius == 0 || src.empty()) return src;
  const auto mean = box_mean(to_double(src), src.width(), src.height(), radius);
  ScalarMap out(src.width(), src.height());
  std::transform(mean.begin(), mean.end(), out.data().begin(),
                 [](double v) { return static_cast<float>(v); });
  return out;
}

ScalarMap guided_filter(const ScalarMap& input, const ScalarMap& guide,
                        const GuidedFilterParams& params) {
  params.validate();
  if (input.width() != guide.width() || input.height() != guide.height()) {
    throw std::invalid_argument("guided_filter: input and guide dimensions differ");
  }
  const int w = input.width();
  const int h = input.height();
  const int r = params.radius;
  const std::size_t n = input.size();

  const auto p = to_double(input);
  const auto I = to_double(guide);
  std::vector<double> Ip(n);
  std::vector<double> II(n);
  for (std::size_t i = 0; i < n; ++i) {
    Ip[i] = I[i] * p[i];
    II[i] = I[i] * I[i];
  }
  const auto mean_I = box_mean(I, w, h, r);
  const auto mean_p = box_mean(p, w, h, r);
  const auto corr_Ip = box_mean(Ip, w, h, r);
  const auto corr_II = box_mean(II, w, h, r);

  std::vector<double> a(n);
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double var = corr_II[i] - mean_I[i] * mean_I[i];
    const double cov = corr_Ip[i] - mean_I[i] * mean_p[i];
    a[i] = cov / (var + params.epsilon);
    b[i] = mean_p[i] - a[i] * mean_I[i];
  }
  const auto mean_a = box_mean(a, w, h, r);
  const auto mean_b = box_mean(b, w, h, r);

  ScalarMap out(w, h);
  auto dst = out.data();
  for (std::size_t i = 0; i < n; ++i) {
    dst[i] = std::clamp(static_cast<float>(mean_a[i] * I[i] + mean_b[i]), 0.0f, 1.0f);
  }
  return out;
}

}  // namespace hazedefy
