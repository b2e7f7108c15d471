#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hazedefy {

/// Interleaved 8-bit RGB buffer, the I/O representation.
class ImageU8 {
 public:
  ImageU8() = default;
  ImageU8(int width, int height);
  ImageU8(int width, int height, std::vector<std::uint8_t> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  bool empty() const noexcept { return data_.empty(); }

  std::span<std::uint8_t> data() noexcept { return data_; }
  std::span<const std::uint8_t> data() const noexcept { return data_; }

  std::uint8_t& at(int x, int y, int c) {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c];
  }
  std::uint8_t at(int x, int y, int c) const {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c];
  }

  friend bool operator==(const ImageU8&, const ImageU8&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Single-channel float map: dark channel, transmission, grayscale guide.
class ScalarMap {
 public:
  ScalarMap() = default;
  ScalarMap(int width, int height, float fill = 0.0f);
  ScalarMap(int width, int height, std::vector<float> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::span<float> data() noexcept { return data_; }
  std::span<const float> data() const noexcept { return data_; }
  std::span<float> row(int y) noexcept {
    return std::span<float>(data_).subspan(static_cast<std::size_t>(y) * width_, width_);
  }
  std::span<const float> row(int y) const noexcept {
    return std::span<const float>(data_).subspan(static_cast<std::size_t>(y) * width_, width_);
  }

  float& operator()(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  float operator()(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }

  friend bool operator==(const ScalarMap&, const ScalarMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

/// Planar RGB float image with samples normalized to [0,1].
class ImageRGB {
 public:
  static constexpr int kChannels = 3;

  ImageRGB() = default;
  ImageRGB(int width, int height, float fill = 0.0f);
  ImageRGB(int width, int height, std::array<float, 3> fill);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  bool empty() const noexcept { return planes_[0].empty(); }

  std::span<float> plane(int c) noexcept { return planes_[c]; }
  std::span<const float> plane(int c) const noexcept { return planes_[c]; }

  float& operator()(int x, int y, int c) {
    return planes_[c][static_cast<std::size_t>(y) * width_ + x];
  }
  float operator()(int x, int y, int c) const {
    return planes_[c][static_cast<std::size_t>(y) * width_ + x];
  }

  friend bool operator==(const ImageRGB&, const ImageRGB&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::array<std::vector<float>, 3> planes_;
};

ImageRGB u8_to_float(const ImageU8& img);

// Clamps to [0,1], then rounds s*255 half away from zero.
ImageU8 float_to_u8(const ImageRGB& img);

std::uint8_t to_byte(float s) noexcept;

/// Rec.601 luma: 0.299 r + 0.587 g + 0.114 b.
ScalarMap to_grayscale(const ImageRGB& img);

/// Bilinear resize with pixel-center alignment. Same-size requests return
/// an exact copy. Throws std::invalid_argument on zero target dimensions.
ImageRGB resize_bilinear(const ImageRGB& img, int out_width, int out_height);

}  // namespace hazedefy
