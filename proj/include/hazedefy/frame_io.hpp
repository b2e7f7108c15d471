#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hazedefy/error.hpp"
#include "hazedefy/image.hpp"

namespace hazedefy {

using Bytes = std::vector<std::uint8_t>;

/// Binary PPM (P6, maxval 255). Comments and any whitespace are accepted
/// between header fields; exactly one whitespace byte precedes the payload.
ImageU8 read_ppm(std::span<const std::uint8_t> bytes);

/// Canonical "P6\n<w> <h>\n255\n" header followed by the interleaved payload.
Bytes write_ppm(const ImageU8& img);

/// 8-bit gray, gray+alpha, RGB or RGBA PNG. Gray is replicated into all three
/// channels and alpha is discarded.
ImageU8 read_png(std::span<const std::uint8_t> bytes);

/// 8-bit RGB, non-interlaced, fixed compression settings.
Bytes write_png(const ImageU8& img);

/// 8-bit grayscale PNG of a [0,1] map.
Bytes write_png_gray(const ScalarMap& map);

/// Decodes PPM or PNG by signature.
ImageU8 decode_image(std::span<const std::uint8_t> bytes);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// Reads a PPM or PNG file; errors carry the path.
ImageU8 read_image_file(const std::filesystem::path& path);

/// Encodes by extension: ".png" writes PNG, anything else PPM.
void write_image_file(const std::filesystem::path& path, const ImageU8& img);

/// Raw interleaved RGB24 framing: frames of exactly 3*width*height bytes.
struct FrameStreamHeader {
  static constexpr std::string_view kPixelFormat = "RGB24";

  int width = 0;
  int height = 0;
  std::optional<std::size_t> frame_count;

  std::size_t frame_bytes() const {
    return 3 * static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  void validate() const;
};

class RawStreamReader {
 public:
  RawStreamReader(std::istream& in, FrameStreamHeader header);

  /// Next frame, or nullopt at a clean end of stream. A partial trailing
  /// frame throws IoError(stream_truncated) with the frame's starting offset.
  std::optional<ImageU8> next();

  std::size_t bytes_consumed() const noexcept { return consumed_; }
  std::size_t frames_read() const noexcept { return frames_; }
  const FrameStreamHeader& header() const noexcept { return header_; }

 private:
  std::istream* in_;
  FrameStreamHeader header_;
  std::size_t consumed_ = 0;
  std::size_t frames_ = 0;
};

std::vector<ImageU8> read_raw_stream(std::istream& in, const FrameStreamHeader& header);

void write_raw_frame(std::ostream& out, const ImageU8& frame);

/// Directory of still images matched by a glob pattern, visited in
/// lexicographic filename order. Every frame must match the first one's size.
class SequenceReader {
 public:
  SequenceReader(const std::filesystem::path& directory, const std::string& pattern);

  std::optional<ImageU8> next();
  const std::vector<std::filesystem::path>& files() const noexcept { return files_; }

 private:
  std::vector<std::filesystem::path> files_;
  std::size_t index_ = 0;
  int width_ = 0;
  int height_ = 0;
};

std::vector<ImageU8> read_sequence(const std::filesystem::path& directory, const std::string& pattern);

}  // namespace hazedefy
