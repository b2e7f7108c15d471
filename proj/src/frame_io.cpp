#include "hazedefy/frame_io.hpp"

#include <fnmatch.h>
#include <png.h>

#include <algorithm>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace hazedefy {

const char* to_string(IoErrc code) {
  switch (code) {
    case IoErrc::bad_magic: return "bad_magic";
    case IoErrc::bad_header: return "bad_header";
    case IoErrc::bad_maxval: return "bad_maxval";
    case IoErrc::truncated: return "truncated";
    case IoErrc::unsupported_bit_depth: return "unsupported_bit_depth";
    case IoErrc::unsupported_color_type: return "unsupported_color_type";
    case IoErrc::corrupt_png: return "corrupt_png";
    case IoErrc::stream_truncated: return "stream_truncated";
    case IoErrc::dimension_mismatch: return "dimension_mismatch";
    case IoErrc::undecodable: return "undecodable";
    case IoErrc::open_failed: return "open_failed";
    case IoErrc::write_failed: return "write_failed";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// PPM

namespace {

class PpmHeaderParser {
 public:
  explicit PpmHeaderParser(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  // Unsigned decimal after optional whitespace and '#' comments.
  long field(const char* name) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size()) {
      throw IoError(IoErrc::truncated, std::string("PPM: header ends before ") + name);
    }
    if (!is_digit(bytes_[pos_])) throw IoError(IoErrc::bad_header, std::string("PPM: invalid ") + name);
    long value = 0;
    while (pos_ < bytes_.size() && is_digit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_++] - '0');
      if (value > (1L << 24)) throw IoError(IoErrc::bad_header, std::string("PPM: ") + name + " too large");
    }
    return value;
  }

  // The single whitespace byte separating maxval from the raster.
  void payload_separator() {
    if (pos_ >= bytes_.size()) throw IoError(IoErrc::truncated, "PPM: missing raster");
    if (!is_space(bytes_[pos_])) throw IoError(IoErrc::bad_header, "PPM: maxval not followed by whitespace");
    ++pos_;
  }

  std::size_t position() const noexcept { return pos_; }
  void advance(std::size_t n) noexcept { pos_ += n; }

 private:
  static bool is_digit(std::uint8_t c) { return c >= '0' && c <= '9'; }
  static bool is_space(std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
  }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (is_space(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

ImageU8 read_ppm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
    throw IoError(IoErrc::bad_magic, "PPM: expected magic P6");
  }
  PpmHeaderParser parser(bytes);
  parser.advance(2);
  const long width = parser.field("width");
  const long height = parser.field("height");
  const long maxval = parser.field("maxval");
  if (width < 1 || height < 1) throw IoError(IoErrc::bad_header, "PPM: zero dimension");
  if (maxval != 255) {
    throw IoError(IoErrc::bad_maxval, "PPM: maxval " + std::to_string(maxval) + " unsupported, need 255");
  }
  parser.payload_separator();

  const std::size_t need = 3 * static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  const std::size_t have = bytes.size() - parser.position();
  if (have < need) {
    throw IoError(IoErrc::truncated, "PPM: raster has " + std::to_string(have) + " of " +
                                         std::to_string(need) + " bytes");
  }
  const auto raster = bytes.subspan(parser.position(), need);
  return ImageU8(static_cast<int>(width), static_cast<int>(height), Bytes(raster.begin(), raster.end()));
}

Bytes write_ppm(const ImageU8& img) {
  const std::string header =
      "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  Bytes out(header.begin(), header.end());
  out.insert(out.end(), img.data().begin(), img.data().end());
  return out;
}

// ---------------------------------------------------------------------------
// PNG
//
// libpng reports errors by longjmp. Everything with a destructor is declared
// before setjmp in the same frame so the jump never skips cleanup.

namespace {

struct PngContext {
  std::span<const std::uint8_t> input;
  std::size_t pos = 0;
  Bytes* output = nullptr;
  char message[256] = {};
};

void png_on_error(png_structp png, png_const_charp msg) {
  auto* ctx = static_cast<PngContext*>(png_get_error_ptr(png));
  std::snprintf(ctx->message, sizeof ctx->message, "%s", msg);
  png_longjmp(png, 1);
}

void png_on_warning(png_structp, png_const_charp) {}

void png_read_bytes(png_structp png, png_bytep out, png_size_t len) {
  auto* ctx = static_cast<PngContext*>(png_get_io_ptr(png));
  if (ctx->input.size() - ctx->pos < len) png_error(png, "unexpected end of PNG data");
  std::memcpy(out, ctx->input.data() + ctx->pos, len);
  ctx->pos += len;
}

void png_write_bytes(png_structp png, png_bytep data, png_size_t len) {
  auto* ctx = static_cast<PngContext*>(png_get_io_ptr(png));
  ctx->output->insert(ctx->output->end(), data, data + len);
}

void png_flush_noop(png_structp) {}

struct PngReadResult {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int color_type = 0;
  bool unsupported = false;
};

// Returns false on a libpng error; ctx.message holds the reason.
bool decode_png(PngContext& ctx, Bytes& pixels, std::vector<png_bytep>& rows, PngReadResult& info) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &ctx, png_on_error, png_on_warning);
  if (!png) return false;
  png_infop pinfo = png_create_info_struct(png);
  if (!pinfo) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &pinfo, nullptr);
    return false;
  }
  png_set_read_fn(png, &ctx, png_read_bytes);
  png_read_info(png, pinfo);
  png_get_IHDR(png, pinfo, &info.width, &info.height, &info.bit_depth, &info.color_type, nullptr,
               nullptr, nullptr);

  const bool depth_ok = info.bit_depth == 8;
  const bool type_ok = info.color_type == PNG_COLOR_TYPE_GRAY || info.color_type == PNG_COLOR_TYPE_RGB ||
                       info.color_type == PNG_COLOR_TYPE_GRAY_ALPHA ||
                       info.color_type == PNG_COLOR_TYPE_RGB_ALPHA;
  if (!depth_ok || !type_ok) {
    info.unsupported = true;
    png_destroy_read_struct(&png, &pinfo, nullptr);
    return true;
  }
  if (info.color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (!(info.color_type & PNG_COLOR_MASK_COLOR)) png_set_gray_to_rgb(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, pinfo);

  const std::size_t stride = 3 * static_cast<std::size_t>(info.width);
  if (png_get_rowbytes(png, pinfo) != stride) png_error(png, "unexpected row size after transforms");
  pixels.resize(stride * info.height);
  rows.resize(info.height);
  for (png_uint_32 y = 0; y < info.height; ++y) rows[y] = pixels.data() + y * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &pinfo, nullptr);
  return true;
}

bool encode_png(PngContext& ctx, std::span<const std::uint8_t> pixels, int width, int height,
                int color_type, int channels, std::vector<png_bytep>& rows) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &ctx, png_on_error, png_on_warning);
  if (!png) return false;
  png_infop pinfo = png_create_info_struct(png);
  if (!pinfo) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &pinfo);
    return false;
  }
  png_set_write_fn(png, &ctx, png_write_bytes, png_flush_noop);
  png_set_IHDR(png, pinfo, width, height, 8, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 6);
  png_write_info(png, pinfo);
  const std::size_t stride = static_cast<std::size_t>(channels) * width;
  rows.resize(height);
  for (int y = 0; y < height; ++y) {
    rows[y] = const_cast<png_bytep>(pixels.data() + y * stride);
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &pinfo);
  return true;
}

Bytes encode_or_throw(std::span<const std::uint8_t> pixels, int width, int height, int color_type,
                      int channels) {
  if (width < 1 || height < 1) throw std::invalid_argument("write_png: empty image");
  Bytes out;
  PngContext ctx;
  ctx.output = &out;
  std::vector<png_bytep> rows;
  if (!encode_png(ctx, pixels, width, height, color_type, channels, rows)) {
    throw IoError(IoErrc::write_failed, std::string("PNG encode failed: ") + ctx.message);
  }
  return out;
}

bool is_png(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0;
}

}  // namespace

ImageU8 read_png(std::span<const std::uint8_t> bytes) {
  if (!is_png(bytes)) throw IoError(IoErrc::bad_magic, "PNG: bad signature");
  PngContext ctx;
  ctx.input = bytes;
  Bytes pixels;
  std::vector<png_bytep> rows;
  PngReadResult info;
  if (!decode_png(ctx, pixels, rows, info)) {
    throw IoError(IoErrc::corrupt_png, std::string("PNG: ") + ctx.message);
  }
  if (info.unsupported) {
    if (info.color_type != PNG_COLOR_TYPE_PALETTE && info.bit_depth != 8) {
      throw IoError(IoErrc::unsupported_bit_depth,
                    "PNG: unsupported bit depth " + std::to_string(info.bit_depth));
    }
    throw IoError(IoErrc::unsupported_color_type,
                  "PNG: unsupported color type " + std::to_string(info.color_type));
  }
  return ImageU8(static_cast<int>(info.width), static_cast<int>(info.height), std::move(pixels));
}

Bytes write_png(const ImageU8& img) {
  return encode_or_throw(img.data(), img.width(), img.height(), PNG_COLOR_TYPE_RGB, 3);
}

Bytes write_png_gray(const ScalarMap& map) {
  Bytes gray(map.size());
  std::transform(map.data().begin(), map.data().end(), gray.begin(), to_byte);
  return encode_or_throw(gray, map.width(), map.height(), PNG_COLOR_TYPE_GRAY, 1);
}

ImageU8 decode_image(std::span<const std::uint8_t> bytes) {
  if (is_png(bytes)) return read_png(bytes);
  return read_ppm(bytes);
}

// ---------------------------------------------------------------------------
// Files

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(IoErrc::open_failed, "cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(IoErrc::open_failed, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(IoErrc::write_failed, "write failed: " + path.string());
}

ImageU8 read_image_file(const std::filesystem::path& path) {
  const Bytes bytes = read_file(path);
  try {
    return decode_image(bytes);
  } catch (const IoError& e) {
    throw IoError(e.code(), path.string() + ": " + e.what());
  }
}

void write_image_file(const std::filesystem::path& path, const ImageU8& img) {
  const bool png = path.extension() == ".png" || path.extension() == ".PNG";
  write_file(path, png ? write_png(img) : write_ppm(img));
}

// ---------------------------------------------------------------------------
// Raw RGB24 streams

void FrameStreamHeader::validate() const {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("raw stream needs width and height >= 1");
  }
}

RawStreamReader::RawStreamReader(std::istream& in, FrameStreamHeader header)
    : in_(&in), header_(header) {
  header_.validate();
}

std::optional<ImageU8> RawStreamReader::next() {
  if (header_.frame_count && frames_ == *header_.frame_count) return std::nullopt;
  const std::size_t need = header_.frame_bytes();
  Bytes buf(need);
  in_->read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(need));
  const auto got = static_cast<std::size_t>(in_->gcount());
  if (got == 0 && !header_.frame_count) return std::nullopt;
  if (got < need) {
    const std::size_t offset = consumed_;
    consumed_ += got;
    throw IoError(IoErrc::stream_truncated,
                  "raw stream truncated at byte offset " + std::to_string(offset) + ": frame " +
                      std::to_string(frames_) + " has " + std::to_string(got) + " of " +
                      std::to_string(need) + " bytes",
                  offset);
  }
  consumed_ += need;
  ++frames_;
  return ImageU8(header_.width, header_.height, std::move(buf));
}

std::vector<ImageU8> read_raw_stream(std::istream& in, const FrameStreamHeader& header) {
  RawStreamReader reader(in, header);
  std::vector<ImageU8> frames;
  while (auto frame = reader.next()) frames.push_back(std::move(*frame));
  return frames;
}

void write_raw_frame(std::ostream& out, const ImageU8& frame) {
  out.write(reinterpret_cast<const char*>(frame.data().data()),
            static_cast<std::streamsize>(frame.data().size()));
  if (!out) throw IoError(IoErrc::write_failed, "raw frame write failed");
}

// ---------------------------------------------------------------------------
// Image sequences

SequenceReader::SequenceReader(const std::filesystem::path& directory, const std::string& pattern) {
  std::error_code ec;
  std::filesystem::directory_iterator it(directory, ec);
  if (ec) throw IoError(IoErrc::open_failed, "cannot read directory " + directory.string());
  for (const auto& entry : it) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (fnmatch(pattern.c_str(), name.c_str(), 0) == 0) files_.push_back(entry.path());
  }
  std::sort(files_.begin(), files_.end(),
            [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });
}

std::optional<ImageU8> SequenceReader::next() {
  if (index_ == files_.size()) return std::nullopt;
  const auto& path = files_[index_];
  ImageU8 frame;
  try {
    frame = read_image_file(path);
  } catch (const IoError& e) {
    throw IoError(IoErrc::undecodable, std::string("undecodable frame ") + e.what());
  }
  if (index_ == 0) {
    width_ = frame.width();
    height_ = frame.height();
  } else if (frame.width() != width_ || frame.height() != height_) {
    throw IoError(IoErrc::dimension_mismatch,
                  path.string() + " is " + std::to_string(frame.width()) + "x" +
                      std::to_string(frame.height()) + ", sequence is " + std::to_string(width_) +
                      "x" + std::to_string(height_));
  }
  ++index_;
  return frame;
}

std::vector<ImageU8> read_sequence(const std::filesystem::path& directory, const std::string& pattern) {
  SequenceReader reader(directory, pattern);
  std::vector<ImageU8> frames;
  while (auto frame = reader.next()) frames.push_back(std::move(*frame));
  return frames;
}

}  // namespace hazedefy
