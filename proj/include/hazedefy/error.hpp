#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hazedefy {

/// Failure categories for image/stream decoding and file handling.
enum class IoErrc {
  bad_magic,
  bad_header,
  bad_maxval,
  truncated,
  unsupported_bit_depth,
  unsupported_color_type,
  corrupt_png,
  stream_truncated,
  dimension_mismatch,
  undecodable,
  open_failed,
  write_failed,
};

const char* to_string(IoErrc code);

class IoError : public std::runtime_error {
 public:
  IoError(IoErrc code, const std::string& what, std::size_t offset = 0)
      : std::runtime_error(what), code_(code), offset_(offset) {}

  IoErrc code() const noexcept { return code_; }
  // Byte offset of the failure, meaningful for stream_truncated.
  std::size_t offset() const noexcept { return offset_; }

 private:
  IoErrc code_;
  std::size_t offset_;
};

}  // namespace hazedefy
