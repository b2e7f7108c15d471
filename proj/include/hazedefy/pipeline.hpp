#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hazedefy/estimation.hpp"
#include "hazedefy/image.hpp"
#include "hazedefy/morphology.hpp"
#include "hazedefy/recover.hpp"

namespace hazedefy {

enum class Mode { video, image };

struct FrameSize {
  int width = 640;
  int height = 480;

  friend bool operator==(const FrameSize&, const FrameSize&) = default;
};

struct DehazeParams {
  PatchRadius patch{7};
  AirlightParams airlight;
  TransmissionParams transmission;
  GuidedFilterParams guided;
  PostParams post;
  std::optional<FrameSize> resize_to = FrameSize{};
  Mode mode = Mode::video;

  // Known ground truth, bypassing estimation. The transmission map must
  // match the working resolution.
  std::optional<Airlight> airlight_override;
  std::optional<ScalarMap> transmission_override;

  void validate() const;

  static DehazeParams video_defaults();
  /// Native resolution, guided refinement and gray-world balance on.
  static DehazeParams image_defaults();
};

/// Per-frame stages in execution order. `refine` runs only in image mode.
enum class Stage : std::uint8_t {
  acquire,
  channel_min,
  min_filter,
  airlight,
  transmission,
  refine,
  recover,
  post,
  output,
};
inline constexpr std::size_t kStageCount = 9;

std::string_view stage_name(Stage stage);

struct StageTimes {
  std::array<double, kStageCount> seconds{};
  std::array<std::uint32_t, kStageCount> calls{};

  double& time(Stage s) { return seconds[static_cast<std::size_t>(s)]; }
  double time(Stage s) const { return seconds[static_cast<std::size_t>(s)]; }
  std::uint32_t count(Stage s) const { return calls[static_cast<std::size_t>(s)]; }
};

struct FrameResult {
  ImageU8 image;
  Airlight airlight;
  ScalarMap transmission;  // final map used for recovery
  StageTimes stages;
};

/// Runs the full per-frame pipeline and keeps intermediate results.
FrameResult dehaze_frame_traced(const ImageU8& frame, const DehazeParams& params);

ImageU8 dehaze_frame(const ImageU8& frame, const DehazeParams& params);

/// dehaze_frame with the mode forced to image.
ImageU8 dehaze_image(const ImageU8& frame, DehazeParams params);

struct StreamStats {
  std::size_t frame_count = 0;
  double wall_time = 0.0;
  double fps = 0.0;
  std::vector<Airlight> airlight_trace;
  std::vector<StageTimes> stage_trace;
};

using FrameSource = std::function<std::optional<ImageU8>()>;
using FrameSink = std::function<void(const ImageU8&)>;

struct StreamOptions {
  int workers = 1;
  // Declared frame size; defaults to the first frame's.
  std::optional<FrameSize> expected;
};

/// Dehazes frames independently and hands them to `sink` in input order.
/// With workers > 1 up to that many frames are in flight; results are
/// identical to workers == 1. A dimension change or source failure flushes
/// every finished frame to the sink before the exception propagates.
StreamStats process_stream(const FrameSource& source, const DehazeParams& params,
                           const FrameSink& sink, const StreamOptions& options = {});

StreamStats process_stream(std::span<const ImageU8> frames, const DehazeParams& params,
                           const FrameSink& sink, const StreamOptions& options = {});

}  // namespace hazedefy
