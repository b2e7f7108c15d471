#include "hazedefy/pipeline.hpp"

#include <chrono>
#include <deque>
#include <future>
#include <stdexcept>
#include <string>

#include "hazedefy/error.hpp"

namespace hazedefy {

namespace {

using Clock = std::chrono::steady_clock;

class StageClock {
 public:
  explicit StageClock(StageTimes& times) : times_(times), last_(Clock::now()) {}

  void lap(Stage stage) {
    const auto now = Clock::now();
    const auto i = static_cast<std::size_t>(stage);
    times_.seconds[i] += std::chrono::duration<double>(now - last_).count();
    times_.calls[i] += 1;
    last_ = now;
  }

 private:
  StageTimes& times_;
  Clock::time_point last_;
};

std::string dims(int w, int h) { return std::to_string(w) + "x" + std::to_string(h); }

}  // namespace

void DehazeParams::validate() const {
  airlight.validate();
  transmission.validate();
  post.validate();
  if (mode == Mode::image) guided.validate();
  if (resize_to && (resize_to->width < 1 || resize_to->height < 1)) {
    throw std::invalid_argument("resize target must be at least 1x1");
  }
  if (airlight_override && !(airlight_override->max_component() > 0.0f)) {
    throw std::invalid_argument("airlight override must have a positive component");
  }
}

DehazeParams DehazeParams::video_defaults() { return DehazeParams{}; }

DehazeParams DehazeParams::image_defaults() {
  DehazeParams p;
  p.mode = Mode::image;
  p.resize_to.reset();
  p.post.white_balance = true;
  return p;
}

std::string_view stage_name(Stage stage) {
  switch (stage) {
    case Stage::acquire: return "acquire";
    case Stage::channel_min: return "channel_min";
    case Stage::min_filter: return "min_filter";
    case Stage::airlight: return "airlight";
    case Stage::transmission: return "transmission";
    case Stage::refine: return "refine";
    case Stage::recover: return "recover";
    case Stage::post: return "post";
    case Stage::output: return "output";
  }
  return "unknown";
}

FrameResult dehaze_frame_traced(const ImageU8& frame, const DehazeParams& params) {
  params.validate();
  if (frame.empty()) throw std::invalid_argument("dehaze_frame: empty frame");

  FrameResult result;
  StageClock clock(result.stages);

  ImageRGB img = u8_to_float(frame);
  if (params.resize_to) img = resize_bilinear(img, params.resize_to->width, params.resize_to->height);
  clock.lap(Stage::acquire);

  ScalarMap minimum = channel_min(img);
  clock.lap(Stage::channel_min);

  const ScalarMap dark = min_filter(minimum, params.patch);
  clock.lap(Stage::min_filter);

  result.airlight = params.airlight_override ? *params.airlight_override
                                             : estimate_airlight(img, dark, params.airlight);
  clock.lap(Stage::airlight);

  if (params.transmission_override) {
    const ScalarMap& t = *params.transmission_override;
    if (t.width() != img.width() || t.height() != img.height()) {
      throw std::invalid_argument("transmission override is " + dims(t.width(), t.height()) +
                                  ", working frame is " + dims(img.width(), img.height()));
    }
    result.transmission = t;
  } else {
    result.transmission = estimate_transmission(std::move(minimum), result.airlight, params.transmission);
  }
  clock.lap(Stage::transmission);

  if (params.mode == Mode::image && !params.transmission_override) {
    ScalarMap refined = guided_filter(result.transmission, to_grayscale(img), params.guided);
    const float t_min = static_cast<float>(params.transmission.t_min);
    for (float& v : refined.data()) v = std::max(v, t_min);
    result.transmission = std::move(refined);
    clock.lap(Stage::refine);
  }

  img = recover_radiance(img, result.airlight, result.transmission);
  clock.lap(Stage::recover);

  img = gamma_correct(img, params.post.gamma);
  if (params.post.white_balance) img = gray_world_balance(img);
  clock.lap(Stage::post);

  result.image = float_to_u8(img);
  clock.lap(Stage::output);
  return result;
}

ImageU8 dehaze_frame(const ImageU8& frame, const DehazeParams& params) {
  return dehaze_frame_traced(frame, params).image;
}

ImageU8 dehaze_image(const ImageU8& frame, DehazeParams params) {
  params.mode = Mode::image;
  return dehaze_frame(frame, params);
}

StreamStats process_stream(const FrameSource& source, const DehazeParams& params,
                           const FrameSink& sink, const StreamOptions& options) {
  params.validate();
  const std::size_t window = options.workers > 1 ? static_cast<std::size_t>(options.workers) : 1;
  std::optional<FrameSize> expected = options.expected;

  StreamStats stats;
  std::deque<std::future<FrameResult>> pending;
  const auto start = Clock::now();

  auto emit = [&](FrameResult result) {
    sink(result.image);
    stats.airlight_trace.push_back(result.airlight);
    stats.stage_trace.push_back(result.stages);
    ++stats.frame_count;
  };
  auto drain = [&] {
    while (!pending.empty()) {
      auto next = std::move(pending.front());
      pending.pop_front();
      emit(next.get());
    }
  };

  for (std::size_t index = 0;; ++index) {
    std::optional<ImageU8> frame;
    try {
      frame = source();
    } catch (...) {
      drain();
      throw;
    }
    if (!frame) break;

    const FrameSize size{frame->width(), frame->height()};
    if (!expected) expected = size;
    if (size != *expected) {
      drain();
      throw IoError(IoErrc::dimension_mismatch,
                    "frame " + std::to_string(index) + " is " + dims(size.width, size.height) +
                        ", stream is " + dims(expected->width, expected->height));
    }

    if (window == 1) {
      emit(dehaze_frame_traced(*frame, params));
      continue;
    }
    pending.push_back(std::async(std::launch::async, [&params, f = std::move(*frame)] {
      return dehaze_frame_traced(f, params);
    }));
    if (pending.size() >= window) {
      auto next = std::move(pending.front());
      pending.pop_front();
      emit(next.get());
    }
  }
  drain();

  stats.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
  stats.fps = stats.frame_count > 0 && stats.wall_time > 0.0
                  ? static_cast<double>(stats.frame_count) / stats.wall_time
                  : 0.0;
  return stats;
}

StreamStats process_stream(std::span<const ImageU8> frames, const DehazeParams& params,
                           const FrameSink& sink, const StreamOptions& options) {
  std::size_t next = 0;
  FrameSource source = [&]() -> std::optional<ImageU8> {
    if (next == frames.size()) return std::nullopt;
    return frames[next++];
  };
  return process_stream(source, params, sink, options);
}

}  // namespace hazedefy
