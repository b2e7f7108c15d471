#include "hazedefy/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <numeric>
#include <random>
#include <sstream>

#include "hazedefy/frame_io.hpp"
#include "hazedefy/pipeline.hpp"
#include "hazedefy/synth.hpp"

namespace hazedefy::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Failure tagged with the stage that produced it.
struct StageError : std::runtime_error {
  StageError(const std::string& stage, const std::string& what)
      : std::runtime_error(stage + ": " + what) {}
};

template <typename F>
auto in_stage(const std::string& stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

std::optional<FrameSize> parse_size(const std::string& text) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) return std::nullopt;
  try {
    std::size_t used = 0;
    const int w = std::stoi(text.substr(0, x), &used);
    if (used != x) return std::nullopt;
    const std::string rest = text.substr(x + 1);
    const int h = std::stoi(rest, &used);
    if (used != rest.size() || w < 1 || h < 1) return std::nullopt;
    return FrameSize{w, h};
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<Airlight> parse_airlight(const std::string& text) {
  std::vector<float> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stof(item, &used));
      if (used != item.size()) return std::nullopt;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  if (parts.size() == 1) parts.assign(3, parts[0]);
  if (parts.size() != 3) return std::nullopt;
  for (const float v : parts) {
    if (!(v > 0.0f && v <= 1.0f)) return std::nullopt;
  }
  return Airlight{parts[0], parts[1], parts[2]};
}

const CLI::Validator kSizeValidator(
    [](std::string& s) { return parse_size(s) ? std::string() : "expected WxH, e.g. 640x480"; }, "WxH");

const CLI::Validator kAirlightValidator(
    [](std::string& s) {
      return parse_airlight(s) ? std::string() : "expected r,g,b or a single value in (0,1]";
    },
    "R,G,B");

const CLI::Validator kOddWindow(
    [](std::string& s) {
      try {
        const int v = std::stoi(s);
        return v >= 1 && v % 2 == 1 ? std::string() : "patch window must be odd and >= 1";
      } catch (const std::exception&) {
        return std::string("patch window must be an integer");
      }
    },
    "ODD");

// Flags shared by the image, video and bench subcommands.
struct DehazeFlags {
  double omega = 0.5;
  double t_min = 0.05;
  double alpha = 0.8;
  double top_fraction = 0.001;
  int patch = 15;
  double gamma = 1.2;
  bool balance = false;
  CLI::Option* balance_opt = nullptr;
  int guided_radius = 40;
  double guided_eps = 1e-3;
  std::string resize = "640x480";
  bool no_resize = false;
  CLI::Option* resize_opt = nullptr;
  int workers = 1;
  std::string report = "text";

  void attach(CLI::App* app, Mode mode) {
    app->add_option("--omega", omega, "Haze retention factor in the transmission estimate")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app->add_option("--t-min", t_min, "Lower bound on transmission")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app->add_option("--alpha", alpha, "Airlight scale")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    app->add_option("--top-fraction", top_fraction, "Share of brightest dark-channel pixels averaged for airlight")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app->add_option("--patch", patch, "Dark-channel patch window side (odd)")
        ->check(kOddWindow)
        ->capture_default_str();
    app->add_option("--gamma", gamma, "Gamma for output correction")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    balance_opt = app->add_flag("--balance,!--no-balance", balance,
                                mode == Mode::image ? "Gray-world color balance (default: on)"
                                                    : "Gray-world color balance (default: off)");
    app->add_option("--guided-radius", guided_radius, "Guided filter radius (image mode)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--guided-eps", guided_eps, "Guided filter regularization (image mode)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    if (mode == Mode::image) resize.clear();
    resize_opt = app->add_option("--resize", resize,
                                 mode == Mode::image ? "Working resolution WxH (default: native)"
                                                     : "Working resolution WxH")
                     ->check(kSizeValidator);
    if (mode == Mode::video) resize_opt->capture_default_str();
    app->add_flag("--no-resize", no_resize, "Process at native resolution")->excludes(resize_opt);
    app->add_option("--workers", workers, "Frames processed concurrently (output order preserved)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--report", report, "Report format")
        ->check(CLI::IsMember({"text", "jsonl"}))
        ->capture_default_str();
  }

  DehazeParams params(Mode mode) const {
    DehazeParams p = mode == Mode::image ? DehazeParams::image_defaults() : DehazeParams::video_defaults();
    p.patch = PatchRadius((patch - 1) / 2);
    p.transmission.omega = omega;
    p.transmission.t_min = t_min;
    p.airlight.alpha = alpha;
    p.airlight.top_fraction = top_fraction;
    p.post.gamma = gamma;
    if (balance_opt && balance_opt->count() > 0) p.post.white_balance = balance;
    p.guided.radius = guided_radius;
    p.guided.epsilon = guided_eps;
    if (no_resize || resize.empty()) {
      p.resize_to.reset();
    } else {
      p.resize_to = parse_size(resize);
    }
    p.validate();
    return p;
  }

  bool jsonl() const { return report == "jsonl"; }
};

json airlight_json(const Airlight& a) { return json::array({a.r, a.g, a.b}); }

std::string airlight_text(const Airlight& a) {
  std::ostringstream s;
  s.precision(4);
  s << std::fixed << "(" << a.r << "," << a.g << "," << a.b << ")";
  return s.str();
}

double mean_of(const ScalarMap& m) {
  const auto d = m.data();
  return d.empty() ? 0.0 : std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
}

Bytes slurp(std::istream& in) {
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

ImageU8 load_image(const std::string& path, std::istream& in) {
  if (path == "-") return decode_image(slurp(in));
  return read_image_file(path);
}

void store_image(const std::string& path, const ImageU8& img, std::ostream& out) {
  if (path == "-") {
    const Bytes bytes = write_ppm(img);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    return;
  }
  write_image_file(path, img);
}

// Keeps reports off stdout when stdout carries image data.
std::ostream& report_stream(const std::string& output, std::ostream& out, std::ostream& err) {
  return output == "-" ? err : out;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
  return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

// ---------------------------------------------------------------------------

struct ImageCommand {
  std::string input;
  std::string output;
  std::string airlight;
  std::string transmission;
  DehazeFlags flags;

  void attach(CLI::App* app) {
    app->add_option("input", input, "Hazy PPM/PNG image, or - for stdin")->required();
    app->add_option("output", output, "Output path (.png or PPM), or - for stdout")->required();
    app->add_option("--airlight", airlight, "Use this airlight instead of estimating it")
        ->check(kAirlightValidator);
    app->add_option("--transmission", transmission,
                    "Use this grayscale transmission map instead of estimating it");
    flags.attach(app, Mode::image);
  }

  int run(std::istream& in, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    DehazeParams params = in_stage("parameters", [&] { return flags.params(Mode::image); });
    const ImageU8 frame = in_stage("read input", [&] { return load_image(input, in); });
    if (!airlight.empty()) params.airlight_override = parse_airlight(airlight);
    if (!transmission.empty()) {
      params.transmission_override = in_stage("read transmission", [&] {
        const ImageU8 t = read_image_file(transmission);
        ScalarMap map(t.width(), t.height());
        for (int y = 0; y < t.height(); ++y) {
          for (int x = 0; x < t.width(); ++x) {
            map(x, y) = std::max(t.at(x, y, 0) / 255.0f, static_cast<float>(params.transmission.t_min));
          }
        }
        return map;
      });
    }
    const FrameResult result = in_stage("dehaze", [&] { return dehaze_frame_traced(frame, params); });
    in_stage("write output", [&] { store_image(output, result.image, out); });
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::ostream& rep = report_stream(output, out, err);
    if (flags.jsonl()) {
      rep << json{{"type", "image"},
                  {"input_width", frame.width()},
                  {"input_height", frame.height()},
                  {"width", result.image.width()},
                  {"height", result.image.height()},
                  {"airlight", airlight_json(result.airlight)},
                  {"mean_transmission", mean_of(result.transmission)},
                  {"wall_time", elapsed}}
                 .dump()
          << "\n";
    } else {
      rep << "image " << frame.width() << "x" << frame.height() << " -> " << result.image.width() << "x"
          << result.image.height() << " airlight=" << airlight_text(result.airlight)
          << " mean_t=" << mean_of(result.transmission) << " time=" << elapsed << "s\n";
    }
    return 0;
  }
};

// ---------------------------------------------------------------------------

struct VideoCommand {
  std::string input;
  std::string output;
  int width = 0;
  int height = 0;
  std::string pattern = "*";
  DehazeFlags flags;

  void attach(CLI::App* app) {
    app->add_option("input", input, "Raw RGB24 stream, - for stdin, or a directory of PPM/PNG frames")
        ->required();
    app->add_option("output", output, "Raw RGB24 output stream, or - for stdout")->required();
    app->add_option("--width", width, "Raw stream frame width")->check(CLI::PositiveNumber);
    app->add_option("--height", height, "Raw stream frame height")->check(CLI::PositiveNumber);
    app->add_option("--pattern", pattern, "Filename glob for directory input")->capture_default_str();
    flags.attach(app, Mode::video);
  }

  int run(std::istream& in, std::ostream& out, std::ostream& err) {
    const DehazeParams params = in_stage("parameters", [&] { return flags.params(Mode::video); });

    std::ifstream file_in;
    std::optional<RawStreamReader> raw;
    std::optional<SequenceReader> sequence;
    in_stage("open input", [&] {
      if (input != "-" && fs::is_directory(input)) {
        sequence.emplace(input, pattern);
        return;
      }
      if (width < 1 || height < 1) throw std::invalid_argument("raw stream input requires --width and --height");
      std::istream* src = &in;
      if (input != "-") {
        file_in.open(input, std::ios::binary);
        if (!file_in) throw IoError(IoErrc::open_failed, "cannot open " + input);
        src = &file_in;
      }
      raw.emplace(*src, FrameStreamHeader{width, height, std::nullopt});
    });

    std::ofstream file_out;
    std::ostream* sink_stream = &out;
    in_stage("open output", [&] {
      if (output == "-") return;
      file_out.open(output, std::ios::binary | std::ios::trunc);
      if (!file_out) throw IoError(IoErrc::open_failed, "cannot open " + output + " for writing");
      sink_stream = &file_out;
    });

    FrameSource source = [&]() -> std::optional<ImageU8> {
      return in_stage("read input", [&] { return raw ? raw->next() : sequence->next(); });
    };
    FrameSink sink = [&](const ImageU8& frame) {
      in_stage("write output", [&] { write_raw_frame(*sink_stream, frame); });
    };

    StreamOptions options;
    options.workers = flags.workers;
    const StreamStats stats = in_stage("dehaze", [&] { return process_stream(source, params, sink, options); });
    sink_stream->flush();

    std::ostream& rep = report_stream(output, out, err);
    if (flags.jsonl()) {
      json trace = json::array();
      for (const auto& a : stats.airlight_trace) trace.push_back(airlight_json(a));
      rep << json{{"type", "stream"},
                  {"frame_count", stats.frame_count},
                  {"wall_time", stats.wall_time},
                  {"fps", stats.fps},
                  {"workers", flags.workers},
                  {"airlight_trace", trace}}
                 .dump()
          << "\n";
    } else {
      rep << "video frames=" << stats.frame_count << " wall=" << stats.wall_time << "s fps=" << stats.fps;
      if (!stats.airlight_trace.empty()) {
        rep << " airlight[0]=" << airlight_text(stats.airlight_trace.front())
            << " airlight[last]=" << airlight_text(stats.airlight_trace.back());
      }
      rep << "\n";
    }
    return 0;
  }
};

// ---------------------------------------------------------------------------

struct SynthCommand {
  std::string input;
  std::string output;
  std::optional<double> t;
  std::string ramp;
  std::string ramp_axis = "horizontal";
  std::string depth;
  double beta = 1.0;
  std::string airlight = "0.8";
  std::string transmission_out;
  std::string report = "text";

  void attach(CLI::App* app) {
    app->add_option("input", input, "Clean PPM/PNG image, or - for stdin")->required();
    app->add_option("output", output, "Hazy output image, or - for stdout")->required();
    auto* t_opt = app->add_option("--t", t, "Constant transmission in (0,1]");
    auto* ramp_opt = app->add_option("--t-ramp", ramp, "Transmission ramp FROM:TO, both in (0,1]");
    app->add_option("--ramp-axis", ramp_axis, "Ramp direction")
        ->check(CLI::IsMember({"horizontal", "vertical"}))
        ->capture_default_str();
    auto* depth_opt = app->add_option("--depth", depth, "Grayscale depth image; t = exp(-beta * depth/255)");
    app->add_option("--beta", beta, "Attenuation per unit depth")->check(CLI::NonNegativeNumber)->capture_default_str();
    t_opt->excludes(ramp_opt)->excludes(depth_opt);
    ramp_opt->excludes(depth_opt);
    app->add_option("--airlight", airlight, "Atmospheric light r,g,b or a single value")
        ->check(kAirlightValidator)
        ->capture_default_str();
    app->add_option("--transmission-out", transmission_out, "Write the true transmission as a grayscale PNG");
    app->add_option("--report", report, "Report format")
        ->check(CLI::IsMember({"text", "jsonl"}))
        ->capture_default_str();
  }

  static float checked_t(double v, const char* what) {
    if (!(v > 0.0 && v <= 1.0)) {
      throw std::invalid_argument(std::string(what) + " must be in (0,1], got " + std::to_string(v));
    }
    return static_cast<float>(v);
  }

  int run(std::istream& in, std::ostream& out, std::ostream& err) {
    const ImageU8 clean_u8 = in_stage("read input", [&] { return load_image(input, in); });
    const int w = clean_u8.width();
    const int h = clean_u8.height();

    HazeSpec spec;
    spec.airlight = *parse_airlight(airlight);
    in_stage("haze spec", [&] {
      if (t) {
        spec.transmission = checked_t(*t, "--t");
      } else if (!ramp.empty()) {
        const auto colon = ramp.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("--t-ramp expects FROM:TO");
        const float from = checked_t(std::stod(ramp.substr(0, colon)), "ramp start");
        const float to = checked_t(std::stod(ramp.substr(colon + 1)), "ramp end");
        spec.transmission = ramp_transmission(w, h, from, to,
                                              ramp_axis == "vertical" ? RampAxis::vertical : RampAxis::horizontal);
      } else if (!depth.empty()) {
        const ImageU8 d = read_image_file(depth);
        if (d.width() != w || d.height() != h) throw std::invalid_argument("depth map size differs from image");
        ScalarMap depth_map(w, h);
        for (int y = 0; y < h; ++y) {
          for (int x = 0; x < w; ++x) depth_map(x, y) = d.at(x, y, 0) / 255.0f;
        }
        spec.transmission = depth_transmission(depth_map, beta);
      } else {
        throw std::invalid_argument("one of --t, --t-ramp or --depth is required");
      }
    });

    const ImageU8 hazy = in_stage("compose", [&] { return float_to_u8(compose_haze(u8_to_float(clean_u8), spec)); });
    in_stage("write output", [&] { store_image(output, hazy, out); });
    const ScalarMap truth = transmission_map(spec, w, h);
    if (!transmission_out.empty()) {
      in_stage("write transmission", [&] { write_file(transmission_out, write_png_gray(truth)); });
    }

    std::ostream& rep = report_stream(output, out, err);
    if (report == "jsonl") {
      rep << json{{"type", "synth"},
                  {"width", w},
                  {"height", h},
                  {"airlight", airlight_json(spec.airlight)},
                  {"mean_transmission", mean_of(truth)}}
                 .dump()
          << "\n";
    } else {
      rep << "synth " << w << "x" << h << " airlight=" << airlight_text(spec.airlight)
          << " mean_t=" << mean_of(truth) << "\n";
    }
    return 0;
  }
};

// ---------------------------------------------------------------------------

struct BenchCommand {
  int frames = 300;
  std::uint64_t seed = 1;
  std::string source_size = "640x480";
  int distinct = 8;
  DehazeFlags flags;

  void attach(CLI::App* app) {
    app->add_option("--frames", frames, "Frames to process")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--seed", seed, "Frame generator seed")->capture_default_str();
    app->add_option("--source-size", source_size, "Generated frame size WxH")
        ->check(kSizeValidator)
        ->capture_default_str();
    app->add_option("--distinct", distinct, "Distinct generated frames, cycled")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    flags.attach(app, Mode::video);
  }

  // Synthetic hazy frames: random dark-prior scenes under random uniform haze
  // with mild sensor noise.
  std::vector<ImageU8> make_frames(FrameSize size) const {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> t_dist(0.3f, 0.9f);
    std::uniform_real_distribution<float> a_dist(0.6f, 1.0f);
    std::vector<ImageU8> out;
    for (int i = 0; i < std::min(distinct, frames); ++i) {
      const float a = a_dist(rng);
      const Airlight sky{a, a, a};
      HazeSpec spec{sky, t_dist(rng)};
      const ImageRGB scene = dark_prior_scene(size.width, size.height, sky, 7, rng());
      out.push_back(float_to_u8(add_gaussian_noise(compose_haze(scene, spec), 2.0 / 255.0, rng())));
    }
    return out;
  }

  // Best-of-N min_filter time on a 640x480 map.
  static double min_filter_ms(const ScalarMap& map, int radius, int reps) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < reps; ++i) {
      const auto t0 = std::chrono::steady_clock::now();
      const ScalarMap out = min_filter(map, PatchRadius(radius));
      const auto t1 = std::chrono::steady_clock::now();
      if (out.empty()) return 0.0;
      best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
  }

  int run(std::ostream& out) {
    const DehazeParams params = in_stage("parameters", [&] { return flags.params(Mode::video); });
    const std::vector<ImageU8> pool = in_stage("generate", [&] { return make_frames(*parse_size(source_size)); });

    int index = 0;
    FrameSource source = [&]() -> std::optional<ImageU8> {
      if (index == frames) return std::nullopt;
      return pool[static_cast<std::size_t>(index++) % pool.size()];
    };
    StreamOptions options;
    options.workers = flags.workers;
    const StreamStats stats =
        in_stage("dehaze", [&] { return process_stream(source, params, [](const ImageU8&) {}, options); });

    ScalarMap probe(640, 480);
    std::mt19937 rng(static_cast<std::uint32_t>(seed));
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    for (float& v : probe.data()) v = u(rng);
    const double small_ms = min_filter_ms(probe, 1, 15);
    const double large_ms = min_filter_ms(probe, 15, 15);
    const double ratio = std::max(small_ms, large_ms) / std::max(std::min(small_ms, large_ms), 1e-9);

    if (flags.jsonl()) {
      out << json{{"type", "bench"},
                  {"frame_count", stats.frame_count},
                  {"wall_time", stats.wall_time},
                  {"fps", stats.fps},
                  {"workers", flags.workers},
                  {"seed", seed}}
                 .dump()
          << "\n";
    } else {
      out << "bench frames=" << stats.frame_count << " wall=" << stats.wall_time << "s fps=" << stats.fps
          << " workers=" << flags.workers << "\n";
      out << "stage            calls    mean_ms     p95_ms\n";
    }
    for (std::size_t s = 0; s < kStageCount; ++s) {
      const auto stage = static_cast<Stage>(s);
      std::vector<double> ms;
      std::uint64_t calls = 0;
      for (const auto& st : stats.stage_trace) {
        calls += st.count(stage);
        if (st.count(stage) > 0) ms.push_back(st.time(stage) * 1e3);
      }
      const double mean = ms.empty() ? 0.0 : std::accumulate(ms.begin(), ms.end(), 0.0) / ms.size();
      const double p95 = percentile(ms, 0.95);
      if (flags.jsonl()) {
        out << json{{"type", "stage"},
                    {"stage", stage_name(stage)},
                    {"calls", calls},
                    {"mean_ms", mean},
                    {"p95_ms", p95}}
                   .dump()
            << "\n";
      } else {
        char line[96];
        std::snprintf(line, sizeof line, "%-14s %7llu %10.3f %10.3f\n", std::string(stage_name(stage)).c_str(),
                      static_cast<unsigned long long>(calls), mean, p95);
        out << line;
      }
    }
    if (flags.jsonl()) {
      out << json{{"type", "radius_check"},
                  {"radius_small", 1},
                  {"radius_large", 15},
                  {"small_ms", small_ms},
                  {"large_ms", large_ms},
                  {"ratio", ratio}}
                 .dump()
          << "\n";
    } else {
      out << "min_filter 640x480 radius 1: " << small_ms << " ms, radius 15: " << large_ms
          << " ms, ratio " << ratio << "\n";
    }
    return 0;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dark-channel dehazing for images and raw video streams", "hazedefy"};
  app.require_subcommand(1);

  ImageCommand image;
  VideoCommand video;
  SynthCommand synth;
  BenchCommand bench;
  auto* image_cmd = app.add_subcommand("image", "Dehaze one image with guided-filter refinement");
  auto* video_cmd = app.add_subcommand("video", "Dehaze a raw RGB24 stream or image sequence frame by frame");
  auto* synth_cmd = app.add_subcommand("synth", "Apply synthetic haze to a clean image");
  auto* bench_cmd = app.add_subcommand("bench", "Measure video-mode throughput on generated frames");
  image.attach(image_cmd);
  video.attach(video_cmd);
  synth.attach(synth_cmd);
  bench.attach(bench_cmd);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (*image_cmd) return image.run(in, out, err);
    if (*video_cmd) return video.run(in, out, err);
    if (*synth_cmd) return synth.run(in, out, err);
    if (*bench_cmd) return bench.run(out);
  } catch (const std::exception& e) {
    err << "hazedefy " << name << ": " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace hazedefy::cli
