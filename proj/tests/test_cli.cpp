#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "hazedefy/cli.hpp"
#include "hazedefy/frame_io.hpp"
#include "hazedefy/synth.hpp"
#include "test_support.hpp"

using namespace hazedefy;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int status = 0;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "hazedefy");
  std::istringstream in(input);
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.status = cli::run(args, in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("hazedefy_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::vector<json> json_lines(const std::string& text) {
  std::vector<json> records;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) records.push_back(json::parse(line));
  }
  return records;
}

std::string raw_frames(const std::vector<ImageU8>& frames) {
  std::ostringstream out;
  for (const auto& f : frames) write_raw_frame(out, f);
  return out.str();
}

}  // namespace

TEST_CASE("image subcommand") {
  TempDir dir;
  std::mt19937_64 rng(1);
  const ImageU8 img = hazedefy::testing::random_u8(40, 30, rng);
  write_image_file(dir / "in.ppm", img);

  SUBCASE("PPM in, PPM out") {
    const Run r = run_cli({"image", dir / "in.ppm", dir / "out.ppm"});
    CHECK(r.status == 0);
    const ImageU8 out = read_image_file(dir / "out.ppm");
    CHECK(out.width() == 40);
    CHECK(out.height() == 30);
    CHECK(r.out.find("image 40x30 -> 40x30") != std::string::npos);
    CHECK(r.out.find("airlight=") != std::string::npos);
    CHECK(r.out.find("mean_t=") != std::string::npos);
  }

  SUBCASE("PNG output and jsonl summary") {
    const Run r = run_cli({"image", dir / "in.ppm", dir / "out.png", "--report", "jsonl"});
    CHECK(r.status == 0);
    CHECK(read_image_file(dir / "out.png").width() == 40);
    const auto rec = json_lines(r.out);
    REQUIRE(rec.size() == 1);
    CHECK(rec[0]["type"] == "image");
    CHECK(rec[0]["airlight"].size() == 3);
    CHECK(rec[0].contains("mean_transmission"));
    CHECK(rec[0].contains("wall_time"));
  }

  SUBCASE("missing input names the path and stage") {
    const Run r = run_cli({"image", dir / "missing.ppm", dir / "out.ppm"});
    CHECK(r.status != 0);
    CHECK(r.err.find("missing.ppm") != std::string::npos);
    CHECK(r.err.find("read input") != std::string::npos);
  }

  SUBCASE("zero omega reproduces the input bytes") {
    const Run r = run_cli({"image", dir / "in.ppm", dir / "out.ppm", "--gamma", "1", "--no-balance", "--omega", "0",
                           "--t-min", "0.05"});
    CHECK(r.status == 0);
    CHECK(read_image_file(dir / "out.ppm") == img);
  }

  SUBCASE("stdin to stdout") {
    const Bytes ppm = write_ppm(img);
    const Run r = run_cli({"image", "-", "-", "--gamma", "1", "--no-balance", "--omega", "0"},
                          std::string(ppm.begin(), ppm.end()));
    CHECK(r.status == 0);
    CHECK(read_ppm(Bytes(r.out.begin(), r.out.end())) == img);
    CHECK(r.err.find("image 40x30") != std::string::npos);
  }

  SUBCASE("bad flag values are rejected") {
    CHECK(run_cli({"image", dir / "in.ppm", dir / "o.ppm", "--patch", "4"}).status != 0);
    CHECK(run_cli({"image", dir / "in.ppm", dir / "o.ppm", "--resize", "12"}).status != 0);
    CHECK(run_cli({"image", dir / "in.ppm", dir / "o.ppm", "--t-min", "0"}).status != 0);
  }
}

TEST_CASE("video subcommand") {
  TempDir dir;
  std::mt19937_64 rng(2);
  std::vector<ImageU8> frames;
  for (int i = 0; i < 10; ++i) frames.push_back(hazedefy::testing::random_u8(32, 24, rng));
  const std::string stream = raw_frames(frames);

  SUBCASE("10 frames in, 10 frames out") {
    const Run r = run_cli({"video", "-", "-", "--width", "32", "--height", "24", "--no-resize", "--report", "jsonl"},
                          stream);
    CHECK(r.status == 0);
    CHECK(r.out.size() == stream.size());
    const auto rec = json_lines(r.err);
    REQUIRE(rec.size() == 1);
    CHECK(rec[0]["type"] == "stream");
    CHECK(rec[0]["frame_count"] == 10);
    CHECK(rec[0].contains("fps"));
    CHECK(rec[0]["airlight_trace"].size() == 10);
  }

  SUBCASE("default resize emits 640x480 frames") {
    write_file(dir / "in.rgb", Bytes(stream.begin(), stream.end()));
    const Run r = run_cli({"video", dir / "in.rgb", dir / "out.rgb", "--width", "32", "--height", "24"});
    CHECK(r.status == 0);
    CHECK(fs::file_size(dir / "out.rgb") == 10u * 640 * 480 * 3);
    CHECK(r.out.find("video frames=10") != std::string::npos);
  }

  SUBCASE("identical frames give identical output frames") {
    const std::string same = raw_frames(std::vector<ImageU8>(4, frames[0]));
    const Run r = run_cli({"video", "-", "-", "--width", "32", "--height", "24", "--no-resize"}, same);
    REQUIRE(r.status == 0);
    const std::size_t fb = 32 * 24 * 3;
    for (int i = 1; i < 4; ++i) CHECK(r.out.substr(i * fb, fb) == r.out.substr(0, fb));
  }

  SUBCASE("truncated stream flushes whole frames then fails") {
    const Run r = run_cli({"video", "-", "-", "--width", "32", "--height", "24", "--no-resize", "--workers", "3"},
                          stream + "abc");
    CHECK(r.status != 0);
    CHECK(r.out.size() == stream.size());
    CHECK(r.err.find("offset " + std::to_string(stream.size())) != std::string::npos);
  }

  SUBCASE("raw input without dimensions is rejected") {
    const Run r = run_cli({"video", "-", "-"}, stream);
    CHECK(r.status != 0);
    CHECK(r.err.find("--width") != std::string::npos);
  }

  SUBCASE("directory of images") {
    fs::create_directories(dir.path / "seq");
    for (int i = 0; i < 3; ++i) write_image_file(dir.path / "seq" / ("f" + std::to_string(i) + ".png"), frames[i]);
    const Run r = run_cli({"video", (dir.path / "seq").string(), "-", "--pattern", "*.png", "--no-resize"});
    CHECK(r.status == 0);
    CHECK(r.out.size() == 3u * 32 * 24 * 3);
  }
}

TEST_CASE("synth subcommand") {
  TempDir dir;
  const ImageU8 clean = float_to_u8(dark_prior_scene(64, 48, Airlight{0.8f, 0.8f, 0.8f}, 7, 9));
  write_image_file(dir / "clean.png", clean);

  SUBCASE("t = 1 leaves the image unchanged") {
    CHECK(run_cli({"synth", dir / "clean.png", dir / "hazy.ppm", "--t", "1.0"}).status == 0);
    CHECK(read_image_file(dir / "hazy.ppm") == clean);
  }

  SUBCASE("t = 0 is rejected") {
    const Run r = run_cli({"synth", dir / "clean.png", dir / "hazy.ppm", "--t", "0.0"});
    CHECK(r.status != 0);
    CHECK(r.err.find("(0,1]") != std::string::npos);
  }

  SUBCASE("ramp and depth fields") {
    CHECK(run_cli({"synth", dir / "clean.png", dir / "r.ppm", "--t-ramp", "0.3:0.9", "--transmission-out",
                   dir / "t.png"})
              .status == 0);
    const ImageU8 t = read_image_file(dir / "t.png");
    CHECK(t.at(0, 0, 0) == to_byte(0.3f));
    CHECK(t.at(63, 0, 0) == to_byte(0.9f));
    CHECK(run_cli({"synth", dir / "clean.png", dir / "d.ppm", "--depth", dir / "clean.png", "--beta", "0.5"}).status ==
          0);
    CHECK(run_cli({"synth", dir / "clean.png", dir / "x.ppm"}).status != 0);
  }

  SUBCASE("oracle airlight and transmission restore the scene") {
    REQUIRE(run_cli({"synth", dir / "clean.png", dir / "hazy.png", "--t", "0.6", "--airlight", "0.8",
                     "--transmission-out", dir / "t.png"})
                .status == 0);
    const Run r = run_cli({"image", dir / "hazy.png", dir / "out.png", "--airlight", "0.8,0.8,0.8", "--transmission",
                           dir / "t.png", "--gamma", "1", "--no-balance"});
    REQUIRE(r.status == 0);
    const ImageRGB ref = u8_to_float(clean);
    const double before = psnr(u8_to_float(read_image_file(dir / "hazy.png")), ref);
    const double after = psnr(u8_to_float(read_image_file(dir / "out.png")), ref);
    MESSAGE("hazy " << before << " dB, restored " << after << " dB");
    CHECK(after > before);
  }
}

TEST_CASE("bench subcommand") {
  const Run a = run_cli({"bench", "--frames", "6", "--seed", "3", "--report", "jsonl"});
  const Run b = run_cli({"bench", "--frames", "6", "--seed", "3", "--report", "jsonl"});
  REQUIRE(a.status == 0);
  REQUIRE(b.status == 0);
  const auto ra = json_lines(a.out);
  const auto rb = json_lines(b.out);
  REQUIRE(ra.size() == rb.size());

  std::vector<std::string> stages;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    CHECK(ra[i]["type"] == rb[i]["type"]);
    if (ra[i]["type"] == "stage") {
      stages.push_back(ra[i]["stage"]);
      CHECK(ra[i]["calls"] == rb[i]["calls"]);
    }
  }
  for (const char* s : {"acquire", "channel_min", "min_filter", "airlight", "transmission", "recover", "post",
                        "output"}) {
    CHECK(std::find(stages.begin(), stages.end(), s) != stages.end());
  }
  const json& summary = ra.front();
  CHECK(summary["type"] == "bench");
  CHECK(summary["frame_count"] == 6);
  const double expected = summary["frame_count"].get<double>() / summary["wall_time"].get<double>();
  CHECK(std::abs(summary["fps"].get<double>() - expected) <= 0.01 * expected);
  CHECK(ra.back()["type"] == "radius_check");

  const Run text = run_cli({"bench", "--frames", "2"});
  CHECK(text.status == 0);
  CHECK(text.out.find("min_filter") != std::string::npos);
}

TEST_CASE("help lists the defaults") {
  const Run r = run_cli({"image", "--help"});
  CHECK(r.status == 0);
  for (const char* s : {"0.5", "0.05", "0.8", "15", "0.001", "1.2"}) CHECK(r.out.find(s) != std::string::npos);
  const Run v = run_cli({"video", "--help"});
  CHECK(v.out.find("640x480") != std::string::npos);
  CHECK(run_cli({}).status != 0);
}

TEST_CASE("the installed binary runs") {
  TempDir dir;
  std::mt19937_64 rng(3);
  write_image_file(dir / "in.ppm", hazedefy::testing::random_u8(24, 16, rng));
  const std::string cmd = std::string(HAZEDEFY_BINARY) + " image " + (dir / "in.ppm") + " " + (dir / "out.png") +
                          " > " + (dir / "log.txt");
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(read_image_file(dir / "out.png").width() == 24);
  const std::string bad = std::string(HAZEDEFY_BINARY) + " image " + (dir / "nope.ppm") + " " + (dir / "o.ppm") +
                          " 2> " + (dir / "err.txt");
  CHECK(std::system(bad.c_str()) != 0);
}
