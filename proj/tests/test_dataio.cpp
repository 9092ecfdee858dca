#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ggr/dataio.hpp"
#include "ggr/quadrature.hpp"
#include "ggr/rng.hpp"
#include "ggr/sampling.hpp"

using namespace ggr;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("ggr_dataio_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
}

}  // namespace

TEST_CASE("format names parse") {
  CHECK(parse_format("csv") == FileFormat::csv);
  CHECK(parse_format("pgm") == FileFormat::pgm);
  CHECK(parse_format("raw-f32") == FileFormat::raw_f32);
  CHECK_THROWS(parse_format("tiff"));
}

TEST_CASE("CSV sample loading with comments and the domain tag") {
  TempDir t;
  std::string p = t.file("a.csv");
  write_file(p, "# synthetic run\n# domain: intensity\n1.0\n2.5\n0.0\n");
  SampleSet s = load_csv_samples(p);
  REQUIRE(s.values.size() == 3);
  CHECK(s.values[0] == 1.0);
  CHECK(s.values[1] == 2.5);
  CHECK(s.values[2] == 0.0);
  CHECK(s.domain == SampleDomain::intensity);

  write_file(p, "0.5, 1.5,2.5\n3.5\n");
  SampleSet c = load_csv_samples(p);
  CHECK(c.values == std::vector<double>{0.5, 1.5, 2.5, 3.5});
  CHECK(c.domain == SampleDomain::amplitude);  // default without a tag
}

TEST_CASE("CSV loading reports bad rows with their location") {
  TempDir t;
  std::string p = t.file("bad.csv");
  write_file(p, "1.0\nbogus\n2.0\n");
  try {
    load_csv_samples(p);
    FAIL("expected a parse error");
  } catch (const std::exception& e) {
    std::string msg = e.what();
    CHECK(msg.find(":2") != std::string::npos);  // line number surfaced
  }
  write_file(p, "1.0\n-3.0\n");
  CHECK_THROWS(load_csv_samples(p));
  CHECK_THROWS(load_csv_samples(t.file("missing.csv")));
}

TEST_CASE("CSV write then read round-trips values and domain") {
  TempDir t;
  SampleSet s;
  s.values = {0.25, 1.0 / 3.0, 7.125};
  s.domain = SampleDomain::intensity;
  std::string p = t.file("rt.csv");
  write_csv_samples(s, p);
  SampleSet r = load_csv_samples(p);
  CHECK(r.domain == SampleDomain::intensity);
  REQUIRE(r.values.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(r.values[i] == s.values[i]);
}

TEST_CASE("PGM 8-bit and 16-bit loading") {
  TempDir t;
  std::string p = t.file("img.pgm");
  std::string body = "P5\n# a comment\n2 2\n255\n";
  body += std::string("\x00\x80\xff\x40", 4);
  write_file(p, body);
  RasterImage img = load_pgm(p);
  CHECK(img.width == 2);
  CHECK(img.height == 2);
  CHECK(img.at(0, 0) == 0.0);
  CHECK(img.at(0, 1) == 128.0);
  CHECK(img.at(1, 0) == 255.0);
  CHECK(img.at(1, 1) == 64.0);

  std::string p16 = t.file("img16.pgm");
  std::string b16 = "P5 2 1 65535\n";
  b16 += std::string("\x01\x00\xff\xfe", 4);  // big-endian 256, 65534
  write_file(p16, b16);
  RasterImage i16 = load_pgm(p16);
  CHECK(i16.at(0, 0) == 256.0);
  CHECK(i16.at(0, 1) == 65534.0);

  write_file(p, "P2\n2 2\n255\n0 1 2 3\n");
  CHECK_THROWS(load_pgm(p));  // ASCII PGM unsupported
}

TEST_CASE("raw float32 loading with the dims sidecar") {
  TempDir t;
  std::string p = t.file("img.raw");
  std::vector<float> vals = {1.5f, 2.5f, 3.5f, 4.5f, 5.5f, 6.5f};
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(vals.data()),
            vals.size() * sizeof(float));
  out.close();
  write_file(p + ".dims", "2 3\n");
  RasterImage img = load_raw_f32(p);
  CHECK(img.height == 2);
  CHECK(img.width == 3);
  CHECK(img.at(0, 0) == 1.5);
  CHECK(img.at(1, 2) == 6.5);

  write_file(p + ".dims", "2 4\n");  // payload size mismatch
  CHECK_THROWS(load_raw_f32(p));
}

TEST_CASE("sorted downsample keeps extremes at evenly spaced ranks") {
  std::vector<double> v;
  for (int i = 100; i >= 1; --i) v.push_back(i);  // unsorted on purpose
  SampleSet s = sorted_downsample(v, 5, SampleDomain::amplitude);
  // ranks round(k*99/4) = 0, 25, 50, 74, 99 over the sorted values 1..100
  CHECK(s.values == std::vector<double>{1.0, 26.0, 51.0, 75.0, 100.0});

  // target >= N returns everything, sorted
  SampleSet all = sorted_downsample({3.0, 1.0, 2.0}, 10,
                                    SampleDomain::amplitude);
  CHECK(all.values == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("downsample output is a sorted subset preserving the ecdf") {
  RngStream rng(88);
  std::vector<double> v;
  for (int i = 0; i < 55000; ++i) v.push_back(rng.exponential());
  SampleSet s = sorted_downsample(v, 5500, SampleDomain::amplitude);
  REQUIRE(s.values.size() == 5500);
  CHECK(std::is_sorted(s.values.begin(), s.values.end()));
  std::sort(v.begin(), v.end());
  for (double x : s.values)
    CHECK(std::binary_search(v.begin(), v.end(), x));
  // KS distance between full and downsampled ecdf stays tiny
  double d = 0.0;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    double fs = (i + 1.0) / s.values.size();
    auto it = std::upper_bound(v.begin(), v.end(), s.values[i]);
    double fv = static_cast<double>(it - v.begin()) / v.size();
    d = std::max(d, std::abs(fs - fv));
  }
  CHECK(d < 2.0 / 5500.0);
}

TEST_CASE("raster validation") {
  RasterImage img;
  img.width = 2;
  img.height = 1;
  img.pixels = {1.0, -2.0};
  CHECK_THROWS(img.validate());
  img.pixels = {1.0, 2.0};
  CHECK_NOTHROW(img.validate());
  img.pixels = {1.0};
  CHECK_THROWS(img.validate());
}

TEST_CASE("patch fitting tiles, merges fragments, and survives bad patches") {
  // 120x80: rows split 60+60, the 20-wide column fragment merges inward
  RasterImage img;
  img.height = 120;
  img.width = 80;
  img.domain = SampleDomain::amplitude;
  RngStream rng(909);
  img.pixels.resize(static_cast<std::size_t>(img.height) * img.width);
  for (auto& px : img.pixels) px = 2.0 * std::sqrt(rng.exponential());
  // make the bottom-left patch constant so its fit degenerates
  for (int r = 60; r < 120; ++r)
    for (int c = 0; c < 80; ++c) img.pixels[r * img.width + c] = 3.0;

  PatchFitOptions opt;
  opt.patch_size = 60;
  opt.min_edge = 50;
  opt.downsample_threshold = 3000;
  opt.downsample_n = 2000;
  opt.mh.n_iter = 40;
  opt.mh.burn_in = 10;
  opt.mh.seed = 5;
  QuadratureRule q(32);
  ParameterMap map = fit_patches(img, opt, q);
  CHECK(map.grid_rows == 2);
  CHECK(map.grid_cols == 1);
  REQUIRE(map.cells.size() == 2);
  CHECK(map.at(0, 0).status == PatchStatus::ok);
  CHECK(map.at(0, 0).cols == 80);
  CHECK(map.at(1, 0).status == PatchStatus::degenerate);
  CHECK(!map.at(1, 0).message.empty());
  CHECK(map.at(0, 0).stream_id != map.at(1, 0).stream_id);

  // determinism: a second run reproduces the summaries exactly
  ParameterMap again = fit_patches(img, opt, q);
  CHECK(again.at(0, 0).alpha_mean == map.at(0, 0).alpha_mean);
  CHECK(again.at(0, 0).gamma_std == map.at(0, 0).gamma_std);
}

TEST_CASE("parameter map export writes grids and a manifest") {
  ParameterMap map;
  map.patch_size = 60;
  map.grid_rows = 1;
  map.grid_cols = 2;
  PatchRecord okc;
  okc.status = PatchStatus::ok;
  okc.alpha_mean = 1.5;
  okc.delta_mean = 2.0;
  okc.gamma_mean = 0.5;
  PatchRecord bad;
  bad.status = PatchStatus::failed;
  bad.message = "boom";
  map.cells = {okc, bad};

  TempDir t;
  write_parameter_map(map, t.path.string());
  std::ifstream a(t.file("alpha.csv"));
  REQUIRE(a.good());
  std::string line;
  std::getline(a, line);
  CHECK(line.rfind("1.5", 0) == 0);
  CHECK(line.find("nan") != std::string::npos);  // failed cell
  CHECK(fs::exists(t.file("delta.csv")));
  CHECK(fs::exists(t.file("gamma.csv")));
  std::ifstream m(t.file("map_manifest.json"));
  std::string js((std::istreambuf_iterator<char>(m)),
                 std::istreambuf_iterator<char>());
  CHECK(js.find("\"grid_rows\"") != std::string::npos);
  CHECK(js.find("boom") != std::string::npos);
}
