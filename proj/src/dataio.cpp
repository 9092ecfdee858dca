#include "ggr/dataio.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ggr {

void RasterImage::validate() const {
  if (width < 1 || height < 1)
    throw std::invalid_argument("RasterImage: empty dimensions");
  if (pixels.size() != static_cast<std::size_t>(width) * height)
    throw std::invalid_argument("RasterImage: pixel count mismatch");
  for (std::size_t i = 0; i < pixels.size(); ++i)
    if (!(pixels[i] >= 0.0) || !std::isfinite(pixels[i]))
      throw std::invalid_argument("RasterImage: bad pixel at index " +
                                  std::to_string(i));
}

FileFormat parse_format(const std::string& name) {
  if (name == "csv") return FileFormat::csv;
  if (name == "pgm") return FileFormat::pgm;
  if (name == "raw-f32") return FileFormat::raw_f32;
  throw std::invalid_argument("unknown format '" + name +
                              "' (expected csv, pgm or raw-f32)");
}

SampleSet load_csv_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  SampleSet s;
  s.provenance = path;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto pos = line.find("domain:");
      if (pos != std::string::npos) {
        std::string tag = line.substr(pos + 7);
        tag.erase(0, tag.find_first_not_of(" \t"));
        tag.erase(tag.find_last_not_of(" \t\r") + 1);
        if (tag == "amplitude")
          s.domain = SampleDomain::amplitude;
        else if (tag == "intensity")
          s.domain = SampleDomain::intensity;
        else
          throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                   ": unknown domain tag '" + tag + "'");
      }
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (cell.find_first_not_of(" \t\r") == std::string::npos) continue;
      std::size_t used = 0;
      double v;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": cannot parse '" + cell + "'");
      }
      if (cell.find_first_not_of(" \t\r", used) != std::string::npos)
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": trailing junk in '" + cell + "'");
      if (!std::isfinite(v) || v < 0.0)
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": negative or non-finite value " + cell);
      s.values.push_back(v);
    }
  }
  if (s.values.empty()) throw std::runtime_error(path + ": no samples");
  return s;
}

namespace {

int pgm_next_int(std::istream& in, const std::string& path) {
  // skips whitespace and '#' comments per the PGM grammar
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {}
    } else if (!std::isspace(c)) {
      break;
    }
  }
  if (c == EOF) throw std::runtime_error(path + ": truncated PGM header");
  int v = 0;
  bool any = false;
  while (c != EOF && std::isdigit(c)) {
    v = v * 10 + (c - '0');
    any = true;
    c = in.get();
  }
  if (!any) throw std::runtime_error(path + ": malformed PGM header");
  return v;
}

}  // namespace

RasterImage load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[2];
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || magic[1] != '5')
    throw std::runtime_error(path + ": not a binary (P5) PGM file");
  RasterImage img;
  img.width = pgm_next_int(in, path);
  img.height = pgm_next_int(in, path);
  int maxval = pgm_next_int(in, path);
  if (img.width < 1 || img.height < 1 || maxval < 1 || maxval > 65535)
    throw std::runtime_error(path + ": invalid PGM dimensions/maxval");
  std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  img.pixels.resize(n);
  if (maxval < 256) {
    std::vector<unsigned char> buf(n);
    in.read(reinterpret_cast<char*>(buf.data()), n);
    if (!in) throw std::runtime_error(path + ": truncated PGM payload");
    for (std::size_t i = 0; i < n; ++i) img.pixels[i] = buf[i];
  } else {
    std::vector<unsigned char> buf(2 * n);
    in.read(reinterpret_cast<char*>(buf.data()), 2 * n);
    if (!in) throw std::runtime_error(path + ": truncated PGM payload");
    for (std::size_t i = 0; i < n; ++i)
      img.pixels[i] = 256.0 * buf[2 * i] + buf[2 * i + 1];  // big-endian
  }
  img.validate();
  return img;
}

RasterImage load_raw_f32(const std::string& path) {
  std::ifstream dims(path + ".dims");
  if (!dims)
    throw std::runtime_error("cannot open sidecar " + path + ".dims");
  RasterImage img;
  if (!(dims >> img.height >> img.width) || img.height < 1 || img.width < 1)
    throw std::runtime_error(path + ".dims: expected '<height> <width>'");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  std::vector<float> buf(n);
  in.read(reinterpret_cast<char*>(buf.data()), n * sizeof(float));
  if (static_cast<std::size_t>(in.gcount()) != n * sizeof(float))
    throw std::runtime_error(path + ": payload shorter than " +
                             std::to_string(n) + " float32 values");
  img.pixels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(buf[i]) || buf[i] < 0.0f)
      throw std::runtime_error(path + ": bad pixel at index " +
                               std::to_string(i));
    img.pixels[i] = buf[i];
  }
  img.validate();
  return img;
}

RasterImage load_raster(const std::string& path, FileFormat fmt) {
  switch (fmt) {
    case FileFormat::pgm: return load_pgm(path);
    case FileFormat::raw_f32: return load_raw_f32(path);
    case FileFormat::csv: {
      // single-column CSV is accepted as a 1-row raster only via samples;
      // rasters need explicit dimensions, so reject here
      throw std::runtime_error(
          "csv input carries no raster dimensions; use pgm or raw-f32");
    }
  }
  throw std::logic_error("load_raster: unreachable");
}

void write_csv_samples(const SampleSet& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "# domain: "
      << (s.domain == SampleDomain::amplitude ? "amplitude" : "intensity")
      << "\n";
  out.precision(17);
  for (double v : s.values) out << v << '\n';
  if (!out) throw std::runtime_error("write failed on " + path);
}

SampleSet sorted_downsample(const std::vector<double>& values,
                            std::size_t target_n, SampleDomain domain) {
  if (target_n < 2)
    throw std::invalid_argument("sorted_downsample: target_n >= 2 required");
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  if (target_n >= sorted.size()) {
    SampleSet out;
    out.domain = domain;
    out.provenance = "sorted-downsample";
    out.values = std::move(sorted);
    return out;
  }
  SampleSet out;
  out.domain = domain;
  out.provenance = "sorted-downsample";
  out.values.reserve(target_n);
  double scale = static_cast<double>(sorted.size() - 1) /
                 static_cast<double>(target_n - 1);
  int saved = std::fegetround();
  std::fesetround(FE_TONEAREST);  // nearbyint: round-half-even
  for (std::size_t k = 0; k < target_n; ++k) {
    std::size_t idx =
        static_cast<std::size_t>(std::nearbyint(static_cast<double>(k) * scale));
    out.values.push_back(sorted[idx]);
  }
  std::fesetround(saved);
  return out;
}

namespace {

// tile starts along one axis; a trailing fragment shorter than min_edge is
// absorbed by the previous tile
std::vector<std::pair<int, int>> tile_axis(int extent, int patch, int min_edge) {
  std::vector<std::pair<int, int>> tiles;
  for (int start = 0; start < extent; start += patch)
    tiles.emplace_back(start, std::min(patch, extent - start));
  if (tiles.size() > 1 && tiles.back().second < patch &&
      tiles.back().second < min_edge) {
    tiles[tiles.size() - 2].second += tiles.back().second;
    tiles.pop_back();
  }
  return tiles;
}

const char* status_name(PatchStatus s) {
  switch (s) {
    case PatchStatus::ok: return "ok";
    case PatchStatus::degenerate: return "degenerate";
    case PatchStatus::failed: return "failed";
  }
  return "failed";
}

}  // namespace

ParameterMap fit_patches(const RasterImage& img, const PatchFitOptions& opt,
                         const QuadratureRule& q) {
  img.validate();
  if (opt.patch_size < 2)
    throw std::invalid_argument("fit_patches: patch_size >= 2 required");
  auto row_tiles = tile_axis(img.height, opt.patch_size, opt.min_edge);
  auto col_tiles = tile_axis(img.width, opt.patch_size, opt.min_edge);
  ParameterMap map;
  map.patch_size = opt.patch_size;
  map.grid_rows = static_cast<int>(row_tiles.size());
  map.grid_cols = static_cast<int>(col_tiles.size());
  map.cells.resize(static_cast<std::size_t>(map.grid_rows) * map.grid_cols);

  for (int gr = 0; gr < map.grid_rows; ++gr) {
    for (int gc = 0; gc < map.grid_cols; ++gc) {
      PatchRecord& rec = map.cells[gr * map.grid_cols + gc];
      rec.row0 = row_tiles[gr].first;
      rec.rows = row_tiles[gr].second;
      rec.col0 = col_tiles[gc].first;
      rec.cols = col_tiles[gc].second;
      rec.stream_id = static_cast<std::uint64_t>(gr) * map.grid_cols + gc;

      std::vector<double> px;
      px.reserve(static_cast<std::size_t>(rec.rows) * rec.cols);
      for (int r = 0; r < rec.rows; ++r)
        for (int c = 0; c < rec.cols; ++c)
          px.push_back(img.at(rec.row0 + r, rec.col0 + c));

      try {
        SampleSet s;
        if (px.size() > opt.downsample_threshold &&
            opt.downsample_n < px.size()) {
          s = sorted_downsample(px, opt.downsample_n, img.domain);
        } else {
          s.values = std::move(px);
          s.domain = img.domain;
          s.provenance = "patch";
        }
        auto [mn, mx] = std::minmax_element(s.values.begin(), s.values.end());
        if (*mn == *mx) {
          rec.status = PatchStatus::degenerate;
          rec.message = "constant patch";
          continue;
        }
        MhConfig cfg = opt.mh;
        cfg.stream_id = rec.stream_id;
        FitResult f = mh_fit(s, cfg, q);
        rec.alpha_mean = f.posterior_mean[0];
        rec.alpha_std = f.posterior_std[0];
        rec.delta_mean = f.posterior_mean[1];
        rec.delta_std = f.posterior_std[1];
        rec.gamma_mean = f.posterior_mean[2];
        rec.gamma_std = f.posterior_std[2];
        rec.loglik = f.final_loglik;
        rec.status = PatchStatus::ok;
      } catch (const std::exception& e) {
        rec.status = PatchStatus::failed;
        rec.message = e.what();
      }
    }
  }
  return map;
}

void write_parameter_map_grids(const ParameterMap& map,
                               const std::string& out_dir) {
  auto write_grid = [&](const std::string& name,
                        double PatchRecord::*field) {
    std::ofstream out(out_dir + "/" + name);
    if (!out)
      throw std::runtime_error("cannot open " + out_dir + "/" + name);
    out.precision(12);
    for (int gr = 0; gr < map.grid_rows; ++gr) {
      for (int gc = 0; gc < map.grid_cols; ++gc) {
        if (gc) out << ',';
        const PatchRecord& rec = map.at(gr, gc);
        out << (rec.status == PatchStatus::ok ? rec.*field
                                              : std::nan(""));
      }
      out << '\n';
    }
  };
  write_grid("alpha.csv", &PatchRecord::alpha_mean);
  write_grid("delta.csv", &PatchRecord::delta_mean);
  write_grid("gamma.csv", &PatchRecord::gamma_mean);
}

std::string parameter_map_manifest_json(const ParameterMap& map) {
  nlohmann::json j;
  j["grid_rows"] = map.grid_rows;
  j["grid_cols"] = map.grid_cols;
  j["patch_size"] = map.patch_size;
  nlohmann::json patches = nlohmann::json::array();
  for (const auto& rec : map.cells) {
    nlohmann::json p;
    p["row0"] = rec.row0;
    p["col0"] = rec.col0;
    p["rows"] = rec.rows;
    p["cols"] = rec.cols;
    p["status"] = status_name(rec.status);
    p["stream_id"] = rec.stream_id;
    if (!rec.message.empty()) p["message"] = rec.message;
    patches.push_back(p);
  }
  j["patches"] = patches;
  return j.dump(2);
}

void write_parameter_map(const ParameterMap& map, const std::string& out_dir) {
  write_parameter_map_grids(map, out_dir);
  std::ofstream out(out_dir + "/map_manifest.json");
  if (!out)
    throw std::runtime_error("cannot open " + out_dir + "/map_manifest.json");
  out << parameter_map_manifest_json(map) << '\n';
}

}  // namespace ggr
