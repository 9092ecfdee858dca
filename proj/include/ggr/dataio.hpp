#ifndef GGR_DATAIO_HPP_
#define GGR_DATAIO_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "ggr/estimation.hpp"
#include "ggr/sample_set.hpp"

namespace ggr {

struct RasterImage {
  int width = 0, height = 0;
  std::vector<double> pixels;  // row-major, nonnegative, finite
  SampleDomain domain = SampleDomain::amplitude;

  double at(int row, int col) const { return pixels[row * width + col]; }
  void validate() const;
};

enum class PatchStatus { ok, degenerate, failed };

struct PatchRecord {
  int row0 = 0, col0 = 0, rows = 0, cols = 0;
  double alpha_mean = 0, alpha_std = 0;
  double delta_mean = 0, delta_std = 0;
  double gamma_mean = 0, gamma_std = 0;
  double loglik = 0;
  PatchStatus status = PatchStatus::failed;
  std::string message;
  std::uint64_t stream_id = 0;
};

struct ParameterMap {
  int patch_size = 250;
  int grid_rows = 0, grid_cols = 0;
  std::vector<PatchRecord> cells;  // row-major grid

  const PatchRecord& at(int gr, int gc) const {
    return cells[gr * grid_cols + gc];
  }
};

enum class FileFormat { csv, pgm, raw_f32 };

FileFormat parse_format(const std::string& name);

/// CSV: one value per line or comma-separated; lines starting with '#' are
/// metadata ("# domain: amplitude|intensity" sets the tag). Negative or
/// non-finite entries are rejected with their location.
SampleSet load_csv_samples(const std::string& path);

/// Binary P5 PGM, 8- or 16-bit.
RasterImage load_pgm(const std::string& path);

/// Little-endian float32 payload with a "<height> <width>" text sidecar at
/// path + ".dims".
RasterImage load_raw_f32(const std::string& path);

RasterImage load_raster(const std::string& path, FileFormat fmt);

void write_csv_samples(const SampleSet& s, const std::string& path);

/// Sort ascending, keep target_n evenly spaced ranks
/// round(k(N-1)/(target_n-1)) including both extremes. Round-half-even.
/// target_n >= N returns the whole set, sorted.
SampleSet sorted_downsample(const std::vector<double>& values,
                            std::size_t target_n, SampleDomain domain);

struct PatchFitOptions {
  int patch_size = 250;
  int min_edge = 50;                 // smaller edge fragments merge inward
  std::size_t downsample_threshold = 10000;
  std::size_t downsample_n = 7500;
  MhConfig mh;  // seed is the base; per-patch stream_id = linear index
};

/// Tile the image, fit each patch with mh_fit on its own RNG stream, and
/// collect posterior summaries. Per-patch failures land in status; the map
/// always completes.
ParameterMap fit_patches(const RasterImage& img, const PatchFitOptions& opt,
                         const QuadratureRule& q);

/// Three CSV grids (alpha/delta/gamma posterior means).
void write_parameter_map_grids(const ParameterMap& map,
                               const std::string& out_dir);

/// JSON description: dimensions, patch size, per-patch status and streams.
std::string parameter_map_manifest_json(const ParameterMap& map);

/// Grids plus the manifest as map_manifest.json.
void write_parameter_map(const ParameterMap& map, const std::string& out_dir);

}  // namespace ggr

#endif  // GGR_DATAIO_HPP_
