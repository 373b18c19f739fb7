#pragma once

#include <array>
#include <string>

#include "fbmseg/grid.hpp"
#include "fbmseg/hurst.hpp"
#include "fbmseg/padding.hpp"

namespace fbmseg {

struct FractalMapConfig {
  std::array<int, 3> window{7, 9, 7};  ///< odd cuboid extents, voxels
  int scales = 4;                       ///< probed pair offsets 1..scales
  Padding padding = Padding::mirror;
  HurstClamp clamp{};
  int euclidean_m = 2;  ///< map value is euclidean_m + 1 - h

  /// Throws ConfigError when the configuration is unusable.
  void validate() const;
  /// Canonical one-line form, stored in model files for compatibility checks.
  std::string describe() const;
  static FractalMapConfig parse(const std::string& described);

  double fd_min() const { return euclidean_m + 1.0 - clamp.h_max; }
  double fd_max() const { return euclidean_m + 1.0 - clamp.h_min; }

  friend bool operator==(const FractalMapConfig& a, const FractalMapConfig& b) { return a.describe() == b.describe(); }
};

/// Per-voxel fractal dimension and the residual of the log-log fit behind it.
template <typename Scalar>
struct FractalMap {
  Grid4<Scalar> fd;
  Grid4<Scalar> rss;
  FractalMapConfig config;
};

/// Slides the window over every voxel of every frame and fits the local
/// variogram. Frames are processed independently. Output is bit-identical for
/// any worker count.
template <typename Scalar>
FractalMap<Scalar> compute_fractal_map(const Grid4<Scalar>& vol, const FractalMapConfig& cfg);

/// Window of frame t centered at (x, y, z), padded per cfg.padding. This is
/// the region the map kernel fits at that voxel.
template <typename Scalar>
Grid3<double> extract_window(const Grid4<Scalar>& vol, int x, int y, int z, int t, const std::array<int, 3>& extent,
                             Padding padding);

struct MapStatistics {
  double mean = 0.0;
  double variance = 0.0;  ///< population variance
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

/// Statistics of fd over voxels of `region` carrying `label`. DomainError when empty.
template <typename Scalar>
MapStatistics map_statistics(const FractalMap<Scalar>& map, const Mask4& region, Label label);

/// Statistics over every voxel.
template <typename Scalar>
MapStatistics map_statistics(const FractalMap<Scalar>& map);

}  // namespace fbmseg
