#pragma once

#include <span>
#include <vector>

#include "fbmseg/grid.hpp"

namespace fbmseg {

/// Mean absolute difference as a function of pair distance (voxels).
struct Variogram {
  std::vector<double> distance;  ///< strictly increasing, > 0
  std::vector<double> mad;       ///< >= 0
  std::vector<std::size_t> n_pairs;

  std::size_t size() const { return distance.size(); }
};

struct HurstClamp {
  double h_min = 0.01;
  double h_max = 1.0;
};

struct VariogramFit {
  double h = 1.0;      ///< clamped slope of log(mad) on log(distance)
  double log_c = 0.0;  ///< intercept of the unclamped fit
  double rss = 0.0;    ///< residual sum of squares of the unclamped fit
  int n_scales = 0;    ///< points retained after dropping mad == 0
};

/// What fit_hurst does when exactly one point survives the zero-mad guard.
enum class SparsePolicy {
  throw_error,  ///< FitError
  smooth,       ///< degenerate smooth result, as for an all-zero variogram
};

/// Axis-aligned variogram: for scale s in 1..scales, the mean of |v(p) - v(p + s e_a)|
/// over every in-window pair along each axis a whose extent exceeds s.
template <typename T>
Variogram variogram(const Grid3<T>& window, int scales);

/// Variogram of a 1-D series.
Variogram variogram(std::span<const double> series, int scales);

/// Ordinary least squares of log(mad) on log(distance). Points with mad == 0
/// are dropped; an all-zero variogram yields h = h_max, rss = 0.
VariogramFit fit_hurst(const Variogram& vg, const HurstClamp& clamp = {}, SparsePolicy sparse = SparsePolicy::throw_error);

/// Same fit on parallel arrays of log-distances and mads (no allocation).
VariogramFit fit_hurst(std::span<const double> log_distance, std::span<const double> mad, const HurstClamp& clamp,
                       SparsePolicy sparse);

/// Fractal dimension m + 1 - h of an m-dimensional fBm.
double fd_from_h(double h, int m);

}  // namespace fbmseg
