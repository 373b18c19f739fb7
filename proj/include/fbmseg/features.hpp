#pragma once

#include <Eigen/Dense>

#include <array>
#include <span>

#include "fbmseg/fractal_map.hpp"

namespace fbmseg {

using Vector5d = Eigen::Matrix<double, 5, 1>;

/// Fractal texture descriptor of a patch of the fd map.
struct FeatureVector {
  double fd_mean = 0.0;
  double fd_var = 0.0;       ///< population variance
  double lacunarity = 1.0;   ///< E[F^2] / E[F]^2
  double skewness = 0.0;     ///< third standardized moment
  double kurtosis = 3.0;     ///< fourth standardized moment (normal = 3)

  Vector5d vector() const { return (Vector5d() << fd_mean, fd_var, lacunarity, skewness, kurtosis).finished(); }
  static FeatureVector from(const Vector5d& v) { return {v[0], v[1], v[2], v[3], v[4]}; }
};

/// Patches with variance at or below this are treated as constant
/// (skewness 0, kurtosis 3).
inline constexpr double kDegenerateVariance = 1e-12;

/// mean(F^2) / mean(F)^2. DomainError for an empty patch or zero mean.
double lacunarity(std::span<const double> patch);

/// Unnormalized features of a set of fd values (two-pass moments).
FeatureVector patch_features(std::span<const double> patch);

/// Features of the patch of frame t centered at (x, y, z); out-of-range
/// voxels follow the map's padding rule.
template <typename Scalar>
FeatureVector extract_features(const FractalMap<Scalar>& map, int x, int y, int z, int t, const std::array<int, 3>& patch);

/// Features of every voxel of frame t, one column per voxel (x fastest).
/// Equivalent to extract_features at every voxel, computed with box sums.
template <typename Scalar>
Eigen::Matrix<double, 5, Eigen::Dynamic> dense_features(const FractalMap<Scalar>& map, int t, const std::array<int, 3>& patch);

}  // namespace fbmseg
