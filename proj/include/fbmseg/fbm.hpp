#pragma once

#include <Eigen/Dense>

#include <cstdint>

#include "fbmseg/grid.hpp"

namespace fbmseg {

/// Covariance E[B_H(s) B_H(t)] = (|t|^2h + |s|^2h - |t-s|^2h) / 2 of standard fBm.
double fbm_covariance(double s, double t, double h);

/// Theoretical increment variance sigma^2 |lag|^2h.
double fbm_increment_variance(double lag, double h, double sigma);

/// Covariance of two lag-`lag` increments `k` samples apart:
/// sigma^2/2 (|k-l|^2h + |k+l|^2h - 2|k|^2h).
double fbm_increment_covariance(double lag, double k, double h, double sigma);

/// How the moving-average kernel (n-k)^(h-1/2) is discretized.
///   point_sample: the kernel evaluated at integer offsets, singular term dropped.
///   cell_average: the kernel averaged over each unit cell, which keeps the
///                 integrable singularity at zero lag for h < 1/2.
enum class KernelRule { cell_average, point_sample };

struct FbmPath {
  double h = 0.5;
  double sigma = 1.0;
  Eigen::VectorXd samples;  ///< samples[0] == 0
  std::int64_t truncation_b = 0;
  std::uint64_t seed = 0;
};

/// Truncated moving-average fBm: two independent white-noise vectors drive the
/// history sum (k = -b..0) and the causal sum (k = 0..n). The scale constant is
/// set so the unit-increment standard deviation at mid-path equals sigma.
/// b < 0 selects the default truncation 4n.
FbmPath synth_fbm_1d(int n, double h, std::int64_t b, double sigma, std::uint64_t seed,
                     KernelRule rule = KernelRule::cell_average);

/// Scale constant C_H used by synth_fbm_1d.
double fbm_scale_constant(int n, double h, std::int64_t b, double sigma, KernelRule rule);

struct FieldOptions {
  /// Spectral outer scale in voxels; wavenumbers below 1/outer_scale get a flat
  /// amplitude. 0 keeps the pure power law.
  double outer_scale = 0.0;
};

/// Isotropic self-affine 3-D field by spectral synthesis: white noise filtered
/// with amplitude |k|^-(h + 3/2). Zero mean, unit variance, double precision.
Grid3<double> fbm_texture(const Dims3& dims, double h, std::uint64_t seed, const FieldOptions& options = {});

/// fbm_texture stored as a single-frame Volume4 with unit spacing.
Volume4 synth_fbm_field(const Dims3& dims, double h, std::uint64_t seed, const FieldOptions& options = {});

}  // namespace fbmseg
