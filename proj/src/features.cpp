#include "fbmseg/features.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fbmseg/parallel.hpp"

namespace fbmseg {

double lacunarity(std::span<const double> patch) {
  if (patch.empty()) throw DomainError("lacunarity: empty patch");
  // E[F^2] / E[F]^2 written as 1 + var / mean^2, with moments taken about the
  // first sample so that a constant patch gives exactly 1.
  const double shift = patch[0];
  double s1 = 0.0, s2 = 0.0;
  for (double v : patch) {
    const double d = v - shift;
    s1 += d;
    s2 += d * d;
  }
  const double n = static_cast<double>(patch.size());
  const double m1 = s1 / n;
  const double mean = shift + m1;
  if (mean == 0.0) throw DomainError("lacunarity: patch mean is zero");
  const double var = std::max(0.0, s2 / n - m1 * m1);
  return 1.0 + var / (mean * mean);
}

FeatureVector patch_features(std::span<const double> patch) {
  if (patch.empty()) throw DomainError("patch_features: empty patch");
  const double n = static_cast<double>(patch.size());
  double mean = 0.0;
  for (double v : patch) mean += v;
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : patch) {
    const double d = v - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;

  FeatureVector f;
  f.fd_mean = mean;
  f.fd_var = m2;
  f.lacunarity = mean == 0.0 ? 1.0 : lacunarity(patch);
  if (m2 <= kDegenerateVariance) {
    f.skewness = 0.0;
    f.kurtosis = 3.0;
  } else {
    f.skewness = m3 / (m2 * std::sqrt(m2));
    f.kurtosis = m4 / (m2 * m2);
  }
  return f;
}

template <typename Scalar>
FeatureVector extract_features(const FractalMap<Scalar>& map, int x, int y, int z, int t, const std::array<int, 3>& patch) {
  for (int p : patch)
    if (p < 1) throw DomainError("extract_features: patch extents must be >= 1");
  const auto& d = map.fd.dims();
  const Padding mode = map.config.padding;
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(patch[0]) * patch[1] * patch[2]);
  const int rx = patch[0] / 2, ry = patch[1] / 2, rz = patch[2] / 2;
  for (int k = 0; k < patch[2]; ++k)
    for (int j = 0; j < patch[1]; ++j)
      for (int i = 0; i < patch[0]; ++i)
        values.push_back(static_cast<double>(
            map.fd(pad_index(x - rx + i, d.nx, mode), pad_index(y - ry + j, d.ny, mode), pad_index(z - rz + k, d.nz, mode), t)));
  return patch_features(values);
}

template <typename Scalar>
Eigen::Matrix<double, 5, Eigen::Dynamic> dense_features(const FractalMap<Scalar>& map, int t, const std::array<int, 3>& patch) {
  for (int p : patch)
    if (p < 1) throw DomainError("dense_features: patch extents must be >= 1");
  const auto& d = map.fd.dims();
  const Padding mode = map.config.padding;
  const int rx = patch[0] / 2, ry = patch[1] / 2, rz = patch[2] / 2;
  const Dims3 pd{d.nx + patch[0] - 1, d.ny + patch[1] - 1, d.nz + patch[2] - 1};
  const std::size_t n = d.frame_size();
  const double pn = static_cast<double>(patch[0]) * patch[1] * patch[2];
  // Moments of fd - shift keep the raw-to-central conversion well conditioned.
  const double shift = 0.5 * (map.config.fd_min() + map.config.fd_max());

  std::array<Grid3<double>, 4> powers;
  for (auto& g : powers) g = Grid3<double>(pd);
  for (int z = 0; z < pd[2]; ++z)
    for (int y = 0; y < pd[1]; ++y)
      for (int x = 0; x < pd[0]; ++x) {
        const double v = static_cast<double>(map.fd(pad_index(x - rx, d.nx, mode), pad_index(y - ry, d.ny, mode), pad_index(z - rz, d.nz, mode), t)) - shift;
        const double v2 = v * v;
        powers[0](x, y, z) = v;
        powers[1](x, y, z) = v2;
        powers[2](x, y, z) = v2 * v;
        powers[3](x, y, z) = v2 * v2;
      }

  std::array<std::vector<double>, 4> sums;
  Grid3<double> sx(Dims3{d.nx, pd[1], pd[2]});
  Grid3<double> sxy(Dims3{d.nx, d.ny, pd[2]});
  for (std::size_t q = 0; q < 4; ++q) {
    const auto& src = powers[q];
    auto& out = sums[q];
    out.assign(n, 0.0);
    parallel_for(static_cast<std::size_t>(pd[2]), [&](std::size_t z0, std::size_t z1) {
      for (int z = static_cast<int>(z0); z < static_cast<int>(z1); ++z)
        for (int y = 0; y < pd[1]; ++y)
          for (int x = 0; x < d.nx; ++x) {
            double acc = 0.0;
            for (int i = 0; i < patch[0]; ++i) acc += src(x + i, y, z);
            sx(x, y, z) = acc;
          }
    });
    parallel_for(static_cast<std::size_t>(pd[2]), [&](std::size_t z0, std::size_t z1) {
      for (int z = static_cast<int>(z0); z < static_cast<int>(z1); ++z)
        for (int y = 0; y < d.ny; ++y)
          for (int x = 0; x < d.nx; ++x) {
            double acc = 0.0;
            for (int j = 0; j < patch[1]; ++j) acc += sx(x, y + j, z);
            sxy(x, y, z) = acc;
          }
    });
    parallel_for(static_cast<std::size_t>(d.nz), [&](std::size_t z0, std::size_t z1) {
      for (int z = static_cast<int>(z0); z < static_cast<int>(z1); ++z)
        for (int y = 0; y < d.ny; ++y)
          for (int x = 0; x < d.nx; ++x) {
            double acc = 0.0;
            for (int k = 0; k < patch[2]; ++k) acc += sxy(x, y, z + k);
            out[static_cast<std::size_t>(x) + static_cast<std::size_t>(d.nx) * (static_cast<std::size_t>(y) + static_cast<std::size_t>(d.ny) * static_cast<std::size_t>(z))] = acc;
          }
    });
  }

  Eigen::Matrix<double, 5, Eigen::Dynamic> out(5, static_cast<Eigen::Index>(n));
  parallel_for(n, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) {
      const double m1 = sums[0][i] / pn, m2 = sums[1][i] / pn, m3 = sums[2][i] / pn, m4 = sums[3][i] / pn;
      const double var = std::max(0.0, m2 - m1 * m1);
      const double c3 = m3 - 3.0 * m1 * m2 + 2.0 * m1 * m1 * m1;
      const double c4 = m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1 * m1 * m1 * m1;
      const double mean = shift + m1;
      auto col = out.col(static_cast<Eigen::Index>(i));
      col[0] = mean;
      col[1] = var;
      col[2] = 1.0 + var / (mean * mean);
      if (var <= kDegenerateVariance) {
        col[3] = 0.0;
        col[4] = 3.0;
      } else {
        col[3] = c3 / (var * std::sqrt(var));
        col[4] = c4 / (var * var);
      }
    }
  });
  return out;
}

template FeatureVector extract_features<float>(const FractalMap<float>&, int, int, int, int, const std::array<int, 3>&);
template FeatureVector extract_features<double>(const FractalMap<double>&, int, int, int, int, const std::array<int, 3>&);
template Eigen::Matrix<double, 5, Eigen::Dynamic> dense_features<float>(const FractalMap<float>&, int, const std::array<int, 3>&);
template Eigen::Matrix<double, 5, Eigen::Dynamic> dense_features<double>(const FractalMap<double>&, int, const std::array<int, 3>&);

}  // namespace fbmseg
