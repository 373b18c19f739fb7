#include "fbmseg/hurst.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace fbmseg {

template <typename T>
Variogram variogram(const Grid3<T>& window, int scales) {
  if (scales < 1) throw DomainError("variogram: scales must be >= 1");
  const auto& d = window.dims();
  Variogram vg;
  for (int s = 1; s <= scales; ++s) {
    double sum = 0.0;
    std::size_t count = 0;
    for (int axis = 0; axis < 3; ++axis) {
      if (d[static_cast<std::size_t>(axis)] <= s) continue;
      const int dx = axis == 0 ? s : 0;
      const int dy = axis == 1 ? s : 0;
      const int dz = axis == 2 ? s : 0;
      for (int z = 0; z + dz < d[2]; ++z)
        for (int y = 0; y + dy < d[1]; ++y)
          for (int x = 0; x + dx < d[0]; ++x) {
            sum += std::abs(static_cast<double>(window(x + dx, y + dy, z + dz)) - static_cast<double>(window(x, y, z)));
            ++count;
          }
    }
    if (count == 0) throw DomainError("variogram: window too small for scale " + std::to_string(s));
    vg.distance.push_back(static_cast<double>(s));
    vg.mad.push_back(sum / static_cast<double>(count));
    vg.n_pairs.push_back(count);
  }
  return vg;
}

template Variogram variogram<float>(const Grid3<float>&, int);
template Variogram variogram<double>(const Grid3<double>&, int);

Variogram variogram(std::span<const double> series, int scales) {
  Grid3<double> g(Dims3{static_cast<int>(series.size()), 1, 1});
  for (std::size_t i = 0; i < series.size(); ++i) g[i] = series[i];
  return variogram(g, scales);
}

VariogramFit fit_hurst(std::span<const double> log_distance, std::span<const double> mad, const HurstClamp& clamp,
                       SparsePolicy sparse) {
  if (log_distance.size() != mad.size()) throw FitError("fit_hurst: size mismatch");
  constexpr std::size_t kMaxPoints = 64;
  std::array<double, kMaxPoints> xs{}, ys{};
  std::size_t n = 0;
  for (std::size_t i = 0; i < mad.size(); ++i) {
    if (!(mad[i] > 0.0)) continue;
    if (n == kMaxPoints) throw FitError("fit_hurst: too many scales");
    xs[n] = log_distance[i];
    ys[n] = std::log(mad[i]);
    ++n;
  }

  VariogramFit fit;
  fit.n_scales = static_cast<int>(n);
  if (n == 0 || (n == 1 && sparse == SparsePolicy::smooth)) {
    fit.h = clamp.h_max;
    fit.log_c = n == 0 ? -std::numeric_limits<double>::infinity() : ys[0];
    fit.rss = 0.0;
    return fit;
  }
  if (n < 2) throw FitError("fit_hurst: fewer than 2 points with nonzero mad");

  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xm += xs[i];
    ym += ys[i];
  }
  xm /= static_cast<double>(n);
  ym /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - xm) * (xs[i] - xm);
    sxy += (xs[i] - xm) * (ys[i] - ym);
  }
  if (!(sxx > 0.0)) throw FitError("fit_hurst: distances are not distinct");
  const double slope = sxy / sxx;
  const double intercept = ym - slope * xm;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    rss += r * r;
  }
  fit.h = std::clamp(slope, clamp.h_min, clamp.h_max);
  fit.log_c = intercept;
  fit.rss = rss;
  return fit;
}

VariogramFit fit_hurst(const Variogram& vg, const HurstClamp& clamp, SparsePolicy sparse) {
  if (vg.mad.size() != vg.distance.size()) throw FitError("fit_hurst: malformed variogram");
  std::vector<double> logd(vg.distance.size());
  for (std::size_t i = 0; i < logd.size(); ++i) {
    if (!(vg.distance[i] > 0.0)) throw FitError("fit_hurst: distances must be positive");
    if (i > 0 && !(vg.distance[i] > vg.distance[i - 1])) throw FitError("fit_hurst: distances must increase");
    if (vg.mad[i] < 0.0) throw FitError("fit_hurst: negative mad");
    logd[i] = std::log(vg.distance[i]);
  }
  return fit_hurst(logd, vg.mad, clamp, sparse);
}

double fd_from_h(double h, int m) {
  if (!(h >= 0.0 && h <= 1.0)) throw DomainError("fd_from_h: h must lie in [0, 1]");
  if (m < 1 || m > 3) throw DomainError("fd_from_h: m must be 1, 2 or 3");
  return static_cast<double>(m) + 1.0 - h;
}

}  // namespace fbmseg
