#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "fbmseg/hurst.hpp"
#include "fbmseg/rng.hpp"

using namespace fbmseg;

namespace {

Variogram power_law(double c, double h, int j) {
  Variogram vg;
  for (int s = 1; s <= j; ++s) {
    vg.distance.push_back(s);
    vg.mad.push_back(c * std::pow(s, h));
    vg.n_pairs.push_back(1);
  }
  return vg;
}

}  // namespace

TEST(Variogram, MatchesBruteForcePairs) {
  Rng r(4);
  Grid3<double> g(Dims3{5, 4, 3});
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = r.normal();
  const Variogram vg = variogram(g, 3);
  ASSERT_EQ(vg.size(), 3u);
  for (int s = 1; s <= 3; ++s) {
    // Oracle: every ordered voxel pair at an axis-aligned offset of exactly s.
    double sum = 0.0;
    std::size_t n = 0;
    for (int z1 = 0; z1 < 3; ++z1)
      for (int y1 = 0; y1 < 4; ++y1)
        for (int x1 = 0; x1 < 5; ++x1)
          for (int z2 = 0; z2 < 3; ++z2)
            for (int y2 = 0; y2 < 4; ++y2)
              for (int x2 = 0; x2 < 5; ++x2) {
                const int dx = x2 - x1, dy = y2 - y1, dz = z2 - z1;
                const bool axis = (dx == s && dy == 0 && dz == 0) || (dx == 0 && dy == s && dz == 0) || (dx == 0 && dy == 0 && dz == s);
                if (!axis) continue;
                sum += std::abs(g(x2, y2, z2) - g(x1, y1, z1));
                ++n;
              }
    EXPECT_EQ(vg.n_pairs[static_cast<std::size_t>(s - 1)], n);
    EXPECT_NEAR(vg.mad[static_cast<std::size_t>(s - 1)], sum / n, 1e-12);
  }
}

TEST(Variogram, LinearRampIsExactPowerLaw) {
  std::vector<double> ramp(50);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 0.5 * static_cast<double>(i);
  const auto fit = fit_hurst(variogram(ramp, 8));
  EXPECT_NEAR(fit.h, 1.0, 1e-12);
  EXPECT_NEAR(fit.log_c, std::log(0.5), 1e-12);
  EXPECT_NEAR(fit.rss, 0.0, 1e-20);
}

TEST(Variogram, TooSmallWindowThrows) {
  EXPECT_THROW(variogram(Grid3<double>(Dims3{2, 2, 2}), 2), DomainError);
}

TEST(FitHurst, RecoversExactPowerLaw) {
  const auto fit = fit_hurst(power_law(2.5, 0.37, 6));
  EXPECT_NEAR(fit.h, 0.37, 1e-12);
  EXPECT_NEAR(fit.log_c, std::log(2.5), 1e-12);
  EXPECT_EQ(fit.n_scales, 6);
}

TEST(FitHurst, ClampsSlopeButNotIntercept) {
  const auto fit = fit_hurst(power_law(1.0, 1.4, 4));
  EXPECT_EQ(fit.h, 1.0);
  EXPECT_NEAR(fit.log_c, 0.0, 1e-12);
}

TEST(FitHurst, AllZeroIsSmooth) {
  Variogram vg = power_law(1.0, 0.5, 4);
  for (auto& m : vg.mad) m = 0.0;
  const auto fit = fit_hurst(vg);
  EXPECT_EQ(fit.h, 1.0);
  EXPECT_EQ(fit.rss, 0.0);
  EXPECT_EQ(fit.n_scales, 0);
}

TEST(FitHurst, SinglePointPolicy) {
  Variogram vg = power_law(1.0, 0.5, 3);
  vg.mad[0] = vg.mad[1] = 0.0;
  EXPECT_THROW(fit_hurst(vg), FitError);
  const auto fit = fit_hurst(vg, {}, SparsePolicy::smooth);
  EXPECT_EQ(fit.h, 1.0);
  EXPECT_EQ(fit.n_scales, 1);
}

TEST(FitHurst, RejectsMalformedVariogram) {
  Variogram vg = power_law(1.0, 0.5, 3);
  vg.mad.pop_back();
  EXPECT_THROW(fit_hurst(vg), FitError);
}

TEST(FitHurst, RssOfNoisyLine) {
  // Oracle: residuals of a hand-solved 3-point regression.
  Variogram vg;
  vg.distance = {1, 2, 4};
  vg.mad = {1.0, std::exp(0.5 * std::log(2.0) + 0.1), std::exp(0.5 * std::log(4.0))};
  vg.n_pairs = {1, 1, 1};
  const auto fit = fit_hurst(vg);
  const double x[3] = {0, std::log(2.0), std::log(4.0)};
  const double y[3] = {0, 0.5 * x[1] + 0.1, 0.5 * x[2]};
  const double xm = (x[0] + x[1] + x[2]) / 3, ym = (y[0] + y[1] + y[2]) / 3;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < 3; ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  const double b = sxy / sxx, a = ym - b * xm;
  double rss = 0;
  for (int i = 0; i < 3; ++i) rss += std::pow(y[i] - a - b * x[i], 2);
  EXPECT_NEAR(fit.h, b, 1e-12);
  EXPECT_NEAR(fit.rss, rss, 1e-14);
}

TEST(FdFromH, Relation) {
  EXPECT_DOUBLE_EQ(fd_from_h(0.7, 2), 2.3);
  EXPECT_DOUBLE_EQ(fd_from_h(0.7, 1), 1.3);
  EXPECT_THROW(fd_from_h(1.2, 2), DomainError);
  EXPECT_THROW(fd_from_h(0.5, 0), DomainError);
}
