#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

#include "fbmseg/metrics.hpp"
#include "fbmseg/moments.hpp"

using namespace fbmseg;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

BinarySlice disk(int n, double cx, double cy, double r) {
  BinarySlice s = BinarySlice::Zero(n, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) s(x, y) = (x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r;
  return s;
}

double slice_dice(const BinarySlice& a, const BinarySlice& b) {
  const double both = static_cast<double>((a != 0 && b != 0).count());
  return 2.0 * both / static_cast<double>((a != 0).count() + (b != 0).count());
}

}  // namespace

TEST(Moments, SinglePixel) {
  BinarySlice s = BinarySlice::Zero(8, 8);
  s(3, 5) = 1;
  const auto m = raw_moments(s);
  EXPECT_EQ(m.m00, 1.0);
  EXPECT_EQ(m.centroid, Eigen::Vector2d(3, 5));
  EXPECT_EQ(m.mu20, 0.0);
  EXPECT_EQ(m.mu11, 0.0);
  EXPECT_EQ(m.mu02, 0.0);
}

TEST(Moments, TwoPixels) {
  BinarySlice s = BinarySlice::Zero(4, 4);
  s(0, 0) = s(2, 0) = 1;
  const auto m = raw_moments(s);
  EXPECT_EQ(m.centroid, Eigen::Vector2d(1, 0));
  EXPECT_EQ(m.mu20, 1.0);
  EXPECT_EQ(m.mu02, 0.0);
  EXPECT_EQ(m.mu11, 0.0);
}

TEST(Moments, EmptyIsError) {
  EXPECT_THROW(raw_moments(BinarySlice::Zero(4, 4)), DomainError);
  BinarySlice s = BinarySlice::Zero(4, 4);
  s(1, 1) = s(2, 2) = 1;
  EXPECT_THROW(fit_ellipse(s), DomainError);
}

TEST(Moments, TranslationInvariance) {
  const OrientedRect r{{20, 18}, 0.4, 18, 7};
  const auto a = raw_moments(rasterize_rect(r, 60, 60));
  OrientedRect moved = r;
  moved.center += Eigen::Vector2d(13, 9);
  const auto b = raw_moments(rasterize_rect(moved, 60, 60));
  EXPECT_EQ(a.m00, b.m00);
  EXPECT_NEAR(a.mu20, b.mu20, 1e-12);
  EXPECT_NEAR(a.mu11, b.mu11, 1e-12);
  EXPECT_NEAR(a.mu02, b.mu02, 1e-12);
  EXPECT_NEAR((b.centroid - a.centroid - Eigen::Vector2d(13, 9)).norm(), 0.0, 1e-12);
}

TEST(Moments, CovariancePositiveSemidefinite) {
  const auto m = raw_moments(rasterize_rect({{30, 30}, 1.1, 30, 4}, 64, 64));
  EXPECT_GE(m.mu20 * m.mu02 - m.mu11 * m.mu11, -1e-9);
}

TEST(EllipseFit, AxisAlignedRectangle) {
  BinarySlice s = BinarySlice::Zero(80, 60);
  s.block(10, 20, 40, 20).setOnes();
  const auto f = fit_ellipse(s);
  EXPECT_NEAR(f.theta, 0.0, 0.5 * kDeg);
  EXPECT_NEAR(f.l, 40.0, 0.8);
  EXPECT_NEAR(f.w, 20.0, 0.4);
}

// Oracle: eigen-decomposition of the brute-force pixel-coordinate covariance.
TEST(EllipseFit, RotatedRectangleMatchesCovarianceOracle) {
  const BinarySlice s = rasterize_rect({{50, 50}, 30 * kDeg, 40, 20}, 100, 100);
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  int n = 0;
  for (int y = 0; y < 100; ++y)
    for (int x = 0; x < 100; ++x)
      if (s(x, y)) {
        mean += Eigen::Vector2d(x, y);
        ++n;
      }
  mean /= n;
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (int y = 0; y < 100; ++y)
    for (int x = 0; x < 100; ++x)
      if (s(x, y)) {
        const Eigen::Vector2d d = Eigen::Vector2d(x, y) - mean;
        cov += d * d.transpose();
      }
  cov /= n;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
  const Eigen::Vector2d major = es.eigenvectors().col(1);
  double oracle_theta = std::atan2(major.y(), major.x());
  if (oracle_theta <= -std::numbers::pi / 2) oracle_theta += std::numbers::pi;
  if (oracle_theta > std::numbers::pi / 2) oracle_theta -= std::numbers::pi;

  const auto f = fit_ellipse(s);
  EXPECT_NEAR(f.theta, oracle_theta, 1e-9);
  EXPECT_NEAR(f.l, std::sqrt(12.0 * es.eigenvalues()[1]), 1e-9);
  EXPECT_NEAR(f.w, std::sqrt(12.0 * es.eigenvalues()[0]), 1e-9);
  EXPECT_NEAR(f.theta, 30 * kDeg, 1 * kDeg);
  EXPECT_NEAR(f.l, 40.0, 0.8);
  EXPECT_NEAR(f.w, 20.0, 0.4);
}

TEST(EllipseFit, DiskIsIsotropic) {
  const auto f = fit_ellipse(disk(61, 30, 30, 20));
  EXPECT_NEAR(f.l / f.w, 1.0, 0.02);
  EXPECT_EQ(f.theta, 0.0);
  EXPECT_GE(f.l, f.w);
}

TEST(EllipseFit, RotationEquivariance) {
  for (double deg : {-60.0, -10.0, 25.0, 75.0}) {
    const auto f = fit_ellipse(rasterize_rect({{60, 60}, deg * kDeg, 50, 18}, 120, 120));
    EXPECT_NEAR(f.theta, deg * kDeg, 1 * kDeg) << deg;
  }
}

TEST(EnclosingRectangle, ContainsObjectAndHasArea4lw) {
  BinarySlice s = BinarySlice::Zero(10, 10);
  s.block(4, 4, 2, 2).setOnes();
  const auto f = fit_ellipse(s);
  const auto r = enclosing_rectangle(f);
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 10; ++x)
      if (s(x, y)) EXPECT_TRUE(r.contains({x, y}));
  EXPECT_NEAR(r.area(), 4.0 * f.l * f.w, 1e-12);
}

TEST(EnclosingRectangle, RotatesWithObject) {
  const BinarySlice s = rasterize_rect({{40, 40}, 20 * kDeg, 40, 16}, 81, 81);
  BinarySlice rot = BinarySlice::Zero(81, 81);
  // (x, y) -> (80 - y, x): a 90 degree rotation about the grid center.
  for (int y = 0; y < 81; ++y)
    for (int x = 0; x < 81; ++x) rot(80 - y, x) = s(x, y);
  const auto a = enclosing_rectangle(fit_ellipse(s));
  const auto b = enclosing_rectangle(fit_ellipse(rot));
  double diff = std::remainder(b.theta - a.theta - std::numbers::pi / 2, std::numbers::pi);
  EXPECT_NEAR(diff, 0.0, 2 * kDeg);
  EXPECT_NEAR(a.length, b.length, 1e-9);
}

TEST(RasterizeEllipse, RoundTrip) {
  BinarySlice e = BinarySlice::Zero(140, 100);
  const double c = std::cos(0.3), sn = std::sin(0.3);
  for (int y = 0; y < 100; ++y)
    for (int x = 0; x < 140; ++x) {
      const double u = (c * (x - 70) + sn * (y - 50)) / 50.0, v = (-sn * (x - 70) + c * (y - 50)) / 25.0;
      e(x, y) = u * u + v * v <= 1.0;
    }
  const auto back = rasterize_ellipse(fit_ellipse(e), 140, 100);
  EXPECT_GE(slice_dice(e, back), 0.97);
}

TEST(RasterizeEllipse, ZeroFitIsEmpty) {
  EXPECT_EQ(rasterize_ellipse(EllipseFit{}, 10, 10).count(), 0);
}

TEST(RasterizeEllipse, CircleSymmetricUnder90) {
  EllipseFit f;
  f.centroid = {20, 20};
  f.l = f.w = 25;
  const auto s = rasterize_ellipse(f, 41, 41);
  for (int y = 0; y < 41; ++y)
    for (int x = 0; x < 41; ++x) ASSERT_EQ(s(x, y), s(40 - y, x));
}

TEST(DiscVolume, Examples) {
  Mask4 m(Dims4{20, 20, 3, 1}, Eigen::Vector3d(1, 1, 2));
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 10; ++x) m(x, y, 1, 0) = 1;
  EXPECT_DOUBLE_EQ(disc_stack_volume(m, Label::blood_pool, 0), 200.0);
  EXPECT_DOUBLE_EQ(disc_stack_volume(m, Label::myocardium, 0), 0.0);
}

TEST(DiscVolume, Cylinder) {
  Mask4 m(Dims4{50, 50, 32, 1});
  for (int z = 1; z <= 30; ++z)
    for (int y = 0; y < 50; ++y)
      for (int x = 0; x < 50; ++x)
        if ((x - 24.5) * (x - 24.5) + (y - 24.5) * (y - 24.5) <= 400.0) m(x, y, z, 0) = 1;
  EXPECT_NEAR(disc_stack_volume(m, Label::blood_pool, 0) / (std::numbers::pi * 400.0 * 30.0), 1.0, 0.02);
}

TEST(DiscVolume, AdditiveOverSlices) {
  BinaryFrame a(Dims3{5, 5, 4}), b(Dims3{5, 5, 4}), ab(Dims3{5, 5, 4});
  a(1, 1, 0) = a(2, 1, 0) = 1;
  b(3, 3, 2) = 1;
  ab(1, 1, 0) = ab(2, 1, 0) = ab(3, 3, 2) = 1;
  const Eigen::Vector3d sp(0.5, 0.7, 1.3);
  EXPECT_DOUBLE_EQ(disc_stack_volume(ab, sp), disc_stack_volume(a, sp) + disc_stack_volume(b, sp));
}
