#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fbmseg/features.hpp"
#include "fbmseg/rng.hpp"

using namespace fbmseg;

TEST(Lacunarity, Examples) {
  const std::vector<double> constant(27, 2.5);
  EXPECT_EQ(lacunarity(constant), 1.0);
  const std::vector<double> two{1, 3, 1, 3};
  EXPECT_EQ(lacunarity(two), 1.25);
  EXPECT_THROW(lacunarity(std::vector<double>{}), DomainError);
  EXPECT_THROW(lacunarity(std::vector<double>{-1, 1}), DomainError);
}

TEST(PatchFeatures, MatchesTextbookMoments) {
  const std::vector<double> v{2.0, 2.1, 2.5, 2.2, 2.9, 2.0};
  const auto f = patch_features(v);
  // Oracle: direct definitions with n-denominators.
  double m = 0;
  for (double x : v) m += x;
  m /= 6;
  double c2 = 0, c3 = 0, c4 = 0, s2 = 0;
  for (double x : v) {
    c2 += std::pow(x - m, 2);
    c3 += std::pow(x - m, 3);
    c4 += std::pow(x - m, 4);
    s2 += x * x;
  }
  c2 /= 6;
  c3 /= 6;
  c4 /= 6;
  EXPECT_NEAR(f.fd_mean, m, 1e-14);
  EXPECT_NEAR(f.fd_var, c2, 1e-14);
  EXPECT_NEAR(f.lacunarity, (s2 / 6) / (m * m), 1e-14);
  EXPECT_NEAR(f.skewness, c3 / std::pow(c2, 1.5), 1e-12);
  EXPECT_NEAR(f.kurtosis, c4 / (c2 * c2), 1e-12);
}

TEST(PatchFeatures, DegenerateConvention) {
  const auto f = patch_features(std::vector<double>(10, 2.3));
  EXPECT_NEAR(f.fd_var, 0.0, 1e-24);
  EXPECT_EQ(f.skewness, 0.0);
  EXPECT_EQ(f.kurtosis, 3.0);
  EXPECT_NEAR(f.lacunarity, 1.0, 1e-15);
}

TEST(PatchFeatures, SymmetricPatchHasZeroSkew) {
  const auto f = patch_features(std::vector<double>{2.0, 2.2, 2.4, 2.6});
  EXPECT_NEAR(f.skewness, 0.0, 1e-12);
}

TEST(FeatureVector, VectorRoundTrip) {
  const FeatureVector f{2.1, 0.01, 1.002, -0.3, 2.7};
  const auto g = FeatureVector::from(f.vector());
  EXPECT_EQ(g.vector(), f.vector());
}

TEST(DenseFeatures, MatchesPointwiseExtraction) {
  FractalMap<float> map{Volume4(Dims4{9, 8, 7, 2}), Volume4(Dims4{9, 8, 7, 2}), {}};
  Rng r(17);
  for (std::size_t i = 0; i < map.fd.size(); ++i) map.fd[i] = static_cast<float>(2.0 + r.uniform());
  // Flat region: degenerate rule on both routes.
  for (int z = 0; z < 7; ++z)
    for (int y = 0; y < 8; ++y)
      for (int x = 0; x < 4; ++x) map.fd(x, y, z, 1) = 2.5f;
  const std::array<int, 3> patch{3, 5, 3};
  for (Padding pad : {Padding::mirror, Padding::clamp}) {
    map.config.padding = pad;
    for (int t = 0; t < 2; ++t) {
      const auto dense = dense_features(map, t, patch);
      for (int z = 0; z < 7; ++z)
        for (int y = 0; y < 8; ++y)
          for (int x = 0; x < 9; ++x) {
            const auto f = extract_features(map, x, y, z, t, patch).vector();
            const auto col = dense.col(x + 9 * (y + 8 * z));
            for (int k = 0; k < 5; ++k) ASSERT_NEAR(col[k], f[k], 1e-9) << "feature " << k << " at " << x << ',' << y << ',' << z;
          }
    }
  }
}

TEST(DenseFeatures, LacunarityAtLeastOne) {
  FractalMap<float> map{Volume4(Dims4{6, 6, 6, 1}), Volume4(Dims4{6, 6, 6, 1}), {}};
  Rng r(2);
  for (std::size_t i = 0; i < map.fd.size(); ++i) map.fd[i] = static_cast<float>(2.0 + r.uniform());
  const auto dense = dense_features(map, 0, {3, 3, 3});
  EXPECT_GE(dense.row(2).minCoeff(), 1.0);
}
