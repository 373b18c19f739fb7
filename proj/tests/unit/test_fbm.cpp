#include <gtest/gtest.h>

#include <cmath>

#include "fbmseg/fbm.hpp"
#include "fbmseg/hurst.hpp"

using namespace fbmseg;

TEST(FbmCovariance, BrownianCaseIsMin) {
  EXPECT_NEAR(fbm_covariance(1.0, 2.0, 0.5), 1.0, 1e-15);
  EXPECT_NEAR(fbm_covariance(3.5, 2.0, 0.5), 2.0, 1e-15);
}

TEST(FbmCovariance, DiagonalIsPower) {
  for (double h : {0.2, 0.5, 0.8}) EXPECT_NEAR(fbm_covariance(3.0, 3.0, h), std::pow(3.0, 2 * h), 1e-12);
}

TEST(FbmIncrements, CovarianceAtZeroIsVariance) {
  for (double h : {0.3, 0.7}) EXPECT_NEAR(fbm_increment_covariance(4.0, 0.0, h, 2.0), fbm_increment_variance(4.0, h, 2.0), 1e-12);
}

TEST(FbmIncrements, BrownianIncrementsUncorrelated) {
  EXPECT_NEAR(fbm_increment_covariance(1.0, 3.0, 0.5, 1.0), 0.0, 1e-12);
}

TEST(FbmIncrements, PersistenceSign) {
  EXPECT_GT(fbm_increment_covariance(1.0, 2.0, 0.8, 1.0), 0.0);
  EXPECT_LT(fbm_increment_covariance(1.0, 2.0, 0.2, 1.0), 0.0);
}

TEST(FbmSynth, DeterministicPerSeed) {
  const auto a = synth_fbm_1d(512, 0.6, -1, 1.0, 11);
  const auto b = synth_fbm_1d(512, 0.6, -1, 1.0, 11);
  const auto c = synth_fbm_1d(512, 0.6, -1, 1.0, 12);
  EXPECT_EQ(a.samples, b.samples);
  EXPECT_NE(a.samples, c.samples);
  EXPECT_EQ(a.samples[0], 0.0);
  EXPECT_EQ(a.truncation_b, 4 * 512);
  EXPECT_EQ(a.samples.size(), 512);
}

TEST(FbmSynth, RejectsBadArguments) {
  EXPECT_THROW(synth_fbm_1d(512, 0.0, -1, 1.0, 1), DomainError);
  EXPECT_THROW(synth_fbm_1d(512, 1.0, -1, 1.0, 1), DomainError);
  EXPECT_THROW(synth_fbm_1d(1, 0.5, -1, 1.0, 1), DomainError);
  EXPECT_THROW(synth_fbm_1d(512, 0.5, -1, 0.0, 1), DomainError);
}

// Monte-Carlo oracle for the scale constant: the mid-path unit increment has
// variance sigma^2 across independent realizations.
TEST(FbmSynth, MidPathIncrementVariance) {
  for (double h : {0.3, 0.7}) {
    const int n = 256, seeds = 400;
    double s2 = 0.0;
    for (int s = 0; s < seeds; ++s) {
      const auto p = synth_fbm_1d(n, h, -1, 1.5, static_cast<std::uint64_t>(s));
      const double d = p.samples[n / 2 + 1] - p.samples[n / 2];
      s2 += d * d;
    }
    EXPECT_NEAR(s2 / seeds / (1.5 * 1.5), 1.0, 0.15) << "h=" << h;
  }
}

// Increment variance scales as lag^2H (Property 3).
TEST(FbmSynth, IncrementVarianceScaling) {
  for (double h : {0.3, 0.7}) {
    double v1 = 0.0, v8 = 0.0;
    std::size_t n1 = 0, n8 = 0;
    for (int s = 0; s < 10; ++s) {
      const auto p = synth_fbm_1d(4096, h, -1, 1.0, 100 + static_cast<std::uint64_t>(s));
      for (Eigen::Index i = 0; i + 8 < p.samples.size(); ++i) {
        v1 += std::pow(p.samples[i + 1] - p.samples[i], 2);
        v8 += std::pow(p.samples[i + 8] - p.samples[i], 2);
        ++n1;
        ++n8;
      }
    }
    const double ratio = (v8 / n8) / (v1 / n1);
    EXPECT_NEAR(std::log(ratio) / std::log(8.0) / 2.0, h, 0.05) << "h=" << h;
  }
}

TEST(FbmSynth, PointSampleRuleAvailable) {
  const auto p = synth_fbm_1d(256, 0.5, 64, 1.0, 3, KernelRule::point_sample);
  EXPECT_EQ(p.samples.size(), 256);
  EXPECT_TRUE(p.samples.allFinite());
}

TEST(FbmField, StandardizedAndDeterministic) {
  const auto a = fbm_texture({24, 20, 16}, 0.6, 5);
  EXPECT_NEAR(a.array().mean(), 0.0, 1e-12);
  EXPECT_NEAR(std::sqrt(a.array().square().mean()), 1.0, 1e-12);
  EXPECT_EQ(a, fbm_texture({24, 20, 16}, 0.6, 5));
  EXPECT_FALSE(a == fbm_texture({24, 20, 16}, 0.6, 6));
  EXPECT_THROW(fbm_texture({1, 8, 8}, 0.5, 1), DomainError);
}

TEST(FbmField, GlobalHurstNearTarget) {
  const auto f = fbm_texture({64, 64, 64}, 0.7, 9);
  const auto fit = fit_hurst(variogram(f, 4));
  EXPECT_NEAR(fit.h, 0.7, 0.08);
}

TEST(FbmField, VolumeWrapper) {
  const Volume4 v = synth_fbm_field({8, 8, 8}, 0.5, 1);
  EXPECT_EQ(v.dims(), (Dims4{8, 8, 8, 1}));
}
