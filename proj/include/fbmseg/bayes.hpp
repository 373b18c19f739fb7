#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>

#include "fbmseg/features.hpp"
#include "fbmseg/grid.hpp"

namespace fbmseg {

struct LabeledFeature {
  FeatureVector features;
  Label label = Label::blood_pool;  ///< blood_pool or myocardium
};

struct ClassStats {
  double prior = 0.5;
  Vector5d mean = Vector5d::Zero();  ///< normalized feature units
  Vector5d var = Vector5d::Ones();   ///< normalized feature units, floored
};

/// Per-feature z-score transform fitted on the training set.
struct FeatureNormalizer {
  Vector5d mean = Vector5d::Zero();
  Vector5d sigma = Vector5d::Ones();

  Vector5d apply(const Vector5d& v) const { return (v - mean).cwiseQuotient(sigma); }
};

inline constexpr double kDefaultVarianceFloor = 1e-6;

struct GaussianNBModel {
  FeatureNormalizer norm;
  ClassStats blood;
  ClassStats myo;
  double variance_floor = kDefaultVarianceFloor;
  std::array<int, 3> patch{7, 9, 7};  ///< feature patch extents used in training
  std::string map_config;             ///< FractalMapConfig::describe() of the training map

  const ClassStats& stats(Label c) const { return c == Label::myocardium ? myo : blood; }
};

struct TrainOptions {
  std::array<int, 3> patch{7, 9, 7};
  std::string map_config;
  double variance_floor = kDefaultVarianceFloor;
};

/// Empirical priors and per-feature Gaussians in normalized units.
/// TrainingError when a class has fewer than 2 samples.
GaussianNBModel train(std::span<const LabeledFeature> samples, const TrainOptions& options = {});

struct Prediction {
  Label label = Label::blood_pool;
  double posterior = 0.5;  ///< posterior of `label`
  double posterior_blood = 0.5;
  double posterior_myo = 0.5;
};

/// Log-domain class scores; ties go to blood_pool.
Prediction predict(const GaussianNBModel& model, const FeatureVector& features);
/// Same on a raw (unnormalized) feature column.
Prediction predict(const GaussianNBModel& model, const Vector5d& raw);

void save_model(const GaussianNBModel& model, const std::filesystem::path& path);
GaussianNBModel load_model(const std::filesystem::path& path);

std::string model_to_text(const GaussianNBModel& model);
GaussianNBModel model_from_text(const std::string& text);

}  // namespace fbmseg
