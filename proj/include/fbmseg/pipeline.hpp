#pragma once

#include <string>
#include <vector>

#include "fbmseg/bayes.hpp"
#include "fbmseg/fractal_map.hpp"
#include "fbmseg/moments.hpp"
#include "fbmseg/morphology.hpp"

namespace fbmseg {

enum class Refine { none, ellipse };
Refine parse_refine(const std::string& s);
std::string to_string(Refine r);

struct PipelineConfig {
  FractalMapConfig map;  ///< must match the model's map_config
  std::string model_path;
  PostprocessConfig post;
  Refine refine = Refine::ellipse;
  int base_slice = -1;  ///< -1 selects the base slice automatically per frame

  void validate() const;
};

struct SliceFit {
  int z = 0;
  int area = 0;
  EllipseFit fit;
};

struct FrameTrace {
  int base_slice = -1;  ///< -1 when no cavity was found
  std::vector<SliceFit> endo;
  std::vector<SliceFit> epi;
};

struct SegmentationResult {
  Mask4 endo;  ///< 1 = cavity
  Mask4 epi;   ///< 1 = cavity or myocardium; endo is a subset
  std::vector<double> cavity_volume_mm3;
  double ejection_fraction = 0.0;
  std::vector<FrameTrace> trace;

  /// Combined labels: 1 = cavity, 2 = epi minus endo.
  Mask4 labels() const;
};

/// Per-voxel class (blood_pool or myocardium) of every frame.
Mask4 classify(const FractalMap<float>& map, const GaussianNBModel& model);

/// Steps after classification: class-mask cleanup, slice walk with centroid
/// tracking, postprocessing, ellipse refinement, volumes and EF.
SegmentationResult segment_classes(const Mask4& classes, const PipelineConfig& cfg);

/// Full pipeline. ConfigError when the model was trained on a different map
/// configuration; SegmentationError when no frame has a cavity.
SegmentationResult segment(const Volume4& vol, const GaussianNBModel& model, const PipelineConfig& cfg);

/// Patch training protocol: homogeneous patches drawn at random from one frame
/// of the ground truth; every voxel of a patch contributes one sample.
struct TrainingProtocol {
  int patches_per_class = 35;
  int frame = 0;
  std::uint64_t seed = 0;
};

std::vector<LabeledFeature> collect_training_samples(const FractalMap<float>& map, const Mask4& truth,
                                                     const std::array<int, 3>& patch, const TrainingProtocol& protocol);

struct TrainedModel {
  GaussianNBModel model;
  std::size_t n_samples = 0;
  double voxel_fraction = 0.0;  ///< training samples / voxels in the sequence
};

TrainedModel train_on_truth(const FractalMap<float>& map, const Mask4& truth, const std::array<int, 3>& patch,
                            const TrainingProtocol& protocol);

struct BoundaryScore {
  int frame = 0;
  std::string boundary;  ///< "endo" or "epi"
  double dice = 0.0;
  double hd_mm = 0.0;   ///< NaN when a boundary is empty
  double mad_mm = 0.0;  ///< NaN when a boundary is empty
};

struct SliceScore {
  int frame = 0;
  std::string boundary;
  int z = 0;
  double dice = 0.0;
};

struct EvaluationReport {
  std::vector<BoundaryScore> rows;
  std::vector<SliceScore> slices;  ///< slices where either mask has foreground

  double mean_dice(const std::string& boundary) const;
  std::string to_text() const;
};

/// Label 1 is the endocardial region, any nonzero label the epicardial one.
EvaluationReport evaluate(const Mask4& pred, const Mask4& truth);
EvaluationReport evaluate(const SegmentationResult& result, const Mask4& truth);

}  // namespace fbmseg
