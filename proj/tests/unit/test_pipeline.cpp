#include <gtest/gtest.h>

#include <cmath>

#include "fbmseg/metrics.hpp"
#include "fbmseg/phantom.hpp"
#include "fbmseg/pipeline.hpp"

using namespace fbmseg;

namespace {

PhantomConfig small() {
  PhantomConfig cfg;
  cfg.dims = Dims4{48, 48, 48, 3};
  cfg.endo_semi_axes_mm = {12, 12, 30};
  cfg.wall_thickness_mm = 6;
  return cfg;
}

// A perfect classifier: myocardium where the truth says so, blood elsewhere.
Mask4 ideal_classes(const Mask4& truth) {
  Mask4 c = Mask4::like(truth);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = truth[i] == 2 ? 2 : 1;
  return c;
}

Mask4 box_truth(const Eigen::Vector3d& spacing, int shift) {
  Mask4 m(Dims4{24, 20, 16, 1}, spacing);
  for (int z = 3; z < 13; ++z)
    for (int y = 4; y < 16; ++y)
      for (int x = 4 + shift; x < 16 + shift; ++x) {
        const bool inner = z > 4 && z < 11 && y > 6 && y < 13 && x > 6 + shift && x < 13 + shift;
        m(x, y, z, 0) = inner ? 1 : 2;
      }
  return m;
}

}  // namespace

TEST(Evaluate, IdenticalMasks) {
  const Mask4 t = box_truth(Eigen::Vector3d::Ones(), 0);
  const auto rep = evaluate(t, t);
  ASSERT_EQ(rep.rows.size(), 2u);
  for (const auto& r : rep.rows) {
    EXPECT_EQ(r.dice, 1.0);
    EXPECT_EQ(r.hd_mm, 0.0);
    EXPECT_EQ(r.mad_mm, 0.0);
  }
}

TEST(Evaluate, ShiftedTruthHausdorff) {
  const Eigen::Vector3d sp(0.8, 1.0, 1.0);
  const auto rep = evaluate(box_truth(sp, 2), box_truth(sp, 0));
  for (const auto& r : rep.rows) EXPECT_NEAR(r.hd_mm, 1.6, 1e-12) << r.boundary;
  for (const auto& s : rep.slices) {
    EXPECT_GE(s.dice, 0.0);
    EXPECT_LE(s.dice, 1.0);
  }
}

TEST(Evaluate, ReportTable) {
  const Mask4 t = box_truth(Eigen::Vector3d::Ones(), 0);
  const std::string text = evaluate(t, t).to_text();
  EXPECT_EQ(text.rfind("frame boundary dice hd_mm mad_mm\n0 endo 1.000000 0.000000 0.000000\n", 0), 0u);
  EXPECT_THROW(evaluate(t, Mask4(Dims4{2, 2, 2, 1})), SizeError);
}

TEST(Segment, IdealClassesStaticSequence) {
  PhantomConfig cfg = small();
  cfg.contraction = 0.0;
  const auto ph = generate_phantom(cfg);
  PipelineConfig pc;
  const auto res = segment_classes(ideal_classes(ph.truth), pc);
  EXPECT_NEAR(res.ejection_fraction, 0.0, 1e-6);
  const auto rep = evaluate(res, ph.truth);
  EXPECT_GE(rep.mean_dice("endo"), 0.95);
  EXPECT_GE(rep.mean_dice("epi"), 0.95);
}

TEST(Segment, NestingAndRefinementContainment) {
  const auto ph = generate_phantom(small());
  PipelineConfig pc;
  const auto res = segment_classes(ideal_classes(ph.truth), pc);
  for (std::size_t i = 0; i < res.endo.size(); ++i)
    if (res.endo[i]) ASSERT_TRUE(res.epi[i]);
  EXPECT_GT(res.ejection_fraction, 0.0);
  EXPECT_LE(res.ejection_fraction, 1.0);
  for (int t = 0; t < res.endo.dims().nt; ++t) {
    const BinaryFrame endo = select_label(res.endo, t, Label::blood_pool);
    for (const auto& sf : res.trace[static_cast<std::size_t>(t)].endo) {
      const auto rect = enclosing_rectangle(sf.fit);
      const BinarySlice s = slice_of(endo, sf.z);
      for (int y = 0; y < s.cols(); ++y)
        for (int x = 0; x < s.rows(); ++x)
          if (s(x, y)) ASSERT_TRUE(rect.contains(Eigen::Vector2d(x, y)));
    }
  }
}

TEST(Segment, NoCavityIsError) {
  Mask4 c(Dims4{16, 16, 16, 2}, Eigen::Vector3d::Ones(), 0.0, std::uint8_t{2});
  EXPECT_THROW(segment_classes(c, PipelineConfig{}), SegmentationError);
}

TEST(Segment, ModelMapMismatchIsConfigError) {
  const auto ph = generate_phantom(small());
  GaussianNBModel m;
  m.map_config = "window=9,9,9 scales=4 pad=mirror h_min=0.01 h_max=1 m=2";
  EXPECT_THROW(segment(ph.volume, m, PipelineConfig{}), ConfigError);
}

TEST(Segment, BothRefineModesTrackIdealClasses) {
  const auto ph = generate_phantom(small());
  PipelineConfig pc;
  for (Refine r : {Refine::ellipse, Refine::none}) {
    pc.refine = r;
    const auto rep = evaluate(segment_classes(ideal_classes(ph.truth), pc), ph.truth);
    EXPECT_GE(rep.mean_dice("endo"), 0.9) << to_string(r);
    EXPECT_GE(rep.mean_dice("epi"), 0.9) << to_string(r);
  }
  EXPECT_EQ(parse_refine("none"), Refine::none);
  EXPECT_EQ(to_string(parse_refine("ellipse")), "ellipse");
  EXPECT_THROW(parse_refine("mesh"), ConfigError);
}

TEST(Training, PatchProtocol) {
  const auto ph = generate_phantom(small());
  const auto map = compute_fractal_map(ph.volume, FractalMapConfig{});
  TrainingProtocol proto;
  proto.patches_per_class = 4;
  proto.seed = 9;
  const std::array<int, 3> patch{3, 5, 3};
  const auto samples = collect_training_samples(map, ph.truth, patch, proto);
  ASSERT_EQ(samples.size(), 2u * 4u * 45u);
  int blood = 0;
  for (const auto& s : samples) blood += s.label == Label::blood_pool;
  EXPECT_EQ(blood, 4 * 45);
  const auto again = collect_training_samples(map, ph.truth, patch, proto);
  for (std::size_t i = 0; i < samples.size(); ++i) ASSERT_EQ(samples[i].features.vector(), again[i].features.vector());
  const auto tm = train_on_truth(map, ph.truth, patch, proto);
  EXPECT_NEAR(tm.voxel_fraction, 360.0 / static_cast<double>(ph.truth.size()), 1e-15);
  EXPECT_EQ(tm.model.map_config, map.config.describe());
}

TEST(Training, SegmentsReducedPhantom) {
  PhantomConfig cfg;
  cfg.dims = Dims4{64, 64, 64, 2};
  cfg.endo_semi_axes_mm = {16, 16, 40};
  cfg.wall_thickness_mm = 9;
  const auto ph = generate_phantom(cfg);
  PipelineConfig pc;
  pc.map.window = {5, 5, 5};
  pc.map.scales = 3;
  const auto map = compute_fractal_map(ph.volume, pc.map);
  TrainingProtocol proto;
  proto.patches_per_class = 20;
  const auto tm = train_on_truth(map, ph.truth, {5, 5, 5}, proto);
  const auto res = segment(ph.volume, tm.model, pc);
  const auto rep = evaluate(res, ph.truth);
  EXPECT_GE(rep.mean_dice("endo"), 0.8);
  EXPECT_GE(rep.mean_dice("epi"), 0.8);
}
