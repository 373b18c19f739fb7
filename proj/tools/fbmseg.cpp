// fbmseg command-line front end.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fbmseg/bayes.hpp"
#include "fbmseg/fbm.hpp"
#include "fbmseg/fractal_map.hpp"
#include "fbmseg/hurst.hpp"
#include "fbmseg/io.hpp"
#include "fbmseg/moments.hpp"
#include "fbmseg/parallel.hpp"
#include "fbmseg/phantom.hpp"
#include "fbmseg/pipeline.hpp"

namespace {

using namespace fbmseg;

struct MapFlags {
  std::vector<int> window{7, 9, 7};
  int scales = 4;
  std::string pad = "mirror";

  void add(CLI::App* cmd) {
    cmd->add_option("--window", window, "Window extents X,Y,Z (odd)")->delimiter(',')->expected(3)->capture_default_str();
    cmd->add_option("--scales", scales, "Number of probed scales")->capture_default_str();
    cmd->add_option("--pad", pad, "Window padding")->check(CLI::IsMember({"mirror", "clamp"}))->capture_default_str();
  }
  FractalMapConfig config() const {
    FractalMapConfig cfg;
    cfg.window = {window[0], window[1], window[2]};
    cfg.scales = scales;
    cfg.padding = parse_padding(pad);
    cfg.validate();
    return cfg;
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractal (fBm) texture segmentation of ventricle-like structures in 3-D + time volumes"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", std::string(FBMSEG_VERSION));
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores); results do not depend on it")->check(CLI::NonNegativeNumber);

  // synth-1d
  auto* s1 = app.add_subcommand("synth-1d", "Synthesize a 1-D fBm path");
  double s1_h = 0.5, s1_sigma = 1.0;
  int s1_n = 1024;
  std::int64_t s1_b = -1;
  std::uint64_t s1_seed = 0;
  std::string s1_out;
  s1->add_option("--h", s1_h, "Hurst index in (0,1)")->required();
  s1->add_option("--n", s1_n, "Number of increments")->capture_default_str();
  s1->add_option("--b", s1_b, "History truncation (-1 = 4n)")->capture_default_str();
  s1->add_option("--sigma", s1_sigma, "Unit-increment standard deviation")->capture_default_str();
  s1->add_option("--seed", s1_seed, "Random seed")->capture_default_str();
  s1->add_option("--out", s1_out, "Output volume header")->required();

  // synth-field
  auto* sf = app.add_subcommand("synth-field", "Synthesize a 3-D fBm field");
  double sf_h = 0.5, sf_outer = 0.0;
  std::vector<int> sf_dims{64, 64, 64};
  std::uint64_t sf_seed = 0;
  std::string sf_out;
  sf->add_option("--h", sf_h, "Hurst index in (0,1)")->required();
  sf->add_option("--dims", sf_dims, "Extents X,Y,Z")->delimiter(',')->expected(3)->capture_default_str();
  sf->add_option("--seed", sf_seed, "Random seed")->capture_default_str();
  sf->add_option("--outer-scale", sf_outer, "Spectral outer scale in voxels (0 = none)")->capture_default_str();
  sf->add_option("--out", sf_out, "Output volume header")->required();

  // hurst
  auto* hu = app.add_subcommand("hurst", "Global Hurst estimate of a series or of frame 0 of a volume");
  std::string hu_in;
  int hu_scales = 16;
  hu->add_option("--in", hu_in, "Input volume header")->required();
  hu->add_option("--scales", hu_scales, "Number of probed scales")->capture_default_str();

  // map
  auto* mp = app.add_subcommand("map", "Per-voxel fractal dimension map");
  std::string mp_in, mp_out, mp_rss;
  MapFlags mp_flags;
  mp->add_option("--in", mp_in, "Input volume header")->required();
  mp->add_option("--out", mp_out, "Output fd volume header")->required();
  mp->add_option("--rss", mp_rss, "Optional output residual volume header");
  mp_flags.add(mp);

  // train
  auto* tr = app.add_subcommand("train", "Train the voxel classifier on labeled patches");
  std::string tr_in, tr_labels, tr_out;
  int tr_patches = 35, tr_frame = 0;
  std::uint64_t tr_seed = 0;
  std::vector<int> tr_patch{7, 9, 7};
  MapFlags tr_flags;
  tr->add_option("--in", tr_in, "Input volume header")->required();
  tr->add_option("--labels", tr_labels, "Ground-truth mask header")->required();
  tr->add_option("--patches", tr_patches, "Patches per class")->capture_default_str();
  tr->add_option("--patch", tr_patch, "Feature patch extents X,Y,Z")->delimiter(',')->expected(3)->capture_default_str();
  tr->add_option("--frame", tr_frame, "Training frame")->capture_default_str();
  tr->add_option("--seed", tr_seed, "Random seed")->capture_default_str();
  tr->add_option("--out", tr_out, "Output model file")->required();
  tr_flags.add(tr);

  // segment
  auto* sg = app.add_subcommand("segment", "Segment cavity and wall of every frame");
  std::string sg_in, sg_model, sg_endo, sg_epi, sg_report, sg_refine = "ellipse";
  int sg_min = 50, sg_closing = 1, sg_base = -1;
  sg->add_option("--in", sg_in, "Input volume header")->required();
  sg->add_option("--model", sg_model, "Model file")->required();
  sg->add_option("--out-endo", sg_endo, "Output endocardial mask header")->required();
  sg->add_option("--out-epi", sg_epi, "Output epicardial mask header (1 = cavity, 2 = wall)")->required();
  sg->add_option("--report", sg_report, "Optional volume report");
  sg->add_option("--min-component", sg_min, "Smallest kept 3-D component (voxels)")->capture_default_str();
  sg->add_option("--closing", sg_closing, "Closing radius (voxels)")->capture_default_str();
  sg->add_option("--refine", sg_refine, "Slice refinement")->check(CLI::IsMember({"ellipse", "none"}))->capture_default_str();
  sg->add_option("--base-slice", sg_base, "Base slice index (-1 = auto)")->capture_default_str();

  // eval
  auto* ev = app.add_subcommand("eval", "Compare a segmentation with ground truth");
  std::string ev_pred, ev_truth, ev_report;
  ev->add_option("--pred", ev_pred, "Predicted mask header")->required();
  ev->add_option("--truth", ev_truth, "Ground-truth mask header")->required();
  ev->add_option("--report", ev_report, "Output report")->required();

  // moments
  auto* mo = app.add_subcommand("moments", "Per-slice ellipse fits and disc-stack volume of a label");
  std::string mo_in;
  int mo_label = 1, mo_frame = 0;
  mo->add_option("--in", mo_in, "Mask header")->required();
  mo->add_option("--label", mo_label, "Label value")->check(CLI::Range(0, 2))->capture_default_str();
  mo->add_option("--frame", mo_frame, "Frame index")->capture_default_str();

  // phantom
  auto* ph = app.add_subcommand("phantom", "Generate a synthetic speckled ventricle sequence");
  std::string ph_vol, ph_mask;
  PhantomConfig ph_cfg;
  std::vector<int> ph_dims{ph_cfg.dims.nx, ph_cfg.dims.ny, ph_cfg.dims.nz, ph_cfg.dims.nt};
  ph->add_option("--out-vol", ph_vol, "Output volume header")->required();
  ph->add_option("--out-mask", ph_mask, "Output ground-truth mask header")->required();
  ph->add_option("--dims", ph_dims, "Extents X,Y,Z,T")->delimiter(',')->expected(4)->capture_default_str();
  ph->add_option("--seed", ph_cfg.seed, "Random seed")->capture_default_str();
  ph->add_option("--contraction", ph_cfg.contraction, "Peak cavity shortening in [0,1)")->capture_default_str();
  ph->add_option("--white-fraction", ph_cfg.speckle_white_fraction, "White-noise share of the speckle")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    set_max_threads(threads);

    if (*s1) {
      const FbmPath p = synth_fbm_1d(s1_n, s1_h, s1_b, s1_sigma, s1_seed);
      const int n = static_cast<int>(p.samples.size());
      save_volume(Volume4(Dims4{n, 1, 1, 1}, Eigen::Vector3d::Ones(), 0.0, p.samples.cast<float>().array().eval()), s1_out);
      std::cout << "n=" << n << " h=" << fmt(p.h) << " b=" << p.truncation_b << " seed=" << p.seed << '\n';
    } else if (*sf) {
      FieldOptions opt;
      opt.outer_scale = sf_outer;
      save_volume(synth_fbm_field({sf_dims[0], sf_dims[1], sf_dims[2]}, sf_h, sf_seed, opt), sf_out);
      std::cout << "dims=" << sf_dims[0] << ',' << sf_dims[1] << ',' << sf_dims[2] << " h=" << fmt(sf_h) << " seed=" << sf_seed << '\n';
    } else if (*hu) {
      const Volume4 v = load_volume(hu_in);
      const auto& d = v.dims();
      Variogram vg;
      if (d.ny == 1 && d.nz == 1 && d.nt == 1) {
        std::vector<double> series(v.array().data(), v.array().data() + v.size());
        vg = variogram(std::span<const double>(series), hu_scales);
      } else {
        vg = variogram(v.frame(0), hu_scales);
      }
      const VariogramFit f = fit_hurst(vg);
      std::cout << "h=" << fmt(f.h) << " log_c=" << fmt(f.log_c) << " rss=" << fmt(f.rss) << " n_scales=" << f.n_scales << '\n';
    } else if (*mp) {
      const FractalMap<float> m = compute_fractal_map(load_volume(mp_in), mp_flags.config());
      save_volume(m.fd, mp_out);
      if (!mp_rss.empty()) save_volume(m.rss, mp_rss);
      const MapStatistics s = map_statistics(m);
      std::cout << "mean_fd=" << fmt(s.mean) << " var_fd=" << fmt(s.variance) << " min_fd=" << fmt(s.min) << " max_fd=" << fmt(s.max)
                << " config=\"" << m.config.describe() << "\"\n";
    } else if (*tr) {
      const Volume4 v = load_volume(tr_in);
      const Mask4 truth = load_mask(tr_labels);
      const FractalMap<float> m = compute_fractal_map(v, tr_flags.config());
      TrainingProtocol proto;
      proto.patches_per_class = tr_patches;
      proto.frame = tr_frame;
      proto.seed = tr_seed;
      const TrainedModel tm = train_on_truth(m, truth, {tr_patch[0], tr_patch[1], tr_patch[2]}, proto);
      save_model(tm.model, tr_out);
      std::cout << "n_samples=" << tm.n_samples << " voxel_fraction=" << fmt(tm.voxel_fraction)
                << " prior_blood_pool=" << fmt(tm.model.blood.prior) << " prior_myocardium=" << fmt(tm.model.myo.prior) << '\n';
    } else if (*sg) {
      const Volume4 v = load_volume(sg_in);
      const GaussianNBModel model = load_model(sg_model);
      PipelineConfig cfg;
      cfg.map = FractalMapConfig::parse(model.map_config);
      cfg.model_path = sg_model;
      cfg.post.min_component_voxels = sg_min;
      cfg.post.closing_radius = sg_closing;
      cfg.refine = parse_refine(sg_refine);
      cfg.base_slice = sg_base;
      const SegmentationResult r = segment(v, model, cfg);
      save_mask(r.endo, sg_endo);
      save_mask(r.labels(), sg_epi);
      std::ostringstream rep;
      rep << "frame volume_mm3 base_slice\n";
      for (std::size_t t = 0; t < r.cavity_volume_mm3.size(); ++t)
        rep << t << ' ' << fmt(r.cavity_volume_mm3[t]) << ' ' << r.trace[t].base_slice << '\n';
      rep << "ejection_fraction=" << fmt(r.ejection_fraction) << '\n';
      if (!sg_report.empty()) write_text(sg_report, rep.str());
      std::cout << "ejection_fraction=" << fmt(r.ejection_fraction) << " frames=" << r.cavity_volume_mm3.size() << '\n';
    } else if (*ev) {
      const EvaluationReport rep = evaluate(load_mask(ev_pred), load_mask(ev_truth));
      write_text(ev_report, rep.to_text());
      std::cout << "mean_endo_dice=" << fmt(rep.mean_dice("endo")) << " mean_epi_dice=" << fmt(rep.mean_dice("epi")) << '\n';
    } else if (*mo) {
      const Mask4 m = load_mask(mo_in);
      if (mo_frame < 0 || mo_frame >= m.dims().nt) throw DomainError("frame out of range");
      const BinaryFrame f = select_label(m, mo_frame, static_cast<Label>(mo_label));
      std::cout << "z xc yc theta_deg l w\n";
      for (int z = 0; z < f.dims()[2]; ++z) {
        const BinarySlice s = slice_of(f, z);
        if ((s != 0).count() < 3) continue;
        const EllipseFit e = fit_ellipse(s);
        std::cout << z << ' ' << fmt(e.centroid.x()) << ' ' << fmt(e.centroid.y()) << ' ' << fmt(e.theta * 180.0 / std::numbers::pi) << ' '
                  << fmt(e.l) << ' ' << fmt(e.w) << '\n';
      }
      std::cout << "volume_mm3=" << fmt(disc_stack_volume(m, static_cast<Label>(mo_label), mo_frame)) << '\n';
    } else if (*ph) {
      ph_cfg.dims = Dims4{ph_dims[0], ph_dims[1], ph_dims[2], ph_dims[3]};
      const Phantom p = generate_phantom(ph_cfg);
      save_volume(p.volume, ph_vol);
      save_mask(p.truth, ph_mask);
      std::cout << "dims=" << ph_dims[0] << ',' << ph_dims[1] << ',' << ph_dims[2] << ',' << ph_dims[3] << " seed=" << ph_cfg.seed
                << " contraction=" << fmt(ph_cfg.contraction) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "fbmseg: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
