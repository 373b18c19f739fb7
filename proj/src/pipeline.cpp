#include "fbmseg/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include "fbmseg/metrics.hpp"
#include "fbmseg/parallel.hpp"
#include "fbmseg/rng.hpp"

namespace fbmseg {

Refine parse_refine(const std::string& s) {
  if (s == "ellipse") return Refine::ellipse;
  if (s == "none") return Refine::none;
  throw ConfigError("unknown refine mode `" + s + "`");
}

std::string to_string(Refine r) { return r == Refine::ellipse ? "ellipse" : "none"; }

void PipelineConfig::validate() const {
  map.validate();
  post.validate();
  if (base_slice < -1) throw ConfigError("base slice must be -1 (auto) or a slice index");
}

Mask4 SegmentationResult::labels() const {
  Mask4 out = Mask4::like(epi);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = endo[i] ? 1 : (epi[i] ? 2 : 0);
  return out;
}

Mask4 classify(const FractalMap<float>& map, const GaussianNBModel& model) {
  Mask4 out = Mask4::like(map.fd);
  for (int t = 0; t < map.fd.dims().nt; ++t) {
    const auto feats = dense_features(map, t, model.patch);
    auto dst = out.frame_span(t);
    parallel_for(dst.size(), [&](std::size_t i0, std::size_t i1) {
      for (std::size_t i = i0; i < i1; ++i)
        dst[i] = static_cast<std::uint8_t>(predict(model, Vector5d(feats.col(static_cast<Eigen::Index>(i)))).label);
    });
  }
  return out;
}

namespace {

constexpr double kMaxGrowth = 1.2;

int count(const BinarySlice& s) { return static_cast<int>((s != 0).count()); }

BinarySlice refine_slice(const BinarySlice& s, const EllipseFit& fit) {
  const BinarySlice rect = rasterize_rect(enclosing_rectangle(fit), static_cast<int>(s.rows()), static_cast<int>(s.cols()));
  return (s != 0 && rect != 0).cast<std::uint8_t>();
}

int largest(const Components2D& c, bool skip_border) {
  int best = 0, best_area = 0;
  for (int i = 0; i < c.count(); ++i) {
    if (skip_border && c.touches_border[static_cast<std::size_t>(i)]) continue;
    if (c.area[static_cast<std::size_t>(i)] > best_area) {
      best_area = c.area[static_cast<std::size_t>(i)];
      best = i + 1;
    }
  }
  return best;
}

// Slice-by-slice tracking from the base slice in both directions. Each slice
// keeps the component under the previous centroid, clipped to the previous
// enclosing element; when that component is missing or leaks to the border,
// the search falls back to the neighborhood of the previous slice's mask.
BinaryFrame walk(const BinaryFrame& candidate, int base, const BinarySlice& start, const PipelineConfig& cfg) {
  BinaryFrame out(candidate.dims());
  const int nz = candidate.dims()[2];
  const int nx = candidate.dims()[0], ny = candidate.dims()[1];
  const int grow = std::max(cfg.post.closing_radius, 1);

  BinarySlice first = fill_holes(start);
  const int base_area = count(first);
  if (base_area < 3) return out;
  EllipseFit base_fit = fit_ellipse(first);
  if (cfg.refine == Refine::ellipse) first = refine_slice(first, base_fit);
  if (count(first) < 3) return out;
  put_slice(out, base, first);

  for (int dir : {-1, 1}) {
    EllipseFit prev_fit = base_fit;
    BinarySlice prev_mask = first;
    int min_area = base_area;
    for (int z = base + dir; z >= 0 && z < nz; z += dir) {
      const BinarySlice m = slice_of(candidate, z);
      const Components2D cc = label_components(m);
      const int cx = static_cast<int>(std::lround(prev_fit.centroid.x()));
      const int cy = static_cast<int>(std::lround(prev_fit.centroid.y()));
      const int seed = (cx >= 0 && cy >= 0 && cx < nx && cy < ny) ? cc.labels(cx, cy) : 0;
      BinarySlice comp;
      if (seed == 0 || cc.touches_border[static_cast<std::size_t>(seed - 1)]) {
        const BinarySlice near = (m != 0 && dilate(prev_mask, grow) != 0).cast<std::uint8_t>();
        const Components2D nc = label_components(near);
        const int id = largest(nc, false);
        if (id == 0) break;
        comp = nc.select(id);
      } else {
        const OrientedRect r = enclosing_rectangle(prev_fit);
        const BinarySlice allowed = dilate(rasterize_rect(r, nx, ny), cfg.post.closing_radius);
        comp = (cc.select(seed) != 0 && allowed != 0).cast<std::uint8_t>();
      }
      comp = fill_holes(comp);
      const int area = count(comp);
      if (area < 3 || area < 0.01 * base_area) break;
      // Cross-sections shrink away from the base; growth past the smallest one seen is a leak.
      if (area > kMaxGrowth * min_area + 3) break;
      const EllipseFit fit = fit_ellipse(comp);
      if (cfg.refine == Refine::ellipse) comp = refine_slice(comp, fit);
      if (count(comp) < 3) break;
      put_slice(out, z, comp);
      prev_fit = fit;
      prev_mask = comp;
      min_area = std::min(min_area, area);
    }
  }
  return out;
}

// Postprocess the stacked discs, then refine and record each slice.
BinaryFrame finish(const BinaryFrame& raw, const PipelineConfig& cfg, std::vector<SliceFit>& trace) {
  BinaryFrame f = postprocess(raw, cfg.post);
  trace.clear();
  for (int z = 0; z < f.dims()[2]; ++z) {
    BinarySlice s = slice_of(f, z);
    const int area = count(s);
    if (area == 0) continue;
    if (area < 3) {
      put_slice(f, z, BinarySlice::Zero(s.rows(), s.cols()));
      continue;
    }
    const EllipseFit fit = fit_ellipse(s);
    if (cfg.refine == Refine::ellipse) {
      s = refine_slice(s, fit);
      put_slice(f, z, s);
    }
    trace.push_back({z, count(s), fit});
  }
  return f;
}

}  // namespace

SegmentationResult segment_classes(const Mask4& classes, const PipelineConfig& cfg) {
  cfg.validate();
  const auto& d = classes.dims();
  if (cfg.base_slice >= d.nz) throw ConfigError("base slice outside the volume");
  SegmentationResult res;
  res.endo = Mask4::like(classes);
  res.epi = Mask4::like(classes);
  res.cavity_volume_mm3.assign(static_cast<std::size_t>(d.nt), 0.0);
  res.trace.resize(static_cast<std::size_t>(d.nt));

  for (int t = 0; t < d.nt; ++t) {
    FrameTrace& tr = res.trace[static_cast<std::size_t>(t)];
    const BinaryFrame myo_raw = select_label(classes, t, Label::myocardium);
    const BinaryFrame myo = remove_small_components(close(myo_raw, cfg.post.closing_radius), cfg.post.min_component_voxels);
    BinaryFrame not_myo(myo.dims());
    not_myo.array() = (myo.array() == 0).cast<std::uint8_t>();
    const BinaryFrame blood = remove_small_components(not_myo, cfg.post.min_component_voxels);

    // Base slice: the largest enclosed cavity cross-section.
    int base = -1, base_id = 0, best = 0;
    Components2D base_cc;
    const int z0 = cfg.base_slice >= 0 ? cfg.base_slice : 0;
    const int z1 = cfg.base_slice >= 0 ? cfg.base_slice + 1 : d.nz;
    for (int z = z0; z < z1; ++z) {
      Components2D cc = label_components(slice_of(blood, z));
      const int id = largest(cc, true);
      if (id && cc.area[static_cast<std::size_t>(id - 1)] > best) {
        best = cc.area[static_cast<std::size_t>(id - 1)];
        base = z;
        base_id = id;
        base_cc = std::move(cc);
      }
    }
    if (base < 0) continue;
    tr.base_slice = base;

    const BinaryFrame endo = finish(walk(blood, base, base_cc.select(base_id), cfg), cfg, tr.endo);

    BinaryFrame wall(endo.dims());
    wall.array() = (endo.array() != 0 || myo.array() != 0).cast<std::uint8_t>();
    BinarySlice epi_start;
    {
      const BinarySlice ws = slice_of(wall, base);
      const BinarySlice es = slice_of(endo, base);
      const Components2D cc = label_components(ws);
      if (count(es) >= 3) {
        const EllipseFit f = fit_ellipse(es);
        const int id = cc.labels(static_cast<int>(std::lround(f.centroid.x())), static_cast<int>(std::lround(f.centroid.y())));
        if (id) {
          epi_start = cc.select(id);
          if (cc.touches_border[static_cast<std::size_t>(id - 1)]) {
            const BinarySlice r = rasterize_rect(enclosing_rectangle(f), static_cast<int>(ws.rows()), static_cast<int>(ws.cols()));
            epi_start = (epi_start != 0 && r != 0).cast<std::uint8_t>();
          }
        } else {
          epi_start = es;
        }
      } else {
        epi_start = BinarySlice::Zero(ws.rows(), ws.cols());
      }
    }
    BinaryFrame epi = finish(walk(wall, base, epi_start, cfg), cfg, tr.epi);
    for (std::size_t i = 0; i < epi.size(); ++i)
      if (endo[i]) epi[i] = 1;

    auto de = res.endo.frame_span(t);
    auto dp = res.epi.frame_span(t);
    for (std::size_t i = 0; i < endo.size(); ++i) {
      de[i] = endo[i] ? 1 : 0;
      dp[i] = epi[i] ? 1 : 0;
    }
    res.cavity_volume_mm3[static_cast<std::size_t>(t)] = disc_stack_volume(endo, classes.spacing_mm());
  }

  const auto [mn, mx] = std::minmax_element(res.cavity_volume_mm3.begin(), res.cavity_volume_mm3.end());
  if (*mx <= 0.0) throw SegmentationError("no cavity component found in any frame");
  res.ejection_fraction = (*mx - *mn) / *mx;
  return res;
}

SegmentationResult segment(const Volume4& vol, const GaussianNBModel& model, const PipelineConfig& cfg) {
  cfg.validate();
  if (model.map_config != cfg.map.describe())
    throw ConfigError("model was trained with map `" + model.map_config + "` but the pipeline uses `" + cfg.map.describe() + "`");
  const FractalMap<float> map = compute_fractal_map(vol, cfg.map);
  return segment_classes(classify(map, model), cfg);
}

std::vector<LabeledFeature> collect_training_samples(const FractalMap<float>& map, const Mask4& truth,
                                                     const std::array<int, 3>& patch, const TrainingProtocol& protocol) {
  const auto& d = map.fd.dims();
  if (truth.dims() != d) throw SizeError("training: truth and map dims differ");
  if (protocol.frame < 0 || protocol.frame >= d.nt) throw DomainError("training: frame out of range");
  if (protocol.patches_per_class < 1) throw DomainError("training: need at least one patch per class");
  const int rx = patch[0] / 2, ry = patch[1] / 2, rz = patch[2] / 2;
  if (d.nx < patch[0] || d.ny < patch[1] || d.nz < patch[2]) throw DomainError("training: patch larger than volume");
  const int t = protocol.frame;

  Rng rng(derive_seed(protocol.seed, 0x545241494E));
  std::vector<LabeledFeature> out;
  for (Label c : {Label::blood_pool, Label::myocardium}) {
    std::set<std::array<int, 3>> used;
    int found = 0;
    const int max_attempts = 2000 * protocol.patches_per_class + 100000;
    for (int attempt = 0; attempt < max_attempts && found < protocol.patches_per_class; ++attempt) {
      const int x = rx + static_cast<int>(rng.below(static_cast<std::uint64_t>(d.nx - 2 * rx)));
      const int y = ry + static_cast<int>(rng.below(static_cast<std::uint64_t>(d.ny - 2 * ry)));
      const int z = rz + static_cast<int>(rng.below(static_cast<std::uint64_t>(d.nz - 2 * rz)));
      if (truth(x, y, z, t) != static_cast<std::uint8_t>(c) || used.count({x, y, z})) continue;
      bool homogeneous = true;
      for (int k = -rz; k <= rz && homogeneous; ++k)
        for (int j = -ry; j <= ry && homogeneous; ++j)
          for (int i = -rx; i <= rx && homogeneous; ++i)
            homogeneous = truth(x + i, y + j, z + k, t) == static_cast<std::uint8_t>(c);
      if (!homogeneous) continue;
      used.insert({x, y, z});
      ++found;
      for (int k = -rz; k <= rz; ++k)
        for (int j = -ry; j <= ry; ++j)
          for (int i = -rx; i <= rx; ++i) out.push_back({extract_features(map, x + i, y + j, z + k, t, patch), c});
    }
    if (found < protocol.patches_per_class)
      throw TrainingError("training: could not place enough homogeneous patches of class " + std::to_string(static_cast<int>(c)));
  }
  return out;
}

TrainedModel train_on_truth(const FractalMap<float>& map, const Mask4& truth, const std::array<int, 3>& patch,
                            const TrainingProtocol& protocol) {
  const auto samples = collect_training_samples(map, truth, patch, protocol);
  TrainOptions opt;
  opt.patch = patch;
  opt.map_config = map.config.describe();
  TrainedModel tm;
  tm.model = train(samples, opt);
  tm.n_samples = samples.size();
  tm.voxel_fraction = static_cast<double>(samples.size()) / static_cast<double>(truth.size());
  return tm;
}

EvaluationReport evaluate(const Mask4& pred, const Mask4& truth) {
  if (pred.dims() != truth.dims()) throw SizeError("evaluate: prediction and truth dims differ");
  const auto& d = truth.dims();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EvaluationReport rep;
  for (int t = 0; t < d.nt; ++t) {
    for (const std::string boundary : {"endo", "epi"}) {
      const bool endo = boundary == "endo";
      const BinaryFrame p = endo ? select_label(pred, t, Label::blood_pool) : select_foreground(pred, t);
      const BinaryFrame g = endo ? select_label(truth, t, Label::blood_pool) : select_foreground(truth, t);
      BoundaryScore row{t, boundary, dice(p, g), nan, nan};
      try {
        const SurfaceDistance sd = surface_distance(p, g, truth.spacing_mm());
        row.hd_mm = sd.hausdorff;
        row.mad_mm = sd.mad;
      } catch (const DomainError&) {
      }
      rep.rows.push_back(row);
      for (int z = 0; z < d.nz; ++z) {
        const BinarySlice ps = slice_of(p, z), gs = slice_of(g, z);
        const auto np = (ps != 0).count(), ng = (gs != 0).count();
        if (np + ng == 0) continue;
        const auto both = (ps != 0 && gs != 0).count();
        rep.slices.push_back({t, boundary, z, 2.0 * static_cast<double>(both) / static_cast<double>(np + ng)});
      }
    }
  }
  return rep;
}

EvaluationReport evaluate(const SegmentationResult& result, const Mask4& truth) { return evaluate(result.labels(), truth); }

double EvaluationReport::mean_dice(const std::string& boundary) const {
  double s = 0.0;
  int n = 0;
  for (const auto& r : rows)
    if (r.boundary == boundary) {
      s += r.dice;
      ++n;
    }
  return n ? s / n : std::numeric_limits<double>::quiet_NaN();
}

std::string EvaluationReport::to_text() const {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6);
  os << "frame boundary dice hd_mm mad_mm\n";
  for (const auto& r : rows) os << r.frame << ' ' << r.boundary << ' ' << r.dice << ' ' << r.hd_mm << ' ' << r.mad_mm << '\n';
  os << "\nframe boundary z dice\n";
  for (const auto& s : slices) os << s.frame << ' ' << s.boundary << ' ' << s.z << ' ' << s.dice << '\n';
  return os.str();
}

}  // namespace fbmseg
