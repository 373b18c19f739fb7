#include "fbmseg/phantom.hpp"

#include <cmath>
#include <numbers>

#include "fbmseg/fbm.hpp"
#include "fbmseg/rng.hpp"

namespace fbmseg {
namespace {

struct Shape {
  double cx, cy, zb;    // base-plane center, mm
  Eigen::Vector3d endo; // semi-axes, mm
  Eigen::Vector3d epi;
};

Shape shape_at(const PhantomConfig& cfg, int t) {
  const auto& d = cfg.dims;
  Shape s;
  s.cx = 0.5 * (d.nx - 1) * cfg.spacing_mm.x();
  s.cy = 0.5 * (d.ny - 1) * cfg.spacing_mm.y();
  s.zb = (d.nz - 1) * cfg.spacing_mm.z();
  s.endo = cfg.endo_semi_axes_mm * cavity_scale(cfg, t);
  s.epi = s.endo.array() + cfg.wall_thickness_mm;
  return s;
}

bool inside(const Eigen::Vector3d& p, double cx, double cy, double zb, const Eigen::Vector3d& ax) {
  if (p.z() > zb) return false;
  const double u = (p.x() - cx) / ax.x(), v = (p.y() - cy) / ax.y(), w = (p.z() - zb) / ax.z();
  return u * u + v * v + w * w <= 1.0;
}

}  // namespace

void PhantomConfig::validate() const {
  if (!dims.valid() || dims.nx < 8 || dims.ny < 8 || dims.nz < 8) throw ConfigError("phantom: dims too small");
  if (!(spacing_mm.array() > 0.0).all()) throw ConfigError("phantom: spacing must be positive");
  if (!(endo_semi_axes_mm.array() > 0.0).all()) throw ConfigError("phantom: semi-axes must be positive");
  if (!(wall_thickness_mm > 0.0)) throw ConfigError("phantom: wall thickness must be positive");
  if (!(contraction >= 0.0 && contraction < 1.0)) throw ConfigError("phantom: contraction must be in [0, 1)");
  for (double h : {h_background, h_blood, h_myocardium})
    if (!(h > 0.0 && h < 1.0)) throw ConfigError("phantom: Hurst indices must be in (0, 1)");
  for (double m : {mean_background, mean_blood, mean_myocardium})
    if (!(m > 0.0)) throw ConfigError("phantom: intensity means must be positive");
  if (!(speckle_white_fraction >= 0.0 && speckle_white_fraction <= 1.0)) throw ConfigError("phantom: white fraction must be in [0, 1]");
  if (!(texture_outer_scale >= 0.0)) throw ConfigError("phantom: outer scale must be >= 0");

  // The end-diastolic epicardium, the largest shape, must stay off the border.
  const Shape s = shape_at(*this, 0);
  const Eigen::Vector3d ext(dims.nx - 1, dims.ny - 1, dims.nz - 1);
  const Eigen::Vector3d span_mm = ext.cwiseProduct(spacing_mm);
  if (s.cx - s.epi.x() < spacing_mm.x() || s.cx + s.epi.x() > span_mm.x() - spacing_mm.x() ||
      s.cy - s.epi.y() < spacing_mm.y() || s.cy + s.epi.y() > span_mm.y() - spacing_mm.y() ||
      s.zb - s.epi.z() < spacing_mm.z())
    throw ConfigError("phantom: ventricle does not fit inside the volume");
}

double cavity_scale(const PhantomConfig& cfg, int t) {
  const double s = std::sin(std::numbers::pi * t / cfg.dims.nt);
  return 1.0 - cfg.contraction * s * s;
}

double analytic_cavity_volume(const PhantomConfig& cfg, int t) {
  const Eigen::Vector3d a = cfg.endo_semi_axes_mm * cavity_scale(cfg, t);
  return 2.0 / 3.0 * std::numbers::pi * a.x() * a.y() * a.z();
}

Grid3<std::uint8_t> phantom_labels(const PhantomConfig& cfg, int t) {
  const Shape s = shape_at(cfg, t);
  const auto& d = cfg.dims;
  Grid3<std::uint8_t> lab(Dims3{d.nx, d.ny, d.nz});
  for (int z = 0; z < d.nz; ++z)
    for (int y = 0; y < d.ny; ++y)
      for (int x = 0; x < d.nx; ++x) {
        const Eigen::Vector3d p = Eigen::Vector3d(x, y, z).cwiseProduct(cfg.spacing_mm);
        if (inside(p, s.cx, s.cy, s.zb, s.endo))
          lab(x, y, z) = static_cast<std::uint8_t>(Label::blood_pool);
        else if (inside(p, s.cx, s.cy, s.zb, s.epi))
          lab(x, y, z) = static_cast<std::uint8_t>(Label::myocardium);
      }
  return lab;
}

Phantom generate_phantom(const PhantomConfig& cfg) {
  cfg.validate();
  const auto& d = cfg.dims;
  const Dims3 fd{d.nx, d.ny, d.nz};
  const std::size_t n = d.frame_size();
  FieldOptions opt;
  opt.outer_scale = cfg.texture_outer_scale;

  // Unit-mean Rayleigh speckle per class.
  const double hs[3] = {cfg.h_background, cfg.h_blood, cfg.h_myocardium};
  const double means[3] = {cfg.mean_background, cfg.mean_blood, cfg.mean_myocardium};
  const double eps = cfg.speckle_white_fraction;
  const double a = std::sqrt(1.0 - eps), b = std::sqrt(eps);
  const double norm = std::sqrt(std::numbers::pi / 2.0);
  std::array<Eigen::ArrayXd, 3> speckle;
  for (int c = 0; c < 3; ++c) {
    const std::uint64_t base = derive_seed(cfg.seed, 100 + static_cast<std::uint64_t>(c));
    Eigen::ArrayXd xs = fbm_texture(fd, hs[c], derive_seed(base, 1), opt).array();
    Eigen::ArrayXd ys = fbm_texture(fd, hs[c], derive_seed(base, 2), opt).array();
    if (eps > 0.0) {
      Rng rng(derive_seed(base, 3));
      for (Eigen::Index i = 0; i < xs.size(); ++i) {
        xs[i] = a * xs[i] + b * rng.normal();
        ys[i] = a * ys[i] + b * rng.normal();
      }
    }
    speckle[static_cast<std::size_t>(c)] = (xs.square() + ys.square()).sqrt() / norm;
  }

  Phantom ph{Volume4(d, cfg.spacing_mm, cfg.frame_interval_s), Mask4(d, cfg.spacing_mm, cfg.frame_interval_s)};
  for (int t = 0; t < d.nt; ++t) {
    const auto lab = phantom_labels(cfg, t);
    auto vol = ph.volume.frame_span(t);
    auto msk = ph.truth.frame_span(t);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = lab[i];
      msk[i] = c;
      vol[i] = static_cast<float>(means[c] * speckle[c][static_cast<Eigen::Index>(i)]);
    }
  }
  return ph;
}

}  // namespace fbmseg
