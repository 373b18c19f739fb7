#include "fbmseg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fbmseg {
namespace {

void check_same(const BinaryFrame& a, const BinaryFrame& b) {
  if (a.dims() != b.dims()) throw SizeError("metrics: frame dims differ");
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lower envelope of parabolas (q*h - x)^2 + f[q] over finite f (Felzenszwalb
// and Huttenlocher), sampled at x = p*h.
void edt_1d(const double* f, double* out, int n, double h, std::vector<int>& v, std::vector<double>& zb) {
  v.resize(static_cast<std::size_t>(n));
  zb.resize(static_cast<std::size_t>(n) + 1);
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == kInf) continue;
    const double fq = f[q] + (q * h) * (q * h);
    while (k >= 0) {
      const int p = v[static_cast<std::size_t>(k)];
      const double s = (fq - (f[p] + (p * h) * (p * h))) / (2.0 * h * (q - p));
      if (s <= zb[static_cast<std::size_t>(k)]) {
        --k;
      } else {
        ++k;
        v[static_cast<std::size_t>(k)] = q;
        zb[static_cast<std::size_t>(k)] = s;
        zb[static_cast<std::size_t>(k) + 1] = kInf;
        break;
      }
    }
    if (k < 0) {
      k = 0;
      v[0] = q;
      zb[0] = -kInf;
      zb[1] = kInf;
    }
  }
  if (k < 0) {
    std::fill(out, out + n, kInf);
    return;
  }
  int j = 0;
  for (int p = 0; p < n; ++p) {
    while (zb[static_cast<std::size_t>(j) + 1] < p * h) ++j;
    const int q = v[static_cast<std::size_t>(j)];
    const double d = (p - q) * h;
    out[p] = d * d + f[q];
  }
}

}  // namespace

BinaryFrame boundary_mask(const BinaryFrame& f) {
  const auto& d = f.dims();
  BinaryFrame out(d);
  static constexpr int nb[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  for (int z = 0; z < d[2]; ++z)
    for (int y = 0; y < d[1]; ++y)
      for (int x = 0; x < d[0]; ++x) {
        if (!f(x, y, z)) continue;
        for (const auto& o : nb) {
          const int xx = x + o[0], yy = y + o[1], zz = z + o[2];
          if (f.contains(xx, yy, zz) && !f(xx, yy, zz)) {
            out(x, y, z) = 1;
            break;
          }
        }
      }
  return out;
}

std::vector<Eigen::Vector3d> boundary_points(const BinaryFrame& f, const Eigen::Vector3d& spacing_mm) {
  const BinaryFrame b = boundary_mask(f);
  const auto& d = f.dims();
  std::vector<Eigen::Vector3d> pts;
  for (int z = 0; z < d[2]; ++z)
    for (int y = 0; y < d[1]; ++y)
      for (int x = 0; x < d[0]; ++x)
        if (b(x, y, z)) pts.emplace_back(x * spacing_mm.x(), y * spacing_mm.y(), z * spacing_mm.z());
  return pts;
}

double dice(const BinaryFrame& a, const BinaryFrame& b) {
  check_same(a, b);
  std::size_t na = 0, nb = 0, both = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool pa = a[i] != 0, pb = b[i] != 0;
    na += pa;
    nb += pb;
    both += pa && pb;
  }
  if (na + nb == 0) return 1.0;
  return 2.0 * static_cast<double>(both) / static_cast<double>(na + nb);
}

Grid3<double> squared_distance_transform(const BinaryFrame& seeds, const Eigen::Vector3d& spacing_mm) {
  const auto& d = seeds.dims();
  Grid3<double> g(d, kInf);
  for (std::size_t i = 0; i < seeds.size(); ++i)
    if (seeds[i]) g[i] = 0.0;
  std::vector<int> v;
  std::vector<double> zb, in, out;
  for (int axis = 0; axis < 3; ++axis) {
    const int n = d[static_cast<std::size_t>(axis)];
    const double h = spacing_mm[axis];
    in.resize(static_cast<std::size_t>(n));
    out.resize(static_cast<std::size_t>(n));
    const int a1 = axis == 0 ? 1 : 0, a2 = axis == 2 ? 1 : 2;
    for (int j = 0; j < d[static_cast<std::size_t>(a2)]; ++j)
      for (int i = 0; i < d[static_cast<std::size_t>(a1)]; ++i) {
        std::array<int, 3> c{};
        c[static_cast<std::size_t>(a1)] = i;
        c[static_cast<std::size_t>(a2)] = j;
        for (int p = 0; p < n; ++p) {
          c[static_cast<std::size_t>(axis)] = p;
          in[static_cast<std::size_t>(p)] = g(c[0], c[1], c[2]);
        }
        edt_1d(in.data(), out.data(), n, h, v, zb);
        for (int p = 0; p < n; ++p) {
          c[static_cast<std::size_t>(axis)] = p;
          g(c[0], c[1], c[2]) = out[static_cast<std::size_t>(p)];
        }
      }
  }
  return g;
}

SurfaceDistance surface_distance(const BinaryFrame& a, const BinaryFrame& b, const Eigen::Vector3d& spacing_mm) {
  check_same(a, b);
  const BinaryFrame ba = boundary_mask(a), bb = boundary_mask(b);
  if (!(ba.array() != 0).any() || !(bb.array() != 0).any()) throw DomainError("surface distance: empty boundary");
  const Grid3<double> da = squared_distance_transform(ba, spacing_mm);
  const Grid3<double> db = squared_distance_transform(bb, spacing_mm);

  auto directed = [](const BinaryFrame& from, const Grid3<double>& to, double& max_d, double& mean_d) {
    double sum = 0.0, mx = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < from.size(); ++i)
      if (from[i]) {
        const double dist = std::sqrt(to[i]);
        sum += dist;
        mx = std::max(mx, dist);
        ++n;
      }
    max_d = mx;
    mean_d = sum / static_cast<double>(n);
  };
  double hab, mab, hba, mba;
  directed(ba, db, hab, mab);
  directed(bb, da, hba, mba);
  return {std::max(hab, hba), 0.5 * (mab + mba)};
}

double hausdorff(const BinaryFrame& a, const BinaryFrame& b, const Eigen::Vector3d& spacing_mm) {
  return surface_distance(a, b, spacing_mm).hausdorff;
}

double mad(const BinaryFrame& a, const BinaryFrame& b, const Eigen::Vector3d& spacing_mm) {
  return surface_distance(a, b, spacing_mm).mad;
}

}  // namespace fbmseg
