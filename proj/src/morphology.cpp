#include "fbmseg/morphology.hpp"

#include <algorithm>

#include "fbmseg/parallel.hpp"

namespace fbmseg {

std::vector<std::array<int, 3>> ball_offsets(int radius) {
  if (radius < 0) throw DomainError("ball radius must be >= 0");
  std::vector<std::array<int, 3>> out;
  for (int dz = -radius; dz <= radius; ++dz)
    for (int dy = -radius; dy <= radius; ++dy)
      for (int dx = -radius; dx <= radius; ++dx)
        if (dx * dx + dy * dy + dz * dz <= radius * radius) out.push_back({dx, dy, dz});
  return out;
}

namespace {

// value_if_hit: dilation sets 1 when any offset hits foreground; erosion sets
// 0 when any offset hits background.
BinaryFrame ball_filter(const BinaryFrame& f, int radius, bool dilation) {
  const auto offs = ball_offsets(radius);
  const auto& d = f.dims();
  BinaryFrame out(d);
  parallel_for(static_cast<std::size_t>(d[2]), [&](std::size_t z0, std::size_t z1) {
    for (int z = static_cast<int>(z0); z < static_cast<int>(z1); ++z)
      for (int y = 0; y < d[1]; ++y)
        for (int x = 0; x < d[0]; ++x) {
          bool v = !dilation;
          for (const auto& o : offs) {
            const int xx = x + o[0], yy = y + o[1], zz = z + o[2];
            const bool inside = f.contains(xx, yy, zz);
            if (dilation) {
              if (inside && f(xx, yy, zz)) {
                v = true;
                break;
              }
            } else if (inside && !f(xx, yy, zz)) {
              v = false;
              break;
            }
          }
          out(x, y, z) = v ? 1 : 0;
        }
  });
  return out;
}

}  // namespace

BinaryFrame dilate(const BinaryFrame& f, int radius) { return ball_filter(f, radius, true); }
BinaryFrame erode(const BinaryFrame& f, int radius) { return ball_filter(f, radius, false); }
BinaryFrame close(const BinaryFrame& f, int radius) {
  if (radius == 0) return f;
  return erode(dilate(f, radius), radius);
}

BinarySlice dilate(const BinarySlice& s, int radius) {
  if (radius < 0) throw DomainError("disc radius must be >= 0");
  BinarySlice out = BinarySlice::Zero(s.rows(), s.cols());
  for (Eigen::Index y = 0; y < s.cols(); ++y)
    for (Eigen::Index x = 0; x < s.rows(); ++x) {
      if (!s(x, y)) continue;
      for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx) {
          if (dx * dx + dy * dy > radius * radius) continue;
          const Eigen::Index xx = x + dx, yy = y + dy;
          if (xx >= 0 && yy >= 0 && xx < s.rows() && yy < s.cols()) out(xx, yy) = 1;
        }
    }
  return out;
}

BinarySlice fill_holes(const BinarySlice& s) {
  const Eigen::Index nx = s.rows(), ny = s.cols();
  BinarySlice outside = BinarySlice::Zero(nx, ny);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> stack;
  auto seed = [&](Eigen::Index x, Eigen::Index y) {
    if (!s(x, y) && !outside(x, y)) {
      outside(x, y) = 1;
      stack.emplace_back(x, y);
    }
  };
  for (Eigen::Index x = 0; x < nx; ++x) {
    seed(x, 0);
    seed(x, ny - 1);
  }
  for (Eigen::Index y = 0; y < ny; ++y) {
    seed(0, y);
    seed(nx - 1, y);
  }
  while (!stack.empty()) {
    const auto [x, y] = stack.back();
    stack.pop_back();
    if (x > 0) seed(x - 1, y);
    if (x + 1 < nx) seed(x + 1, y);
    if (y > 0) seed(x, y - 1);
    if (y + 1 < ny) seed(x, y + 1);
  }
  return (outside == 0).cast<std::uint8_t>();
}

BinaryFrame fill_holes_per_slice(const BinaryFrame& f) {
  BinaryFrame out = f;
  for (int z = 0; z < f.dims()[2]; ++z) put_slice(out, z, fill_holes(slice_of(f, z)));
  return out;
}

Components2D label_components(const BinarySlice& s) {
  const Eigen::Index nx = s.rows(), ny = s.cols();
  Components2D c;
  c.labels = Eigen::ArrayXXi::Zero(nx, ny);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> stack;
  for (Eigen::Index y = 0; y < ny; ++y)
    for (Eigen::Index x = 0; x < nx; ++x) {
      if (!s(x, y) || c.labels(x, y)) continue;
      const int id = c.count() + 1;
      int area = 0;
      bool border = false;
      c.labels(x, y) = id;
      stack.emplace_back(x, y);
      while (!stack.empty()) {
        const auto [px, py] = stack.back();
        stack.pop_back();
        ++area;
        if (px == 0 || py == 0 || px == nx - 1 || py == ny - 1) border = true;
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const Eigen::Index qx = px + dx, qy = py + dy;
            if (qx < 0 || qy < 0 || qx >= nx || qy >= ny) continue;
            if (s(qx, qy) && !c.labels(qx, qy)) {
              c.labels(qx, qy) = id;
              stack.emplace_back(qx, qy);
            }
          }
      }
      c.area.push_back(area);
      c.touches_border.push_back(border);
    }
  return c;
}

int label_components(const BinaryFrame& f, Grid3<int>& labels, std::vector<std::size_t>& sizes) {
  const auto& d = f.dims();
  labels = Grid3<int>(d, 0);
  sizes.clear();
  std::vector<std::array<int, 3>> stack;
  for (int z = 0; z < d[2]; ++z)
    for (int y = 0; y < d[1]; ++y)
      for (int x = 0; x < d[0]; ++x) {
        if (!f(x, y, z) || labels(x, y, z)) continue;
        const int id = static_cast<int>(sizes.size()) + 1;
        std::size_t n = 0;
        labels(x, y, z) = id;
        stack.push_back({x, y, z});
        while (!stack.empty()) {
          const auto p = stack.back();
          stack.pop_back();
          ++n;
          for (int dz = -1; dz <= 1; ++dz)
            for (int dy = -1; dy <= 1; ++dy)
              for (int dx = -1; dx <= 1; ++dx) {
                const int qx = p[0] + dx, qy = p[1] + dy, qz = p[2] + dz;
                if (!f.contains(qx, qy, qz)) continue;
                if (f(qx, qy, qz) && !labels(qx, qy, qz)) {
                  labels(qx, qy, qz) = id;
                  stack.push_back({qx, qy, qz});
                }
              }
        }
        sizes.push_back(n);
      }
  return static_cast<int>(sizes.size());
}

BinaryFrame remove_small_components(const BinaryFrame& f, int min_voxels) {
  if (min_voxels < 1) throw DomainError("remove_small_components: min_voxels must be >= 1");
  Grid3<int> labels;
  std::vector<std::size_t> sizes;
  label_components(f, labels, sizes);
  BinaryFrame out(f.dims());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const int id = labels[i];
    out[i] = id && sizes[static_cast<std::size_t>(id - 1)] >= static_cast<std::size_t>(min_voxels) ? 1 : 0;
  }
  return out;
}

void PostprocessConfig::validate() const {
  if (closing_radius < 0) throw ConfigError("closing radius must be >= 0");
  if (min_component_voxels < 1) throw ConfigError("min component size must be >= 1");
}

BinaryFrame postprocess_once(const BinaryFrame& f, const PostprocessConfig& cfg) {
  cfg.validate();
  return remove_small_components(fill_holes_per_slice(close(f, cfg.closing_radius)), cfg.min_component_voxels);
}

BinaryFrame postprocess(const BinaryFrame& f, const PostprocessConfig& cfg) {
  BinaryFrame cur = postprocess_once(f, cfg);
  // Closing after a removal can bridge what the fill exposed; each round only
  // changes a bounded set, so this converges in a few passes.
  for (int iter = 0; iter < 64; ++iter) {
    BinaryFrame next = postprocess_once(cur, cfg);
    if (next == cur) return cur;
    cur = std::move(next);
  }
  throw DataError("postprocess did not reach a fixpoint");
}

}  // namespace fbmseg
