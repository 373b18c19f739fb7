#include "fbmseg/moments.hpp"

#include <cmath>
#include <numbers>

namespace fbmseg {

BinarySlice slice_of(const BinaryFrame& frame, int z) {
  const auto& d = frame.dims();
  if (z < 0 || z >= d[2]) throw DomainError("slice_of: z out of range");
  BinarySlice s(d[0], d[1]);
  for (int y = 0; y < d[1]; ++y)
    for (int x = 0; x < d[0]; ++x) s(x, y) = frame(x, y, z) ? 1 : 0;
  return s;
}

void put_slice(BinaryFrame& frame, int z, const BinarySlice& slice) {
  const auto& d = frame.dims();
  if (z < 0 || z >= d[2] || slice.rows() != d[0] || slice.cols() != d[1]) throw SizeError("put_slice: shape mismatch");
  for (int y = 0; y < d[1]; ++y)
    for (int x = 0; x < d[0]; ++x) frame(x, y, z) = slice(x, y) ? 1 : 0;
}

MomentSet raw_moments(const BinarySlice& slice) {
  double m00 = 0.0, m10 = 0.0, m01 = 0.0;
  for (Eigen::Index y = 0; y < slice.cols(); ++y)
    for (Eigen::Index x = 0; x < slice.rows(); ++x)
      if (slice(x, y)) {
        m00 += 1.0;
        m10 += static_cast<double>(x);
        m01 += static_cast<double>(y);
      }
  if (m00 == 0.0) throw DomainError("raw_moments: empty object");
  MomentSet m;
  m.m00 = m00;
  m.centroid = {m10 / m00, m01 / m00};
  // Central sums about the centroid; avoids cancellation in m20/m00 - xc^2.
  double s20 = 0.0, s11 = 0.0, s02 = 0.0;
  for (Eigen::Index y = 0; y < slice.cols(); ++y)
    for (Eigen::Index x = 0; x < slice.rows(); ++x)
      if (slice(x, y)) {
        const double dx = static_cast<double>(x) - m.centroid.x();
        const double dy = static_cast<double>(y) - m.centroid.y();
        s20 += dx * dx;
        s11 += dx * dy;
        s02 += dy * dy;
      }
  m.mu20 = s20 / m00;
  m.mu11 = s11 / m00;
  m.mu02 = s02 / m00;
  return m;
}

EllipseFit fit_ellipse(const MomentSet& m) {
  if (m.m00 < 3.0) throw DomainError("fit_ellipse: object needs at least 3 pixels");
  EllipseFit f;
  f.centroid = m.centroid;
  const double diff = m.mu20 - m.mu02;
  f.theta = (diff == 0.0 && m.mu11 == 0.0) ? 0.0 : 0.5 * std::atan2(2.0 * m.mu11, diff);
  if (f.theta <= -std::numbers::pi / 2) f.theta += std::numbers::pi;
  const double root = std::sqrt(4.0 * m.mu11 * m.mu11 + diff * diff);
  const double sum = m.mu20 + m.mu02;
  f.l = std::sqrt(6.0 * (sum + root));
  f.w = std::sqrt(std::max(0.0, 6.0 * (sum - root)));
  return f;
}

EllipseFit fit_ellipse(const BinarySlice& slice) { return fit_ellipse(raw_moments(slice)); }

bool OrientedRect::contains(const Eigen::Vector2d& p) const {
  const Eigen::Vector2d d = p - center;
  const double c = std::cos(theta), s = std::sin(theta);
  const double u = c * d.x() + s * d.y();
  const double v = -s * d.x() + c * d.y();
  return std::abs(u) <= 0.5 * length && std::abs(v) <= 0.5 * width;
}

std::array<Eigen::Vector2d, 4> OrientedRect::corners() const {
  const Eigen::Vector2d a(std::cos(theta), std::sin(theta));
  const Eigen::Vector2d b(-a.y(), a.x());
  const Eigen::Vector2d u = 0.5 * length * a, v = 0.5 * width * b;
  return {center - u - v, center + u - v, center + u + v, center - u + v};
}

OrientedRect enclosing_rectangle(const EllipseFit& fit) { return {fit.centroid, fit.theta, 2.0 * fit.l, 2.0 * fit.w}; }

BinarySlice rasterize_rect(const OrientedRect& rect, int nx, int ny) {
  if (nx < 0 || ny < 0) throw DomainError("rasterize_rect: negative dims");
  BinarySlice s = BinarySlice::Zero(nx, ny);
  for (int y = 0; y < ny; ++y)
    for (int x = 0; x < nx; ++x) s(x, y) = rect.contains({x, y}) ? 1 : 0;
  return s;
}

BinarySlice rasterize_ellipse(const EllipseFit& fit, int nx, int ny) {
  if (nx < 0 || ny < 0) throw DomainError("rasterize_ellipse: negative dims");
  BinarySlice s = BinarySlice::Zero(nx, ny);
  const double a = fit.l / std::sqrt(3.0), b = fit.w / std::sqrt(3.0);
  if (!(a > 0.0 && b > 0.0)) return s;
  const double c = std::cos(fit.theta), sn = std::sin(fit.theta);
  for (int y = 0; y < ny; ++y)
    for (int x = 0; x < nx; ++x) {
      const double dx = x - fit.centroid.x(), dy = y - fit.centroid.y();
      const double u = (c * dx + sn * dy) / a, v = (-sn * dx + c * dy) / b;
      s(x, y) = u * u + v * v <= 1.0 ? 1 : 0;
    }
  return s;
}

double disc_stack_volume(const BinaryFrame& frame, const Eigen::Vector3d& spacing_mm) {
  const auto& d = frame.dims();
  double total = 0.0;
  for (int z = 0; z < d[2]; ++z) {
    std::size_t count = 0;
    for (int y = 0; y < d[1]; ++y)
      for (int x = 0; x < d[0]; ++x) count += frame(x, y, z) ? 1 : 0;
    total += static_cast<double>(count) * spacing_mm.x() * spacing_mm.y() * spacing_mm.z();
  }
  return total;
}

double disc_stack_volume(const Mask4& mask, Label label, int frame) {
  return disc_stack_volume(select_label(mask, frame, label), mask.spacing_mm());
}

}  // namespace fbmseg
