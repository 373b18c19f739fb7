#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>

#include "fbmseg/grid.hpp"

namespace fbmseg {

/// Binary 2-D field indexed (x, y); nonzero is foreground. Pixel centers sit
/// at integer coordinates.
using BinarySlice = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Slice z of a binary frame, and its inverse.
BinarySlice slice_of(const BinaryFrame& frame, int z);
void put_slice(BinaryFrame& frame, int z, const BinarySlice& slice);

struct MomentSet {
  double m00 = 0.0;
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  double mu20 = 0.0;  ///< per-area central moments
  double mu11 = 0.0;
  double mu02 = 0.0;

  Eigen::Matrix2d covariance() const { return (Eigen::Matrix2d() << mu20, mu11, mu11, mu02).finished(); }
};

/// Area, centroid and normalized second central moments. DomainError when empty.
MomentSet raw_moments(const BinarySlice& slice);

struct EllipseFit {
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  double theta = 0.0;  ///< major-axis angle from +x toward +y, in (-pi/2, pi/2]
  double l = 0.0;      ///< major side of the moment-equivalent rectangle
  double w = 0.0;      ///< minor side
};

/// theta = atan2(2 mu11, mu20 - mu02) / 2 and
/// l, w = sqrt(6 (mu20 + mu02 +- sqrt(4 mu11^2 + (mu20 - mu02)^2))).
/// DomainError when fewer than 3 pixels.
EllipseFit fit_ellipse(const MomentSet& m);
EllipseFit fit_ellipse(const BinarySlice& slice);

struct OrientedRect {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double theta = 0.0;
  double length = 0.0;  ///< side along theta
  double width = 0.0;   ///< side across theta

  double area() const { return length * width; }
  bool contains(const Eigen::Vector2d& p) const;
  std::array<Eigen::Vector2d, 4> corners() const;
  /// Same rectangle with every side grown by 2 * margin.
  OrientedRect grown(double margin) const { return {center, theta, length + 2.0 * margin, width + 2.0 * margin}; }
};

/// Rectangle of sides (2l, 2w) centered on the centroid and aligned to theta.
OrientedRect enclosing_rectangle(const EllipseFit& fit);

/// Pixels whose centers fall inside the rectangle.
BinarySlice rasterize_rect(const OrientedRect& rect, int nx, int ny);

/// Pixels inside the moment-equivalent ellipse of the fit: semi-axes
/// l/sqrt(3) and w/sqrt(3), the ellipse with the same second moments.
BinarySlice rasterize_ellipse(const EllipseFit& fit, int nx, int ny);

/// Disc summation: sum over slices of (pixel count * sx * sy) * sz, in mm^3.
double disc_stack_volume(const Mask4& mask, Label label, int frame);
double disc_stack_volume(const BinaryFrame& frame, const Eigen::Vector3d& spacing_mm);

}  // namespace fbmseg
