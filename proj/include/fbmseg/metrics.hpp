#pragma once

#include <Eigen/Dense>

#include <vector>

#include "fbmseg/grid.hpp"

namespace fbmseg {

/// Foreground voxels with a 6-neighbor inside the frame that is background.
BinaryFrame boundary_mask(const BinaryFrame& f);
/// Physical coordinates (mm) of boundary voxels, scan order.
std::vector<Eigen::Vector3d> boundary_points(const BinaryFrame& f, const Eigen::Vector3d& spacing_mm);

/// 2|A n B| / (|A| + |B|); 1 when both are empty.
double dice(const BinaryFrame& a, const BinaryFrame& b);

/// Exact squared Euclidean distance (mm^2) from every voxel to the nearest
/// seed voxel; +inf everywhere when there is no seed.
Grid3<double> squared_distance_transform(const BinaryFrame& seeds, const Eigen::Vector3d& spacing_mm);

struct SurfaceDistance {
  double hausdorff = 0.0;  ///< mm
  double mad = 0.0;        ///< mm, mean of both directed means
};

/// Boundary-to-boundary distances. DomainError when either boundary is empty.
SurfaceDistance surface_distance(const BinaryFrame& a, const BinaryFrame& b, const Eigen::Vector3d& spacing_mm);
double hausdorff(const BinaryFrame& a, const BinaryFrame& b, const Eigen::Vector3d& spacing_mm);
double mad(const BinaryFrame& a, const BinaryFrame& b, const Eigen::Vector3d& spacing_mm);

}  // namespace fbmseg
