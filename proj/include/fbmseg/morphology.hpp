#pragma once

#include <vector>

#include "fbmseg/grid.hpp"
#include "fbmseg/moments.hpp"

namespace fbmseg {

/// Offsets (dx, dy, dz) with dx^2 + dy^2 + dz^2 <= r^2.
std::vector<std::array<int, 3>> ball_offsets(int radius);

/// Ball dilation; outside the frame counts as background.
BinaryFrame dilate(const BinaryFrame& f, int radius);
/// Ball erosion; outside the frame counts as foreground, so closing never
/// trims objects that touch the frame border.
BinaryFrame erode(const BinaryFrame& f, int radius);
BinaryFrame close(const BinaryFrame& f, int radius);

/// 2-D dilation by a disc of the given radius (outside is background).
BinarySlice dilate(const BinarySlice& s, int radius);

/// Background pixels not 4-connected to the slice border become foreground.
BinarySlice fill_holes(const BinarySlice& s);
/// fill_holes applied to every z-slice.
BinaryFrame fill_holes_per_slice(const BinaryFrame& f);

struct Components2D {
  Eigen::ArrayXXi labels;  ///< 0 = background, 1..count
  std::vector<int> area;   ///< indexed by label - 1
  std::vector<bool> touches_border;
  int count() const { return static_cast<int>(area.size()); }
  BinarySlice select(int label) const { return (labels == label).cast<std::uint8_t>(); }
};

/// 8-connected components, numbered in scan order (x fastest).
Components2D label_components(const BinarySlice& s);

/// 26-connected components, numbered in scan order; returns the count.
int label_components(const BinaryFrame& f, Grid3<int>& labels, std::vector<std::size_t>& sizes);

/// Drops 26-connected components with fewer than min_voxels voxels.
BinaryFrame remove_small_components(const BinaryFrame& f, int min_voxels);

struct PostprocessConfig {
  int closing_radius = 1;
  int min_component_voxels = 50;
  void validate() const;
};

/// Closing, per-slice hole fill, then small-component removal, repeated until
/// the mask stops changing so the result is a fixpoint.
BinaryFrame postprocess(const BinaryFrame& f, const PostprocessConfig& cfg);
/// A single closing / fill / removal pass.
BinaryFrame postprocess_once(const BinaryFrame& f, const PostprocessConfig& cfg);

}  // namespace fbmseg
