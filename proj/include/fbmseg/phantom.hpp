#pragma once

#include <Eigen/Dense>

#include <cstdint>

#include "fbmseg/grid.hpp"

namespace fbmseg {

/// Synthetic speckled ventricle: a half-ellipsoid cavity with its flat base on
/// the top z-slice, wrapped in a myocardial shell of constant thickness.
struct PhantomConfig {
  Dims4 dims{96, 96, 96, 8};
  Eigen::Vector3d spacing_mm{1.0, 1.0, 1.0};
  double frame_interval_s = 0.04;
  Eigen::Vector3d endo_semi_axes_mm{24.0, 24.0, 60.0};  ///< end-diastole; z axis points from base to apex
  double wall_thickness_mm = 12.0;
  double contraction = 0.2;  ///< peak fractional shortening of the cavity semi-axes

  double h_background = 0.9;
  double h_blood = 0.8;
  double h_myocardium = 0.2;
  double mean_background = 60.0;
  double mean_blood = 30.0;
  double mean_myocardium = 100.0;

  /// Fraction of the speckle variance drawn from white noise instead of the
  /// class texture, in [0, 1].
  double speckle_white_fraction = 0.0;
  /// Texture outer scale in voxels (0 = pure power law).
  double texture_outer_scale = 16.0;
  std::uint64_t seed = 42;

  /// ConfigError when the shape does not fit inside the volume or a parameter
  /// is out of range.
  void validate() const;
};

struct Phantom {
  Volume4 volume;
  Mask4 truth;  ///< 1 = cavity, 2 = myocardium
};

/// Semi-axis scale of frame t: 1 - contraction * sin^2(pi t / nt).
double cavity_scale(const PhantomConfig& cfg, int t);

/// Analytic cavity volume (2/3) pi a b c of frame t, mm^3.
double analytic_cavity_volume(const PhantomConfig& cfg, int t);

/// Ground-truth labels of frame t.
Grid3<std::uint8_t> phantom_labels(const PhantomConfig& cfg, int t);

/// Intensity = class mean * Rayleigh speckle. The speckle is the envelope of
/// two fBm textures of the class Hurst index, normalized to unit mean. The
/// textures depend only on the seed, so every frame shares them and only the
/// geometry moves.
Phantom generate_phantom(const PhantomConfig& cfg);

}  // namespace fbmseg
