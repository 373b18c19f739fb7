#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include "fbmseg/error.hpp"

namespace fbmseg {

/// Voxel counts of a 4-D (x, y, z, t) field.
struct Dims4 {
  int nx = 1;
  int ny = 1;
  int nz = 1;
  int nt = 1;

  std::size_t frame_size() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) * static_cast<std::size_t>(nz);
  }
  std::size_t size() const { return frame_size() * static_cast<std::size_t>(nt); }
  bool valid() const { return nx >= 1 && ny >= 1 && nz >= 1 && nt >= 1; }
  friend bool operator==(const Dims4&, const Dims4&) = default;
};

/// Voxel counts of a single 3-D frame.
using Dims3 = std::array<int, 3>;

inline std::size_t volume_of(const Dims3& d) {
  return static_cast<std::size_t>(d[0]) * static_cast<std::size_t>(d[1]) * static_cast<std::size_t>(d[2]);
}

/// Segmentation labels stored in a Mask4.
enum class Label : std::uint8_t { background = 0, blood_pool = 1, myocardium = 2 };

/// Dense 3-D field, x fastest. Used for single frames, windows and binary masks.
template <typename T>
class Grid3 {
 public:
  using Scalar = T;
  using Storage = Eigen::Array<T, Eigen::Dynamic, 1>;

  Grid3() : dims_{0, 0, 0} {}
  explicit Grid3(const Dims3& dims, T fill = T{}) : dims_(dims), data_(Storage::Constant(checked_size(dims), fill)) {}
  Grid3(const Dims3& dims, Storage data) : dims_(dims), data_(std::move(data)) {
    if (static_cast<std::size_t>(data_.size()) != checked_size(dims)) throw SizeError("Grid3: payload size does not match dims");
  }

  const Dims3& dims() const { return dims_; }
  int extent(int axis) const { return dims_[static_cast<std::size_t>(axis)]; }
  std::size_t size() const { return static_cast<std::size_t>(data_.size()); }
  bool empty() const { return data_.size() == 0; }

  std::size_t index(int x, int y, int z) const {
    return static_cast<std::size_t>(x) +
           static_cast<std::size_t>(dims_[0]) * (static_cast<std::size_t>(y) + static_cast<std::size_t>(dims_[1]) * static_cast<std::size_t>(z));
  }
  bool contains(int x, int y, int z) const {
    return x >= 0 && y >= 0 && z >= 0 && x < dims_[0] && y < dims_[1] && z < dims_[2];
  }

  T& operator()(int x, int y, int z) { return data_[static_cast<Eigen::Index>(index(x, y, z))]; }
  const T& operator()(int x, int y, int z) const { return data_[static_cast<Eigen::Index>(index(x, y, z))]; }
  T& operator[](std::size_t i) { return data_[static_cast<Eigen::Index>(i)]; }
  const T& operator[](std::size_t i) const { return data_[static_cast<Eigen::Index>(i)]; }

  Storage& array() { return data_; }
  const Storage& array() const { return data_; }
  std::span<T> span() { return {data_.data(), size()}; }
  std::span<const T> span() const { return {data_.data(), size()}; }

  friend bool operator==(const Grid3& a, const Grid3& b) {
    return a.dims_ == b.dims_ && (a.data_ == b.data_).all();
  }

 private:
  static std::size_t checked_size(const Dims3& d) {
    if (d[0] < 0 || d[1] < 0 || d[2] < 0) throw DomainError("Grid3: negative extent");
    return volume_of(d);
  }

  Dims3 dims_;
  Storage data_;
};

using BinaryFrame = Grid3<std::uint8_t>;

/// Dense 4-D field with physical spacing, x fastest: element (x,y,z,t) is at
/// x + nx*(y + ny*(z + nz*t)).
template <typename T>
class Grid4 {
 public:
  using Scalar = T;
  using Storage = Eigen::Array<T, Eigen::Dynamic, 1>;

  Grid4() = default;
  explicit Grid4(const Dims4& dims, const Eigen::Vector3d& spacing_mm = Eigen::Vector3d::Ones(), double frame_interval_s = 0.0,
                 T fill = T{})
      : dims_(dims), spacing_(spacing_mm), frame_interval_(frame_interval_s) {
    check_geometry();
    data_ = Storage::Constant(static_cast<Eigen::Index>(dims_.size()), fill);
  }
  Grid4(const Dims4& dims, const Eigen::Vector3d& spacing_mm, double frame_interval_s, Storage data)
      : dims_(dims), spacing_(spacing_mm), frame_interval_(frame_interval_s), data_(std::move(data)) {
    check_geometry();
    if (static_cast<std::size_t>(data_.size()) != dims_.size()) throw SizeError("Grid4: payload size does not match dims");
  }

  /// Same geometry as `other`, filled with `fill`.
  template <typename U>
  static Grid4 like(const Grid4<U>& other, T fill = T{}) {
    return Grid4(other.dims(), other.spacing_mm(), other.frame_interval_s(), fill);
  }

  const Dims4& dims() const { return dims_; }
  Dims3 frame_dims() const { return {dims_.nx, dims_.ny, dims_.nz}; }
  const Eigen::Vector3d& spacing_mm() const { return spacing_; }
  double frame_interval_s() const { return frame_interval_; }
  std::size_t size() const { return static_cast<std::size_t>(data_.size()); }

  std::size_t index(int x, int y, int z, int t) const {
    return static_cast<std::size_t>(x) +
           static_cast<std::size_t>(dims_.nx) *
               (static_cast<std::size_t>(y) +
                static_cast<std::size_t>(dims_.ny) * (static_cast<std::size_t>(z) + static_cast<std::size_t>(dims_.nz) * static_cast<std::size_t>(t)));
  }

  T& operator()(int x, int y, int z, int t) { return data_[static_cast<Eigen::Index>(index(x, y, z, t))]; }
  const T& operator()(int x, int y, int z, int t) const { return data_[static_cast<Eigen::Index>(index(x, y, z, t))]; }
  T& operator[](std::size_t i) { return data_[static_cast<Eigen::Index>(i)]; }
  const T& operator[](std::size_t i) const { return data_[static_cast<Eigen::Index>(i)]; }

  Storage& array() { return data_; }
  const Storage& array() const { return data_; }
  std::span<const T> span() const { return {data_.data(), size()}; }

  std::span<const T> frame_span(int t) const {
    return {data_.data() + static_cast<std::size_t>(t) * dims_.frame_size(), dims_.frame_size()};
  }
  std::span<T> frame_span(int t) {
    return {data_.data() + static_cast<std::size_t>(t) * dims_.frame_size(), dims_.frame_size()};
  }

  /// Copy of frame t as a Grid3.
  Grid3<T> frame(int t) const {
    check_frame(t);
    const auto n = static_cast<Eigen::Index>(dims_.frame_size());
    return Grid3<T>(frame_dims(), data_.segment(static_cast<Eigen::Index>(t) * n, n));
  }

  void set_frame(int t, const Grid3<T>& f) {
    check_frame(t);
    if (f.dims() != frame_dims()) throw SizeError("Grid4::set_frame: frame dims mismatch");
    const auto n = static_cast<Eigen::Index>(dims_.frame_size());
    data_.segment(static_cast<Eigen::Index>(t) * n, n) = f.array();
  }

  bool same_geometry(const Dims4& d) const { return dims_ == d; }

  friend bool operator==(const Grid4& a, const Grid4& b) {
    return a.dims_ == b.dims_ && a.spacing_ == b.spacing_ && a.frame_interval_ == b.frame_interval_ && (a.data_ == b.data_).all();
  }

 private:
  void check_geometry() const {
    if (!dims_.valid()) throw DomainError("Grid4: every dimension must be >= 1");
    if (!(spacing_.array() > 0.0).all() || !spacing_.allFinite()) throw DomainError("Grid4: spacing must be positive");
    if (!(frame_interval_ >= 0.0)) throw DomainError("Grid4: frame interval must be >= 0");
  }
  void check_frame(int t) const {
    if (t < 0 || t >= dims_.nt) throw DomainError("Grid4: frame index out of range");
  }

  Dims4 dims_;
  Eigen::Vector3d spacing_ = Eigen::Vector3d::Ones();
  double frame_interval_ = 0.0;
  Storage data_;
};

/// Echo sequence and derived parametric maps (32-bit reals on disk).
using Volume4 = Grid4<float>;
/// Double-precision volume, used where exact arithmetic matters.
using Volume4d = Grid4<double>;
/// Label field with values in {0, 1, 2}.
using Mask4 = Grid4<std::uint8_t>;

/// Element-wise scalar conversion keeping geometry.
template <typename To, typename From>
Grid4<To> cast(const Grid4<From>& g) {
  return Grid4<To>(g.dims(), g.spacing_mm(), g.frame_interval_s(), g.array().template cast<To>().eval());
}

/// Binary frame of voxels in frame t of `mask` carrying `label`.
BinaryFrame select_label(const Mask4& mask, int t, Label label);
/// Binary frame of voxels in frame t of `mask` with any nonzero label.
BinaryFrame select_foreground(const Mask4& mask, int t);

}  // namespace fbmseg
