#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "fbmseg/io.hpp"

using namespace fbmseg;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "fbmseg_io_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Grid, IndexIsXFastest) {
  Volume4 v(Dims4{3, 4, 5, 2});
  EXPECT_EQ(v.index(1, 0, 0, 0), 1u);
  EXPECT_EQ(v.index(0, 1, 0, 0), 3u);
  EXPECT_EQ(v.index(0, 0, 1, 0), 12u);
  EXPECT_EQ(v.index(0, 0, 0, 1), 60u);
  EXPECT_EQ(v.size(), 120u);
}

TEST(Grid, FrameRoundTrip) {
  Volume4 v(Dims4{3, 2, 2, 3});
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<float>(i);
  Grid3<float> f = v.frame(1);
  EXPECT_EQ(f(2, 1, 1), v(2, 1, 1, 1));
  f.array() += 100.0f;
  v.set_frame(2, f);
  EXPECT_EQ(v(0, 0, 0, 2), v(0, 0, 0, 1) + 100.0f);
  EXPECT_THROW(v.frame(3), DomainError);
}

TEST(Grid, RejectsBadGeometry) {
  EXPECT_THROW(Volume4(Dims4{0, 1, 1, 1}), DomainError);
  EXPECT_THROW(Volume4(Dims4{1, 1, 1, 1}, Eigen::Vector3d(1, 0, 1)), DomainError);
  EXPECT_THROW(Volume4(Dims4{2, 1, 1, 1}, Eigen::Vector3d::Ones(), 0.0, Volume4::Storage::Zero(3)), SizeError);
}

TEST(Grid, SelectLabel) {
  Mask4 m(Dims4{2, 2, 1, 1});
  m[0] = 1;
  m[1] = 2;
  m[3] = 1;
  EXPECT_EQ(select_label(m, 0, Label::blood_pool).array().cast<int>().sum(), 2);
  EXPECT_EQ(select_foreground(m, 0).array().cast<int>().sum(), 3);
}

TEST(Io, VolumeRoundTrip) {
  Volume4 v(Dims4{4, 3, 2, 2}, Eigen::Vector3d(0.9, 0.8, 0.6), 0.033);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.25f * static_cast<float>(i) - 3.0f;
  const auto p = scratch("vol.hdr");
  save_volume(v, p);
  EXPECT_TRUE(fs::exists(payload_path_for(p)));
  EXPECT_EQ(load_volume(p), v);
}

TEST(Io, MaskRoundTrip) {
  Mask4 m(Dims4{3, 3, 3, 1}, Eigen::Vector3d(1, 1, 2));
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = static_cast<std::uint8_t>(i % 3);
  const auto p = scratch("mask.hdr");
  save_mask(m, p);
  EXPECT_EQ(load_mask(p), m);
}

TEST(Io, MissingKeyIsFormatError) {
  const auto p = scratch("bad.hdr");
  std::ofstream(p) << "format: vol4\ndims: 1 1 1 1\n";
  EXPECT_THROW(load_volume(p), FormatError);
}

TEST(Io, ShortPayloadIsSizeError) {
  Volume4 v(Dims4{4, 4, 1, 1});
  const auto p = scratch("short.hdr");
  save_volume(v, p);
  fs::resize_file(payload_path_for(p), 10);
  EXPECT_THROW(load_volume(p), SizeError);
}

TEST(Io, NonFiniteIsDataError) {
  Volume4 v(Dims4{2, 1, 1, 1});
  v[1] = std::numeric_limits<float>::quiet_NaN();
  EXPECT_THROW(save_volume(v, scratch("nan.hdr")), DataError);
}

TEST(Io, LabelOutOfRangeIsDataError) {
  Mask4 m(Dims4{2, 1, 1, 1});
  m[0] = 3;
  EXPECT_THROW(save_mask(m, scratch("lab.hdr")), DataError);
  // Also rejected on load when the payload was produced elsewhere.
  m[0] = 1;
  const auto p = scratch("lab2.hdr");
  save_mask(m, p);
  std::fstream(payload_path_for(p), std::ios::in | std::ios::out | std::ios::binary).put(static_cast<char>(7));
  EXPECT_THROW(load_mask(p), DataError);
}
