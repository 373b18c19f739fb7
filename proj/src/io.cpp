#include "fbmseg/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fbmseg {
namespace {

namespace fs = std::filesystem;

static_assert(sizeof(float) == 4, "f32 payload requires 32-bit float");

struct Header {
  std::string format;
  Dims4 dims;
  Eigen::Vector3d spacing = Eigen::Vector3d::Ones();
  double frame_interval = 0.0;
  std::string data;
  std::string dtype;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Header read_header(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open header '" + path.string() + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw FormatError("header line without ':' in '" + path.string() + "'");
    kv[trim(line.substr(0, colon))] = trim(line.substr(colon + 1));
  }
  for (const char* key : {"format", "dims", "spacing_mm", "frame_interval_s", "data", "dtype"}) {
    if (!kv.contains(key)) throw FormatError(std::string("header missing key '") + key + "'");
  }

  Header h;
  h.format = kv["format"];
  h.data = kv["data"];
  h.dtype = kv["dtype"];
  {
    std::istringstream ss(kv["dims"]);
    std::string extra;
    if (!(ss >> h.dims.nx >> h.dims.ny >> h.dims.nz >> h.dims.nt) || (ss >> extra)) throw FormatError("malformed dims");
    if (!h.dims.valid()) throw FormatError("dims must be >= 1");
  }
  {
    std::istringstream ss(kv["spacing_mm"]);
    std::string extra;
    if (!(ss >> h.spacing[0] >> h.spacing[1] >> h.spacing[2]) || (ss >> extra)) throw FormatError("malformed spacing_mm");
    if (!(h.spacing.array() > 0.0).all() || !h.spacing.allFinite()) throw FormatError("spacing must be positive");
  }
  {
    std::istringstream ss(kv["frame_interval_s"]);
    std::string extra;
    if (!(ss >> h.frame_interval) || (ss >> extra) || !(h.frame_interval >= 0.0) || !std::isfinite(h.frame_interval))
      throw FormatError("malformed frame_interval_s");
  }
  if (h.data.empty()) throw FormatError("empty data filename");
  return h;
}

void write_header(const fs::path& path, const std::string& format, const Dims4& dims, const Eigen::Vector3d& spacing,
                  double frame_interval, const std::string& dtype) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write header '" + path.string() + "'");
  out.precision(17);
  out << "format: " << format << '\n'
      << "dims: " << dims.nx << ' ' << dims.ny << ' ' << dims.nz << ' ' << dims.nt << '\n'
      << "spacing_mm: " << spacing[0] << ' ' << spacing[1] << ' ' << spacing[2] << '\n'
      << "frame_interval_s: " << frame_interval << '\n'
      << "data: " << payload_path_for(path).filename().string() << '\n'
      << "dtype: " << dtype << '\n';
  if (!out) throw IoError("failed writing header '" + path.string() + "'");
}

std::vector<char> read_payload(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open payload '" + path.string() + "'");
  return std::vector<char>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_payload(const fs::path& path, const char* bytes, std::size_t n) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write payload '" + path.string() + "'");
  out.write(bytes, static_cast<std::streamsize>(n));
  if (!out) throw IoError("failed writing payload '" + path.string() + "'");
}

std::uint32_t to_little(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  return ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) | (v >> 24);
}

}  // namespace

fs::path payload_path_for(const fs::path& header) {
  auto p = header;
  p.replace_extension(".raw");
  if (p == header) p += ".raw";
  return p;
}

Volume4 load_volume(const fs::path& header) {
  const Header h = read_header(header);
  if (h.format != "vol4") throw FormatError("expected format vol4, got '" + h.format + "'");
  if (h.dtype != "f32le") throw FormatError("expected dtype f32le, got '" + h.dtype + "'");
  const auto bytes = read_payload(header.parent_path() / h.data);
  if (bytes.size() != h.dims.size() * 4) {
    throw SizeError("payload holds " + std::to_string(bytes.size()) + " bytes, expected " + std::to_string(h.dims.size() * 4));
  }
  Volume4::Storage data(static_cast<Eigen::Index>(h.dims.size()));
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    std::uint32_t raw;
    std::memcpy(&raw, bytes.data() + 4 * i, 4);
    const float v = std::bit_cast<float>(to_little(raw));
    if (!std::isfinite(v)) throw DataError("non-finite value at element " + std::to_string(i));
    data[i] = v;
  }
  return Volume4(h.dims, h.spacing, h.frame_interval, std::move(data));
}

void save_volume(const Volume4& vol, const fs::path& header) {
  if (!vol.array().allFinite()) throw DataError("volume holds non-finite values");
  std::vector<char> bytes(vol.size() * 4);
  for (std::size_t i = 0; i < vol.size(); ++i) {
    const std::uint32_t raw = to_little(std::bit_cast<std::uint32_t>(vol[i]));
    std::memcpy(bytes.data() + 4 * i, &raw, 4);
  }
  write_payload(payload_path_for(header), bytes.data(), bytes.size());
  write_header(header, "vol4", vol.dims(), vol.spacing_mm(), vol.frame_interval_s(), "f32le");
}

Mask4 load_mask(const fs::path& header) {
  const Header h = read_header(header);
  if (h.format != "mask4") throw FormatError("expected format mask4, got '" + h.format + "'");
  if (h.dtype != "u8") throw FormatError("expected dtype u8, got '" + h.dtype + "'");
  const auto bytes = read_payload(header.parent_path() / h.data);
  if (bytes.size() != h.dims.size()) {
    throw SizeError("payload holds " + std::to_string(bytes.size()) + " bytes, expected " + std::to_string(h.dims.size()));
  }
  Mask4::Storage data(static_cast<Eigen::Index>(h.dims.size()));
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const auto v = static_cast<std::uint8_t>(bytes[static_cast<std::size_t>(i)]);
    if (v > 2) throw DataError("label " + std::to_string(v) + " outside {0,1,2} at element " + std::to_string(i));
    data[i] = v;
  }
  return Mask4(h.dims, h.spacing, h.frame_interval, std::move(data));
}

void save_mask(const Mask4& mask, const fs::path& header) {
  if ((mask.array() > 2).any()) throw DataError("mask holds labels outside {0,1,2}");
  write_payload(payload_path_for(header), reinterpret_cast<const char*>(mask.array().data()), mask.size());
  write_header(header, "mask4", mask.dims(), mask.spacing_mm(), mask.frame_interval_s(), "u8");
}

}  // namespace fbmseg
