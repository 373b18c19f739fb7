#pragma once

#include <filesystem>

#include "fbmseg/grid.hpp"

namespace fbmseg {

// Sidecar format: a UTF-8 header of `key: value` lines naming a raw
// little-endian payload file (relative to the header's directory).
//
//   format: vol4 | mask4
//   dims: nx ny nz nt
//   spacing_mm: sx sy sz
//   frame_interval_s: f
//   data: <raw filename>
//   dtype: f32le | u8

Volume4 load_volume(const std::filesystem::path& header);
void save_volume(const Volume4& vol, const std::filesystem::path& header);

Mask4 load_mask(const std::filesystem::path& header);
void save_mask(const Mask4& mask, const std::filesystem::path& header);

/// Raw payload path written next to `header` (header with its extension replaced by `.raw`).
std::filesystem::path payload_path_for(const std::filesystem::path& header);

}  // namespace fbmseg
