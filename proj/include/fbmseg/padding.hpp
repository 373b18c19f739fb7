#pragma once

#include <string>

namespace fbmseg {

enum class Padding { mirror, clamp };

/// Maps an out-of-range index onto [0, n). Mirror reflects about the edge
/// voxel without repeating it (-1 -> 1); clamp repeats the edge voxel.
inline int pad_index(int i, int n, Padding mode) {
  if (i >= 0 && i < n) return i;
  if (n == 1) return 0;
  if (mode == Padding::clamp) return i < 0 ? 0 : n - 1;
  const int period = 2 * (n - 1);
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - m;
}

Padding parse_padding(const std::string& s);
std::string to_string(Padding p);

}  // namespace fbmseg
