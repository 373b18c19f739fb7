#include "fbmseg/grid.hpp"

namespace fbmseg {

BinaryFrame select_label(const Mask4& mask, int t, Label label) {
  const auto f = mask.frame(t);
  return BinaryFrame(f.dims(), (f.array() == static_cast<std::uint8_t>(label)).template cast<std::uint8_t>());
}

BinaryFrame select_foreground(const Mask4& mask, int t) {
  const auto f = mask.frame(t);
  return BinaryFrame(f.dims(), (f.array() != 0).template cast<std::uint8_t>());
}

}  // namespace fbmseg
