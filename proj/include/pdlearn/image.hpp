#pragma once

#include <cstdint>
#include <vector>

namespace pdlearn {

/// Binary image, row-major, y down. true = white (foreground).
struct BinaryImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // size width*height, 0 or 1

  BinaryImage() = default;
  BinaryImage(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, 0) {}

  bool at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x] != 0; }
  void set(int x, int y, bool white) {
    pixels[static_cast<std::size_t>(y) * width + x] = white ? 1 : 0;
  }
  std::int64_t count_white() const;
  void validate() const;
};

/// Number of connected components of one color.
/// White regions use 8-connectivity and black regions 4-connectivity, the
/// duality matching the closed-pixel-square model used by the filtration code.
int count_components(const BinaryImage& img, bool white);

}  // namespace pdlearn
