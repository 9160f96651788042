#include "pdlearn/image.hpp"

#include <stdexcept>

namespace pdlearn {

std::int64_t BinaryImage::count_white() const {
  std::int64_t n = 0;
  for (std::uint8_t p : pixels) n += (p != 0);
  return n;
}

void BinaryImage::validate() const {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("BinaryImage: dimensions must be positive");
  if (pixels.size() != static_cast<std::size_t>(width) * height)
    throw std::invalid_argument("BinaryImage: pixel buffer does not match width*height");
}

int count_components(const BinaryImage& img, bool white) {
  img.validate();
  const int w = img.width, h = img.height;
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(w) * h, 0);
  std::vector<int> stack;
  int components = 0;
  const bool diag = white;  // 8-connectivity for white, 4 for black
  for (int start = 0; start < w * h; ++start) {
    if (seen[start] || img.pixels[start] != (white ? 1 : 0)) continue;
    ++components;
    seen[start] = 1;
    stack.push_back(start);
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      const int cx = cur % w, cy = cur / w;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          if (!diag && dx != 0 && dy != 0) continue;
          const int nx = cx + dx, ny = cy + dy;
          if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
          const int ni = ny * w + nx;
          if (!seen[ni] && img.at(nx, ny) == white) {
            seen[ni] = 1;
            stack.push_back(ni);
          }
        }
      }
    }
  }
  return components;
}

}  // namespace pdlearn
