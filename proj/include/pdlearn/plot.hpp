#pragma once

#include <filesystem>
#include <vector>

#include "pdlearn/complex.hpp"
#include "pdlearn/image.hpp"
#include "pdlearn/inverse.hpp"
#include "pdlearn/pimage.hpp"
#include "pdlearn/reduce.hpp"

namespace pdlearn::plot {

namespace fs = std::filesystem;

/// Simple RGB raster with y pointing down.
struct Canvas {
  int width = 0, height = 0;
  std::vector<std::uint8_t> rgb;

  Canvas(int w, int h, std::uint8_t r = 255, std::uint8_t g = 255, std::uint8_t b = 255);
  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);
  void fill_rect(int x0, int y0, int x1, int y1, std::uint8_t r, std::uint8_t g, std::uint8_t b);
  void save(const fs::path& path) const;
};

/// Grid values on a symmetric blue-white-red scale centered at zero; an
/// all-zero grid renders uniformly white. Death axis points up.
void heatmap(const DualDiagram& dd, const fs::path& path, int cell_pixels = 0);

/// Scatter of finite (birth, death) pairs of one degree over the given
/// ranges, with the diagonal drawn.
void diagram_scatter(const PersistenceDiagram& dg, int degree, double lo, double hi,
                     const fs::path& path);

/// The binary image itself, magnified.
void image(const BinaryImage& img, const fs::path& path, int scale = 1);

/// Birth positions of selected pairs over the source image: red for the
/// positive region, blue for the negative.
void birth_positions(const BinaryImage& img, const SelectedPairs& pairs, const fs::path& path,
                     int scale = 2);

/// Point cloud with death-simplex vertices of selected pairs marked.
void death_positions(const PointCloud& pc, const SelectedPairs& pairs, const fs::path& path,
                     int size_pixels = 500);

}  // namespace pdlearn::plot
