#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pdlearn/image.hpp"

namespace pdlearn {

/// Finite set of points in R^N. N=2 is what the experiments use; N<=3 is
/// accepted wherever the construction is defined (Rips).
struct PointCloud {
  int dim = 2;
  std::vector<std::array<double, 3>> points;  // unused coordinates are zero

  void add(double x, double y, double z = 0.0) { points.push_back({x, y, z}); }
  std::size_t size() const { return points.size(); }
  void validate() const;
};

/// Filtration values on every elementary cube of a width*height pixel window.
///
/// Cube addressing follows the usual bit scheme: a cube at integer anchor
/// (x, y) with type t has x-extent iff (t & 1) and y-extent iff (t & 2), so
/// type 3 cubes are the pixels themselves and pixel (x, y) spans
/// [x, x+1] x [y, y+1]. Faces carry the minimum value over their incident
/// pixels, which makes the sublevel set at t exactly the union of closed
/// pixel squares with value <= t. `source` records which pixel attained that
/// minimum (lexicographically smallest on ties); positions reported
/// downstream are centers of source pixels, in pixel-index units.
struct CellFunction {
  int width = 0;
  int height = 0;
  std::vector<double> values;        // indexed by cube_index
  std::vector<std::int32_t> source;  // flat pixel index y*width+x

  static CellFunction from_pixel_values(int width, int height, const std::vector<double>& pixel_values);

  std::size_t cube_count() const;
  std::size_t cube_index(int x, int y, int type) const;
  bool cube_valid(int x, int y, int type) const;
  void validate() const;
};

/// Signed Manhattan filtration function of a binary image: white pixels get
/// minus the L1 grid distance to the nearest black pixel, black pixels plus
/// the distance to the nearest white pixel. Needs both colors present.
CellFunction signed_manhattan(const BinaryImage& img);

/// One cell of a filtered complex. `boundary` holds positions of the facets,
/// all strictly smaller than the cell's own position. `vertices` is the
/// geometry payload: the simplex vertex coordinates in vertex order
/// (simplicial case, (dim+1) points) or the source pixel center
/// (cubical case, 1 point).
struct FilteredCell {
  int dim = 0;
  double value = 0.0;
  std::vector<std::int64_t> boundary;
  std::vector<std::array<double, 3>> vertices;
};

struct FilteredComplex {
  bool cubical = false;
  int ambient_dim = 2;
  std::vector<FilteredCell> cells;  // filtration order; id == index

  int max_cell_dim() const;
  /// Checks the filtration contract: nondecreasing values, faces precede
  /// cofaces, boundary sizes match dim+1 (simplex) / 2*dim (cube), and
  /// value(face) <= value(cell). Throws std::invalid_argument on violation.
  void validate() const;
};

/// Cech filtration of a planar point cloud: simplex value = radius of its
/// minimum enclosing ball. Builds dimensions 0..max_dim+1 so that degrees up
/// to max_dim are computable. Restricted to N=2 and max_dim=1 (enclosing
/// balls are enumerated over <=3-point supports).
FilteredComplex cech_filtration(const PointCloud& pc, int max_dim);

/// Vietoris-Rips filtration: simplex value = longest edge / 2, any N<=3.
FilteredComplex rips_filtration(const PointCloud& pc, int max_dim);

/// All cubes of f ordered by (value, dimension, anchor).
FilteredComplex cubical_filtration(const CellFunction& f);

}  // namespace pdlearn
