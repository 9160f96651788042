#pragma once

#include <string>
#include <vector>

#include "pdlearn/reduce.hpp"

namespace pdlearn {

/// Grid over the (birth, death) plane. Cells are half-open rectangles; the
/// flat ordering is birth-fastest: flat = id * nb + ib.
struct PIGrid {
  double b_min = 0.0, b_max = 1.0;
  double d_min = 0.0, d_max = 1.0;
  int nb = 1, nd = 1;

  int size() const { return nb * nd; }
  double cell_width() const { return (b_max - b_min) / nb; }
  double cell_height() const { return (d_max - d_min) / nd; }
  double birth_center(int ib) const { return b_min + (ib + 0.5) * cell_width(); }
  double death_center(int id) const { return d_min + (id + 0.5) * cell_height(); }
  int flat(int ib, int id) const { return id * nb + ib; }
  /// Cell containing (b, d) under half-open rectangles, or -1.
  int locate(double b, double d) const;
  void validate() const;
};

struct PIParams {
  double sigma = 1.0;
  double C = 0.5;
  double p = 1.0;
  PIGrid grid;

  void validate() const;
};

struct PersistenceImageVector {
  std::vector<double> values;
  PIParams params;
};

/// Learned or derived values laid out on the persistence-image grid.
struct DualDiagram {
  std::vector<double> values;  // same flat ordering as PersistenceImageVector
  PIParams params;
  std::string provenance;

  double at(int ib, int id) const { return values[params.grid.flat(ib, id)]; }
  double max_abs() const;
  int nonzero_count() const;
};

/// Lifetime weight arctan(C * (d - b)^p).
double pi_weight(double b, double d, double C, double p);

/// Discretized persistence image of the degree-q pairs of dg: the weighted
/// Gaussian sum evaluated at cell centers. Pairs outside the grid still
/// contribute their tails. Throws if the degree contains an infinite pair.
PersistenceImageVector vectorize(const PersistenceDiagram& dg, int degree, const PIParams& params);

/// Inverse of the flattening: reshape a vector onto the grid, values
/// untouched.
DualDiagram reconstruct(const std::vector<double>& vec, const PIParams& params);

}  // namespace pdlearn
