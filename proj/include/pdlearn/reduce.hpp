#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdlearn/complex.hpp"

namespace pdlearn {

/// One interval of the decomposition, with the cells that created and killed
/// it. `birth_vertices` / `death_vertices` copy the geometry payloads of
/// those cells: vertex lists for simplices, the source pixel center for
/// cubes. death == +inf and death_cell == -1 for essential classes.
struct PersistencePair {
  int degree = 0;
  double birth = 0.0;
  double death = 0.0;
  std::int64_t birth_cell = -1;
  std::int64_t death_cell = -1;
  std::vector<std::array<double, 3>> birth_vertices;
  std::vector<std::array<double, 3>> death_vertices;

  bool essential() const;
  double lifetime() const { return death - birth; }
  /// Single representative point: the payload point for cubes and vertices,
  /// the barycenter for higher simplices.
  std::array<double, 3> birth_pos() const;
  std::array<double, 3> death_pos() const;
};

struct PersistenceDiagram {
  std::vector<PersistencePair> pairs;
  bool reduced = false;
  std::string source;

  std::vector<PersistencePair> degree_pairs(int degree) const;
};

enum class Reduction { Plain, Twist };

/// Persistent homology of fc over F2 by boundary-matrix column reduction.
/// Zero-lifetime pairs are dropped. With `reduced` the single essential
/// degree-0 class with the earliest birth is removed.
PersistenceDiagram compute_persistence(const FilteredComplex& fc, int max_degree, bool reduced,
                                       Reduction algorithm = Reduction::Twist);

/// Betti number of the sublevel complex at t, by dense F2 Gaussian
/// elimination on the boundary matrices. Independent of the reduction above;
/// guarded to small complexes.
int betti_oracle(const FilteredComplex& fc, double t, int q);

/// Cell-count limit accepted by betti_oracle.
inline constexpr std::size_t kBettiOracleCellLimit = 300;

}  // namespace pdlearn
