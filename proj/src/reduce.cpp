#include "pdlearn/reduce.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pdlearn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Symmetric difference of two ascending index lists (F2 column addition).
void xor_into(std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b,
              std::vector<std::int64_t>& scratch) {
  scratch.clear();
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(scratch));
  a.swap(scratch);
}

struct ReductionResult {
  // death_of[i] = column that kills cell i, or -1
  std::vector<std::int64_t> death_of;
  // positive[i] = the cell's own column reduced to zero (it creates a class)
  std::vector<bool> positive;
};

ReductionResult reduce_matrix(const FilteredComplex& fc, int max_reduce_dim, Reduction algorithm) {
  const std::int64_t n = static_cast<std::int64_t>(fc.cells.size());
  ReductionResult res;
  res.death_of.assign(n, -1);
  res.positive.assign(n, false);

  std::vector<std::vector<std::int64_t>> columns(n);
  std::vector<std::int64_t> low_inv(n, -1);
  std::vector<std::int64_t> scratch;
  std::vector<bool> cleared(n, false);

  auto reduce_column = [&](std::int64_t j) {
    std::vector<std::int64_t> col = fc.cells[j].boundary;
    while (!col.empty()) {
      const std::int64_t owner = low_inv[col.back()];
      if (owner < 0) break;
      xor_into(col, columns[owner], scratch);
    }
    if (col.empty()) {
      res.positive[j] = true;
    } else {
      const std::int64_t low = col.back();
      low_inv[low] = j;
      res.death_of[low] = j;
      columns[j] = std::move(col);
    }
  };

  if (algorithm == Reduction::Plain) {
    for (std::int64_t j = 0; j < n; ++j) {
      if (fc.cells[j].dim == 0) {
        res.positive[j] = true;
        continue;
      }
      if (fc.cells[j].dim > max_reduce_dim) continue;
      reduce_column(j);
    }
  } else {
    const int top = std::min(fc.max_cell_dim(), max_reduce_dim);
    for (int d = top; d >= 1; --d) {
      for (std::int64_t j = 0; j < n; ++j) {
        if (fc.cells[j].dim != d) continue;
        if (cleared[j]) {
          res.positive[j] = true;
          continue;
        }
        reduce_column(j);
        if (!res.positive[j]) cleared[columns[j].back()] = true;
      }
    }
    for (std::int64_t j = 0; j < n; ++j)
      if (fc.cells[j].dim == 0) res.positive[j] = true;
  }
  return res;
}

}  // namespace

bool PersistencePair::essential() const { return death_cell < 0; }

static std::array<double, 3> representative(const std::vector<std::array<double, 3>>& verts) {
  if (verts.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan};
  }
  std::array<double, 3> c = {0, 0, 0};
  for (const auto& v : verts)
    for (int k = 0; k < 3; ++k) c[k] += v[k];
  for (int k = 0; k < 3; ++k) c[k] /= static_cast<double>(verts.size());
  return c;
}

std::array<double, 3> PersistencePair::birth_pos() const { return representative(birth_vertices); }
std::array<double, 3> PersistencePair::death_pos() const { return representative(death_vertices); }

std::vector<PersistencePair> PersistenceDiagram::degree_pairs(int degree) const {
  std::vector<PersistencePair> out;
  for (const auto& p : pairs)
    if (p.degree == degree) out.push_back(p);
  return out;
}

PersistenceDiagram compute_persistence(const FilteredComplex& fc, int max_degree, bool reduced,
                                       Reduction algorithm) {
  if (max_degree < 0) throw std::invalid_argument("compute_persistence: max_degree must be >= 0");
  fc.validate();

  const std::int64_t n = static_cast<std::int64_t>(fc.cells.size());
  const ReductionResult red = reduce_matrix(fc, max_degree + 1, algorithm);

  PersistenceDiagram dg;
  dg.reduced = reduced;
  std::int64_t essential_d0 = -1;  // earliest-born essential degree-0 cell
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& cell = fc.cells[i];
    if (cell.dim > max_degree || !red.positive[i]) continue;
    PersistencePair pair;
    pair.degree = cell.dim;
    pair.birth = cell.value;
    pair.birth_cell = i;
    pair.birth_vertices = cell.vertices;
    if (red.death_of[i] >= 0) {
      const auto& killer = fc.cells[red.death_of[i]];
      if (killer.value == cell.value) continue;  // zero lifetime
      pair.death = killer.value;
      pair.death_cell = red.death_of[i];
      pair.death_vertices = killer.vertices;
    } else {
      pair.death = kInf;
      pair.death_cell = -1;
      if (cell.dim == 0 && essential_d0 < 0) essential_d0 = i;  // first = earliest birth
    }
    dg.pairs.push_back(std::move(pair));
  }

  if (reduced && essential_d0 >= 0) {
    std::erase_if(dg.pairs, [&](const PersistencePair& p) { return p.birth_cell == essential_d0; });
  }
  return dg;
}

namespace {

/// Rank over F2 of the boundary map from q-cells to (q-1)-cells, restricted
/// to cells with value <= t.
int f2_boundary_rank(const FilteredComplex& fc, const std::vector<std::int64_t>& sub, int q) {
  if (q <= 0) return 0;
  std::vector<std::int64_t> row_of(fc.cells.size(), -1);
  std::int64_t rows = 0;
  for (std::int64_t id : sub)
    if (fc.cells[id].dim == q - 1) row_of[id] = rows++;
  const std::size_t words = static_cast<std::size_t>((rows + 63) / 64);

  std::vector<std::vector<std::uint64_t>> pivots;  // echelon basis
  std::vector<std::int64_t> pivot_rows;
  int rank = 0;
  std::vector<std::uint64_t> col(words);
  for (std::int64_t id : sub) {
    if (fc.cells[id].dim != q) continue;
    std::fill(col.begin(), col.end(), 0);
    for (std::int64_t b : fc.cells[id].boundary) {
      const std::int64_t r = row_of[b];
      col[static_cast<std::size_t>(r) / 64] ^= 1ULL << (r % 64);
    }
    for (std::size_t k = 0; k < pivots.size(); ++k) {
      const std::int64_t pr = pivot_rows[k];
      if (col[static_cast<std::size_t>(pr) / 64] >> (pr % 64) & 1)
        for (std::size_t wIdx = 0; wIdx < words; ++wIdx) col[wIdx] ^= pivots[k][wIdx];
    }
    std::int64_t lead = -1;
    for (std::int64_t r = 0; r < rows && lead < 0; ++r)
      if (col[static_cast<std::size_t>(r) / 64] >> (r % 64) & 1) lead = r;
    if (lead >= 0) {
      pivots.push_back(col);
      pivot_rows.push_back(lead);
      ++rank;
    }
  }
  return rank;
}

}  // namespace

int betti_oracle(const FilteredComplex& fc, double t, int q) {
  if (q < 0) throw std::invalid_argument("betti_oracle: q must be >= 0");
  if (fc.cells.size() > kBettiOracleCellLimit)
    throw std::invalid_argument("betti_oracle: complex exceeds the cell limit");
  fc.validate();

  std::vector<std::int64_t> sub;
  for (std::size_t i = 0; i < fc.cells.size(); ++i)
    if (fc.cells[i].value <= t) sub.push_back(static_cast<std::int64_t>(i));

  std::int64_t n_q = 0;
  for (std::int64_t id : sub)
    if (fc.cells[id].dim == q) ++n_q;
  const int rank_q = f2_boundary_rank(fc, sub, q);
  const int rank_q1 = f2_boundary_rank(fc, sub, q + 1);
  return static_cast<int>(n_q) - rank_q - rank_q1;
}

}  // namespace pdlearn
