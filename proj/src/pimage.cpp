#include "pdlearn/pimage.hpp"

#include <cmath>
#include <stdexcept>

namespace pdlearn {

int PIGrid::locate(double b, double d) const {
  if (b < b_min || b >= b_max || d < d_min || d >= d_max) return -1;
  const int ib = static_cast<int>((b - b_min) / cell_width());
  const int id = static_cast<int>((d - d_min) / cell_height());
  return flat(std::min(ib, nb - 1), std::min(id, nd - 1));
}

void PIGrid::validate() const {
  if (!(b_min < b_max) || !(d_min < d_max))
    throw std::invalid_argument("PIGrid: ranges must be nonempty");
  if (nb <= 0 || nd <= 0) throw std::invalid_argument("PIGrid: grid counts must be positive");
}

void PIParams::validate() const {
  grid.validate();
  if (!(sigma > 0)) throw std::invalid_argument("PIParams: sigma must be > 0");
  if (!(C > 0)) throw std::invalid_argument("PIParams: C must be > 0");
  if (!(p > 0)) throw std::invalid_argument("PIParams: p must be > 0");
}

double DualDiagram::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

int DualDiagram::nonzero_count() const {
  int n = 0;
  for (double v : values) n += (v != 0.0);
  return n;
}

double pi_weight(double b, double d, double C, double p) {
  if (d < b) throw std::invalid_argument("pi_weight: requires d >= b");
  return std::atan(C * std::pow(d - b, p));
}

PersistenceImageVector vectorize(const PersistenceDiagram& dg, int degree, const PIParams& params) {
  params.validate();
  const auto pairs = dg.degree_pairs(degree);
  for (const auto& pr : pairs)
    if (pr.essential())
      throw std::invalid_argument(
          "vectorize: diagram contains an infinite pair in degree " + std::to_string(degree) +
          "; compute reduced persistent homology first");

  PersistenceImageVector out;
  out.params = params;
  out.values.assign(params.grid.size(), 0.0);
  const double inv2s2 = 1.0 / (2.0 * params.sigma * params.sigma);
  std::vector<double> bfac(params.grid.nb), dfac(params.grid.nd);
  for (const auto& pr : pairs) {
    const double w = pi_weight(pr.birth, pr.death, params.C, params.p);
    for (int ib = 0; ib < params.grid.nb; ++ib) {
      const double db = pr.birth - params.grid.birth_center(ib);
      bfac[ib] = std::exp(-db * db * inv2s2);
    }
    for (int id = 0; id < params.grid.nd; ++id) {
      const double dd = pr.death - params.grid.death_center(id);
      dfac[id] = std::exp(-dd * dd * inv2s2);
    }
    for (int id = 0; id < params.grid.nd; ++id) {
      const double wd = w * dfac[id];
      double* row = out.values.data() + params.grid.flat(0, id);
      for (int ib = 0; ib < params.grid.nb; ++ib) row[ib] += wd * bfac[ib];
    }
  }
  return out;
}

DualDiagram reconstruct(const std::vector<double>& vec, const PIParams& params) {
  params.validate();
  if (vec.size() != static_cast<std::size_t>(params.grid.size()))
    throw std::invalid_argument("reconstruct: vector length does not match the grid");
  DualDiagram dd;
  dd.values = vec;
  dd.params = params;
  return dd;
}

}  // namespace pdlearn
