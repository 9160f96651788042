#include "pdlearn/inverse.hpp"

#include <cmath>
#include <stdexcept>

namespace pdlearn {

DualDiagram dual_diagram(const TrainedLinearModel& model, const PIParams& params) {
  params.validate();
  if (model.layout.pi_dim != params.grid.size())
    throw std::invalid_argument("dual_diagram: model PI dimension does not match the grid");
  std::vector<double> slice(model.w.data(), model.w.data() + model.layout.pi_dim);
  DualDiagram dd = reconstruct(slice, params);
  dd.provenance = "learned-weights";
  return dd;
}

SignificantRegion threshold_region(const DualDiagram& dd, double frac) {
  if (!(frac > 0.0) || frac > 1.0)
    throw std::invalid_argument("threshold_region: frac must be in (0, 1]");
  const double peak = dd.max_abs();
  if (peak == 0.0) throw std::invalid_argument("threshold_region: diagram is identically zero");
  SignificantRegion region;
  region.fraction = frac;
  region.threshold = frac * peak;
  region.params = dd.params;
  for (int i = 0; i < static_cast<int>(dd.values.size()); ++i) {
    if (std::abs(dd.values[i]) >= region.threshold) {
      if (dd.values[i] > 0)
        region.positive_cells.push_back(i);
      else
        region.negative_cells.push_back(i);
    }
  }
  return region;
}

SelectedPairs select_pairs(const PersistenceDiagram& dg, const SignificantRegion& region,
                           int degree) {
  std::vector<char> sign(region.params.grid.size(), 0);
  for (int c : region.positive_cells) sign[c] = 1;
  for (int c : region.negative_cells) sign[c] = -1;

  SelectedPairs out;
  for (const auto& pr : dg.degree_pairs(degree)) {
    if (pr.essential()) continue;
    const int cell = region.params.grid.locate(pr.birth, pr.death);
    if (cell < 0 || sign[cell] == 0) continue;
    (sign[cell] > 0 ? out.positive : out.negative).push_back(pr);
  }
  return out;
}

DualDiagram weighted_diagram(const TrainedLinearModel& model, const PersistenceImageVector& x) {
  if (model.layout.pi_dim != x.params.grid.size() ||
      x.values.size() != static_cast<std::size_t>(x.params.grid.size()))
    throw std::invalid_argument("weighted_diagram: dimensions do not match");
  std::vector<double> prod(x.values.size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = model.w[static_cast<Eigen::Index>(i)] * x.values[i];
  DualDiagram dd = reconstruct(prod, x.params);
  dd.provenance = "weighted-sample";
  return dd;
}

PredictionDecomposition prediction_decomposition(const TrainedLinearModel& model,
                                                 const Eigen::VectorXd& x) {
  if (x.size() != model.w.size())
    throw std::invalid_argument("prediction_decomposition: input length does not match the model");
  PredictionDecomposition dec;
  dec.pi_term = model.w.head(model.layout.pi_dim).dot(x.head(model.layout.pi_dim));
  for (std::size_t e = 0; e < model.layout.extra_features.size(); ++e) {
    const Eigen::Index j = model.layout.pi_dim + static_cast<Eigen::Index>(e);
    dec.extra_terms.emplace_back(model.layout.extra_features[e], model.w[j] * x[j]);
  }
  dec.intercept = model.b;
  dec.total = dec.pi_term + dec.intercept;
  for (const auto& [name, value] : dec.extra_terms) dec.total += value;
  return dec;
}

}  // namespace pdlearn
