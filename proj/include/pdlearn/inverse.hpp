#pragma once

#include <string>
#include <vector>

#include "pdlearn/mlmodel.hpp"
#include "pdlearn/pimage.hpp"

namespace pdlearn {

/// Grid cells whose learned magnitude clears the threshold, split by sign.
/// Positive cells push predictions toward class 1 / larger responses.
struct SignificantRegion {
  std::vector<int> positive_cells;
  std::vector<int> negative_cells;
  double threshold = 0.0;
  double fraction = 0.0;
  PIParams params;
};

/// Reshape the persistence-image slice of the learned weights onto the grid.
DualDiagram dual_diagram(const TrainedLinearModel& model, const PIParams& params);

/// Cells with |value| >= frac * max|value|, frac in (0, 1].
SignificantRegion threshold_region(const DualDiagram& dd, double frac);

struct SelectedPairs {
  std::vector<PersistencePair> positive;
  std::vector<PersistencePair> negative;
};

/// Pairs of the given degree whose (birth, death) falls inside a selected
/// cell rectangle (half-open). Pairs outside every selected cell are dropped.
SelectedPairs select_pairs(const PersistenceDiagram& dg, const SignificantRegion& region,
                           int degree);

/// Elementwise product of the PI slice of w with the sample vector, on the
/// grid.
DualDiagram weighted_diagram(const TrainedLinearModel& model, const PersistenceImageVector& x);

struct PredictionDecomposition {
  double pi_term = 0.0;
  std::vector<std::pair<std::string, double>> extra_terms;
  double intercept = 0.0;
  double total = 0.0;
};

/// Split predict(model, x) into PI, per-extra-feature and intercept
/// contributions; total is their exact sum (the linear response z, pre-
/// sigmoid for classifiers).
PredictionDecomposition prediction_decomposition(const TrainedLinearModel& model,
                                                 const Eigen::VectorXd& x);

}  // namespace pdlearn
