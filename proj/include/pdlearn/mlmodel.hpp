#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace pdlearn {

enum class Task { Regression, Classification };
enum class PenaltyKind { L1, L2 };

struct Penalty {
  PenaltyKind kind = PenaltyKind::L2;
  double lambda = 0.0;

  void validate() const;
};

/// Row layout of a sample: the persistence-image block first, then named
/// scalar features.
struct FeatureLayout {
  int pi_dim = 0;
  std::vector<std::string> extra_features;

  int total() const { return pi_dim + static_cast<int>(extra_features.size()); }
};

struct Dataset {
  Eigen::MatrixXd inputs;   // M x n, rows are samples
  Eigen::VectorXd targets;  // length M
  FeatureLayout layout;

  Eigen::Index sample_count() const { return inputs.rows(); }
  void validate(Task task) const;
};

struct TrainedLinearModel {
  Task task = Task::Regression;
  Eigen::VectorXd w;
  double b = 0.0;
  Penalty penalty;
  FeatureLayout layout;
  // training diagnostics
  double final_loss = 0.0;   // penalized objective at the solution
  int iterations = 0;
  bool converged = true;
  bool standardized = false;
};

struct FitOptions {
  double tol = 1e-6;        // max-norm of the composite gradient map
  int max_iterations = 100000;
  bool standardize = false; // fit on z-scored features, fold back afterwards
  // linear + L2 only: use the iterative first-order solver instead of the
  // closed-form normal equations (kept for cross-checking)
  bool force_iterative = false;
  const Eigen::VectorXd* warm_start = nullptr;
};

/// Minimize (1/2M) sum (w.x_i + b - y_i)^2 + lambda R(w). L2 is solved in
/// closed form via the normal equations (dual form when n > M); L1 by cyclic
/// coordinate descent with soft thresholding. Intercept unpenalized.
TrainedLinearModel fit_linear(const Dataset& ds, const Penalty& pen, const FitOptions& opts = {});

/// Minimize the mean cross-entropy plus lambda R(w) by proximal gradient
/// steps with backtracking and Nesterov acceleration. Intercept unpenalized.
TrainedLinearModel fit_logistic(const Dataset& ds, const Penalty& pen, const FitOptions& opts = {});

/// Linear response for regression; P(y=1) for classification.
double predict(const TrainedLinearModel& model, const Eigen::VectorXd& x);
bool classify(const TrainedLinearModel& model, const Eigen::VectorXd& x);

double score_accuracy(const TrainedLinearModel& model, const Dataset& ds);
double score_r2(const TrainedLinearModel& model, const Dataset& ds);

struct CrossValResult {
  double best_lambda = 0.0;
  std::vector<double> lambdas;
  std::vector<double> mean_scores;             // same order as lambdas
  std::vector<std::vector<double>> fold_scores;
};

/// k-fold cross validation over the lambda grid; folds are stratified for
/// classification. Score is mean accuracy / R^2. Ties go to the larger
/// lambda.
CrossValResult cross_validate(const Dataset& ds, Task task, PenaltyKind kind,
                              const std::vector<double>& lambda_grid, int k,
                              std::uint64_t seed = 0, int threads = 1);

/// Ten logarithmically spaced values in [1e-4, 1].
std::vector<double> default_lambda_grid();

/// Loss and analytic gradient of the unpenalized data term, exposed for
/// verification.
double linear_loss(const Dataset& ds, const Eigen::VectorXd& w, double b);
void linear_loss_gradient(const Dataset& ds, const Eigen::VectorXd& w, double b,
                          Eigen::VectorXd& grad_w, double& grad_b);
double logistic_loss(const Dataset& ds, const Eigen::VectorXd& w, double b);
void logistic_loss_gradient(const Dataset& ds, const Eigen::VectorXd& w, double b,
                            Eigen::VectorXd& grad_w, double& grad_b);

}  // namespace pdlearn
