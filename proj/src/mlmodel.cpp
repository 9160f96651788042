#include "pdlearn/mlmodel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <thread>

#include "pdlearn/rng.hpp"

namespace pdlearn {

namespace {

double softplus(double t) { return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

double sigmoid(double z) { return 1.0 / (std::exp(-z) + 1.0); }

double soft_threshold(double a, double lambda) {
  if (a > lambda) return a - lambda;
  if (a < -lambda) return a + lambda;
  return 0.0;
}

struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;  // 1 used for constant features

  static Standardizer fit(const Eigen::MatrixXd& X) {
    Standardizer s;
    s.mean = X.colwise().mean();
    Eigen::VectorXd var = (X.rowwise() - s.mean.transpose()).array().square().colwise().mean();
    s.scale = var.array().sqrt();
    for (Eigen::Index j = 0; j < s.scale.size(); ++j)
      if (s.scale[j] == 0.0) s.scale[j] = 1.0;
    return s;
  }
  Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const {
    return (X.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
  }
  // map (w, b) fitted on standardized features back to the original scale
  void fold_back(Eigen::VectorXd& w, double& b) const {
    w = w.array() / scale.array();
    b -= w.dot(mean);
  }
};

void check_finite(const Dataset& ds) {
  if (!ds.inputs.allFinite() || !ds.targets.allFinite())
    throw std::invalid_argument("Dataset: inputs and targets must be finite");
}

}  // namespace

void Penalty::validate() const {
  if (lambda < 0) throw std::invalid_argument("Penalty: lambda must be >= 0");
}

void Dataset::validate(Task task) const {
  if (inputs.rows() < 2) throw std::invalid_argument("Dataset: needs at least two samples");
  if (targets.size() != inputs.rows())
    throw std::invalid_argument("Dataset: target count does not match samples");
  if (layout.total() != inputs.cols())
    throw std::invalid_argument("Dataset: feature layout does not match input width");
  check_finite(*this);
  if (task == Task::Classification) {
    for (Eigen::Index i = 0; i < targets.size(); ++i)
      if (targets[i] != 0.0 && targets[i] != 1.0)
        throw std::invalid_argument("Dataset: classification targets must be 0 or 1");
  }
}

double linear_loss(const Dataset& ds, const Eigen::VectorXd& w, double b) {
  const Eigen::VectorXd r = ds.inputs * w + Eigen::VectorXd::Constant(ds.inputs.rows(), b) - ds.targets;
  return r.squaredNorm() / (2.0 * ds.inputs.rows());
}

void linear_loss_gradient(const Dataset& ds, const Eigen::VectorXd& w, double b,
                          Eigen::VectorXd& grad_w, double& grad_b) {
  const double m = static_cast<double>(ds.inputs.rows());
  const Eigen::VectorXd r = ds.inputs * w + Eigen::VectorXd::Constant(ds.inputs.rows(), b) - ds.targets;
  grad_w = ds.inputs.transpose() * r / m;
  grad_b = r.mean();
}

double logistic_loss(const Dataset& ds, const Eigen::VectorXd& w, double b) {
  const Eigen::VectorXd z = ds.inputs * w + Eigen::VectorXd::Constant(ds.inputs.rows(), b);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) acc += softplus(z[i]) - ds.targets[i] * z[i];
  return acc / static_cast<double>(z.size());
}

void logistic_loss_gradient(const Dataset& ds, const Eigen::VectorXd& w, double b,
                            Eigen::VectorXd& grad_w, double& grad_b) {
  const double m = static_cast<double>(ds.inputs.rows());
  Eigen::VectorXd z = ds.inputs * w + Eigen::VectorXd::Constant(ds.inputs.rows(), b);
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = sigmoid(z[i]) - ds.targets[i];
  grad_w = ds.inputs.transpose() * z / m;
  grad_b = z.mean();
}

namespace {

/// Cyclic coordinate descent with soft thresholding on centered data.
void lasso_cd(const Eigen::MatrixXd& Xc, const Eigen::VectorXd& yc, double lambda,
              const FitOptions& opts, Eigen::VectorXd& w, int& iters, bool& converged) {
  const double m = static_cast<double>(Xc.rows());
  const Eigen::Index n = Xc.cols();
  Eigen::VectorXd colsq(n);
  for (Eigen::Index j = 0; j < n; ++j) colsq[j] = Xc.col(j).squaredNorm() / m;

  Eigen::VectorXd r = yc - Xc * w;
  converged = false;
  int sweep = 0;
  const int max_sweeps = std::max(1, opts.max_iterations / std::max<int>(1, static_cast<int>(n)));
  for (; sweep < max_sweeps; ++sweep) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (colsq[j] == 0.0) continue;
      const double rho = Xc.col(j).dot(r) / m + colsq[j] * w[j];
      const double next = soft_threshold(rho, lambda) / colsq[j];
      if (next != w[j]) {
        r -= Xc.col(j) * (next - w[j]);
        w[j] = next;
      }
    }
    // KKT residual of the penalized problem
    const Eigen::VectorXd g = -(Xc.transpose() * r) / m;
    double worst = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (w[j] != 0.0)
        worst = std::max(worst, std::abs(g[j] + lambda * (w[j] > 0 ? 1.0 : -1.0)));
      else
        worst = std::max(worst, std::max(0.0, std::abs(g[j]) - lambda));
    }
    if (worst <= opts.tol) {
      converged = true;
      ++sweep;
      break;
    }
  }
  iters = sweep;
}

struct ProxResult {
  Eigen::VectorXd w;
  double b = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// FISTA on f(w,b) + l1 * ||w||_1 with backtracking and value restart.
/// `value_and_grad` evaluates the smooth part (data term plus any L2 term).
template <typename Oracle>
ProxResult fista(const Oracle& value_and_grad, Eigen::Index n, double l1, const FitOptions& opts,
                 const Eigen::VectorXd* w0) {
  ProxResult res;
  Eigen::VectorXd u(n + 1);
  u.setZero();
  if (w0 && w0->size() == n) u.head(n) = *w0;

  Eigen::VectorXd v = u, u_prev = u, grad(n + 1), cand(n + 1), gu(n + 1);
  double t = 1.0, theta = 1.0;
  double fv = value_and_grad(v, grad);
  double obj_prev = std::numeric_limits<double>::infinity();

  auto prox = [&](const Eigen::VectorXd& point, const Eigen::VectorXd& g, double step,
                  Eigen::VectorXd& out) {
    out.resize(n + 1);
    for (Eigen::Index j = 0; j < n; ++j) out[j] = soft_threshold(point[j] - step * g[j], step * l1);
    out[n] = point[n] - step * g[n];
  };

  int k = 0;
  for (; k < opts.max_iterations; ++k) {
    // backtracking on the majorization at v
    for (;;) {
      prox(v, grad, t, cand);
      const Eigen::VectorXd diff = cand - v;
      const double quad = fv + grad.dot(diff) + diff.squaredNorm() / (2.0 * t);
      const double fc = value_and_grad(cand, gu);  // gu reused as scratch gradient
      if (fc <= quad + 1e-12 * std::max(1.0, std::abs(quad))) break;
      t *= 0.5;
      if (t < 1e-18) break;
    }
    u_prev.swap(u);
    u = cand;

    // convergence: composite gradient map at u
    const double fu = value_and_grad(u, gu);
    prox(u, gu, t, cand);
    const double resid = ((u - cand) / t).template lpNorm<Eigen::Infinity>();
    if (resid <= opts.tol) {
      res.converged = true;
      ++k;
      break;
    }

    const double obj = fu + l1 * u.head(n).lpNorm<1>();
    const double theta_next = (1.0 + std::sqrt(1.0 + 4.0 * theta * theta)) / 2.0;
    if (obj > obj_prev) {  // restart momentum when the objective backslides
      theta = 1.0;
      v = u;
    } else {
      v = u + ((theta - 1.0) / theta_next) * (u - u_prev);
    }
    theta = theta_next;
    obj_prev = obj;
    fv = value_and_grad(v, grad);
  }
  res.w = u.head(n);
  res.b = u[n];
  res.iterations = k;
  return res;
}

/// L-BFGS with backtracking Armijo line search for smooth objectives.
template <typename Oracle>
ProxResult lbfgs(const Oracle& value_and_grad, Eigen::Index n, const FitOptions& opts,
                 const Eigen::VectorXd* w0) {
  ProxResult res;
  Eigen::VectorXd u(n + 1);
  u.setZero();
  if (w0 && w0->size() == n) u.head(n) = *w0;

  Eigen::VectorXd grad(n + 1), grad_new(n + 1);
  double f = value_and_grad(u, grad);
  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;
  const std::size_t memory = 10;

  int k = 0;
  for (; k < opts.max_iterations; ++k) {
    if (grad.lpNorm<Eigen::Infinity>() <= opts.tol) {
      res.converged = true;
      break;
    }
    // two-loop recursion
    Eigen::VectorXd q = grad;
    std::vector<double> alpha(s_hist.size());
    for (std::size_t i = s_hist.size(); i-- > 0;) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= alpha[i] * y_hist[i];
    }
    if (!s_hist.empty()) {
      const double gamma = s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
      q *= gamma;
    }
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(q);
      q += (alpha[i] - beta) * s_hist[i];
    }
    Eigen::VectorXd dir = -q;
    double slope = grad.dot(dir);
    if (slope >= 0) {  // safeguard: fall back to steepest descent
      dir = -grad;
      slope = -grad.squaredNorm();
    }

    double step = 1.0;
    Eigen::VectorXd u_new;
    double f_new = f;
    for (int ls = 0; ls < 60; ++ls) {
      u_new = u + step * dir;
      f_new = value_and_grad(u_new, grad_new);
      if (f_new <= f + 1e-4 * step * slope) break;
      step *= 0.5;
    }

    Eigen::VectorXd s = u_new - u;
    Eigen::VectorXd y = grad_new - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (s_hist.size() > memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    u = std::move(u_new);
    f = f_new;
    grad = grad_new;
  }
  res.w = u.head(n);
  res.b = u[n];
  res.iterations = k;
  return res;
}

TrainedLinearModel finish_model(Task task, Eigen::VectorXd w, double b, const Penalty& pen,
                                const Dataset& ds, const Standardizer* std_tf, int iterations,
                                bool converged) {
  TrainedLinearModel model;
  model.task = task;
  model.w = std::move(w);
  model.b = b;
  model.penalty = pen;
  model.layout = ds.layout;
  model.iterations = iterations;
  model.converged = converged;
  model.standardized = std_tf != nullptr;
  if (std_tf) std_tf->fold_back(model.w, model.b);
  const double data_term = task == Task::Regression ? linear_loss(ds, model.w, model.b)
                                                    : logistic_loss(ds, model.w, model.b);
  const double reg = pen.kind == PenaltyKind::L1 ? model.w.lpNorm<1>() : 0.5 * model.w.squaredNorm();
  model.final_loss = data_term + pen.lambda * reg;
  return model;
}

}  // namespace

TrainedLinearModel fit_linear(const Dataset& ds, const Penalty& pen, const FitOptions& opts) {
  ds.validate(Task::Regression);
  pen.validate();

  Standardizer std_tf;
  Eigen::MatrixXd X = ds.inputs;
  if (opts.standardize) {
    std_tf = Standardizer::fit(ds.inputs);
    X = std_tf.apply(ds.inputs);
  }
  const double m = static_cast<double>(X.rows());
  const Eigen::Index n = X.cols();
  const Eigen::RowVectorXd xbar = X.colwise().mean();
  const double ybar = ds.targets.mean();
  const Eigen::MatrixXd Xc = X.rowwise() - xbar;
  const Eigen::VectorXd yc = ds.targets.array() - ybar;

  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  int iterations = 0;
  bool converged = true;

  if (pen.kind == PenaltyKind::L1) {
    if (opts.warm_start && opts.warm_start->size() == n) w = *opts.warm_start;
    lasso_cd(Xc, yc, pen.lambda, opts, w, iterations, converged);
  } else if (opts.force_iterative) {
    const double lambda = pen.lambda;
    Dataset centered{Xc, yc, ds.layout};
    auto oracle = [&](const Eigen::VectorXd& u, Eigen::VectorXd& grad) {
      Eigen::VectorXd gw(n);
      double gb = 0.0;
      const Eigen::VectorXd wv = u.head(n);
      const double f = linear_loss(centered, wv, u[n]) + 0.5 * lambda * wv.squaredNorm();
      linear_loss_gradient(centered, wv, u[n], gw, gb);
      grad.head(n) = gw + lambda * wv;
      grad[n] = gb;
      return f;
    };
    ProxResult pr = lbfgs(oracle, n, opts, opts.warm_start);
    w = pr.w;
    iterations = pr.iterations;
    converged = pr.converged;
  } else if (pen.lambda == 0.0) {
    w = Xc.colPivHouseholderQr().solve(yc);
  } else if (n <= X.rows()) {
    Eigen::MatrixXd A = Xc.transpose() * Xc / m;
    A.diagonal().array() += pen.lambda;
    w = A.ldlt().solve(Xc.transpose() * yc / m);
  } else {
    // dual form: w = Xc' (Xc Xc'/M + lambda I)^-1 yc / M
    Eigen::MatrixXd K = Xc * Xc.transpose() / m;
    K.diagonal().array() += pen.lambda;
    w = Xc.transpose() * K.ldlt().solve(yc) / m;
  }

  const double b = ybar - w.dot(xbar.transpose());
  return finish_model(Task::Regression, std::move(w), b, pen, ds,
                      opts.standardize ? &std_tf : nullptr, iterations, converged);
}

TrainedLinearModel fit_logistic(const Dataset& ds, const Penalty& pen, const FitOptions& opts) {
  ds.validate(Task::Classification);
  pen.validate();
  const double m = static_cast<double>(ds.inputs.rows());
  const double positives = ds.targets.sum();
  if (positives == 0.0 || positives == m)
    throw std::invalid_argument("fit_logistic: both classes must be present");

  Standardizer std_tf;
  Dataset work = ds;
  if (opts.standardize) {
    std_tf = Standardizer::fit(ds.inputs);
    work.inputs = std_tf.apply(ds.inputs);
  }
  const Eigen::Index n = work.inputs.cols();

  ProxResult pr;
  if (pen.kind == PenaltyKind::L2) {
    const double lambda = pen.lambda;
    auto oracle = [&](const Eigen::VectorXd& u, Eigen::VectorXd& grad) {
      Eigen::VectorXd gw(n);
      double gb = 0.0;
      const Eigen::VectorXd wv = u.head(n);
      const double f = logistic_loss(work, wv, u[n]) + 0.5 * lambda * wv.squaredNorm();
      logistic_loss_gradient(work, wv, u[n], gw, gb);
      grad.resize(n + 1);
      grad.head(n) = gw + lambda * wv;
      grad[n] = gb;
      return f;
    };
    pr = lbfgs(oracle, n, opts, opts.warm_start);
  } else {
    auto oracle = [&](const Eigen::VectorXd& u, Eigen::VectorXd& grad) {
      Eigen::VectorXd gw(n);
      double gb = 0.0;
      const Eigen::VectorXd wv = u.head(n);
      const double f = logistic_loss(work, wv, u[n]);
      logistic_loss_gradient(work, wv, u[n], gw, gb);
      grad.resize(n + 1);
      grad.head(n) = gw;
      grad[n] = gb;
      return f;
    };
    pr = fista(oracle, n, pen.lambda, opts, opts.warm_start);
  }
  return finish_model(Task::Classification, std::move(pr.w), pr.b, pen, ds,
                      opts.standardize ? &std_tf : nullptr, pr.iterations, pr.converged);
}

double predict(const TrainedLinearModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.w.size())
    throw std::invalid_argument("predict: input length does not match the model");
  const double z = model.w.dot(x) + model.b;
  return model.task == Task::Regression ? z : sigmoid(z);
}

bool classify(const TrainedLinearModel& model, const Eigen::VectorXd& x) {
  if (model.task != Task::Classification)
    throw std::invalid_argument("classify: model is not a classifier");
  return predict(model, x) >= 0.5;
}

double score_accuracy(const TrainedLinearModel& model, const Dataset& ds) {
  if (model.task != Task::Classification)
    throw std::invalid_argument("score_accuracy: model is not a classifier");
  ds.validate(Task::Classification);
  Eigen::Index correct = 0;
  for (Eigen::Index i = 0; i < ds.sample_count(); ++i) {
    const bool pred = classify(model, ds.inputs.row(i).transpose());
    if (pred == (ds.targets[i] == 1.0)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(ds.sample_count());
}

double score_r2(const TrainedLinearModel& model, const Dataset& ds) {
  if (model.task != Task::Regression)
    throw std::invalid_argument("score_r2: model is not a regressor");
  ds.validate(Task::Regression);
  double ss_res = 0.0;
  const double ybar = ds.targets.mean();
  double ss_tot = 0.0;
  for (Eigen::Index i = 0; i < ds.sample_count(); ++i) {
    const double pred = predict(model, ds.inputs.row(i).transpose());
    ss_res += (ds.targets[i] - pred) * (ds.targets[i] - pred);
    ss_tot += (ds.targets[i] - ybar) * (ds.targets[i] - ybar);
  }
  if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
  return 1.0 - ss_res / ss_tot;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid(10);
  for (int i = 0; i < 10; ++i) grid[i] = std::pow(10.0, -4.0 + 4.0 * i / 9.0);
  return grid;
}

namespace {

Dataset subset(const Dataset& ds, const std::vector<int>& rows) {
  Dataset out;
  out.inputs.resize(static_cast<Eigen::Index>(rows.size()), ds.inputs.cols());
  out.targets.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.inputs.row(static_cast<Eigen::Index>(i)) = ds.inputs.row(rows[i]);
    out.targets[static_cast<Eigen::Index>(i)] = ds.targets[rows[i]];
  }
  out.layout = ds.layout;
  return out;
}

std::vector<std::vector<int>> make_folds(const Dataset& ds, Task task, int k, std::uint64_t seed) {
  const int m = static_cast<int>(ds.sample_count());
  std::vector<std::vector<int>> folds(k);
  auto shuffled = [&](std::vector<int> idx, std::uint64_t stream) {
    Rng rng = Rng::stream(seed, stream);
    for (std::size_t i = idx.size(); i > 1; --i)
      std::swap(idx[i - 1], idx[rng.uniform_index(i)]);
    return idx;
  };
  if (task == Task::Classification) {
    std::vector<int> by_class[2];
    for (int i = 0; i < m; ++i) by_class[ds.targets[i] == 1.0 ? 1 : 0].push_back(i);
    for (int c = 0; c < 2; ++c) {
      if (static_cast<int>(by_class[c].size()) < k)
        throw std::invalid_argument("cross_validate: a fold would have less than one sample per class");
      const std::vector<int> idx = shuffled(by_class[c], static_cast<std::uint64_t>(c));
      for (std::size_t i = 0; i < idx.size(); ++i) folds[i % k].push_back(idx[i]);
    }
  } else {
    if (m < k) throw std::invalid_argument("cross_validate: more folds than samples");
    std::vector<int> idx(m);
    for (int i = 0; i < m; ++i) idx[i] = i;
    idx = shuffled(idx, 0);
    for (std::size_t i = 0; i < idx.size(); ++i) folds[i % k].push_back(idx[i]);
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

}  // namespace

CrossValResult cross_validate(const Dataset& ds, Task task, PenaltyKind kind,
                              const std::vector<double>& lambda_grid, int k, std::uint64_t seed,
                              int threads) {
  if (lambda_grid.empty()) throw std::invalid_argument("cross_validate: lambda grid is empty");
  if (k < 2) throw std::invalid_argument("cross_validate: k must be >= 2");
  ds.validate(task);

  const auto folds = make_folds(ds, task, k, seed);

  // evaluate lambdas from largest to smallest within each fold so warm starts
  // walk down the path
  std::vector<std::size_t> order(lambda_grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return lambda_grid[a] > lambda_grid[b]; });

  std::vector<std::vector<double>> score(lambda_grid.size(), std::vector<double>(k, 0.0));
  auto run_fold = [&](int fold) {
    std::vector<int> train_rows;
    for (int f = 0; f < k; ++f)
      if (f != fold) train_rows.insert(train_rows.end(), folds[f].begin(), folds[f].end());
    std::sort(train_rows.begin(), train_rows.end());
    const Dataset train = subset(ds, train_rows);
    const Dataset test = subset(ds, folds[fold]);
    Eigen::VectorXd warm;
    for (std::size_t oi : order) {
      Penalty pen{kind, lambda_grid[oi]};
      FitOptions opts;
      if (warm.size() > 0) opts.warm_start = &warm;
      TrainedLinearModel model = task == Task::Regression ? fit_linear(train, pen, opts)
                                                          : fit_logistic(train, pen, opts);
      warm = model.w;
      score[oi][fold] =
          task == Task::Regression ? score_r2(model, test) : score_accuracy(model, test);
    }
  };

  if (threads > 1) {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    const int nthreads = std::min(threads, k);
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&]() {
        for (int f = next.fetch_add(1); f < k; f = next.fetch_add(1)) run_fold(f);
      });
    for (auto& th : pool) th.join();
  } else {
    for (int f = 0; f < k; ++f) run_fold(f);
  }

  CrossValResult res;
  res.lambdas = lambda_grid;
  res.fold_scores = score;
  res.mean_scores.resize(lambda_grid.size());
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    double acc = 0.0;
    for (int f = 0; f < k; ++f) acc += score[i][f];
    res.mean_scores[i] = acc / k;
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < lambda_grid.size(); ++i) {
    if (res.mean_scores[i] > res.mean_scores[best] ||
        (res.mean_scores[i] == res.mean_scores[best] && lambda_grid[i] > lambda_grid[best]))
      best = i;
  }
  res.best_lambda = lambda_grid[best];
  return res;
}

}  // namespace pdlearn
