#ifndef DMEA_GP_HPP
#define DMEA_GP_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <utility>

#include "dmea/rng.hpp"

namespace dmea {

// ARD Matern 5/2 hyperparameters. Lengthscales are in normalized-input
// units, signal variance in standardized-output units squared.
struct GpHyperparameters {
  Eigen::VectorXd lengthscales;
  double signal_variance = 1.0;
  double nugget = 1e-6;
};

class IllConditionedError : public std::runtime_error {
 public:
  IllConditionedError(const std::string& what, double nugget)
      : std::runtime_error(what), attempted_nugget(nugget) {}
  double attempted_nugget;
};

double matern52_ard(const Eigen::VectorXd& x, const Eigen::VectorXd& z,
                    const GpHyperparameters& hyper);

// Log marginal likelihood of the standardized data (X, y) under `hyper`,
// together with its gradient over (log lengthscales..., log signal variance).
// The nugget is held fixed. Throws IllConditionedError when K + nugget*I
// cannot be factorized.
std::pair<double, Eigen::VectorXd> log_marginal_likelihood(
    const GpHyperparameters& hyper, const Eigen::MatrixXd& X,
    const Eigen::VectorXd& y);

struct GpFitOptions {
  int restarts = 5;
  double nugget = 1e-6;
  double max_nugget = 1e-2;          // escalation ceiling on factorization failure
  double log_lengthscale_lo = std::log(0.01);
  double log_lengthscale_hi = std::log(10.0);
  double log_signal_lo = std::log(1e-3);
  double log_signal_hi = std::log(1e3);
  int max_opt_iterations = 100;
  double grad_tolerance = 1e-5;
};

// Gaussian-process regressor over the unit cube. Immutable once built;
// concurrent predict calls are safe.
class GpModel {
 public:
  // Builds the model at the given hyperparameters without any fitting.
  // When `standardize` is set the outputs are shifted/scaled to zero mean,
  // unit variance internally and predictions are mapped back.
  GpModel(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
          const GpHyperparameters& hyper, bool standardize = true);

  // Maximizes the log marginal likelihood over `restarts` quasi-Newton
  // ascents. The first start is lengthscales = 0.5, signal variance = 1;
  // the rest are drawn uniformly from the log-space search box.
  static GpModel fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     int restarts, Rng& rng);
  static GpModel fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     const GpFitOptions& options, Rng& rng);

  // Posterior mean and variance at x, in original output units.
  std::pair<double, double> predict(const Eigen::VectorXd& x) const;
  double predict_mean(const Eigen::VectorXd& x) const;

  // Gradient of the posterior mean at x (original output units per
  // normalized-input unit).
  Eigen::VectorXd predict_mean_gradient(const Eigen::VectorXd& x) const;

  int dim() const { return static_cast<int>(points_.rows()); }
  int size() const { return static_cast<int>(points_.cols()); }
  const GpHyperparameters& hyper() const { return hyper_; }
  double y_mean() const { return y_mean_; }
  double y_scale() const { return y_scale_; }
  double log_likelihood() const { return log_likelihood_; }

  // Training inputs, one point per column (d x n).
  const Eigen::MatrixXd& points() const { return points_; }
  // Training point i as a column vector.
  Eigen::VectorXd point(int i) const { return points_.col(i); }
  // Raw (de-standardized) training outputs.
  Eigen::VectorXd train_y() const {
    return (y_std_.array() * y_scale_ + y_mean_).matrix();
  }

 private:
  Eigen::MatrixXd points_;         // d x n, column per point
  Eigen::MatrixXd scaled_points_;  // points over lengthscales, cached
  Eigen::VectorXd y_std_;          // standardized outputs
  double y_mean_ = 0.0;
  double y_scale_ = 1.0;
  GpHyperparameters hyper_;
  Eigen::MatrixXd chol_;     // lower-triangular factor of K + nugget I
  Eigen::VectorXd weights_;  // (K + nugget I)^{-1} y_std
  double log_likelihood_ = 0.0;

  void factorize();
  void kernel_vector(const Eigen::VectorXd& x, Eigen::VectorXd& out) const;
};

}  // namespace dmea

#endif
