#include "dmea/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace dmea {

namespace {

constexpr double kSqrt5 = 2.23606797749978969640917366873;
constexpr double kLog2Pi = 1.83787706640934548356065947281;

double matern52_from_r(double r, double signal_variance) {
  return signal_variance * (1.0 + kSqrt5 * r + (5.0 / 3.0) * r * r) *
         std::exp(-kSqrt5 * r);
}

// Builds the Gram matrix of the scaled inputs and, when `pair_weight` is
// non-null, caches sf2 * (5/3) * (1 + sqrt5 r) * exp(-sqrt5 r) per pair for
// the lengthscale gradient.
void build_gram(const Eigen::MatrixXd& scaled, double sf2, double nugget,
                Eigen::MatrixXd& K, Eigen::MatrixXd* pair_weight) {
  const Eigen::Index n = scaled.cols();
  K.resize(n, n);
  if (pair_weight) pair_weight->resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    K(j, j) = sf2 + nugget;
    if (pair_weight) (*pair_weight)(j, j) = sf2 * (5.0 / 3.0);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double r2 = (scaled.col(i) - scaled.col(j)).squaredNorm();
      const double r = std::sqrt(r2);
      const double e = std::exp(-kSqrt5 * r);
      K(i, j) = K(j, i) = sf2 * (1.0 + kSqrt5 * r + (5.0 / 3.0) * r2) * e;
      if (pair_weight) {
        (*pair_weight)(i, j) = (*pair_weight)(j, i) =
            sf2 * (5.0 / 3.0) * (1.0 + kSqrt5 * r) * e;
      }
    }
  }
}

struct LmlObjective {
  const Eigen::MatrixXd& X;  // d x n
  const Eigen::VectorXd& y;
  double nugget;

  // theta = (log lengthscales..., log signal variance); returns -LML and
  // fills grad with the gradient of -LML. Returns +inf on factorization
  // failure.
  double operator()(const Eigen::VectorXd& theta, Eigen::VectorXd& grad) const {
    const Eigen::Index d = X.rows();
    const Eigen::Index n = X.cols();
    Eigen::VectorXd inv_ls = (-theta.head(d).array()).exp();
    const double sf2 = std::exp(theta[d]);

    Eigen::MatrixXd scaled = inv_ls.asDiagonal() * X;
    Eigen::MatrixXd K, pw;
    build_gram(scaled, sf2, nugget, K, &pw);

    Eigen::LLT<Eigen::MatrixXd> llt(K);
    if (llt.info() != Eigen::Success) {
      return std::numeric_limits<double>::infinity();
    }

    Eigen::VectorXd alpha = llt.solve(y);
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) logdet += std::log(llt.matrixL()(i, i));
    logdet *= 2.0;
    const double lml =
        -0.5 * y.dot(alpha) - 0.5 * logdet - 0.5 * double(n) * kLog2Pi;

    // W = alpha alpha^T - K^{-1}; dLML/dtheta_h = 0.5 tr(W dK/dtheta_h)
    Eigen::MatrixXd W = -llt.solve(Eigen::MatrixXd::Identity(n, n));
    W.noalias() += alpha * alpha.transpose();

    grad.resize(d + 1);
    grad.setZero();
    double g_sf2 = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      g_sf2 += 0.5 * W(j, j) * (K(j, j) - nugget);
      for (Eigen::Index i = j + 1; i < n; ++i) {
        g_sf2 += W(i, j) * K(i, j);
        const double w = W(i, j) * pw(i, j);
        for (Eigen::Index m = 0; m < d; ++m) {
          const double s = scaled(m, i) - scaled(m, j);
          grad[m] += w * s * s;  // d r^2 / d log l_m = -2 s_m; halves cancel
        }
      }
    }
    grad[d] = g_sf2;
    grad = -grad;  // gradient of -LML
    return -lml;
  }
};

// Quasi-Newton (BFGS on the inverse Hessian) minimization with box clamping.
// Small and dense; the parameter space is d+1 dimensional.
struct BoxBfgsResult {
  Eigen::VectorXd x;
  double f = std::numeric_limits<double>::infinity();
  bool ok = false;
};

template <typename F>
BoxBfgsResult box_bfgs(const F& fn, Eigen::VectorXd x,
                       const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                       int max_iter, double gtol) {
  const auto clamp = [&](Eigen::VectorXd v) {
    return v.cwiseMax(lo).cwiseMin(hi).eval();
  };
  x = clamp(x);
  const Eigen::Index p = x.size();
  Eigen::VectorXd g(p), g_new(p);
  double f = fn(x, g);
  BoxBfgsResult res;
  if (!std::isfinite(f)) return res;

  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(p, p);
  for (int it = 0; it < max_iter; ++it) {
    // Projected gradient for the stopping test: ignore components that push
    // against an active bound.
    double pg = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) {
      const bool at_lo = x[i] <= lo[i] + 1e-12 && g[i] > 0.0;
      const bool at_hi = x[i] >= hi[i] - 1e-12 && g[i] < 0.0;
      if (!at_lo && !at_hi) pg = std::max(pg, std::abs(g[i]));
    }
    if (pg < gtol) break;

    Eigen::VectorXd dir = -(H * g);
    if (dir.dot(g) > -1e-12 * dir.norm() * g.norm()) {
      H.setIdentity();
      dir = -g;
    }

    const double slope = dir.dot(g);
    double step = 1.0;
    bool accepted = false;
    Eigen::VectorXd x_new;
    double f_new = f;
    for (int ls = 0; ls < 40; ++ls) {
      x_new = clamp(x + step * dir);
      f_new = fn(x_new, g_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (H.isIdentity(1e-14)) break;
      H.setIdentity();
      continue;
    }

    Eigen::VectorXd s = x_new - x;
    Eigen::VectorXd yv = g_new - g;
    const double sy = s.dot(yv);
    if (sy > 1e-12) {
      const double rho = 1.0 / sy;
      Eigen::MatrixXd I = Eigen::MatrixXd::Identity(p, p);
      H = (I - rho * s * yv.transpose()) * H * (I - rho * yv * s.transpose()) +
          rho * s * s.transpose();
    } else {
      H.setIdentity();
    }
    x = x_new;
    f = f_new;
    g = g_new;
    if (s.norm() < 1e-14) break;
  }
  res.x = x;
  res.f = f;
  res.ok = std::isfinite(f);
  return res;
}

}  // namespace

double matern52_ard(const Eigen::VectorXd& x, const Eigen::VectorXd& z,
                    const GpHyperparameters& hyper) {
  if (x.size() != z.size() || x.size() != hyper.lengthscales.size()) {
    throw std::invalid_argument("matern52_ard: dimension mismatch");
  }
  const double r2 =
      ((x - z).array() / hyper.lengthscales.array()).square().sum();
  return matern52_from_r(std::sqrt(r2), hyper.signal_variance);
}

std::pair<double, Eigen::VectorXd> log_marginal_likelihood(
    const GpHyperparameters& hyper, const Eigen::MatrixXd& X,
    const Eigen::VectorXd& y) {
  if (X.rows() != y.size() || hyper.lengthscales.size() != X.cols()) {
    throw std::invalid_argument("log_marginal_likelihood: shape mismatch");
  }
  // X arrives row-per-point here; the objective wants column-per-point.
  Eigen::MatrixXd Xt = X.transpose();
  const Eigen::Index d = Xt.rows();
  LmlObjective obj{Xt, y, hyper.nugget};
  Eigen::VectorXd theta(d + 1);
  theta.head(d) = hyper.lengthscales.array().log();
  theta[d] = std::log(hyper.signal_variance);
  Eigen::VectorXd grad;
  const double neg = obj(theta, grad);
  if (!std::isfinite(neg)) {
    throw IllConditionedError("log_marginal_likelihood: factorization failed",
                              hyper.nugget);
  }
  return {-neg, -grad};
}

GpModel::GpModel(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                 const GpHyperparameters& hyper, bool standardize)
    : hyper_(hyper) {
  if (X.rows() != y.size()) {
    throw std::invalid_argument("GpModel: X rows must match y length");
  }
  if (hyper.lengthscales.size() != X.cols()) {
    throw std::invalid_argument("GpModel: lengthscale count must match dim");
  }
  points_ = X.transpose();
  if (standardize) {
    y_mean_ = y.mean();
    const double var = (y.array() - y_mean_).square().mean();
    const double sd = std::sqrt(var);
    y_scale_ = sd < 1e-12 ? 1.0 : sd;  // degenerate constant outputs
  } else {
    y_mean_ = 0.0;
    y_scale_ = 1.0;
  }
  y_std_ = (y.array() - y_mean_) / y_scale_;
  factorize();
}

void GpModel::factorize() {
  const Eigen::Index n = points_.cols();
  Eigen::VectorXd inv_ls = hyper_.lengthscales.cwiseInverse();
  scaled_points_ = inv_ls.asDiagonal() * points_;
  const Eigen::MatrixXd& scaled = scaled_points_;
  Eigen::MatrixXd K;
  build_gram(scaled, hyper_.signal_variance, hyper_.nugget, K, nullptr);
  Eigen::LLT<Eigen::MatrixXd> llt(K);
  if (llt.info() != Eigen::Success) {
    throw IllConditionedError("GpModel: Gram factorization failed",
                              hyper_.nugget);
  }
  chol_ = llt.matrixL();
  weights_ = llt.solve(y_std_);
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) logdet += std::log(chol_(i, i));
  log_likelihood_ = -0.5 * y_std_.dot(weights_) - logdet -
                    0.5 * double(n) * kLog2Pi;
}

GpModel GpModel::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     int restarts, Rng& rng) {
  GpFitOptions options;
  options.restarts = restarts;
  return fit(X, y, options, rng);
}

GpModel GpModel::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     const GpFitOptions& options, Rng& rng) {
  if (X.rows() < 2) {
    throw std::invalid_argument("GpModel::fit: needs at least 2 points");
  }
  const Eigen::Index d = X.cols();

  double y_mean = y.mean();
  double sd = std::sqrt((y.array() - y_mean).square().mean());
  if (sd < 1e-12) sd = 1.0;
  Eigen::VectorXd y_std = (y.array() - y_mean) / sd;

  Eigen::MatrixXd Xt = X.transpose();
  Eigen::VectorXd lo(d + 1), hi(d + 1);
  lo.head(d).setConstant(options.log_lengthscale_lo);
  hi.head(d).setConstant(options.log_lengthscale_hi);
  lo[d] = options.log_signal_lo;
  hi[d] = options.log_signal_hi;

  // Starting points are drawn up front so the escalation ladder below does
  // not change the stream consumed per restart.
  std::vector<Eigen::VectorXd> starts;
  starts.reserve(options.restarts);
  for (int r = 0; r < options.restarts; ++r) {
    Eigen::VectorXd theta(d + 1);
    if (r == 0) {
      theta.head(d).setConstant(std::log(0.5));
      theta[d] = 0.0;
    } else {
      for (Eigen::Index i = 0; i < d + 1; ++i) {
        theta[i] = rng.uniform(lo[i], hi[i]);
      }
    }
    starts.push_back(std::move(theta));
  }

  double nugget = options.nugget;
  while (true) {
    LmlObjective obj{Xt, y_std, nugget};
    BoxBfgsResult best;
    for (const auto& start : starts) {
      BoxBfgsResult r = box_bfgs(obj, start, lo, hi,
                                 options.max_opt_iterations,
                                 options.grad_tolerance);
      if (r.ok && r.f < best.f) best = r;
    }
    if (best.ok) {
      GpHyperparameters hyper;
      hyper.lengthscales = best.x.head(d).array().exp();
      hyper.signal_variance = std::exp(best.x[d]);
      hyper.nugget = nugget;
      try {
        return GpModel(X, y, hyper, true);
      } catch (const IllConditionedError&) {
        // fall through to escalation
      }
    }
    if (nugget >= options.max_nugget) {
      throw IllConditionedError("GpModel::fit: all restarts failed", nugget);
    }
    nugget = std::max(nugget * 10.0, 1e-6);
  }
}

void GpModel::kernel_vector(const Eigen::VectorXd& x,
                            Eigen::VectorXd& out) const {
  const Eigen::Index n = points_.cols();
  out.resize(n);
  Eigen::VectorXd scaled_x =
      (x.array() / hyper_.lengthscales.array()).matrix();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = std::sqrt((scaled_points_.col(i) - scaled_x).squaredNorm());
    out[i] = matern52_from_r(r, hyper_.signal_variance);
  }
}

std::pair<double, double> GpModel::predict(const Eigen::VectorXd& x) const {
  if (x.size() != points_.rows()) {
    throw std::invalid_argument("GpModel::predict: dimension mismatch");
  }
  Eigen::VectorXd k;
  kernel_vector(x, k);
  const double mean_std = k.dot(weights_);
  Eigen::VectorXd v = chol_.triangularView<Eigen::Lower>().solve(k);
  double var_std = hyper_.signal_variance - v.squaredNorm();
  var_std = std::max(var_std, 0.0);
  return {y_mean_ + y_scale_ * mean_std, y_scale_ * y_scale_ * var_std};
}

double GpModel::predict_mean(const Eigen::VectorXd& x) const {
  if (x.size() != points_.rows()) {
    throw std::invalid_argument("GpModel::predict_mean: dimension mismatch");
  }
  Eigen::VectorXd k;
  kernel_vector(x, k);
  return y_mean_ + y_scale_ * k.dot(weights_);
}

Eigen::VectorXd GpModel::predict_mean_gradient(const Eigen::VectorXd& x) const {
  if (x.size() != points_.rows()) {
    throw std::invalid_argument(
        "GpModel::predict_mean_gradient: dimension mismatch");
  }
  const Eigen::Index n = points_.cols();
  const Eigen::Index d = points_.rows();
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd scaled_x =
      (x.array() / hyper_.lengthscales.array()).matrix();
  // d k / d x_m = -sf2 (5/3)(1 + sqrt5 r) e^{-sqrt5 r} (x_m - z_m) / l_m^2
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = std::sqrt((scaled_points_.col(i) - scaled_x).squaredNorm());
    const double c = hyper_.signal_variance * (5.0 / 3.0) *
                     (1.0 + kSqrt5 * r) * std::exp(-kSqrt5 * r) * weights_[i];
    for (Eigen::Index m = 0; m < d; ++m) {
      grad[m] -= c * (x[m] - points_(m, i)) /
                 (hyper_.lengthscales[m] * hyper_.lengthscales[m]);
    }
  }
  return y_scale_ * grad;
}

}  // namespace dmea
