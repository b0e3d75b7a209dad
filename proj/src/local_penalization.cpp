#include "dmea/local_penalization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dmea/benchmarks.hpp"

namespace dmea {

namespace {

constexpr double kAcqFloor = 1e-50;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

Penalizer make_penalizer(const Eigen::VectorXd& center, double lipschitz,
                         double best_value, const GpModel& model) {
  const auto [mu, var] = model.predict(center);
  return Penalizer{center, lipschitz, best_value, mu,
                   std::sqrt(std::max(var, 0.0))};
}

double penalizer_value(const Penalizer& pen, const Eigen::VectorXd& x) {
  const double sigma = std::max(pen.sigma_center, 1e-12);
  const double z = (pen.lipschitz * (x - pen.center).norm() -
                    (pen.best_value - pen.mu_center)) /
                   (std::sqrt(2.0) * sigma);
  return normal_cdf(z);
}

double estimate_lipschitz(const GpModel& model, Rng& rng) {
  const int dim = model.dim();
  Eigen::MatrixXd unit(dim, 2);
  unit.col(0).setZero();
  unit.col(1).setOnes();
  Eigen::MatrixXd samples = latin_hypercube(500 * dim, dim, unit, rng);
  double best = 0.0;
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    best = std::max(
        best, model.predict_mean_gradient(samples.row(i).transpose()).norm());
  }
  return std::max(best, 1e-7);
}

std::vector<LpProposal> propose_batch_lp(const AcquisitionSpec& spec,
                                         const GpModel& model, int n,
                                         int iteration, double incumbent,
                                         Rng& rng) {
  if (n < 1) throw std::invalid_argument("propose_batch_lp: n must be >= 1");
  const int dim = model.dim();

  const auto raw = [&](const Eigen::VectorXd& x) {
    return evaluate(spec, model, x, iteration, incumbent);
  };

  std::vector<LpProposal> chosen;
  std::vector<Penalizer> penalizers;
  double lipschitz = -1.0;  // estimated lazily before the second proposal

  for (int u = 0; u < n; ++u) {
    // Fresh start set per greedy step: 10d LHS plus the training points.
    Eigen::MatrixXd unit(dim, 2);
    unit.col(0).setZero();
    unit.col(1).setOnes();
    Eigen::MatrixXd lhs = latin_hypercube(10 * dim, dim, unit, rng);
    Eigen::MatrixXd starts(dim, lhs.rows() + model.size());
    starts.leftCols(lhs.rows()) = lhs.transpose();
    starts.rightCols(model.size()) = model.points();

    Eigen::VectorXd raw_at_start(starts.cols());
    for (Eigen::Index i = 0; i < starts.cols(); ++i) {
      raw_at_start[i] = raw(starts.col(i));
    }

    MaximizeResult pick;
    if (u == 0) {
      pick = maximize_from_starts(raw, starts, raw_at_start, 200 * dim, 8);
    } else {
      // LCB scores can be negative; shift them positive so the
      // multiplicative penalizers keep their meaning.
      double shift = 0.0;
      if (spec.kind == AcquisitionKind::LCB) {
        shift = 1.0 + std::abs(raw_at_start.minCoeff());
      }
      const auto penalized = [&](const Eigen::VectorXd& x) {
        double v = std::log(std::max(raw(x) + shift, kAcqFloor));
        for (const Penalizer& p : penalizers) {
          v += std::log(penalizer_value(p, x));
        }
        return v;
      };
      Eigen::VectorXd pen_at_start(starts.cols());
      for (Eigen::Index i = 0; i < starts.cols(); ++i) {
        double v = std::log(std::max(raw_at_start[i] + shift, kAcqFloor));
        for (const Penalizer& p : penalizers) {
          v += std::log(penalizer_value(p, starts.col(i)));
        }
        pen_at_start[i] = v;
      }
      pick = maximize_from_starts(penalized, starts, pen_at_start, 200 * dim, 8);
      pick.value = raw(pick.argmax);
    }
    chosen.push_back({pick.argmax, pick.value});

    if (u + 1 < n) {
      if (lipschitz < 0.0) lipschitz = estimate_lipschitz(model, rng);
      penalizers.push_back(
          make_penalizer(pick.argmax, lipschitz, incumbent, model));
    }
  }
  return chosen;
}

double threshold_g(const AcquisitionSpec& spec, const GpModel& model, int k,
                   int iteration, double incumbent, Rng& rng) {
  if (k < 2) throw std::invalid_argument("threshold_g: k must be >= 2");
  const int n = k / 2;
  const auto proposals =
      propose_batch_lp(spec, model, n, iteration, incumbent, rng);

  // Degenerate surrogate: proposals collapsed onto one another.
  for (std::size_t i = 0; i < proposals.size(); ++i) {
    for (std::size_t j = i + 1; j < proposals.size(); ++j) {
      if ((proposals[i].point - proposals[j].point).norm() < 1e-9) {
        return -std::numeric_limits<double>::infinity();
      }
    }
  }

  double g = std::numeric_limits<double>::infinity();
  for (const auto& p : proposals) g = std::min(g, p.raw_acquisition);
  return g;
}

}  // namespace dmea
