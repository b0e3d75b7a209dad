#include "dmea/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dmea/benchmarks.hpp"

namespace dmea {

namespace {

constexpr double kSigmaFloor = 1e-12;

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

std::string AcquisitionSpec::name() const {
  switch (kind) {
    case AcquisitionKind::EI:
      return "EI";
    case AcquisitionKind::PI:
      return "PI";
    case AcquisitionKind::LCB: {
      char buf[48];
      std::snprintf(buf, sizeof(buf), "LCB(%g,%g)", nu, delta);
      return buf;
    }
  }
  return "?";
}

const std::vector<AcquisitionSpec>& acquisition_bank() {
  static const std::vector<AcquisitionSpec> bank = [] {
    std::vector<AcquisitionSpec> b;
    b.push_back({AcquisitionKind::EI, 1e-3, 0.0, 0.0, 0});
    b.push_back({AcquisitionKind::PI, 1e-3, 0.0, 0.0, 1});
    const double settings[5][2] = {
        {0.5, 0.5}, {0.5, 0.05}, {5.0, 0.1}, {10.0, 0.1}, {30.0, 0.1}};
    for (int i = 0; i < 5; ++i) {
      b.push_back({AcquisitionKind::LCB, 0.0, settings[i][0], settings[i][1],
                   2 + i});
    }
    return b;
  }();
  return bank;
}

double kappa(double nu, double delta, int iteration, int dim) {
  if (nu <= 0.0) throw std::invalid_argument("kappa: nu must be positive");
  if (delta <= 0.0 || delta >= 1.0) {
    throw std::invalid_argument("kappa: delta must lie in (0, 1)");
  }
  if (iteration < 1) throw std::invalid_argument("kappa: iteration must be >= 1");
  if (dim < 1) throw std::invalid_argument("kappa: dim must be >= 1");
  const double tau =
      2.0 * ((dim / 2.0 + 2.0) * std::log(double(iteration)) +
             std::log(M_PI * M_PI / (3.0 * delta)));
  return std::sqrt(nu * tau);
}

double evaluate_from_posterior(const AcquisitionSpec& spec, double mean,
                               double variance, int iteration, int dim,
                               double incumbent) {
  const double sigma = std::max(std::sqrt(std::max(variance, 0.0)), kSigmaFloor);
  switch (spec.kind) {
    case AcquisitionKind::EI: {
      const double s = incumbent - spec.jitter - mean;
      const double z = s / sigma;
      return std::max(s * normal_cdf(z) + sigma * normal_pdf(z), 0.0);
    }
    case AcquisitionKind::PI: {
      const double s = incumbent - spec.jitter - mean;
      return normal_cdf(s / sigma);
    }
    case AcquisitionKind::LCB: {
      const double k = kappa(spec.nu, spec.delta, iteration, dim);
      return k * sigma - mean;  // negated LCB, larger is better
    }
  }
  return 0.0;
}

double evaluate(const AcquisitionSpec& spec, const GpModel& model,
                const Eigen::VectorXd& x, int iteration, double incumbent) {
  const auto [mean, variance] = model.predict(x);
  return evaluate_from_posterior(spec, mean, variance, iteration, model.dim(),
                                 incumbent);
}

namespace {

// Coordinate-wise direct search (compass pattern) from `x`, spending at most
// `budget` objective evaluations. The step halves when no axis move improves.
void refine(const std::function<double(const Eigen::VectorXd&)>& objective,
            Eigen::VectorXd& x, double& fx, int budget) {
  const Eigen::Index d = x.size();
  double step = 0.1;
  int used = 0;
  Eigen::VectorXd trial = x;
  while (used < budget && step > 1e-7) {
    bool improved = false;
    for (Eigen::Index m = 0; m < d && used < budget; ++m) {
      for (const double dir : {+1.0, -1.0}) {
        if (used >= budget) break;
        trial = x;
        trial[m] = std::clamp(x[m] + dir * step, 0.0, 1.0);
        if (trial[m] == x[m]) continue;
        const double ft = objective(trial);
        ++used;
        if (ft > fx) {
          x = trial;
          fx = ft;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
}

}  // namespace

MaximizeResult maximize_from_starts(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const Eigen::MatrixXd& starts, const Eigen::VectorXd& start_values,
    int local_budget, int refine_top) {
  const Eigen::Index n = starts.cols();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return start_values[a] > start_values[b];
  });

  MaximizeResult best;
  best.argmax = starts.col(order[0]);
  best.value = start_values[order[0]];

  const int keep = std::min<int>(refine_top, int(n));
  for (int r = 0; r < keep; ++r) {
    Eigen::VectorXd x = starts.col(order[r]);
    double fx = start_values[order[r]];
    refine(objective, x, fx, local_budget);
    if (fx > best.value) {
      best.value = fx;
      best.argmax = x;
    }
  }
  return best;
}

MaximizeResult maximize(const std::function<double(const Eigen::VectorXd&)>& objective,
                        int dim, const MaximizeOptions& options, Rng& rng) {
  const int lhs_n = options.lhs_starts > 0 ? options.lhs_starts : 10 * dim;
  const int budget = options.local_budget > 0 ? options.local_budget : 200 * dim;

  Eigen::MatrixXd unit_bounds(dim, 2);
  unit_bounds.col(0).setZero();
  unit_bounds.col(1).setOnes();
  Eigen::MatrixXd lhs = latin_hypercube(lhs_n, dim, unit_bounds, rng);  // n x d

  const Eigen::Index extra = options.extra_starts.cols();
  Eigen::MatrixXd starts(dim, lhs_n + extra);
  starts.leftCols(lhs_n) = lhs.transpose();
  if (extra > 0) starts.rightCols(extra) = options.extra_starts;

  Eigen::VectorXd values(starts.cols());
  for (Eigen::Index i = 0; i < starts.cols(); ++i) {
    values[i] = objective(starts.col(i));
  }
  return maximize_from_starts(objective, starts, values, budget,
                              options.refine_top);
}

}  // namespace dmea
