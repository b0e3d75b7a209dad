#include "dmea/benchmarks.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dmea {

namespace {

Eigen::MatrixXd box(double lo, double hi, int dim) {
  Eigen::MatrixXd b(dim, 2);
  b.col(0).setConstant(lo);
  b.col(1).setConstant(hi);
  return b;
}

double six_hump_camel(const Eigen::VectorXd& x) {
  const double x1 = x[0], x2 = x[1];
  return (4.0 - 2.1 * x1 * x1 + x1 * x1 * x1 * x1 / 3.0) * x1 * x1 +
         x1 * x2 + (-4.0 + 4.0 * x2 * x2) * x2 * x2;
}

double eggholder(const Eigen::VectorXd& x) {
  const double x1 = x[0], x2 = x[1];
  return -(x2 + 47.0) * std::sin(std::sqrt(std::abs(x2 + x1 / 2.0 + 47.0))) -
         x1 * std::sin(std::sqrt(std::abs(x1 - (x2 + 47.0))));
}

double branin(const Eigen::VectorXd& x) {
  const double x1 = x[0], x2 = x[1];
  const double b = 5.1 / (4.0 * M_PI * M_PI);
  const double c = 5.0 / M_PI;
  const double t = 1.0 / (8.0 * M_PI);
  const double u = x2 - b * x1 * x1 + c * x1 - 6.0;
  return u * u + 10.0 * (1.0 - t) * std::cos(x1) + 10.0;
}

double branin_forrester(const Eigen::VectorXd& x) {
  // Branin with the additive 5*x1 term, which leaves a single global optimum.
  return branin(x) + 5.0 * x[0];
}

double ackley(const Eigen::VectorXd& x) {
  const double d = double(x.size());
  const double s1 = x.squaredNorm() / d;
  const double s2 = (2.0 * M_PI * x.array()).cos().sum() / d;
  return -20.0 * std::exp(-0.2 * std::sqrt(s1)) - std::exp(s2) + 20.0 +
         std::exp(1.0);
}

double rosenbrock(const Eigen::VectorXd& x) {
  double v = 0.0;
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i + 1] - x[i] * x[i];
    const double b = 1.0 - x[i];
    v += 100.0 * a * a + b * b;
  }
  return v;
}

double alpine1(const Eigen::VectorXd& x) {
  return (x.array() * x.array().sin() + 0.1 * x.array()).abs().sum();
}

double hartmann6(const Eigen::VectorXd& x) {
  static const double alpha[4] = {1.0, 1.2, 3.0, 3.2};
  static const double A[4][6] = {{10, 3, 17, 3.5, 1.7, 8},
                                 {0.05, 10, 17, 0.1, 8, 14},
                                 {3, 3.5, 1.7, 10, 17, 8},
                                 {17, 8, 0.05, 10, 0.1, 14}};
  static const double P[4][6] = {
      {0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
      {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
      {0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650},
      {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381}};
  double v = 0.0;
  for (int i = 0; i < 4; ++i) {
    double e = 0.0;
    for (int j = 0; j < 6; ++j) {
      const double d = x[j] - P[i][j];
      e += A[i][j] * d * d;
    }
    v -= alpha[i] * std::exp(-e);
  }
  return v;
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(Eigen::Index(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

const std::vector<BenchmarkProblem>& benchmark_registry() {
  static const std::vector<BenchmarkProblem> registry = [] {
    Eigen::MatrixXd camel_box(2, 2), branin_box(2, 2);
    camel_box << -2, 2, -1, 1;
    branin_box << -5, 10, 0, 15;
    std::vector<BenchmarkProblem> r;
    r.push_back({"SixHumpCamel", 2, camel_box, -1.0316284534898774,
                 vec({0.08984201368301331, -0.7126564032704135}),
                 six_hump_camel});
    r.push_back({"Eggholder", 2, box(-512, 512, 2), -959.6406627208406,
                 vec({512.0, 404.2318026776131}), eggholder});
    r.push_back({"Branin", 2, branin_box, 0.39788735772973816,
                 vec({M_PI, 2.275}), branin});
    r.push_back({"Ackley2", 2, box(-32.768, 32.768, 2), 0.0, vec({0.0, 0.0}),
                 ackley});
    r.push_back({"Rosenbrock2", 2, box(-2.048, 2.048, 2), 0.0,
                 vec({1.0, 1.0}), rosenbrock});
    r.push_back({"BraninForrester", 2, branin_box, -16.644021570843194,
                 vec({-3.6892852783145096, 13.629987745088865}),
                 branin_forrester});
    r.push_back({"Alpine1", 5, box(-10, 10, 5), 0.0, Eigen::VectorXd::Zero(5),
                 alpine1});
    r.push_back({"Hartmann6", 6, box(0, 1, 6), -3.3223680114155156,
                 vec({0.20168951, 0.15001069, 0.47687398, 0.27533243,
                      0.31165162, 0.65730054}),
                 hartmann6});
    return r;
  }();
  return registry;
}

const BenchmarkProblem& get_benchmark(const std::string& name) {
  for (const auto& p : benchmark_registry()) {
    if (p.name == name) return p;
  }
  throw std::invalid_argument("unknown benchmark: " + name);
}

double evaluate_benchmark(const std::string& name, const Eigen::VectorXd& x) {
  const BenchmarkProblem& p = get_benchmark(name);
  if (x.size() != p.dim) {
    throw std::invalid_argument("evaluate_benchmark: dimension mismatch");
  }
  for (int i = 0; i < p.dim; ++i) {
    if (x[i] < p.bounds(i, 0) || x[i] > p.bounds(i, 1)) {
      throw std::invalid_argument("evaluate_benchmark: point out of bounds");
    }
  }
  return p.evaluate(x);
}

double known_optimum(const std::string& name) {
  return get_benchmark(name).f_star;
}

Eigen::MatrixXd latin_hypercube(int n, int dim, const Eigen::MatrixXd& bounds,
                                Rng& rng) {
  if (n < 1 || dim < 1) {
    throw std::invalid_argument("latin_hypercube: n and dim must be >= 1");
  }
  Eigen::MatrixXd out(n, dim);
  std::vector<int> strata(n);
  for (int j = 0; j < dim; ++j) {
    std::iota(strata.begin(), strata.end(), 0);
    for (int i = n - 1; i > 0; --i) {
      std::swap(strata[i], strata[rng.uniform_index(std::size_t(i) + 1)]);
    }
    const double lo = bounds(j, 0), hi = bounds(j, 1);
    for (int i = 0; i < n; ++i) {
      const double u = (strata[i] + rng.uniform01()) / double(n);
      out(i, j) = lo + (hi - lo) * u;
    }
  }
  return out;
}

}  // namespace dmea
