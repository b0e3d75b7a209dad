#ifndef DMEA_BENCHMARKS_HPP
#define DMEA_BENCHMARKS_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "dmea/rng.hpp"

namespace dmea {

struct BenchmarkProblem {
  std::string name;
  int dim;
  Eigen::MatrixXd bounds;       // dim x 2, (lo, hi) per row
  double f_star;                // verified global minimum value
  Eigen::VectorXd minimizer;    // one verified global minimizer
  std::function<double(const Eigen::VectorXd&)> evaluate;
};

// The eight benchmark problems, in a fixed registry order.
const std::vector<BenchmarkProblem>& benchmark_registry();

// Throws std::invalid_argument for unknown names.
const BenchmarkProblem& get_benchmark(const std::string& name);

// Bounds-checked evaluation in original units.
double evaluate_benchmark(const std::string& name, const Eigen::VectorXd& x);

double known_optimum(const std::string& name);

// n points (rows) stratified per dimension: one sample per equal-width
// stratum, uniform within, strata shuffled independently per dimension.
Eigen::MatrixXd latin_hypercube(int n, int dim, const Eigen::MatrixXd& bounds,
                                Rng& rng);

}  // namespace dmea

#endif
