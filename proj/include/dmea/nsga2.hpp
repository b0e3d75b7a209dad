#ifndef DMEA_NSGA2_HPP
#define DMEA_NSGA2_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "dmea/rng.hpp"

namespace dmea {

struct Individual {
  Eigen::VectorXd genome;       // point in the unit cube
  Eigen::Vector3d objectives;   // minimized
  int rank = 0;
  double crowding = 0.0;
};

// Paired non-dominated sets: objective space (pf) and design space (ps),
// index-aligned.
struct ParetoResult {
  std::vector<Eigen::Vector3d> pf;
  std::vector<Eigen::VectorXd> ps;

  std::size_t size() const { return pf.size(); }
};

// a dominates b under minimization.
bool dominates(const Eigen::Vector3d& a, const Eigen::Vector3d& b);

// Deb's fast non-dominated sort; front 0 is the non-dominated subset and the
// fronts partition the indices.
std::vector<std::vector<int>> fast_nondominated_sort(
    const std::vector<Eigen::Vector3d>& objectives);

// Boundary points per objective get +infinity; interior points the sum of
// normalized neighbor gaps. Zero-range objectives contribute nothing.
std::vector<double> crowding_distance(
    const std::vector<Eigen::Vector3d>& front);

// SBX crossover followed by polynomial mutation, clipped to the unit cube.
std::pair<Eigen::VectorXd, Eigen::VectorXd> variation(
    const Eigen::VectorXd& parent_a, const Eigen::VectorXd& parent_b,
    double eta_c, double eta_m, double p_mut, double p_cross, Rng& rng);

struct Nsga2Options {
  int pop_size = 100;
  int generations = 100;
  double eta_c = 15.0;
  double eta_m = 20.0;
  double p_cross = 0.9;
  double p_mut = -1.0;              // -1: 1/dim
  Eigen::MatrixXd seed_points;      // d x m, injected into the initial pop
  // Observer over front 0 of each generation's population (for tests).
  std::function<void(int, const std::vector<Eigen::Vector3d>&)> on_generation;
};

// Runs NSGA-II on a 3-objective problem over the unit cube and returns
// front 0 of the final population with near-duplicate genomes removed.
ParetoResult run_nsga2(
    const std::function<Eigen::Vector3d(const Eigen::VectorXd&)>& objective_fn,
    int dim, const Nsga2Options& options, Rng& rng);

}  // namespace dmea

#endif
