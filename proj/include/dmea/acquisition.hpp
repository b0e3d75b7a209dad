#ifndef DMEA_ACQUISITION_HPP
#define DMEA_ACQUISITION_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "dmea/gp.hpp"
#include "dmea/rng.hpp"

namespace dmea {

enum class AcquisitionKind { EI, PI, LCB };

// One member of the candidate bank. `jitter` applies to EI/PI, (nu, delta)
// to LCB. `id` indexes the bank and keys the penalty ledger.
struct AcquisitionSpec {
  AcquisitionKind kind;
  double jitter = 0.0;
  double nu = 0.0;
  double delta = 0.0;
  int id = -1;

  std::string name() const;
};

// The q = 7 candidates: EI(1e-3), PI(1e-3) and five LCB settings
// (nu, delta) in {(0.5,0.5), (0.5,0.05), (5,0.1), (10,0.1), (30,0.1)}.
const std::vector<AcquisitionSpec>& acquisition_bank();

// LCB exploration weight: kappa = sqrt(nu * tau_i) with
// tau_i = 2 log(i^{d/2+2} pi^2 / (3 delta)).
double kappa(double nu, double delta, int iteration, int dim);

// Score at a known posterior (mean, variance), larger = more recommended.
// LCB scores are negated so all bank members share one orientation.
double evaluate_from_posterior(const AcquisitionSpec& spec, double mean,
                               double variance, int iteration, int dim,
                               double incumbent);

// Score at x under the model posterior. `incumbent` is the smallest
// expensively evaluated objective value so far.
double evaluate(const AcquisitionSpec& spec, const GpModel& model,
                const Eigen::VectorXd& x, int iteration, double incumbent);

struct MaximizeResult {
  Eigen::VectorXd argmax;
  double value = 0.0;
};

struct MaximizeOptions {
  int lhs_starts = -1;              // -1: 10 * dim
  int local_budget = -1;            // evaluations per refined start; -1: 200 * dim
  int refine_top = 8;               // starts kept for local refinement
  Eigen::MatrixXd extra_starts;     // d x m, appended to the LHS starts
};

// Multistart maximizer over the unit cube: LHS starts plus any extra starts,
// the best few refined by coordinate-wise direct search. Deterministic given
// the generator state.
MaximizeResult maximize(const std::function<double(const Eigen::VectorXd&)>& objective,
                        int dim, const MaximizeOptions& options, Rng& rng);

// Same, but with a caller-provided start set (column per point) and their
// objective values when already known.
MaximizeResult maximize_from_starts(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const Eigen::MatrixXd& starts, const Eigen::VectorXd& start_values,
    int local_budget, int refine_top);

}  // namespace dmea

#endif
