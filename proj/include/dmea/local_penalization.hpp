#ifndef DMEA_LOCAL_PENALIZATION_HPP
#define DMEA_LOCAL_PENALIZATION_HPP

#include <Eigen/Dense>
#include <vector>

#include "dmea/acquisition.hpp"
#include "dmea/gp.hpp"
#include "dmea/rng.hpp"

namespace dmea {

// Multiplicative exclusion zone around an already-proposed batch member.
// mu_center / sigma_center cache the posterior at the center.
struct Penalizer {
  Eigen::VectorXd center;
  double lipschitz;     // estimated global bound on ||grad mu||
  double best_value;    // current minimum observed objective
  double mu_center;
  double sigma_center;
};

Penalizer make_penalizer(const Eigen::VectorXd& center, double lipschitz,
                         double best_value, const GpModel& model);

// Value in (0, 1]; approaches 1 far from the center.
double penalizer_value(const Penalizer& pen, const Eigen::VectorXd& x);

// Max of ||grad mu|| over 500 * dim LHS samples of the unit cube, floored
// at 1e-7.
double estimate_lipschitz(const GpModel& model, Rng& rng);

struct LpProposal {
  Eigen::VectorXd point;
  double raw_acquisition;  // unpenalized value at the point
};

// Sequential-greedy batch of n proposals: each step maximizes the
// log-acquisition plus the summed log penalizer values of the points chosen
// before it. EI/PI values are soft-floored at 1e-50 before the log; LCB
// scores are shifted positive by 1 + |min score over the start set| first.
std::vector<LpProposal> propose_batch_lp(const AcquisitionSpec& spec,
                                         const GpModel& model, int n,
                                         int iteration, double incumbent,
                                         Rng& rng);

// Recommendation threshold: the smallest raw acquisition value among
// floor(k/2) LP proposals. Returns -infinity when the proposals collapse
// onto one another (degenerate surrogate), which makes every point count
// as recommended downstream.
double threshold_g(const AcquisitionSpec& spec, const GpModel& model, int k,
                   int iteration, double incumbent, Rng& rng);

}  // namespace dmea

#endif
