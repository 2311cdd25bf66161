#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bvm/dynamics.hpp"
#include "bvm/kernel.hpp"
#include "bvm/observables.hpp"

namespace bvm {

struct BudgetSpec {
  double burn_in = 1e4;
  double horizon = 2e5;
  int n_batches = 20;
};

// Time-average estimate with batch-means error bars. The confidence
// interval is flagged inconclusive when the batch means stay visibly
// correlated (lag-1 autocorrelation above 0.2).
struct EstimateReport {
  std::string observable;
  double value = 0.0;
  double std_error = 0.0;
  int n_batches = 0;
  double batch_len = 0.0;
  double burn_in = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  double lag1_autocorr = 0.0;
  bool inconclusive = false;
  std::vector<double> batch_means;
};

// Ergodic averages of the observables along one long trajectory started at
// the heaviside state. Every sampled configuration is additionally checked
// against the Lipschitz bound |i10(m) - i10(n)| <= (m-n) i10(1); a
// violation throws, it cannot be a statistical fluke.
std::vector<EstimateReport> estimate_equilibrium(const Kernel& kernel, double eps,
                                                 const std::vector<ObservableFn>& observables,
                                                 const BudgetSpec& budget, std::uint64_t seed,
                                                 std::uint64_t stream = 0);

struct IdentityCheckResult {
  EstimateReport report;
  double target = 0.0;
  double z = 0.0;
};

// At zero bias the equilibrium mean of sum_k a_sym(k) I_k equals half the
// kernel's second moment; reports the z-score against that target.
IdentityCheckResult equilibrium_identity_check(const Kernel& kernel, const BudgetSpec& budget,
                                               std::uint64_t seed);

struct BoundCheckResult {
  EstimateReport report;
  double bound = 0.0;
  bool satisfied = false;  // one-sided at three standard errors
};

// For positive bias the same mean is bounded by half the second moment.
BoundCheckResult equilibrium_bound_check(const Kernel& kernel, double eps,
                                         const BudgetSpec& budget, std::uint64_t seed);

struct ReplicaMeanResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t reps = 0;
  double bound = 0.0;
  bool satisfied = false;
  bool inconclusive = false;
};

// Mean adjacent boundary count at time t over independent replicas,
// compared one-sidedly against I_1(initial) * exp(c_branch * t).
ReplicaMeanResult branching_bound_experiment(const Kernel& kernel, double eps,
                                             const InterfaceConfig& initial, double t,
                                             std::int64_t reps, std::uint64_t seed, bool parallel);

// Mean displacement of the leftmost 1 over a time window of length t
// started from an equilibrated state, compared against c_drift * t.
ReplicaMeanResult leftmost_displacement_experiment(const Kernel& kernel, double eps, double t,
                                                   std::int64_t reps, double burn_in,
                                                   std::uint64_t seed, bool parallel);

struct MartingaleCheckResult {
  double lhs = 0.0;      // E[h_M(X_t)] - h_M(X_0)
  double rhs = 0.0;      // E[ integral of Gh_M along the path ]
  double diff = 0.0;     // paired per-replica difference
  double diff_se = 0.0;  // its standard error ("combined" error of lhs - rhs)
  double z = 0.0;
  std::int64_t reps = 0;
};

// Unbiased dynamics from the heaviside state: terminal evaluation of the
// truncated inversion count against the exactly integrated closed form.
MartingaleCheckResult hm_martingale_check(const Kernel& kernel, std::int64_t m, double t,
                                          std::int64_t reps, std::uint64_t seed, bool parallel);

struct ContinuityRow {
  double eps = 0.0;
  double tv = 0.0;     // total variation against the zero-bias measure,
                       // cores truncated at length ell, tail mass lumped
  double tv_se = 0.0;  // delete-one-batch jackknife
  double heaviside_mass = 0.0;
  double tail_mass = 0.0;  // P[L > ell]
};

std::vector<ContinuityRow> continuity_experiment(const Kernel& kernel,
                                                 const std::vector<double>& eps_grid,
                                                 std::int64_t ell, const BudgetSpec& budget,
                                                 std::uint64_t seed, bool parallel);

struct ReturnTimeStability {
  double eps = 0.0;
  std::int64_t reps = 0;
  double cap = 0.0;
  double mean_half_cap = 0.0;  // E[tau ^ (cap/2)]
  double mean_full_cap = 0.0;  // E[tau ^ cap]
  double hit_fraction = 0.0;
  double rel_change = 0.0;  // |full - half| / full
};

// Stability of the mean return time to the heaviside class under doubling
// of the censoring cap.
ReturnTimeStability return_time_experiment(const Kernel& kernel, double eps, std::int64_t reps,
                                           double cap, std::uint64_t seed, bool parallel);

}  // namespace bvm
