#include "bvm/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "bvm/generator.hpp"
#include "bvm/numeric.hpp"
#include "bvm/parallel.hpp"
#include "bvm/stats.hpp"

namespace bvm {

namespace {

// Splits piecewise-constant segments into equal time batches and folds
// time-weighted observable values into per-batch accumulators.
class BatchAccumulator final : public TrajectoryObserver {
 public:
  BatchAccumulator(const std::vector<ObservableFn>& observables, double burn_in, double batch_len,
                   int n_batches)
      : observables_(observables),
        burn_in_(burn_in),
        batch_len_(batch_len),
        n_batches_(n_batches),
        acc_(observables.size(), std::vector<KahanSum>(static_cast<std::size_t>(n_batches))) {}

  void on_segment(double t0, double t1, const InterfaceConfig& config) override {
    check_lipschitz(config);
    if (t1 <= burn_in_ || t1 <= t0) return;

    values_.clear();
    for (const auto& f : observables_) values_.push_back(f(config));

    double lo = std::max(t0, burn_in_);
    while (lo < t1) {
      int b = static_cast<int>((lo - burn_in_) / batch_len_);
      b = std::clamp(b, 0, n_batches_ - 1);
      double boundary = burn_in_ + static_cast<double>(b + 1) * batch_len_;
      if (boundary <= lo) {
        if (++b >= n_batches_) return;
        boundary = burn_in_ + static_cast<double>(b + 1) * batch_len_;
      }
      const double hi = std::min(t1, boundary);
      for (std::size_t i = 0; i < observables_.size(); ++i)
        acc_[i][static_cast<std::size_t>(b)].add(values_[i] * (hi - lo));
      lo = hi;
    }
  }

  std::vector<double> batch_means(std::size_t observable_index) const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_batches_));
    for (const auto& s : acc_[observable_index]) out.push_back(s.value() / batch_len_);
    return out;
  }

 private:
  void check_lipschitz(const InterfaceConfig& config) const {
    const std::int64_t i10_1 = boundary_counts(config, 1).i10;
    for (std::int64_t m = 2; m <= 3; ++m) {
      const std::int64_t i10_m = boundary_counts(config, m).i10;
      if (std::llabs(i10_m - i10_1) > (m - 1) * i10_1 || i10_m > m * i10_1)
        throw std::logic_error("pair-count Lipschitz bound violated along trajectory");
    }
  }

  const std::vector<ObservableFn>& observables_;
  double burn_in_;
  double batch_len_;
  int n_batches_;
  std::vector<std::vector<KahanSum>> acc_;
  std::vector<double> values_;
};

EstimateReport report_from_batches(const std::string& tag, const std::vector<double>& means,
                                   const BudgetSpec& budget, std::uint64_t seed,
                                   std::uint64_t stream) {
  const SampleStats st = sample_stats(means);
  EstimateReport r;
  r.observable = tag;
  r.value = st.mean;
  r.std_error = st.std_error;
  r.n_batches = budget.n_batches;
  r.batch_len = budget.horizon / budget.n_batches;
  r.burn_in = budget.burn_in;
  r.seed = seed;
  r.stream = stream;
  r.lag1_autocorr = lag1_autocorrelation(means);
  r.inconclusive = r.lag1_autocorr > 0.2;
  r.batch_means = means;
  return r;
}

// Advances the simulator to exactly time t, leaving it ready to continue.
void run_until(Simulator& sim, double t) {
  for (;;) {
    const double dt = sim.draw_waiting_time();
    if (sim.clock() + dt > t) {
      sim.advance_clock_to(t);
      return;
    }
    sim.apply_event(dt);
  }
}

bool replica_streams_look_dependent(const std::vector<double>& per_replica) {
  return lag1_autocorrelation(per_replica) > 0.2;
}

}  // namespace

std::vector<EstimateReport> estimate_equilibrium(const Kernel& kernel, double eps,
                                                 const std::vector<ObservableFn>& observables,
                                                 const BudgetSpec& budget, std::uint64_t seed,
                                                 std::uint64_t stream) {
  if (budget.n_batches < 2) throw std::invalid_argument("estimate_equilibrium: need >= 2 batches");
  if (!(budget.horizon > 0.0) || budget.burn_in < 0.0)
    throw std::invalid_argument("estimate_equilibrium: bad budget");
  const ValidationReport v = validate(kernel);
  if (!v.irreducible)
    throw std::invalid_argument("estimate_equilibrium: kernel must be irreducible");

  const double batch_len = budget.horizon / budget.n_batches;
  BatchAccumulator acc(observables, budget.burn_in, batch_len, budget.n_batches);
  TrajectoryObserver* obs[] = {&acc};
  simulate(InterfaceConfig::heaviside(0), kernel, eps,
           {.horizon = budget.burn_in + budget.horizon}, obs, RngStream(seed, stream));

  std::vector<EstimateReport> out;
  for (std::size_t i = 0; i < observables.size(); ++i)
    out.push_back(
        report_from_batches(observables[i].tag, acc.batch_means(i), budget, seed, stream));
  return out;
}

IdentityCheckResult equilibrium_identity_check(const Kernel& kernel, const BudgetSpec& budget,
                                               std::uint64_t seed) {
  IdentityCheckResult out;
  out.report = estimate_equilibrium(kernel, 0.0, {symmetrized_boundary_sum_observable(kernel)},
                                    budget, seed)[0];
  out.target = 0.5 * moments(kernel).sigma2;
  out.z = out.report.std_error > 0.0 ? (out.report.value - out.target) / out.report.std_error
                                     : 0.0;
  return out;
}

BoundCheckResult equilibrium_bound_check(const Kernel& kernel, double eps,
                                         const BudgetSpec& budget, std::uint64_t seed) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("equilibrium_bound_check: eps must lie in (0,1)");
  BoundCheckResult out;
  out.report = estimate_equilibrium(kernel, eps, {symmetrized_boundary_sum_observable(kernel)},
                                    budget, seed)[0];
  out.bound = 0.5 * moments(kernel).sigma2;
  out.satisfied = out.report.value <= out.bound + 3.0 * out.report.std_error;
  return out;
}

ReplicaMeanResult branching_bound_experiment(const Kernel& kernel, double eps,
                                             const InterfaceConfig& initial, double t,
                                             std::int64_t reps, std::uint64_t seed,
                                             bool parallel) {
  std::vector<double> i1(static_cast<std::size_t>(reps));
  for_each_replica(reps, parallel, [&](std::int64_t r) {
    const auto summary = simulate(initial, kernel, eps, {.horizon = t}, {},
                                  RngStream(seed, static_cast<std::uint64_t>(r)));
    i1[static_cast<std::size_t>(r)] =
        static_cast<double>(boundary_counts(summary.final_config, 1).total());
  });
  const SampleStats st = sample_stats(i1);
  ReplicaMeanResult out;
  out.mean = st.mean;
  out.std_error = st.std_error;
  out.reps = reps;
  out.bound = static_cast<double>(boundary_counts(initial, 1).total()) *
              std::exp(moments(kernel).c_branch * t);
  out.satisfied = out.mean <= out.bound + 3.0 * out.std_error;
  out.inconclusive = replica_streams_look_dependent(i1);
  return out;
}

ReplicaMeanResult leftmost_displacement_experiment(const Kernel& kernel, double eps, double t,
                                                   std::int64_t reps, double burn_in,
                                                   std::uint64_t seed, bool parallel) {
  std::vector<double> displacement(static_cast<std::size_t>(reps));
  for_each_replica(reps, parallel, [&](std::int64_t r) {
    Simulator sim(InterfaceConfig::heaviside(0), kernel, eps,
                  RngStream(seed, static_cast<std::uint64_t>(r)));
    run_until(sim, burn_in);
    const std::int64_t marked = sim.config().offset();
    if (t > 0.0) run_until(sim, burn_in + t);
    displacement[static_cast<std::size_t>(r)] =
        std::fabs(static_cast<double>(sim.config().offset() - marked));
  });
  const SampleStats st = sample_stats(displacement);
  ReplicaMeanResult out;
  out.mean = st.mean;
  out.std_error = st.std_error;
  out.reps = reps;
  out.bound = moments(kernel).c_drift * t;
  out.satisfied = out.mean <= out.bound + 3.0 * out.std_error;
  out.inconclusive = replica_streams_look_dependent(displacement);
  return out;
}

namespace {

struct GhmIntegralObserver final : TrajectoryObserver {
  GhmIntegralObserver(const Kernel& kernel, std::int64_t m) : kernel_(kernel), m_(m) {}
  void on_segment(double t0, double t1, const InterfaceConfig& config) override {
    integral.add((t1 - t0) * ghM_formula(config, kernel_, m_));
  }
  const Kernel& kernel_;
  std::int64_t m_;
  KahanSum integral;
};

}  // namespace

MartingaleCheckResult hm_martingale_check(const Kernel& kernel, std::int64_t m, double t,
                                          std::int64_t reps, std::uint64_t seed, bool parallel) {
  std::vector<double> terminal(static_cast<std::size_t>(reps));
  std::vector<double> integral(static_cast<std::size_t>(reps));
  for_each_replica(reps, parallel, [&](std::int64_t r) {
    GhmIntegralObserver obs(kernel, m);
    TrajectoryObserver* observers[] = {&obs};
    const auto summary = simulate(InterfaceConfig::heaviside(0), kernel, 0.0, {.horizon = t},
                                  observers, RngStream(seed, static_cast<std::uint64_t>(r)));
    terminal[static_cast<std::size_t>(r)] =
        static_cast<double>(truncated_inversions(summary.final_config, m));
    integral[static_cast<std::size_t>(r)] = obs.integral.value();
  });

  std::vector<double> diff(static_cast<std::size_t>(reps));
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = terminal[i] - integral[i];

  MartingaleCheckResult out;
  out.reps = reps;
  out.lhs = sample_stats(terminal).mean;  // h_M of the heaviside start is zero
  out.rhs = sample_stats(integral).mean;
  const SampleStats d = sample_stats(diff);
  out.diff = d.mean;
  out.diff_se = d.std_error;
  out.z = d.std_error > 0.0 ? d.mean / d.std_error : 0.0;
  return out;
}

namespace {

constexpr const char* kTailKey = "<tail>";

// Time-weighted occupancy of canonicalized cores, truncated at length ell.
class OccupancyObserver final : public TrajectoryObserver {
 public:
  OccupancyObserver(std::int64_t ell, double burn_in, double batch_len, int n_batches)
      : ell_(ell), burn_in_(burn_in), batch_len_(batch_len), n_batches_(n_batches) {}

  void on_segment(double t0, double t1, const InterfaceConfig& config) override {
    if (t1 <= burn_in_ || t1 <= t0) return;
    const std::string key = config.length() <= ell_ ? config.core_string() : kTailKey;
    auto& slots = batch_mass_[key];
    if (slots.empty()) slots.resize(static_cast<std::size_t>(n_batches_), 0.0);
    double lo = std::max(t0, burn_in_);
    while (lo < t1) {
      int b = static_cast<int>((lo - burn_in_) / batch_len_);
      b = std::clamp(b, 0, n_batches_ - 1);
      double boundary = burn_in_ + static_cast<double>(b + 1) * batch_len_;
      if (boundary <= lo) {
        if (++b >= n_batches_) return;
        boundary = burn_in_ + static_cast<double>(b + 1) * batch_len_;
      }
      const double hi = std::min(t1, boundary);
      slots[static_cast<std::size_t>(b)] += hi - lo;
      lo = hi;
    }
  }

  // Normalized occupancy with one batch removed (negative keeps everything).
  std::map<std::string, double> measure(int dropped_batch = -1) const {
    std::map<std::string, double> out;
    double total = 0.0;
    for (const auto& [key, slots] : batch_mass_) {
      double w = 0.0;
      for (int b = 0; b < n_batches_; ++b)
        if (b != dropped_batch) w += slots[static_cast<std::size_t>(b)];
      out[key] = w;
      total += w;
    }
    if (total > 0.0)
      for (auto& [key, w] : out) w /= total;
    return out;
  }

  int n_batches() const { return n_batches_; }

 private:
  std::int64_t ell_;
  double burn_in_;
  double batch_len_;
  int n_batches_;
  std::map<std::string, std::vector<double>> batch_mass_;
};

double total_variation(const std::map<std::string, double>& a,
                       const std::map<std::string, double>& b) {
  double acc = 0.0;
  for (const auto& [key, pa] : a) {
    auto it = b.find(key);
    acc += std::fabs(pa - (it == b.end() ? 0.0 : it->second));
  }
  for (const auto& [key, pb] : b)
    if (!a.count(key)) acc += pb;
  return 0.5 * acc;
}

}  // namespace

std::vector<ContinuityRow> continuity_experiment(const Kernel& kernel,
                                                 const std::vector<double>& eps_grid,
                                                 std::int64_t ell, const BudgetSpec& budget,
                                                 std::uint64_t seed, bool parallel) {
  if (eps_grid.empty() || eps_grid.front() != 0.0)
    throw std::invalid_argument("continuity_experiment: grid must start at eps = 0");
  const double batch_len = budget.horizon / budget.n_batches;

  std::vector<OccupancyObserver> observers;
  observers.reserve(eps_grid.size());
  for (std::size_t g = 0; g < eps_grid.size(); ++g)
    observers.emplace_back(ell, budget.burn_in, batch_len, budget.n_batches);

  for_each_replica(static_cast<std::int64_t>(eps_grid.size()), parallel, [&](std::int64_t g) {
    TrajectoryObserver* obs[] = {&observers[static_cast<std::size_t>(g)]};
    simulate(InterfaceConfig::heaviside(0), kernel, eps_grid[static_cast<std::size_t>(g)],
             {.horizon = budget.burn_in + budget.horizon}, obs,
             RngStream(seed, static_cast<std::uint64_t>(g)));
  });

  const auto reference = observers.front().measure();
  std::vector<ContinuityRow> rows;
  for (std::size_t g = 0; g < eps_grid.size(); ++g) {
    const auto mine = observers[g].measure();
    ContinuityRow row;
    row.eps = eps_grid[g];
    row.tv = total_variation(mine, reference);
    if (g > 0) {
      // delete-one-batch jackknife against the fixed reference measure
      const int n = observers[g].n_batches();
      std::vector<double> loo;
      loo.reserve(static_cast<std::size_t>(n));
      for (int b = 0; b < n; ++b)
        loo.push_back(total_variation(observers[g].measure(b), reference));
      const SampleStats st = sample_stats(loo);
      // jackknife variance: (n-1)/n * sum (loo_b - mean)^2
      row.tv_se = std::sqrt(st.variance * static_cast<double>(n - 1) * static_cast<double>(n - 1) /
                            static_cast<double>(n));
    }
    auto it = mine.find("");
    row.heaviside_mass = it == mine.end() ? 0.0 : it->second;
    it = mine.find(kTailKey);
    row.tail_mass = it == mine.end() ? 0.0 : it->second;
    rows.push_back(row);
  }
  return rows;
}

ReturnTimeStability return_time_experiment(const Kernel& kernel, double eps, std::int64_t reps,
                                           double cap, std::uint64_t seed, bool parallel) {
  std::vector<double> tau(static_cast<std::size_t>(reps));
  std::vector<double> hits(static_cast<std::size_t>(reps));
  for_each_replica(reps, parallel, [&](std::int64_t r) {
    const ReturnTime rt = return_time_to_heaviside(InterfaceConfig::heaviside(0), kernel, eps,
                                                   RngStream(seed, static_cast<std::uint64_t>(r)),
                                                   cap);
    tau[static_cast<std::size_t>(r)] = rt.tau;
    hits[static_cast<std::size_t>(r)] = rt.hit ? 1.0 : 0.0;
  });

  KahanSum half, full, hit;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    half.add(std::min(tau[i], cap / 2.0));
    full.add(tau[i]);
    hit.add(hits[i]);
  }
  ReturnTimeStability out;
  out.eps = eps;
  out.reps = reps;
  out.cap = cap;
  out.mean_half_cap = half.value() / static_cast<double>(reps);
  out.mean_full_cap = full.value() / static_cast<double>(reps);
  out.hit_fraction = hit.value() / static_cast<double>(reps);
  out.rel_change = out.mean_full_cap > 0.0
                       ? std::fabs(out.mean_full_cap - out.mean_half_cap) / out.mean_full_cap
                       : 0.0;
  return out;
}

}  // namespace bvm
