#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bvm/interface.hpp"
#include "bvm/kernel.hpp"
#include "bvm/numeric.hpp"
#include "bvm/rng.hpp"

namespace bvm {

// One continuous-time transition: the flipped site, its new value, the
// exponential waiting time, and the displacement of the infecting arrow.
struct FlipEvent {
  std::int64_t site = 0;
  bool new_value = false;
  double dt = 0.0;
  std::int64_t distance = 0;
};

// Pair counts per positive distance; with both orientations these determine
// every transition rate of the process.
struct DistanceCounts {
  std::int64_t distance = 0;
  std::int64_t i10 = 0;
  std::int64_t i01 = 0;

  bool operator==(const DistanceCounts&) const = default;
};

// Exact event-driven simulation. A 10 pair (i, i+k) flips site i+k up at
// rate a(k); a 01 pair flips site i+k down at rate (1-eps) a(k). The pair
// counts per distance are maintained incrementally: a flip at site s only
// touches the pairs (s-m, s) and (s, s+m) for supported distances m.
//
// Single-threaded; run replicas on separate instances with independent rng
// streams and a shared immutable kernel.
class Simulator {
 public:
  Simulator(InterfaceConfig initial, const Kernel& kernel, double eps, RngStream rng);
  virtual ~Simulator() = default;
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  const InterfaceConfig& config() const { return config_; }
  double clock() const { return clock_.value(); }
  std::int64_t events() const { return events_; }
  double eps() const { return eps_; }
  const RngStream& rng() const { return rng_; }

  double total_rate() const;
  std::vector<DistanceCounts> counts() const { return counts_; }
  std::vector<DistanceCounts> counts_from_scratch() const;

  // Draws the waiting time of the next event (advances the rng).
  double draw_waiting_time();
  // Samples and applies the next transition; `dt` must come from
  // draw_waiting_time so the clock advances consistently.
  FlipEvent apply_event(double dt);
  FlipEvent step() { return apply_event(draw_waiting_time()); }

  // Fast-forwards the clock to `t`, discarding any drawn-but-unapplied
  // waiting time; exact because the holding times are memoryless.
  void advance_clock_to(double t);

  // Recomputes every pair count from scratch; true iff the incremental
  // table matches exactly.
  bool verify_counts() const { return counts_ == counts_from_scratch(); }

 protected:
  virtual void refresh_counts() {}

  InterfaceConfig config_;
  const Kernel& kernel_;
  double eps_;
  RngStream rng_;
  std::vector<DistanceCounts> counts_;
  KahanSum clock_;
  std::int64_t events_ = 0;

 private:
  void apply_flip_with_bookkeeping(std::int64_t site);
  std::int64_t effective_count(std::int64_t k, bool orient10) const;
  std::int64_t locate_pair_site(std::int64_t k, bool orient10, std::int64_t index) const;
};

// Serial reference: identical sampling protocol and rng consumption, but the
// pair counts are rebuilt from scratch before every event. Equal seeds give
// event-for-event identical trajectories; kept for tests and the benchmark.
class ReferenceSimulator final : public Simulator {
 public:
  ReferenceSimulator(InterfaceConfig initial, const Kernel& kernel, double eps, RngStream rng)
      : Simulator(std::move(initial), kernel, eps, std::move(rng)) {}

 protected:
  void refresh_counts() override { counts_ = counts_from_scratch(); }
};

double total_rate(const InterfaceConfig& config, const Kernel& kernel, double eps);

struct StopRule {
  std::optional<double> horizon;
  std::optional<std::int64_t> n_events;
};

class TrajectoryObserver {
 public:
  virtual ~TrajectoryObserver() = default;
  // Piecewise-constant segment [t0, t1) on which the configuration holds.
  virtual void on_segment(double t0, double t1, const InterfaceConfig& config) {
    (void)t0, (void)t1, (void)config;
  }
  virtual void on_event(double t, const FlipEvent& event, const InterfaceConfig& after) {
    (void)t, (void)event, (void)after;
  }
};

struct TrajectorySummary {
  InterfaceConfig final_config;
  double elapsed = 0.0;
  std::int64_t events = 0;
};

// Runs until the stop rule fires. With a horizon the final partial segment
// is truncated at the horizon and the overshooting event is discarded, so
// the reported state is the exact state at the horizon.
TrajectorySummary simulate(InterfaceConfig initial, const Kernel& kernel, double eps,
                           StopRule stop, std::span<TrajectoryObserver* const> observers,
                           RngStream rng);

struct ReturnTime {
  bool hit = false;
  double tau = 0.0;
};

// First time the configuration re-enters the heaviside class (empty core)
// after leaving it, capped at `cap` time units. Translations of the
// heaviside state count as the same class.
ReturnTime return_time_to_heaviside(InterfaceConfig initial, const Kernel& kernel, double eps,
                                    RngStream rng, double cap);

}  // namespace bvm
