#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "bvm/kernel.hpp"
#include "bvm/rng.hpp"

namespace bvm {

enum class ArrowKind : std::uint8_t { resampling, selection };

// One Poisson arrow of the graphical construction: at time t the site `to`
// looks at `from`. A resampling arrow copies the type; a selection arrow
// copies it only when `from` carries a 1.
struct Arrow {
  std::int64_t from = 0;
  std::int64_t to = 0;
  double t = 0.0;
  ArrowKind kind = ArrowKind::resampling;
};

struct SpaceTimeWindow {
  std::int64_t site_lo = 0;
  std::int64_t site_hi = 0;
  double t_max = 0.0;
};

// Realized arrows on a finite space-time window, sorted by time (ties broken
// by the ordered pair, a probability-zero event).
struct ArrowSet {
  SpaceTimeWindow window;
  std::vector<Arrow> arrows;
};

// For every ordered pair (i, j) inside the window with a(j-i) > 0, draws a
// Poisson process of rate a(j-i) on [0, t_max]; each arrow is independently
// marked as selection with probability eps, resampling otherwise.
ArrowSet build_graphical(const SpaceTimeWindow& window, const Kernel& kernel, double eps,
                         RngStream& rng);

// Runs the forward process over the realized arrows. `initial` is indexed by
// site - site_lo and must cover the whole window.
std::vector<bool> forward_voter(const std::vector<bool>& initial, const ArrowSet& arrows);

// Runs the branching-coalescing walks backward from time t_max: a resampling
// arrow from i to j relocates a walk at j onto i (coalescing), a selection
// arrow splits it into walks at i and j. Returns the occupied set at time 0.
std::set<std::int64_t> backward_bcrw(const std::set<std::int64_t>& b_set, const ArrowSet& arrows);

// True iff some backward walk from b_set enters the boundary strip at any
// time. The walk positions trace the dependency cone of the forward values
// on b_set, so a false result certifies that the finite window computed
// exactly what the infinite system would have.
bool backward_cone_breaches(const std::set<std::int64_t>& b_set, const ArrowSet& arrows,
                            std::int64_t strip_width);

struct DualityOutcome {
  bool breached = false;  // a walk entered the boundary strip; discard
  bool lhs = false;       // forward process from 1_A meets B at t_max
  bool rhs = false;       // backward walks from B meet A at time 0
  bool ok = false;
};

// Pathwise check on one realization. The strip width should be the maximum
// kernel jump: a walk that never enters the strip never misses an arrow
// reaching in from outside the window, so non-breached outcomes are exact.
DualityOutcome duality_check(const std::set<std::int64_t>& a_set,
                             const std::set<std::int64_t>& b_set, const ArrowSet& arrows,
                             std::int64_t strip_width);

struct DualityBatch {
  std::int64_t reps = 0;
  std::int64_t breached = 0;
  std::int64_t agreed = 0;
  std::int64_t disagreed = 0;
};

// Independent realizations with per-replica rng streams.
DualityBatch duality_batch(const Kernel& kernel, double eps, const SpaceTimeWindow& window,
                           const std::set<std::int64_t>& a_set,
                           const std::set<std::int64_t>& b_set, std::int64_t reps,
                           std::uint64_t seed, bool parallel);

}  // namespace bvm
