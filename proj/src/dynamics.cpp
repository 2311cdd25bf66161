#include "bvm/dynamics.hpp"

#include <cassert>
#include <set>
#include <stdexcept>

namespace bvm {

namespace {

std::vector<std::int64_t> distinct_distances(const Kernel& kernel) {
  std::set<std::int64_t> dists;
  for (const auto& [k, rate] : kernel.entries()) {
    (void)rate;
    dists.insert(std::llabs(k));
  }
  return {dists.begin(), dists.end()};
}

void adjust_pair(DistanceCounts& dc, bool a, bool b, std::int64_t delta) {
  if (a && !b)
    dc.i10 += delta;
  else if (!a && b)
    dc.i01 += delta;
}

}  // namespace

Simulator::Simulator(InterfaceConfig initial, const Kernel& kernel, double eps, RngStream rng)
    : config_(std::move(initial)), kernel_(kernel), eps_(eps), rng_(std::move(rng)) {
  if (!(eps >= 0.0 && eps < 1.0))
    throw std::invalid_argument("Simulator: eps must lie in [0,1)");
  counts_ = counts_from_scratch();
}

std::vector<DistanceCounts> Simulator::counts_from_scratch() const {
  std::vector<DistanceCounts> out;
  for (std::int64_t m : distinct_distances(kernel_)) {
    const BoundaryCounts bc = boundary_counts(config_, m);
    out.push_back({m, bc.i10, bc.i01});
  }
  return out;
}

std::int64_t Simulator::effective_count(std::int64_t k, bool orient10) const {
  const std::int64_t m = std::llabs(k);
  for (const auto& dc : counts_) {
    if (dc.distance != m) continue;
    if (k > 0) return orient10 ? dc.i10 : dc.i01;
    return orient10 ? dc.i01 : dc.i10;
  }
  return 0;
}

double Simulator::total_rate() const {
  double rate10 = 0.0, rate01 = 0.0;
  for (const auto& [k, a] : kernel_.entries()) {
    rate10 += a * static_cast<double>(effective_count(k, true));
    rate01 += a * static_cast<double>(effective_count(k, false));
  }
  return rate10 + (1.0 - eps_) * rate01;
}

double Simulator::draw_waiting_time() {
  refresh_counts();
  return rng_.exponential(total_rate());
}

void Simulator::advance_clock_to(double t) {
  if (t < clock_.value()) throw std::invalid_argument("advance_clock_to: time moves forward only");
  clock_.reset();
  clock_.add(t);
}

FlipEvent Simulator::apply_event(double dt) {
  // Class selection: one uniform over the (distance, orientation) classes,
  // 10 classes first, displacements in kernel order.
  double total = total_rate();
  double u = rng_.uniform01() * total;
  std::int64_t chosen_k = 0;
  bool orient10 = true;
  bool found = false;
  for (int pass = 0; pass < 2 && !found; ++pass) {
    const bool is10 = pass == 0;
    for (const auto& [k, a] : kernel_.entries()) {
      const double mass = (is10 ? a : (1.0 - eps_) * a) *
                          static_cast<double>(effective_count(k, is10));
      if (mass <= 0.0) continue;
      chosen_k = k;
      orient10 = is10;
      if (u < mass) {
        found = true;
        break;
      }
      u -= mass;
    }
  }
  if (chosen_k == 0) throw std::runtime_error("apply_event: no enabled transitions");

  const std::int64_t count = effective_count(chosen_k, orient10);
  const std::int64_t index = static_cast<std::int64_t>(
      rng_.uniform_below(static_cast<std::uint64_t>(count)));
  const std::int64_t site = locate_pair_site(chosen_k, orient10, index);

  assert(config_.at(site) == !orient10);
  apply_flip_with_bookkeeping(site);
  clock_.add(dt);
  ++events_;
  return {site, orient10, dt, chosen_k};
}

std::int64_t Simulator::locate_pair_site(std::int64_t k, bool orient10,
                                         std::int64_t index) const {
  const std::int64_t offset = config_.offset();
  const std::int64_t len = config_.length();
  const std::int64_t m = std::llabs(k);
  std::int64_t lo, hi;
  if (orient10) {
    // tail pairs (i, i+k) reading 10
    lo = offset;
    hi = (k > 0) ? offset + len - 1 - k : offset + len - 1 + m;
  } else {
    lo = (k > 0) ? offset - k : offset + m;
    hi = offset + len - 1;
  }
  for (std::int64_t i = lo; i <= hi; ++i) {
    const bool a = config_.at(i);
    const bool b = config_.at(i + k);
    const bool match = orient10 ? (a && !b) : (!a && b);
    if (!match) continue;
    if (index == 0) return i + k;
    --index;
  }
  throw std::logic_error("locate_pair_site: pair index out of range");
}

void Simulator::apply_flip_with_bookkeeping(std::int64_t site) {
  const bool old_v = config_.at(site);
  const bool new_v = !old_v;
  for (auto& dc : counts_) {
    const std::int64_t m = dc.distance;
    const bool left = config_.at(site - m);
    adjust_pair(dc, left, old_v, -1);
    adjust_pair(dc, left, new_v, +1);
    const bool right = config_.at(site + m);
    adjust_pair(dc, old_v, right, -1);
    adjust_pair(dc, new_v, right, +1);
  }
  config_.flip(site);
}

double total_rate(const InterfaceConfig& config, const Kernel& kernel, double eps) {
  if (!(eps >= 0.0 && eps < 1.0))
    throw std::invalid_argument("total_rate: eps must lie in [0,1)");
  double rate10 = 0.0, rate01 = 0.0;
  for (const auto& [k, a] : kernel.entries()) {
    const BoundaryCounts bc = boundary_counts(config, k);
    rate10 += a * static_cast<double>(bc.i10);
    rate01 += a * static_cast<double>(bc.i01);
  }
  return rate10 + (1.0 - eps) * rate01;
}

TrajectorySummary simulate(InterfaceConfig initial, const Kernel& kernel, double eps,
                           StopRule stop, std::span<TrajectoryObserver* const> observers,
                           RngStream rng) {
  if (!stop.horizon && !stop.n_events)
    throw std::invalid_argument("simulate: stop rule must bound time or events");
  Simulator sim(std::move(initial), kernel, eps, std::move(rng));
  for (;;) {
    if (stop.n_events && sim.events() >= *stop.n_events) break;
    const double t0 = sim.clock();
    const double dt = sim.draw_waiting_time();
    if (stop.horizon && t0 + dt > *stop.horizon) {
      for (auto* obs : observers) obs->on_segment(t0, *stop.horizon, sim.config());
      return {sim.config(), *stop.horizon, sim.events()};
    }
    const InterfaceConfig before = sim.config();
    const FlipEvent ev = sim.apply_event(dt);
    for (auto* obs : observers) {
      obs->on_segment(t0, sim.clock(), before);
      obs->on_event(sim.clock(), ev, sim.config());
    }
  }
  return {sim.config(), sim.clock(), sim.events()};
}

ReturnTime return_time_to_heaviside(InterfaceConfig initial, const Kernel& kernel, double eps,
                                    RngStream rng, double cap) {
  Simulator sim(std::move(initial), kernel, eps, std::move(rng));
  bool left = !sim.config().heaviside_class();
  for (;;) {
    const double dt = sim.draw_waiting_time();
    if (sim.clock() + dt > cap) return {false, cap};
    sim.apply_event(dt);
    if (!left) {
      left = !sim.config().heaviside_class();
    } else if (sim.config().heaviside_class()) {
      return {true, sim.clock()};
    }
  }
}

}  // namespace bvm
