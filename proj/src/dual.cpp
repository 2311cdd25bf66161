#include "bvm/dual.hpp"

#include <algorithm>
#include <stdexcept>

#include "bvm/parallel.hpp"

namespace bvm {

ArrowSet build_graphical(const SpaceTimeWindow& window, const Kernel& kernel, double eps,
                         RngStream& rng) {
  if (window.site_hi < window.site_lo || !(window.t_max > 0.0))
    throw std::invalid_argument("build_graphical: degenerate window");
  if (!(eps >= 0.0 && eps < 1.0))
    throw std::invalid_argument("build_graphical: eps must lie in [0,1)");

  ArrowSet out;
  out.window = window;
  for (std::int64_t i = window.site_lo; i <= window.site_hi; ++i) {
    for (const auto& [k, rate] : kernel.entries()) {
      const std::int64_t j = i + k;
      if (j < window.site_lo || j > window.site_hi) continue;
      double t = rng.exponential(rate);
      while (t <= window.t_max) {
        const ArrowKind kind =
            rng.uniform01() < eps ? ArrowKind::selection : ArrowKind::resampling;
        out.arrows.push_back({i, j, t, kind});
        t += rng.exponential(rate);
      }
    }
  }
  std::sort(out.arrows.begin(), out.arrows.end(), [](const Arrow& a, const Arrow& b) {
    if (a.t != b.t) return a.t < b.t;
    if (a.from != b.from) return a.from < b.from;
    return a.to < b.to;
  });
  return out;
}

std::vector<bool> forward_voter(const std::vector<bool>& initial, const ArrowSet& arrows) {
  const auto& w = arrows.window;
  const std::size_t width = static_cast<std::size_t>(w.site_hi - w.site_lo + 1);
  if (initial.size() != width)
    throw std::invalid_argument("forward_voter: initial state must cover the window");
  std::vector<bool> values = initial;
  for (const Arrow& a : arrows.arrows) {
    const std::size_t from = static_cast<std::size_t>(a.from - w.site_lo);
    const std::size_t to = static_cast<std::size_t>(a.to - w.site_lo);
    if (a.kind == ArrowKind::resampling)
      values[to] = values[from];
    else if (values[from])
      values[to] = true;
  }
  return values;
}

namespace {

struct BackwardRun {
  std::set<std::int64_t> occupied;
  bool breached = false;
};

BackwardRun backward_bcrw_impl(const std::set<std::int64_t>& b_set, const ArrowSet& arrows,
                               std::int64_t strip_width) {
  const auto& w = arrows.window;
  BackwardRun run;
  auto in_strip = [&](std::int64_t site) {
    return site < w.site_lo + strip_width || site > w.site_hi - strip_width;
  };
  for (std::int64_t site : b_set) {
    if (site < w.site_lo || site > w.site_hi)
      throw std::invalid_argument("backward_bcrw: walk started outside the window");
    run.occupied.insert(site);
    if (strip_width > 0 && in_strip(site)) run.breached = true;
  }
  for (auto it = arrows.arrows.rbegin(); it != arrows.arrows.rend(); ++it) {
    if (!run.occupied.count(it->to)) continue;
    if (it->kind == ArrowKind::resampling) run.occupied.erase(it->to);
    run.occupied.insert(it->from);
    if (strip_width > 0 && in_strip(it->from)) run.breached = true;
  }
  return run;
}

}  // namespace

std::set<std::int64_t> backward_bcrw(const std::set<std::int64_t>& b_set, const ArrowSet& arrows) {
  return backward_bcrw_impl(b_set, arrows, 0).occupied;
}

bool backward_cone_breaches(const std::set<std::int64_t>& b_set, const ArrowSet& arrows,
                            std::int64_t strip_width) {
  return backward_bcrw_impl(b_set, arrows, strip_width).breached;
}

DualityOutcome duality_check(const std::set<std::int64_t>& a_set,
                             const std::set<std::int64_t>& b_set, const ArrowSet& arrows,
                             std::int64_t strip_width) {
  const auto& w = arrows.window;
  DualityOutcome out;

  const BackwardRun backward = backward_bcrw_impl(b_set, arrows, strip_width);
  out.breached = backward.breached;
  for (std::int64_t site : backward.occupied) {
    if (a_set.count(site)) {
      out.rhs = true;
      break;
    }
  }

  std::vector<bool> initial(static_cast<std::size_t>(w.site_hi - w.site_lo + 1), false);
  for (std::int64_t site : a_set) {
    if (site < w.site_lo || site > w.site_hi)
      throw std::invalid_argument("duality_check: A must lie inside the window");
    initial[static_cast<std::size_t>(site - w.site_lo)] = true;
  }
  const std::vector<bool> final_values = forward_voter(initial, arrows);
  for (std::int64_t site : b_set) {
    if (final_values[static_cast<std::size_t>(site - w.site_lo)]) {
      out.lhs = true;
      break;
    }
  }

  out.ok = out.lhs == out.rhs;
  return out;
}

DualityBatch duality_batch(const Kernel& kernel, double eps, const SpaceTimeWindow& window,
                           const std::set<std::int64_t>& a_set,
                           const std::set<std::int64_t>& b_set, std::int64_t reps,
                           std::uint64_t seed, bool parallel) {
  const std::int64_t strip = kernel.max_abs_support();
  std::vector<DualityOutcome> outcomes(static_cast<std::size_t>(reps));
  for_each_replica(reps, parallel, [&](std::int64_t r) {
    RngStream rng(seed, static_cast<std::uint64_t>(r));
    const ArrowSet arrows = build_graphical(window, kernel, eps, rng);
    outcomes[static_cast<std::size_t>(r)] = duality_check(a_set, b_set, arrows, strip);
  });

  DualityBatch batch;
  batch.reps = reps;
  for (const auto& o : outcomes) {
    if (o.breached)
      ++batch.breached;
    else if (o.ok)
      ++batch.agreed;
    else
      ++batch.disagreed;
  }
  return batch;
}

}  // namespace bvm
