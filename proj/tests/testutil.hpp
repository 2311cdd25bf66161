#pragma once

// Naive oracles and corpus generators shared by the unit and acceptance
// suites. Everything here recomputes from a materialized window and stays
// independent of the incremental bookkeeping under test.

#include <cstdint>
#include <map>
#include <vector>

#include "bvm/corpus.hpp"
#include "bvm/interface.hpp"
#include "bvm/kernel.hpp"
#include "bvm/rng.hpp"

namespace bvm::testutil {

inline Kernel reference_kernel() {
  return Kernel::from_rates({{-2, 0.15}, {-1, 0.35}, {1, 0.35}, {2, 0.15}});
}

inline Kernel spread_kernel() {
  return Kernel::from_rates({{-3, 0.25}, {-1, 0.25}, {1, 0.25}, {3, 0.25}});
}

inline Kernel asymmetric_kernel() {
  return Kernel::from_rates({{-3, 0.05}, {-1, 0.2}, {1, 0.4}, {2, 0.1}});
}

inline Kernel nearest_neighbor_kernel() {
  return Kernel::from_rates({{-1, 0.5}, {1, 0.5}});
}

// Extended configuration values on [lo, hi].
inline std::vector<int> materialize(const InterfaceConfig& c, std::int64_t lo, std::int64_t hi) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t i = lo; i <= hi; ++i) out.push_back(c.at(i) ? 1 : 0);
  return out;
}

// Pair count oracle: scans every pair (i, i+k) whose indicator can be
// nonzero on a window padded well beyond the core.
inline BoundaryCounts naive_boundary_counts(const InterfaceConfig& c, std::int64_t k) {
  const std::int64_t pad = std::llabs(k) + 2;
  const std::int64_t lo = c.offset() - pad;
  const std::int64_t hi = c.offset() + c.length() - 1 + pad;
  BoundaryCounts bc;
  for (std::int64_t i = lo; i <= hi; ++i) {
    const bool a = c.at(i);
    const bool b = c.at(i + k);
    if (a && !b) ++bc.i10;
    if (!a && b) ++bc.i01;
  }
  return bc;
}

inline std::int64_t naive_inversions(const InterfaceConfig& c) {
  const std::int64_t lo = c.offset();
  const std::int64_t hi = c.offset() + c.length() - 1;
  std::int64_t acc = 0;
  for (std::int64_t j = lo; j <= hi; ++j)
    for (std::int64_t i = j + 1; i <= hi; ++i)
      if (c.at(j) && !c.at(i)) ++acc;
  return acc;
}

inline double naive_weighted_inversions(const InterfaceConfig& c, double eps) {
  const std::int64_t lo = c.offset();
  const std::int64_t hi = c.offset() + c.length() - 1;
  double acc = 0.0;
  for (std::int64_t j = lo; j <= hi; ++j) {
    if (!c.at(j)) continue;
    std::int64_t ones_left = 0;
    for (std::int64_t n = lo; n < j; ++n)
      if (c.at(n)) ++ones_left;
    double w = 1.0;
    for (std::int64_t m = 0; m < ones_left; ++m) w *= 1.0 - eps;
    for (std::int64_t i = j + 1; i <= hi; ++i)
      if (!c.at(i)) acc += w;
  }
  return acc;
}

inline std::int64_t naive_truncated_inversions(const InterfaceConfig& c, std::int64_t m) {
  const std::int64_t lo = c.offset();
  const std::int64_t hi = c.offset() + c.length() - 1;
  std::int64_t acc = 0;
  for (std::int64_t j = lo; j <= hi; ++j)
    for (std::int64_t i = j + 1; i <= hi && i - j <= m; ++i)
      if (c.at(j) && !c.at(i)) ++acc;
  return acc;
}

// Enumerates the enabled flips of a configuration: map (site -> total rate).
// The flip value is determined by the current value at the site.
inline std::map<std::int64_t, double> naive_flip_rates(const InterfaceConfig& c,
                                                       const Kernel& kernel, double eps) {
  const std::int64_t maxk = kernel.max_abs_support();
  const std::int64_t lo = c.offset() - 2 * maxk;
  const std::int64_t hi = c.offset() + c.length() - 1 + 2 * maxk;
  std::map<std::int64_t, double> rates;
  for (std::int64_t i = lo; i <= hi; ++i) {
    for (const auto& [k, a] : kernel.entries()) {
      const bool xi = c.at(i);
      const bool xj = c.at(i + k);
      if (xi == xj) continue;
      rates[i + k] += xi ? a : (1.0 - eps) * a;
    }
  }
  return rates;
}

inline InterfaceConfig random_config(RngStream& rng, std::int64_t max_core_len,
                                     std::int64_t max_offset = 40) {
  return random_interface_config(rng, max_core_len, max_offset);
}

inline std::vector<InterfaceConfig> config_corpus(std::uint64_t seed, int n_random,
                                                  std::int64_t max_core_len) {
  return verification_corpus(seed, n_random, max_core_len);
}

}  // namespace bvm::testutil
