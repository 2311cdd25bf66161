#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bvm/rng.hpp"

namespace bvm {

// Jump kernel a(.) on the nonzero integers, finite support, strictly
// positive stored rates. Immutable after construction; safe to share
// across concurrent simulation replicas.
class Kernel {
 public:
  static Kernel from_rates(const std::map<std::int64_t, double>& rates);

  const std::vector<std::pair<std::int64_t, double>>& entries() const { return entries_; }
  std::vector<std::int64_t> support() const;
  double rate(std::int64_t k) const;
  std::int64_t max_abs_support() const { return max_abs_; }
  double total_mass() const { return total_mass_; }

  // Canonical id string, e.g. "a(-1)=0.35;a(1)=0.35".
  std::string id() const;

 private:
  std::vector<std::pair<std::int64_t, double>> entries_;  // sorted by displacement
  std::int64_t max_abs_ = 0;
  double total_mass_ = 0.0;
};

struct ValidationReport {
  bool irreducible = false;
  bool non_nearest_neighbor = false;
  // Finite support satisfies both the unbiased second-moment condition and
  // the relaxed one-sided condition for positive bias.
  std::string moment_class;
};

ValidationReport validate(const Kernel& kernel);

struct KernelMoments {
  double sigma2 = 0.0;            // sum_k a(k) k^2
  double first_moment_pos = 0.0;  // sum_{k>0} a(k) k
  double first_moment_neg = 0.0;  // sum_{k<0} a(k) |k|
  double c_branch = 0.0;          // 2 sum_k a(k) |k-1|
  double c_drift = 0.0;           // sum_{k>=1} [a(-k) + a(k)/2] k (k+1)
  std::map<std::int64_t, double> a_sym;  // symmetrization, positive keys
  std::vector<double> big_a;             // big_a[n-1] = 2 sum_{m>=n} a_sym(m)
};

KernelMoments moments(const Kernel& kernel);

// Draws a displacement with probability proportional to a(k) * weight(k).
// Throws if every weighted rate is zero.
std::int64_t sample_displacement(const Kernel& kernel,
                                 const std::map<std::int64_t, double>& weights,
                                 RngStream& rng);

}  // namespace bvm
