#include "bvm/generator.hpp"

#include <cmath>
#include <stdexcept>

#include "bvm/numeric.hpp"

namespace bvm {

ObservableFn weighted_inversions_observable(double eps) {
  return {"h_eps(" + std::to_string(eps) + ")",
          [eps](const InterfaceConfig& c) { return weighted_inversions(c, eps); }};
}

ObservableFn truncated_inversions_observable(std::int64_t m) {
  return {"h_M(" + std::to_string(m) + ")", [m](const InterfaceConfig& c) {
            return static_cast<double>(truncated_inversions(c, m));
          }};
}

ObservableFn boundary_count_observable(std::int64_t k) {
  return {"I_" + std::to_string(k), [k](const InterfaceConfig& c) {
            return static_cast<double>(boundary_counts(c, k).total());
          }};
}

ObservableFn interface_length_observable() {
  return {"L", [](const InterfaceConfig& c) { return static_cast<double>(c.length()); }};
}

ObservableFn constant_observable(double value) {
  return {"const", [value](const InterfaceConfig&) { return value; }};
}

ObservableFn symmetrized_boundary_sum_observable(const Kernel& kernel) {
  const KernelMoments m = moments(kernel);
  std::vector<std::pair<std::int64_t, double>> weights(m.a_sym.begin(), m.a_sym.end());
  return {"sym_boundary_sum", [weights](const InterfaceConfig& c) {
            double acc = 0.0;
            for (const auto& [k, as] : weights)
              acc += as * static_cast<double>(boundary_counts(c, k).total());
            return acc;
          }};
}

double apply_generator(const ObservableFn& f, const InterfaceConfig& config,
                       const Kernel& kernel, double eps) {
  if (!(eps >= 0.0 && eps < 1.0))
    throw std::invalid_argument("apply_generator: eps must lie in [0,1)");
  const std::int64_t maxk = kernel.max_abs_support();
  const std::int64_t lo = config.offset() - 2 * maxk;
  const std::int64_t hi = config.offset() + config.length() - 1 + 2 * maxk;
  const double f0 = f(config);

  KahanSum acc;
  for (std::int64_t i = lo; i <= hi; ++i) {
    const bool xi = config.at(i);
    for (const auto& [k, rate] : kernel.entries()) {
      const bool xj = config.at(i + k);
      if (xi == xj) continue;
      // A 10 pair flips its head up at full rate, a 01 pair flips its head
      // down at rate damped by the bias.
      const double w = xi ? rate : (1.0 - eps) * rate;
      acc.add(w * (f(config.with_flip(i + k)) - f0));
    }
  }
  return acc.value();
}

double r_eps_k(const InterfaceConfig& config, double eps, std::int64_t k) {
  if (!(eps >= 0.0 && eps < 1.0))
    throw std::invalid_argument("r_eps_k: eps must lie in [0,1)");
  const std::int64_t m = std::llabs(k);
  if (m <= 1) return 0.0;

  const std::int64_t offset = config.offset();
  const std::int64_t len = config.length();
  // Scan the 1s left to right; the weight (1-eps)^{#1s to the left} is kept
  // as a running product.
  double weight = 1.0;
  KahanSum acc;
  const std::int64_t i_hi = (k > 0) ? offset + len - 1 + (m - 1) : offset + len - 1;
  for (std::int64_t i = offset; i <= i_hi; ++i) {
    if (!config.at(i)) continue;
    double inner = 0.0;
    for (std::int64_t n = 1; n <= m - 1; ++n) {
      const std::int64_t partner = (k > 0) ? i - n : i + n;
      if (!config.at(partner)) inner += static_cast<double>(m - n);
    }
    acc.add(weight * inner);
    weight *= 1.0 - eps;
  }
  return acc.value();
}

double gh_formula(const InterfaceConfig& config, const Kernel& kernel, double eps) {
  if (!(eps >= 0.0 && eps < 1.0))
    throw std::invalid_argument("gh_formula: eps must lie in [0,1)");
  KahanSum acc;
  for (const auto& [k, rate] : kernel.entries()) {
    const double kd = static_cast<double>(k);
    double term = 0.5 * kd * kd;
    if (eps > 0.0) term -= eps * r_eps_k(config, eps, k);
    acc.add(rate * term);
    acc.add(-0.5 * rate * static_cast<double>(boundary_counts(config, k).total()));
  }
  return acc.value();
}

double ghM_formula(const InterfaceConfig& config, const Kernel& kernel, std::int64_t m) {
  if (m < 1) throw std::invalid_argument("ghM_formula: distance cutoff must be >= 1");
  const KernelMoments mom = moments(kernel);
  KahanSum acc;
  for (const auto& [k, as] : mom.a_sym) {
    const double kd = static_cast<double>(k);
    acc.add(as * (kd * kd - static_cast<double>(boundary_counts(config, k).total())));
  }
  const std::int64_t maxk = kernel.max_abs_support();
  for (std::int64_t n = 1; n <= maxk; ++n) {
    const double a_n = mom.big_a[static_cast<std::size_t>(n - 1)];
    if (a_n == 0.0) continue;
    acc.add(a_n * static_cast<double>(signed_i10(config, m + n)));
    acc.add(-a_n * static_cast<double>(signed_i10(config, m + 1 - n)));
  }
  return acc.value();
}

double gh_upper_bound(const InterfaceConfig& config, const Kernel& kernel, double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("gh_upper_bound: eps must lie in (0,1)");
  KahanSum acc;
  for (const auto& [k, rate] : kernel.entries()) {
    const double kd = static_cast<double>(k);
    if (k < 0)
      acc.add(0.5 * rate * kd * kd);
    else
      acc.add(rate * kd / eps);
    acc.add(-0.5 * rate * static_cast<double>(boundary_counts(config, k).total()));
  }
  return acc.value();
}

}  // namespace bvm
