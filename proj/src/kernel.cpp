#include "bvm/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "bvm/numeric.hpp"

namespace bvm {

Kernel Kernel::from_rates(const std::map<std::int64_t, double>& rates) {
  Kernel k;
  for (const auto& [disp, rate] : rates) {
    if (disp == 0) throw std::invalid_argument("displacement zero not allowed");
    if (!(rate > 0.0) || !std::isfinite(rate))
      throw std::invalid_argument("kernel rate must be positive and finite at displacement " +
                                  std::to_string(disp));
    k.entries_.emplace_back(disp, rate);
  }
  if (k.entries_.empty()) throw std::invalid_argument("kernel support must be nonempty");
  std::sort(k.entries_.begin(), k.entries_.end());
  KahanSum mass;
  for (const auto& [disp, rate] : k.entries_) {
    k.max_abs_ = std::max<std::int64_t>(k.max_abs_, std::llabs(disp));
    mass.add(rate);
  }
  k.total_mass_ = mass.value();
  return k;
}

std::vector<std::int64_t> Kernel::support() const {
  std::vector<std::int64_t> out;
  out.reserve(entries_.size());
  for (const auto& [disp, rate] : entries_) out.push_back(disp);
  return out;
}

double Kernel::rate(std::int64_t k) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                             [](const auto& e, std::int64_t v) { return e.first < v; });
  if (it != entries_.end() && it->first == k) return it->second;
  return 0.0;
}

std::string Kernel::id() const {
  std::ostringstream oss;
  bool first = true;
  for (const auto& [disp, rate] : entries_) {
    if (!first) oss << ";";
    first = false;
    oss << "a(" << disp << ")=" << rate;
  }
  return oss.str();
}

ValidationReport validate(const Kernel& kernel) {
  ValidationReport report;
  bool has_pos = false, has_neg = false;
  std::int64_t g = 0;
  for (const auto& [disp, rate] : kernel.entries()) {
    (void)rate;
    has_pos = has_pos || disp > 0;
    has_neg = has_neg || disp < 0;
    g = std::gcd(g, std::llabs(disp));
    if (std::llabs(disp) >= 2) report.non_nearest_neighbor = true;
  }
  // The walk reaches every site iff jumps exist in both directions and the
  // absolute displacements have gcd one.
  report.irreducible = has_pos && has_neg && g == 1;
  report.moment_class = "A+B";
  return report;
}

KernelMoments moments(const Kernel& kernel) {
  KernelMoments m;
  KahanSum sigma2, fpos, fneg, branch, drift;
  for (const auto& [k, a] : kernel.entries()) {
    const double kd = static_cast<double>(k);
    sigma2.add(a * kd * kd);
    if (k > 0) fpos.add(a * kd);
    if (k < 0) fneg.add(a * (-kd));
    branch.add(2.0 * a * static_cast<double>(std::llabs(k - 1)));
  }
  const std::int64_t maxk = kernel.max_abs_support();
  for (std::int64_t k = 1; k <= maxk; ++k) {
    const double as = 0.5 * (kernel.rate(k) + kernel.rate(-k));
    if (as > 0.0) m.a_sym[k] = as;
    drift.add((kernel.rate(-k) + 0.5 * kernel.rate(k)) * static_cast<double>(k) *
              static_cast<double>(k + 1));
  }
  m.big_a.assign(static_cast<std::size_t>(maxk), 0.0);
  for (std::int64_t n = maxk; n >= 1; --n) {
    double above = (n < maxk) ? m.big_a[static_cast<std::size_t>(n)] : 0.0;
    m.big_a[static_cast<std::size_t>(n - 1)] = above + kernel.rate(n) + kernel.rate(-n);
  }
  m.sigma2 = sigma2.value();
  m.first_moment_pos = fpos.value();
  m.first_moment_neg = fneg.value();
  m.c_branch = branch.value();
  m.c_drift = drift.value();
  return m;
}

std::int64_t sample_displacement(const Kernel& kernel,
                                 const std::map<std::int64_t, double>& weights,
                                 RngStream& rng) {
  std::vector<std::pair<std::int64_t, double>> masses;
  double total = 0.0;
  for (const auto& [k, w] : weights) {
    if (w < 0.0) throw std::invalid_argument("sample_displacement: negative weight");
    const double mass = kernel.rate(k) * w;
    if (mass > 0.0) {
      masses.emplace_back(k, mass);
      total += mass;
    }
  }
  if (masses.empty() || !(total > 0.0))
    throw std::runtime_error("no enabled transitions");
  double u = rng.uniform01() * total;
  for (const auto& [k, mass] : masses) {
    u -= mass;
    if (u < 0.0) return k;
  }
  return masses.back().first;
}

}  // namespace bvm
