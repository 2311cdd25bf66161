#include "bvm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bvm/numeric.hpp"

namespace bvm {

SampleStats sample_stats(const std::vector<double>& xs) {
  SampleStats out;
  out.n = static_cast<std::int64_t>(xs.size());
  if (out.n == 0) return out;
  KahanSum s;
  for (double x : xs) s.add(x);
  out.mean = s.value() / static_cast<double>(out.n);
  if (out.n < 2) return out;
  KahanSum q;
  for (double x : xs) q.add((x - out.mean) * (x - out.mean));
  out.variance = q.value() / static_cast<double>(out.n - 1);
  out.std_error = std::sqrt(out.variance / static_cast<double>(out.n));
  return out;
}

double lag1_autocorrelation(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  if (n < 3) return 0.0;
  double mean = sample_stats(xs).mean;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    den += (xs[i] - mean) * (xs[i] - mean);
    if (i + 1 < n) num += (xs[i] - mean) * (xs[i + 1] - mean);
  }
  if (den == 0.0) return 0.0;
  return num / den;
}

namespace {

double gamma_p_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw std::invalid_argument("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_contfrac(a, x);
}

double chi_square_pvalue(double stat, double df) {
  if (stat <= 0.0) return 1.0;
  return gamma_q(df / 2.0, stat / 2.0);
}

double chi_square_gof_pvalue(const std::vector<std::int64_t>& observed,
                             const std::vector<double>& probs) {
  if (observed.size() != probs.size() || observed.empty())
    throw std::invalid_argument("chi_square_gof_pvalue: size mismatch");
  std::int64_t total = 0;
  for (auto c : observed) total += c;
  if (total <= 0) throw std::invalid_argument("chi_square_gof_pvalue: no samples");

  // Pool cells with expected count below 5 into one to keep the asymptotic
  // chi-square distribution valid.
  double stat = 0.0;
  double pooled_exp = 0.0;
  double pooled_obs = 0.0;
  int cells = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    double expct = probs[i] * static_cast<double>(total);
    if (expct < 5.0) {
      pooled_exp += expct;
      pooled_obs += static_cast<double>(observed[i]);
      continue;
    }
    double d = static_cast<double>(observed[i]) - expct;
    stat += d * d / expct;
    ++cells;
  }
  if (pooled_exp > 0.0) {
    double d = pooled_obs - pooled_exp;
    stat += d * d / pooled_exp;
    ++cells;
  }
  if (cells < 2) return 1.0;
  return chi_square_pvalue(stat, static_cast<double>(cells - 1));
}

double ks2_pvalue(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks2_pvalue: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  double ne = std::sqrt(na * nb / (na + nb));
  double lambda = (ne + 0.12 + 0.11 / ne) * d;
  // Kolmogorov survival function.
  double p = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * lambda * lambda * k * k);
    p += 2.0 * sign * term;
    sign = -sign;
    if (term < 1e-12) break;
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace bvm
