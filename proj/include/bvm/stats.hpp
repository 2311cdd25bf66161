#pragma once

#include <cstdint>
#include <vector>

namespace bvm {

struct SampleStats {
  std::int64_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased, 0 for n < 2
  double std_error = 0.0;
};

SampleStats sample_stats(const std::vector<double>& xs);

// Lag-1 autocorrelation of a sequence; 0 for fewer than 3 points.
double lag1_autocorrelation(const std::vector<double>& xs);

// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

// Survival function of the chi-square law, P[X > stat] with df degrees.
double chi_square_pvalue(double stat, double df);

// Pearson chi-square p-value of observed counts against expected
// probabilities (must sum to 1). Cells with tiny expectation are pooled.
double chi_square_gof_pvalue(const std::vector<std::int64_t>& observed,
                             const std::vector<double>& probs);

// Two-sample Kolmogorov-Smirnov p-value (asymptotic).
double ks2_pvalue(std::vector<double> a, std::vector<double> b);

}  // namespace bvm
