#pragma once

namespace bvm {

// Compensated (Kahan) accumulator. Used wherever many small terms are
// folded into one double: simulation clocks, path integrals, kernel moments.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
  void reset() { sum = 0.0; carry = 0.0; }
};

}  // namespace bvm
