#pragma once

#include <cstdint>

#include "bvm/interface.hpp"
#include "bvm/kernel.hpp"
#include "bvm/observables.hpp"

namespace bvm {

// Brute-force action of the process generator on an observable: enumerates
// every enabled flip by scanning (site, displacement) pairs on a
// materialized neighborhood of the core and sums rate * (f(flipped) - f).
// Deliberately shares no bookkeeping with the event-driven simulator; this
// is the oracle side of the closed-form identities below.
double apply_generator(const ObservableFn& f, const InterfaceConfig& config,
                       const Kernel& kernel, double eps);

// Bias correction term attached to displacement k in the closed form for
// the generator acting on the weighted inversion count. Zero for |k| <= 1.
double r_eps_k(const InterfaceConfig& config, double eps, std::int64_t k);

// Closed form for the generator applied to the weighted inversion count:
//   sum_k a(k) (k^2/2 - eps * R_k) - (1/2) sum_k a(k) I_|k|.
double gh_formula(const InterfaceConfig& config, const Kernel& kernel, double eps);

// Closed form for the unbiased generator applied to the distance-truncated
// inversion count:
//   sum_{k>=1} a_sym(k)(k^2 - I_k) + sum_{n>=1} A(n) [i10(M+n) - i10(M+1-n)],
// with the signed-distance convention of signed_i10 for indices <= 0.
double ghM_formula(const InterfaceConfig& config, const Kernel& kernel, std::int64_t m);

// Upper bound valid for eps in (0,1):
//   (1/2) sum_{k<0} a(k) k^2 + eps^{-1} sum_{k>0} a(k) k - (1/2) sum_k a(k) I_|k|.
double gh_upper_bound(const InterfaceConfig& config, const Kernel& kernel, double eps);

}  // namespace bvm
