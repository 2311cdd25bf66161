#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "bvm/interface.hpp"
#include "bvm/kernel.hpp"

namespace bvm {

// Real-valued configuration functional, finite on every interface config.
struct ObservableFn {
  std::string tag;
  std::function<double(const InterfaceConfig&)> eval;

  double operator()(const InterfaceConfig& c) const { return eval(c); }
};

ObservableFn weighted_inversions_observable(double eps);
ObservableFn truncated_inversions_observable(std::int64_t m);
ObservableFn boundary_count_observable(std::int64_t k);
ObservableFn interface_length_observable();
ObservableFn constant_observable(double value);
// sum_{k>=1} a_sym(k) I_k, the weighted boundary count whose equilibrium
// mean is pinned by the kernel's second moment.
ObservableFn symmetrized_boundary_sum_observable(const Kernel& kernel);

}  // namespace bvm
