#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bvm {

// One-dimensional two-type interface configuration: all sites far to the
// left hold 0, all sites far to the right hold 1. Stored as the finite core
// word spanning [leftmost 1, rightmost 0] plus the absolute offset of the
// leftmost 1. The empty core encodes the heaviside state (0s strictly left
// of `offset`, 1s from `offset` on).
//
// Value type: cheap to copy, mutated only through flip(); shared instances
// are treated as immutable.
class InterfaceConfig {
 public:
  InterfaceConfig() = default;  // heaviside at the origin

  static InterfaceConfig heaviside(std::int64_t offset = 0);
  static InterfaceConfig from_core(std::vector<bool> core, std::int64_t offset);
  // Parses "101100@0"; "@3" is the heaviside state at 3.
  static InterfaceConfig parse(std::string_view literal);

  std::int64_t offset() const { return offset_; }
  std::int64_t length() const { return static_cast<std::int64_t>(core_.size()); }
  std::int64_t rightmost_zero() const { return offset_ + length() - 1; }
  bool heaviside_class() const { return core_.empty(); }
  const std::vector<bool>& core() const { return core_; }

  // Value of the extended configuration at an arbitrary site.
  bool at(std::int64_t site) const {
    if (site < offset_) return false;
    if (site >= offset_ + length()) return true;
    return core_[static_cast<std::size_t>(site - offset_)];
  }

  // Toggles the bit at `site` and re-trims the core span. Any single-site
  // flip keeps the configuration in the interface class; the span may
  // shrink by more than one site at once.
  void flip(std::int64_t site);
  InterfaceConfig with_flip(std::int64_t site) const;

  // Representative with the leftmost 1 at the origin; `shift` receives the
  // applied translation (the original offset).
  InterfaceConfig canonical(std::int64_t* shift = nullptr) const;
  bool same_modulo_translation(const InterfaceConfig& other) const { return core_ == other.core_; }

  std::string to_string() const;
  std::string core_string() const;

  bool operator==(const InterfaceConfig& other) const = default;

 private:
  std::int64_t offset_ = 0;
  std::vector<bool> core_;
};

struct BoundaryCounts {
  std::int64_t i10 = 0;  // pairs (i, i+k) reading 10
  std::int64_t i01 = 0;  // pairs (i, i+k) reading 01
  std::int64_t total() const { return i10 + i01; }
};

// Counts of ordered k-boundaries; k may be negative, k = 0 is rejected.
BoundaryCounts boundary_counts(const InterfaceConfig& config, std::int64_t k);

// 10-pair count at signed distance d, with the conventions d = 0 -> 0 and
// (d < 0) -> the 01-count at distance |d|. Centralizes the negative-index
// bookkeeping used by the truncated generator formula.
std::int64_t signed_i10(const InterfaceConfig& config, std::int64_t d);

// Number of inversions: pairs j < i with a 1 at j and a 0 at i.
std::int64_t inversions(const InterfaceConfig& config);

// Geometrically weighted inversions: an inversion whose 1 is preceded by m
// ones contributes (1-eps)^m. Equals inversions() at eps = 0.
double weighted_inversions(const InterfaceConfig& config, double eps);

// Inversions at span at most m.
std::int64_t truncated_inversions(const InterfaceConfig& config, std::int64_t m);

}  // namespace bvm
