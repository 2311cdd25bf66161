#include "bvm/interface.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace bvm {

namespace {

constexpr std::int64_t kSiteLimit = std::int64_t{1} << 62;

void check_core_invariants(const std::vector<bool>& core) {
  if (core.empty()) return;
  if (!core.front() || core.back())
    throw std::invalid_argument("core word must start with 1 and end with 0");
}

}  // namespace

InterfaceConfig InterfaceConfig::heaviside(std::int64_t offset) {
  InterfaceConfig c;
  c.offset_ = offset;
  return c;
}

InterfaceConfig InterfaceConfig::from_core(std::vector<bool> core, std::int64_t offset) {
  check_core_invariants(core);
  InterfaceConfig c;
  c.offset_ = offset;
  c.core_ = std::move(core);
  return c;
}

InterfaceConfig InterfaceConfig::parse(std::string_view literal) {
  const auto at_pos = literal.rfind('@');
  if (at_pos == std::string_view::npos)
    throw std::invalid_argument("config literal must look like '<bits>@<offset>'");
  std::vector<bool> core;
  core.reserve(at_pos);
  for (char c : literal.substr(0, at_pos)) {
    if (c == '0')
      core.push_back(false);
    else if (c == '1')
      core.push_back(true);
    else
      throw std::invalid_argument("config literal core must be over {0,1}");
  }
  const std::string_view off_str = literal.substr(at_pos + 1);
  std::int64_t offset = 0;
  auto [ptr, ec] = std::from_chars(off_str.data(), off_str.data() + off_str.size(), offset);
  if (ec != std::errc{} || ptr != off_str.data() + off_str.size())
    throw std::invalid_argument("config literal offset must be a decimal integer");
  return from_core(std::move(core), offset);
}

void InterfaceConfig::flip(std::int64_t site) {
  if (site > kSiteLimit || site < -kSiteLimit)
    throw std::overflow_error("site magnitude exceeds representable range");

  const std::int64_t lo = std::min(site, offset_);
  const std::int64_t hi = std::max(site, offset_ + length() - 1);
  const std::size_t width = static_cast<std::size_t>(hi - lo + 1);

  std::vector<bool> window(width);
  for (std::size_t i = 0; i < width; ++i) window[i] = at(lo + static_cast<std::int64_t>(i));
  const std::size_t flip_idx = static_cast<std::size_t>(site - lo);
  window[flip_idx] = !window[flip_idx];

  // The window is flanked by 0s on the left and 1s on the right, so the new
  // span boundaries are determined inside it.
  std::int64_t first_one = hi + 1;
  std::int64_t last_zero = lo - 1;
  for (std::size_t i = 0; i < width; ++i) {
    if (window[i]) {
      first_one = lo + static_cast<std::int64_t>(i);
      break;
    }
  }
  for (std::size_t i = width; i-- > 0;) {
    if (!window[i]) {
      last_zero = lo + static_cast<std::int64_t>(i);
      break;
    }
  }

  if (last_zero < first_one) {
    core_.clear();
    offset_ = first_one;
    return;
  }
  std::vector<bool> next(static_cast<std::size_t>(last_zero - first_one + 1));
  for (std::size_t i = 0; i < next.size(); ++i)
    next[i] = window[static_cast<std::size_t>(first_one - lo) + i];
  core_ = std::move(next);
  offset_ = first_one;
}

InterfaceConfig InterfaceConfig::with_flip(std::int64_t site) const {
  InterfaceConfig out = *this;
  out.flip(site);
  return out;
}

InterfaceConfig InterfaceConfig::canonical(std::int64_t* shift) const {
  if (shift) *shift = offset_;
  InterfaceConfig out = *this;
  out.offset_ = 0;
  return out;
}

std::string InterfaceConfig::core_string() const {
  std::string s;
  s.reserve(core_.size());
  for (bool b : core_) s.push_back(b ? '1' : '0');
  return s;
}

std::string InterfaceConfig::to_string() const {
  return core_string() + "@" + std::to_string(offset_);
}

BoundaryCounts boundary_counts(const InterfaceConfig& config, std::int64_t k) {
  if (k == 0) throw std::invalid_argument("boundary_counts: k must be nonzero");
  const std::int64_t m = std::llabs(k);
  const std::int64_t len = config.length();
  const auto& core = config.core();

  // Pairs (i, i+m) reading 10 lie entirely inside the core; pairs reading 01
  // pick up closed-form contributions from the implicit tails.
  std::int64_t i10 = 0;
  std::int64_t i01 = 0;
  for (std::int64_t p = 0; p + m < len; ++p) {
    const bool a = core[static_cast<std::size_t>(p)];
    const bool b = core[static_cast<std::size_t>(p + m)];
    if (a && !b) ++i10;
    if (!a && b) ++i01;
  }
  // Left tail 0 paired with a core 1.
  const std::int64_t left_span = std::min(m, len);
  for (std::int64_t q = 0; q < left_span; ++q)
    if (core[static_cast<std::size_t>(q)]) ++i01;
  // Core 0 paired with a right tail 1.
  for (std::int64_t p = std::max<std::int64_t>(0, len - m); p < len; ++p)
    if (!core[static_cast<std::size_t>(p)]) ++i01;
  // Left tail 0 paired with a right tail 1.
  i01 += std::max<std::int64_t>(0, m - len);

  if (k > 0) return {i10, i01};
  return {i01, i10};
}

std::int64_t signed_i10(const InterfaceConfig& config, std::int64_t d) {
  if (d == 0) return 0;
  if (d > 0) return boundary_counts(config, d).i10;
  return boundary_counts(config, -d).i01;
}

std::int64_t inversions(const InterfaceConfig& config) {
  const auto& core = config.core();
  std::int64_t zeros_after = 0;
  std::int64_t acc = 0;
  for (std::size_t i = core.size(); i-- > 0;) {
    if (core[i])
      acc += zeros_after;
    else
      ++zeros_after;
  }
  return acc;
}

double weighted_inversions(const InterfaceConfig& config, double eps) {
  if (!(eps >= 0.0 && eps < 1.0))
    throw std::invalid_argument("weighted_inversions: eps must lie in [0,1)");
  const auto& core = config.core();
  std::int64_t total_zeros = 0;
  for (bool b : core)
    if (!b) ++total_zeros;

  double acc = 0.0;
  double weight = 1.0;
  std::int64_t zeros_seen = 0;
  for (bool b : core) {
    if (b) {
      acc += weight * static_cast<double>(total_zeros - zeros_seen);
      weight *= 1.0 - eps;
    } else {
      ++zeros_seen;
    }
  }
  return acc;
}

std::int64_t truncated_inversions(const InterfaceConfig& config, std::int64_t m) {
  if (m < 1) throw std::invalid_argument("truncated_inversions: distance cutoff must be >= 1");
  const auto& core = config.core();
  const std::int64_t len = config.length();
  // zeros_before[p] = number of 0s among core[0..p-1]
  std::vector<std::int64_t> zeros_before(static_cast<std::size_t>(len) + 1, 0);
  for (std::int64_t p = 0; p < len; ++p)
    zeros_before[static_cast<std::size_t>(p + 1)] =
        zeros_before[static_cast<std::size_t>(p)] + (core[static_cast<std::size_t>(p)] ? 0 : 1);

  std::int64_t acc = 0;
  for (std::int64_t p = 0; p < len; ++p) {
    if (!core[static_cast<std::size_t>(p)]) continue;
    const std::int64_t last = std::min(p + m, len - 1);
    acc += zeros_before[static_cast<std::size_t>(last + 1)] -
           zeros_before[static_cast<std::size_t>(p + 1)];
  }
  return acc;
}

}  // namespace bvm
