#include "bvm/corpus.hpp"

namespace bvm {

InterfaceConfig random_interface_config(RngStream& rng, std::int64_t max_core_len,
                                        std::int64_t max_offset) {
  const std::uint64_t len_pick = rng.uniform_below(static_cast<std::uint64_t>(max_core_len + 1));
  const std::int64_t offset =
      static_cast<std::int64_t>(rng.uniform_below(static_cast<std::uint64_t>(2 * max_offset + 1))) -
      max_offset;
  if (len_pick < 2) return InterfaceConfig::heaviside(offset);
  const std::int64_t len = static_cast<std::int64_t>(len_pick);
  std::vector<bool> core(static_cast<std::size_t>(len));
  core.front() = true;
  core.back() = false;
  for (std::int64_t p = 1; p + 1 < len; ++p) core[static_cast<std::size_t>(p)] = rng.next_u64() & 1;
  return InterfaceConfig::from_core(std::move(core), offset);
}

std::vector<InterfaceConfig> verification_corpus(std::uint64_t seed, int n_random,
                                                 std::int64_t max_core_len) {
  RngStream rng(seed, 777);
  std::vector<InterfaceConfig> out;
  out.push_back(InterfaceConfig::heaviside(0));
  out.push_back(InterfaceConfig::parse("10@0"));
  out.push_back(InterfaceConfig::parse("111000@-3"));
  out.push_back(InterfaceConfig::parse("1010101010@5"));
  for (int i = 0; i < n_random; ++i) out.push_back(random_interface_config(rng, max_core_len));
  return out;
}

}  // namespace bvm
