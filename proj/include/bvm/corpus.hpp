#pragma once

#include <cstdint>
#include <vector>

#include "bvm/interface.hpp"
#include "bvm/rng.hpp"

namespace bvm {

// Uniform random core word of length <= max_core_len (0 and then >= 2;
// length-1 words cannot satisfy the span invariants), random offset.
InterfaceConfig random_interface_config(RngStream& rng, std::int64_t max_core_len,
                                        std::int64_t max_offset = 40);

// Random configurations prefixed with the adversarial ones: heaviside,
// single block, alternating word. Used by the identity verification runs.
std::vector<InterfaceConfig> verification_corpus(std::uint64_t seed, int n_random,
                                                 std::int64_t max_core_len);

}  // namespace bvm
