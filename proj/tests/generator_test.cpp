#include "bvm/generator.hpp"

#include <cmath>

#include "doctest.h"
#include "testutil.hpp"

using namespace bvm;

TEST_CASE("apply_generator: hand-checked pointwise values") {
  const auto nn = testutil::nearest_neighbor_kernel();
  const auto h = InterfaceConfig::heaviside(0);

  // The two nearest-neighbor flips enabled at the heaviside state only
  // translate it, so the adjacent boundary count cannot move.
  CHECK(apply_generator(boundary_count_observable(1), h, nn, 0.0) ==
        doctest::Approx(0.0).epsilon(1e-12));

  // With jumps of size 2 the heaviside state can split: the flips at
  // distance 2 on either side create a detached block (I_1: 1 -> 3) at rate
  // 0.15 each, everything else translates.
  CHECK(apply_generator(boundary_count_observable(1), h, testutil::reference_kernel(), 0.0) ==
        doctest::Approx(0.6).epsilon(1e-12));

  CHECK(apply_generator(constant_observable(3.5), h, nn, 0.4) == doctest::Approx(0.0));
  CHECK(apply_generator(constant_observable(1.0), InterfaceConfig::parse("1010@3"),
                        testutil::reference_kernel(), 0.2) == doctest::Approx(0.0));

  // Nearest-neighbor closed form: (1 - I_1)/2, zero at the heaviside state.
  for (double eps : {0.0, 0.3, 0.7})
    CHECK(apply_generator(weighted_inversions_observable(eps), h, nn, eps) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("r_eps_k: pointwise values and nonnegativity") {
  const auto h = InterfaceConfig::heaviside(0);
  for (std::int64_t k : {std::int64_t{-1}, std::int64_t{1}})
    CHECK(r_eps_k(InterfaceConfig::parse("1100@2"), 0.5, k) == 0.0);
  CHECK(r_eps_k(h, 0.5, 2) == doctest::Approx(1.0));

  auto corpus = testutil::config_corpus(31, 200, 20);
  for (const auto& c : corpus) {
    for (double eps : {0.0, 0.1, 0.5, 0.9}) {
      for (std::int64_t k = -5; k <= 5; ++k) {
        if (k == 0) continue;
        CHECK(r_eps_k(c, eps, k) >= 0.0);
      }
    }
  }
}

TEST_CASE("r_eps_k: one-sided lower bound for positive displacements") {
  auto corpus = testutil::config_corpus(32, 200, 20);
  for (const auto& c : corpus) {
    for (double eps : {0.1, 0.5, 0.9}) {
      for (std::int64_t k = 2; k <= 5; ++k) {
        const double kd = static_cast<double>(k);
        const double lower = 0.5 / eps * kd * (kd - 1.0) - (1.0 - eps) / (eps * eps) * kd;
        CHECK(r_eps_k(c, eps, k) >= lower - 1e-9);
      }
    }
  }
}

TEST_CASE("gh_formula: pointwise values") {
  const auto ref = testutil::reference_kernel();
  const auto nn = testutil::nearest_neighbor_kernel();
  const auto h = InterfaceConfig::heaviside(0);

  CHECK(gh_formula(h, ref, 0.0) == doctest::Approx(0.3).epsilon(1e-12));

  // Any configuration with I_1 = 3 gives -1 under the nearest-neighbor
  // kernel, for every bias.
  const auto one_block = InterfaceConfig::parse("10@0");
  REQUIRE(boundary_counts(one_block, 1).total() == 3);
  for (double eps : {0.0, 0.25, 0.8})
    CHECK(gh_formula(one_block, nn, eps) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("gh_formula at zero bias depends on the configuration only through I_k") {
  // mirror images share every boundary count
  auto corpus = testutil::config_corpus(33, 100, 20);
  const auto ref = testutil::reference_kernel();
  for (const auto& c : corpus) {
    std::vector<bool> mirrored(c.core().rbegin(), c.core().rend());
    mirrored.flip();
    const auto m = c.core().empty() ? InterfaceConfig::heaviside(0)
                                    : InterfaceConfig::from_core(mirrored, 0);
    for (std::int64_t k = 1; k <= 4; ++k)
      REQUIRE(boundary_counts(m, k).total() == boundary_counts(c, k).total());
    CHECK(gh_formula(m, ref, 0.0) == doctest::Approx(gh_formula(c, ref, 0.0)).epsilon(1e-12));
  }
}

TEST_CASE("oracle equivalence: closed form vs exhaustive generator, weighted inversions") {
  const std::vector<Kernel> kernels{testutil::reference_kernel(), testutil::spread_kernel(),
                                    testutil::asymmetric_kernel()};
  auto corpus = testutil::config_corpus(34, 120, 24);
  for (const auto& kernel : kernels) {
    for (double eps : {0.0, 0.1, 0.5, 0.9}) {
      const auto h_eps = weighted_inversions_observable(eps);
      for (const auto& c : corpus) {
        const double oracle = apply_generator(h_eps, c, kernel, eps);
        const double formula = gh_formula(c, kernel, eps);
        CHECK(std::fabs(oracle - formula) <= 1e-9);
      }
    }
  }
}

TEST_CASE("oracle equivalence: truncated closed form at zero bias") {
  const std::vector<Kernel> kernels{testutil::reference_kernel(), testutil::spread_kernel(),
                                    testutil::asymmetric_kernel()};
  auto corpus = testutil::config_corpus(35, 80, 24);
  for (const auto& kernel : kernels) {
    for (std::int64_t m : {1, 2, 3, 5, 10}) {
      const auto h_m = truncated_inversions_observable(m);
      for (const auto& c : corpus) {
        const double oracle = apply_generator(h_m, c, kernel, 0.0);
        const double formula = ghM_formula(c, kernel, m);
        CHECK(std::fabs(oracle - formula) <= 1e-9);
      }
    }
  }

  // nearest-neighbor heaviside spot check
  CHECK(std::fabs(apply_generator(truncated_inversions_observable(1), InterfaceConfig::heaviside(0),
                                  testutil::nearest_neighbor_kernel(), 0.0) -
                  ghM_formula(InterfaceConfig::heaviside(0), testutil::nearest_neighbor_kernel(), 1)) <=
        1e-12);
  CHECK_THROWS_AS(ghM_formula(InterfaceConfig::heaviside(0), testutil::reference_kernel(), 0),
                  std::invalid_argument);
}

TEST_CASE("bias can only lower the generator value, and the explicit bound holds") {
  const auto ref = testutil::reference_kernel();
  const auto asym = testutil::asymmetric_kernel();
  auto corpus = testutil::config_corpus(36, 200, 24);

  const auto h = InterfaceConfig::heaviside(0);
  CHECK(gh_upper_bound(h, ref, 0.5) == doctest::Approx(1.125).epsilon(1e-12));
  CHECK_THROWS_AS(gh_upper_bound(h, ref, 0.0), std::invalid_argument);

  for (const auto& kernel : {ref, asym}) {
    for (const auto& c : corpus) {
      const double unbiased = gh_formula(c, kernel, 0.0);
      for (double eps : {0.1, 0.5, 0.9}) {
        const double biased = gh_formula(c, kernel, eps);
        CHECK(biased <= unbiased + 1e-12);
        CHECK(biased <= gh_upper_bound(c, kernel, eps) + 1e-12);
      }
    }
  }
}
