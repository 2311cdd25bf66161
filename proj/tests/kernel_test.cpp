#include "bvm/kernel.hpp"

#include <map>

#include "bvm/stats.hpp"
#include "doctest.h"
#include "testutil.hpp"

using namespace bvm;

TEST_CASE("kernel construction rejects malformed input") {
  CHECK_THROWS_AS(Kernel::from_rates({}), std::invalid_argument);
  CHECK_THROWS_AS(Kernel::from_rates({{0, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(Kernel::from_rates({{1, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Kernel::from_rates({{1, -0.2}}), std::invalid_argument);
}

TEST_CASE("validation flags") {
  auto ref = validate(testutil::reference_kernel());
  CHECK(ref.irreducible);
  CHECK(ref.non_nearest_neighbor);
  CHECK(ref.moment_class == "A+B");

  auto nn = validate(testutil::nearest_neighbor_kernel());
  CHECK(nn.irreducible);
  CHECK_FALSE(nn.non_nearest_neighbor);

  auto even = validate(Kernel::from_rates({{-2, 0.5}, {2, 0.5}}));
  CHECK_FALSE(even.irreducible);
  CHECK(even.non_nearest_neighbor);

  auto one_sided = validate(Kernel::from_rates({{1, 0.5}, {2, 0.5}}));
  CHECK_FALSE(one_sided.irreducible);
}

TEST_CASE("derived moments of the reference kernel") {
  const KernelMoments m = moments(testutil::reference_kernel());
  CHECK(m.sigma2 == doctest::Approx(1.9).epsilon(1e-14));
  CHECK(m.c_branch == doctest::Approx(2.6).epsilon(1e-14));
  CHECK(m.c_drift == doctest::Approx(2.4).epsilon(1e-14));
  CHECK(m.first_moment_pos == doctest::Approx(0.65).epsilon(1e-14));
  CHECK(m.first_moment_neg == doctest::Approx(0.65).epsilon(1e-14));
  REQUIRE(m.big_a.size() == 2);
  CHECK(m.big_a[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m.big_a[1] == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(m.a_sym.at(1) == doctest::Approx(0.35));
  CHECK(m.a_sym.at(2) == doctest::Approx(0.15));
}

TEST_CASE("symmetrization identities") {
  for (const auto& kernel :
       {testutil::reference_kernel(), testutil::asymmetric_kernel(), testutil::spread_kernel()}) {
    const KernelMoments m = moments(kernel);
    double sigma2_from_sym = 0.0;
    for (const auto& [k, as] : m.a_sym) sigma2_from_sym += 2.0 * as * static_cast<double>(k * k);
    CHECK(m.sigma2 == doctest::Approx(sigma2_from_sym).epsilon(1e-12));
    // big_a is nonincreasing and vanishes past the support.
    for (std::size_t i = 1; i < m.big_a.size(); ++i) CHECK(m.big_a[i] <= m.big_a[i - 1]);
    CHECK(m.big_a.back() > 0.0);
  }
}

TEST_CASE("sample_displacement basics") {
  auto kernel = testutil::reference_kernel();
  RngStream rng(7, 0);

  SUBCASE("single enabled key") {
    for (int i = 0; i < 32; ++i)
      CHECK(sample_displacement(kernel, {{1, 3.0}}, rng) == 1);
  }

  SUBCASE("all-zero weights rejected") {
    CHECK_THROWS_WITH_AS(sample_displacement(kernel, {{1, 0.0}}, rng), "no enabled transitions",
                         std::runtime_error);
  }

  SUBCASE("symmetric weights split evenly") {
    const int n = 100000;
    int plus = 0;
    for (int i = 0; i < n; ++i)
      if (sample_displacement(kernel, {{1, 1.0}, {-1, 1.0}}, rng) == 1) ++plus;
    const double se = std::sqrt(0.25 / n);
    CHECK(std::abs(static_cast<double>(plus) / n - 0.5) < 3 * se);
  }

  SUBCASE("weighted rates normalize") {
    // weights {1: 2, 2: 1}: P(k=1) = 0.7 / 0.85
    const int n = 100000;
    int ones = 0;
    for (int i = 0; i < n; ++i)
      if (sample_displacement(kernel, {{1, 2.0}, {2, 1.0}}, rng) == 1) ++ones;
    const double p = 0.7 / 0.85;
    const double se = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(static_cast<double>(ones) / n - p) < 3 * se);
  }
}

TEST_CASE("sample_displacement passes a chi-square test against its target") {
  auto kernel = testutil::asymmetric_kernel();
  std::map<std::int64_t, double> weights{{-3, 2.0}, {-1, 1.0}, {1, 3.0}, {2, 5.0}};
  double total = 0.0;
  std::vector<double> probs;
  std::vector<std::int64_t> support;
  for (const auto& [k, w] : weights) {
    support.push_back(k);
    probs.push_back(kernel.rate(k) * w);
    total += probs.back();
  }
  for (auto& p : probs) p /= total;

  RngStream rng(1234, 5);
  std::vector<std::int64_t> counts(probs.size(), 0);
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const std::int64_t k = sample_displacement(kernel, weights, rng);
    for (std::size_t j = 0; j < support.size(); ++j)
      if (support[j] == k) ++counts[j];
  }
  CHECK(chi_square_gof_pvalue(counts, probs) > 0.001);
}
