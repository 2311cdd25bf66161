#include "bvm/dynamics.hpp"

#include <cmath>
#include <map>

#include "bvm/stats.hpp"
#include "doctest.h"
#include "testutil.hpp"

using namespace bvm;

TEST_CASE("total rate: frozen examples and affine bias dependence") {
  const auto ref = testutil::reference_kernel();
  const auto h = InterfaceConfig::heaviside(0);

  CHECK(total_rate(h, ref, 0.0) == doctest::Approx(1.3).epsilon(1e-12));

  // rate(eps) = r10 + (1-eps) r01; extrapolating to eps -> 1 leaves only
  // the up-flip mass.
  const double r0 = total_rate(h, ref, 0.0);
  const double r_half = total_rate(h, ref, 0.5);
  const double r10 = 2.0 * r_half - r0;
  CHECK(r10 == doctest::Approx(0.65).epsilon(1e-12));

  auto corpus = testutil::config_corpus(41, 100, 20);
  for (const auto& c : corpus) {
    const double a = total_rate(c, ref, 0.0);
    const double b = total_rate(c, ref, 0.5);
    const double predicted_09 = a + (b - a) * (0.9 / 0.5);
    CHECK(total_rate(c, ref, 0.9) == doctest::Approx(predicted_09).epsilon(1e-10));
    CHECK(2.0 * b - a >= -1e-12);  // r10 >= 0
    CHECK(a - b >= -1e-12);        // r01 >= 0
    CHECK(a > 0.0);
  }
}

TEST_CASE("incremental pair counts equal a from-scratch recount along a long run") {
  const auto kernel = testutil::asymmetric_kernel();
  Simulator sim(InterfaceConfig::heaviside(0), kernel, 0.2, RngStream(42, 0));
  for (int i = 0; i < 100000; ++i) {
    sim.step();
    if (!sim.verify_counts()) {
      REQUIRE(sim.verify_counts());  // report the failing event index
    }
    const auto& core = sim.config().core();
    if (!core.empty()) {
      REQUIRE(core.front());
      REQUIRE_FALSE(core.back());
    }
  }
  CHECK(sim.events() == 100000);
  CHECK(sim.clock() > 0.0);
}

TEST_CASE("same seed reproduces the event sequence; reference simulator matches exactly") {
  const auto kernel = testutil::reference_kernel();
  const auto initial = InterfaceConfig::parse("1010@-2");

  Simulator a(initial, kernel, 0.3, RngStream(7, 9));
  Simulator b(initial, kernel, 0.3, RngStream(7, 9));
  ReferenceSimulator c(initial, kernel, 0.3, RngStream(7, 9));
  for (int i = 0; i < 20000; ++i) {
    const FlipEvent ea = a.step();
    const FlipEvent eb = b.step();
    const FlipEvent ec = c.step();
    REQUIRE(ea.site == eb.site);
    REQUIRE(ea.new_value == eb.new_value);
    REQUIRE(ea.dt == eb.dt);
    REQUIRE(ea.site == ec.site);
    REQUIRE(ea.new_value == ec.new_value);
    REQUIRE(ea.dt == ec.dt);
    REQUIRE(ea.distance == ec.distance);
  }
  CHECK(a.config() == b.config());
  CHECK(a.config() == c.config());
}

TEST_CASE("first event from the heaviside state under the nearest-neighbor kernel") {
  const auto nn = testutil::nearest_neighbor_kernel();
  RngStream rng(11, 0);
  int up = 0, down = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    Simulator sim(InterfaceConfig::heaviside(0), nn, 0.0, RngStream(11, static_cast<std::uint64_t>(i)));
    const FlipEvent ev = sim.step();
    if (ev.site == -1 && ev.new_value)
      ++up;
    else if (ev.site == 0 && !ev.new_value)
      ++down;
    else
      FAIL("unexpected first transition");
  }
  const double se = std::sqrt(0.25 / n);
  CHECK(std::abs(static_cast<double>(up) / n - 0.5) < 3 * se);
  CHECK(up + down == n);
}

TEST_CASE("embedded jump chain matches exhaustive enumeration (chi-square)") {
  const auto kernel = testutil::reference_kernel();
  const std::vector<std::pair<InterfaceConfig, double>> cases = {
      {InterfaceConfig::heaviside(0), 0.0},
      {InterfaceConfig::parse("10@0"), 0.0},
      {InterfaceConfig::parse("101100@-3"), 0.3},
      {InterfaceConfig::parse("1010101010@5"), 0.5},
      {InterfaceConfig::parse("1110001100@0"), 0.1},
  };
  const int n = 100000;
  int case_id = 0;
  for (const auto& [config, eps] : cases) {
    CAPTURE(case_id);
    const auto flip_rates = testutil::naive_flip_rates(config, kernel, eps);
    double total = 0.0;
    for (const auto& [site, rate] : flip_rates) total += rate;

    std::map<std::int64_t, std::int64_t> observed;
    Simulator sim(config, kernel, eps, RngStream(1000 + case_id, 0));
    CHECK(sim.total_rate() == doctest::Approx(total).epsilon(1e-10));
    for (int i = 0; i < n; ++i) {
      Simulator fresh(config, kernel, eps, RngStream(2000 + case_id, static_cast<std::uint64_t>(i)));
      observed[fresh.step().site] += 1;
    }

    std::vector<std::int64_t> counts;
    std::vector<double> probs;
    for (const auto& [site, rate] : flip_rates) {
      counts.push_back(observed.count(site) ? observed.at(site) : 0);
      probs.push_back(rate / total);
    }
    std::int64_t seen = 0;
    for (auto c2 : counts) seen += c2;
    REQUIRE(seen == n);  // every sampled site is an enumerated one
    CHECK(chi_square_gof_pvalue(counts, probs) > 0.001);
    ++case_id;
  }
}

TEST_CASE("waiting times are exponential with the configured rate") {
  const auto kernel = testutil::reference_kernel();
  const auto frozen = InterfaceConfig::parse("1100@0");
  const double rate = total_rate(frozen, kernel, 0.25);
  RngStream rng(3, 3);
  const int n = 100000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    Simulator sim(frozen, kernel, 0.25, RngStream(3, static_cast<std::uint64_t>(i)));
    acc += sim.draw_waiting_time();
  }
  const double mean = acc / n;
  const double se = (1.0 / rate) / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(mean - 1.0 / rate) < 3 * se);
}

namespace {

struct BoundaryIntegralObserver : TrajectoryObserver {
  double integral = 0.0;
  void on_segment(double t0, double t1, const InterfaceConfig& c) override {
    integral += (t1 - t0) * static_cast<double>(boundary_counts(c, 1).total());
  }
};

struct EventLogObserver : TrajectoryObserver {
  std::vector<std::pair<double, std::int64_t>> events;
  void on_event(double t, const FlipEvent& ev, const InterfaceConfig&) override {
    events.emplace_back(t, ev.site);
  }
};

}  // namespace

TEST_CASE("simulate: stop rules and observers") {
  const auto kernel = testutil::reference_kernel();

  SUBCASE("zero events returns the initial state") {
    const auto initial = InterfaceConfig::parse("110100@4");
    const auto summary = simulate(initial, kernel, 0.0, {.n_events = 0}, {}, RngStream(5, 0));
    CHECK(summary.final_config == initial);
    CHECK(summary.elapsed == 0.0);
    CHECK(summary.events == 0);
  }

  SUBCASE("missing stop rule is rejected") {
    CHECK_THROWS_AS(simulate(InterfaceConfig::heaviside(0), kernel, 0.0, {}, {}, RngStream(5, 0)),
                    std::invalid_argument);
  }

  SUBCASE("time average of a step function is integrated exactly") {
    // Replay the trajectory from the event log and integrate by hand.
    BoundaryIntegralObserver integral;
    EventLogObserver log;
    std::vector<TrajectoryObserver*> observers{&integral, &log};
    const double horizon = 50.0;
    const auto initial = InterfaceConfig::heaviside(0);
    const auto summary =
        simulate(initial, kernel, 0.1, {.horizon = horizon}, observers, RngStream(6, 1));
    CHECK(summary.elapsed == horizon);

    InterfaceConfig replay = initial;
    double t_prev = 0.0;
    double manual = 0.0;
    for (const auto& [t, site] : log.events) {
      manual += (t - t_prev) * static_cast<double>(boundary_counts(replay, 1).total());
      replay.flip(site);
      t_prev = t;
    }
    manual += (horizon - t_prev) * static_cast<double>(boundary_counts(replay, 1).total());
    CHECK(replay == summary.final_config);
    CHECK(integral.integral == doctest::Approx(manual).epsilon(1e-12));
  }

  SUBCASE("deterministic under a fixed seed") {
    EventLogObserver log_a, log_b;
    std::vector<TrajectoryObserver*> obs_a{&log_a}, obs_b{&log_b};
    auto sa = simulate(InterfaceConfig::heaviside(0), kernel, 0.4, {.n_events = 500}, obs_a,
                       RngStream(12, 34));
    auto sb = simulate(InterfaceConfig::heaviside(0), kernel, 0.4, {.n_events = 500}, obs_b,
                       RngStream(12, 34));
    CHECK(log_a.events == log_b.events);
    CHECK(sa.final_config == sb.final_config);
    CHECK(sa.elapsed == sb.elapsed);
  }
}

TEST_CASE("return time to the heaviside class") {
  const auto kernel = testutil::reference_kernel();

  SUBCASE("translated heaviside states count as returned") {
    // From the heaviside state the chain may only translate for a while;
    // those self-loop events must not register as a return.
    const auto r = return_time_to_heaviside(InterfaceConfig::heaviside(0), kernel, 0.0,
                                            RngStream(21, 0), 1e4);
    CHECK(r.hit);
    CHECK(r.tau > 0.0);
  }

  SUBCASE("capped runs report no hit") {
    const auto r = return_time_to_heaviside(InterfaceConfig::parse("10@0"), kernel, 0.0,
                                            RngStream(22, 0), 1e-9);
    CHECK_FALSE(r.hit);
    CHECK(r.tau == 1e-9);
  }

  SUBCASE("empirical mean from the heaviside state is finite and positive") {
    double acc = 0.0;
    const int n = 400;
    for (int i = 0; i < n; ++i) {
      const auto r = return_time_to_heaviside(InterfaceConfig::heaviside(0), kernel, 0.5,
                                              RngStream(23, static_cast<std::uint64_t>(i)), 2e3);
      acc += r.tau;
    }
    CHECK(acc / n > 0.0);
    CHECK(acc / n < 2e3);
  }
}
