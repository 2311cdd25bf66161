// Command-line driver: every experiment runs from a JSON config plus flag
// overrides, seeds are always explicit, and results go out as CSV with the
// resolved config echoed into the header.

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bvm/corpus.hpp"
#include "bvm/dual.hpp"
#include "bvm/dynamics.hpp"
#include "bvm/estimator.hpp"
#include "bvm/generator.hpp"
#include "bvm/kernel.hpp"
#include "bvm/report.hpp"
#include "bvm/stats.hpp"
#include "bvm/wire.hpp"

namespace {

using nlohmann::json;
using namespace bvm;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitConfig = 64;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error in '" + path + "': " + e.what());
  }
}

void check_keys(const json& cfg, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : cfg.items()) {
    (void)value;
    if (!allowed.count(key)) throw ConfigError("unknown field '" + key + "' in experiment config");
  }
}

double num_or(const json& cfg, const std::string& key, double fallback) {
  if (!cfg.contains(key)) return fallback;
  if (!cfg.at(key).is_number()) throw ConfigError("field '" + key + "' must be a number");
  return cfg.at(key).get<double>();
}

std::int64_t int_or(const json& cfg, const std::string& key, std::int64_t fallback) {
  if (!cfg.contains(key)) return fallback;
  if (!cfg.at(key).is_number_integer()) throw ConfigError("field '" + key + "' must be an integer");
  return cfg.at(key).get<std::int64_t>();
}

std::string str_or(const json& cfg, const std::string& key, const std::string& fallback) {
  if (!cfg.contains(key)) return fallback;
  if (!cfg.at(key).is_string()) throw ConfigError("field '" + key + "' must be a string");
  return cfg.at(key).get<std::string>();
}

bool bool_or(const json& cfg, const std::string& key, bool fallback) {
  if (!cfg.contains(key)) return fallback;
  if (!cfg.at(key).is_boolean()) throw ConfigError("field '" + key + "' must be a boolean");
  return cfg.at(key).get<bool>();
}

std::vector<double> grid_or(const json& cfg, const std::string& key,
                            std::vector<double> fallback) {
  if (!cfg.contains(key)) return fallback;
  if (!cfg.at(key).is_array()) throw ConfigError("field '" + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : cfg.at(key)) {
    if (!v.is_number()) throw ConfigError("field '" + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

json default_kernel_json() {
  return json{{"rates", {{"-2", 0.15}, {"-1", 0.35}, {"1", 0.35}, {"2", 0.15}}}};
}

Kernel resolve_kernel(json& cfg) {
  if (!cfg.contains("kernel")) cfg["kernel"] = default_kernel_json();
  return kernel_from_json(cfg.at("kernel"));
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ConfigError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void write_header(CsvWriter& csv, const std::string& experiment, const json& cfg) {
  csv.comment("bvm " + experiment);
  csv.comment("config: " + cfg.dump());
  csv.comment("generated: " + timestamp());
}

const std::vector<std::string> kColumns = {"experiment", "kernel_id", "eps",
                                           "observable", "estimate",  "se",
                                           "target_or_bound", "z",    "seed"};

std::string seed_tag(std::uint64_t seed, std::uint64_t stream) {
  return std::to_string(seed) + ":" + std::to_string(stream);
}

// ---------------------------------------------------------------------------

int run_validate(json cfg) {
  check_keys(cfg, {"experiment", "kernel", "out"});
  const Kernel kernel = resolve_kernel(cfg);
  const ValidationReport report = validate(kernel);
  const KernelMoments m = moments(kernel);
  json out{{"kernel_id", kernel.id()},
           {"irreducible", report.irreducible},
           {"non_nearest_neighbor", report.non_nearest_neighbor},
           {"moment_class", report.moment_class},
           {"sigma2", m.sigma2},
           {"c_branch", m.c_branch},
           {"c_drift", m.c_drift},
           {"first_moment_pos", m.first_moment_pos},
           {"first_moment_neg", m.first_moment_neg}};
  Output output(str_or(cfg, "out", ""));
  output.stream() << out.dump(2) << "\n";
  return kExitPass;
}

class TraceWriter final : public TrajectoryObserver {
 public:
  explicit TraceWriter(const std::string& path) : out_(path) {
    if (!out_) throw ConfigError("cannot open trace file '" + path + "'");
  }
  void on_event(double t, const FlipEvent& ev, const InterfaceConfig& after) override {
    json rec{{"t", t},
             {"site", ev.site},
             {"new_value", ev.new_value ? 1 : 0},
             {"k", ev.distance},
             {"L", after.length()},
             {"I1", boundary_counts(after, 1).total()}};
    out_ << rec.dump() << "\n";
  }

 private:
  std::ofstream out_;
};

class TimeAverageObserver final : public TrajectoryObserver {
 public:
  explicit TimeAverageObserver(ObservableFn f) : f_(std::move(f)) {}
  void on_segment(double t0, double t1, const InterfaceConfig& c) override {
    integral_.add((t1 - t0) * f_(c));
    elapsed_.add(t1 - t0);
  }
  double average() const { return elapsed_.value() > 0 ? integral_.value() / elapsed_.value() : 0; }
  const std::string& tag() const { return f_.tag; }

 private:
  ObservableFn f_;
  KahanSum integral_;
  KahanSum elapsed_;
};

int run_simulate(json cfg) {
  check_keys(cfg, {"experiment", "kernel", "seed", "out", "eps", "init", "horizon", "events",
                   "trace", "serial"});
  const Kernel kernel = resolve_kernel(cfg);
  const double eps = num_or(cfg, "eps", 0.0);
  const auto initial = InterfaceConfig::parse(str_or(cfg, "init", "@0"));
  const auto seed = static_cast<std::uint64_t>(int_or(cfg, "seed", 1));

  StopRule stop;
  if (cfg.contains("horizon")) stop.horizon = num_or(cfg, "horizon", 0.0);
  if (cfg.contains("events")) stop.n_events = int_or(cfg, "events", 0);
  if (!stop.horizon && !stop.n_events) stop.horizon = 100.0;

  std::vector<std::unique_ptr<TrajectoryObserver>> owned;
  std::vector<TrajectoryObserver*> observers;
  auto add_avg = [&](ObservableFn f) {
    owned.push_back(std::make_unique<TimeAverageObserver>(std::move(f)));
    observers.push_back(owned.back().get());
  };
  add_avg(boundary_count_observable(1));
  add_avg(interface_length_observable());
  add_avg(symmetrized_boundary_sum_observable(kernel));
  const std::string trace_path = str_or(cfg, "trace", "");
  if (!trace_path.empty()) {
    owned.push_back(std::make_unique<TraceWriter>(trace_path));
    observers.push_back(owned.back().get());
  }

  const auto summary = simulate(initial, kernel, eps, stop, observers, RngStream(seed, 0));

  Output output(str_or(cfg, "out", ""));
  CsvWriter csv(output.stream());
  write_header(csv, "simulate", cfg);
  csv.comment("final: " + summary.final_config.to_string());
  csv.row(kColumns);
  const std::string kid = kernel.id();
  const std::string eps_s = format_double(eps);
  for (const auto& obs : owned) {
    if (auto* avg = dynamic_cast<TimeAverageObserver*>(obs.get())) {
      csv.row({"simulate", kid, eps_s, "time_avg(" + avg->tag() + ")",
               format_double(avg->average()), "", "", "", seed_tag(seed, 0)});
    }
  }
  csv.row({"simulate", kid, eps_s, "elapsed", format_double(summary.elapsed), "", "", "",
           seed_tag(seed, 0)});
  csv.row({"simulate", kid, eps_s, "events", std::to_string(summary.events), "", "", "",
           seed_tag(seed, 0)});
  return kExitPass;
}

int run_gh_check(json cfg) {
  check_keys(cfg, {"experiment", "kernel", "seed", "out", "configs", "max_core"});
  const auto seed = static_cast<std::uint64_t>(int_or(cfg, "seed", 1));
  const int n_configs = static_cast<int>(int_or(cfg, "configs", 500));
  const std::int64_t max_core = int_or(cfg, "max_core", 24);

  std::vector<Kernel> kernels;
  if (cfg.contains("kernel")) {
    kernels.push_back(kernel_from_json(cfg.at("kernel")));
  } else {
    kernels.push_back(kernel_from_json(default_kernel_json()));
    kernels.push_back(Kernel::from_rates({{-3, 0.25}, {-1, 0.25}, {1, 0.25}, {3, 0.25}}));
    kernels.push_back(Kernel::from_rates({{-3, 0.05}, {-1, 0.2}, {1, 0.4}, {2, 0.1}}));
  }

  const auto corpus = verification_corpus(seed, n_configs, max_core);
  const std::vector<double> eps_grid{0.0, 0.1, 0.5, 0.9};
  const std::vector<std::int64_t> m_grid{1, 2, 3, 5, 10};

  Output output(str_or(cfg, "out", ""));
  CsvWriter csv(output.stream());
  write_header(csv, "gh-check", cfg);
  csv.row({"check", "kernel_id", "eps", "M", "configs", "max_abs_dev"});

  double worst = 0.0;
  for (const auto& kernel : kernels) {
    for (double eps : eps_grid) {
      const auto f = weighted_inversions_observable(eps);
      double dev = 0.0;
      for (const auto& c : corpus)
        dev = std::max(dev, std::fabs(apply_generator(f, c, kernel, eps) -
                                      gh_formula(c, kernel, eps)));
      worst = std::max(worst, dev);
      csv.row({"gh", kernel.id(), format_double(eps), "", std::to_string(corpus.size()),
               format_double(dev)});
    }
    for (std::int64_t m : m_grid) {
      const auto f = truncated_inversions_observable(m);
      double dev = 0.0;
      for (const auto& c : corpus)
        dev = std::max(dev,
                       std::fabs(apply_generator(f, c, kernel, 0.0) - ghM_formula(c, kernel, m)));
      worst = std::max(worst, dev);
      csv.row({"ghM", kernel.id(), "0", std::to_string(m), std::to_string(corpus.size()),
               format_double(dev)});
    }
  }
  return worst <= 1e-9 ? kExitPass : kExitFail;
}

int run_duality_check(json cfg) {
  check_keys(cfg, {"experiment", "kernel", "seed", "out", "eps", "window", "t_max", "reps",
                   "a_lo", "a_hi", "b_lo", "b_hi", "serial"});
  const Kernel kernel = resolve_kernel(cfg);
  const double eps = num_or(cfg, "eps", 0.0);
  const auto seed = static_cast<std::uint64_t>(int_or(cfg, "seed", 1));
  const std::int64_t width = int_or(cfg, "window", 64);
  if (width < 8) throw ConfigError("window must be at least 8 sites wide");
  const double t_max = num_or(cfg, "t_max", 2.0);
  const std::int64_t reps = int_or(cfg, "reps", 10000);
  const bool serial = bool_or(cfg, "serial", false);

  const SpaceTimeWindow window{-(width / 2), width - width / 2 - 1, t_max};
  std::set<std::int64_t> a_set, b_set;
  for (std::int64_t s = int_or(cfg, "a_lo", -4); s <= int_or(cfg, "a_hi", 3); ++s) a_set.insert(s);
  for (std::int64_t s = int_or(cfg, "b_lo", 0); s <= int_or(cfg, "b_hi", 7); ++s) b_set.insert(s);

  const DualityBatch batch = duality_batch(kernel, eps, window, a_set, b_set, reps, seed, !serial);

  Output output(str_or(cfg, "out", ""));
  CsvWriter csv(output.stream());
  write_header(csv, "duality-check", cfg);
  csv.row({"reps", "breached", "agreed", "disagreed"});
  csv.row({std::to_string(batch.reps), std::to_string(batch.breached),
           std::to_string(batch.agreed), std::to_string(batch.disagreed)});
  std::cout << json{{"reps", batch.reps},
                    {"breached", batch.breached},
                    {"agreed", batch.agreed},
                    {"disagreed", batch.disagreed}}
                   .dump()
            << "\n";
  return batch.disagreed == 0 ? kExitPass : kExitFail;
}

BudgetSpec budget_from(const json& cfg) {
  BudgetSpec budget;
  budget.burn_in = num_or(cfg, "burn_in", 1e4);
  budget.horizon = num_or(cfg, "horizon", 2e5);
  budget.n_batches = static_cast<int>(int_or(cfg, "n_batches", 20));
  return budget;
}

int run_equilibrium(json cfg) {
  check_keys(cfg,
             {"experiment", "kernel", "seed", "out", "eps", "burn_in", "horizon", "n_batches"});
  const Kernel kernel = resolve_kernel(cfg);
  const double eps = num_or(cfg, "eps", 0.0);
  const auto seed = static_cast<std::uint64_t>(int_or(cfg, "seed", 1));
  const BudgetSpec budget = budget_from(cfg);

  Output output(str_or(cfg, "out", ""));
  CsvWriter csv(output.stream());
  write_header(csv, "equilibrium", cfg);
  csv.row(kColumns);
  const std::string kid = kernel.id();
  const std::string eps_s = format_double(eps);

  // an inconclusive report (correlated batch means) withholds its interval
  auto se_cell = [](const EstimateReport& r) {
    return r.inconclusive ? std::string() : format_double(r.std_error);
  };
  auto z_cell = [](const EstimateReport& r, double z) {
    return r.inconclusive ? std::string("inconclusive") : format_double(z);
  };

  int exit_code = kExitPass;
  if (eps == 0.0) {
    const auto check = equilibrium_identity_check(kernel, budget, seed);
    csv.row({"equilibrium", kid, eps_s, check.report.observable,
             format_double(check.report.value), se_cell(check.report),
             format_double(check.target), z_cell(check.report, check.z), seed_tag(seed, 0)});
    if (check.report.inconclusive)
      exit_code = kExitInconclusive;
    else if (std::fabs(check.z) > 3.0)
      exit_code = kExitFail;
  } else {
    const auto check = equilibrium_bound_check(kernel, eps, budget, seed);
    const double z = check.report.std_error > 0.0
                         ? (check.report.value - check.bound) / check.report.std_error
                         : 0.0;
    csv.row({"equilibrium", kid, eps_s, check.report.observable,
             format_double(check.report.value), se_cell(check.report),
             format_double(check.bound), z_cell(check.report, z), seed_tag(seed, 0)});
    if (check.report.inconclusive)
      exit_code = kExitInconclusive;
    else if (!check.satisfied)
      exit_code = kExitFail;
  }

  const auto extra = estimate_equilibrium(kernel, eps, {boundary_count_observable(1)}, budget,
                                          seed, 1);
  csv.row({"equilibrium", kid, eps_s, extra[0].observable, format_double(extra[0].value),
           format_double(extra[0].std_error), "", "", seed_tag(seed, 1)});
  return exit_code;
}

int run_bounds(json cfg) {
  check_keys(cfg, {"experiment", "kernel", "seed", "out", "eps_grid", "burn_in", "horizon",
                   "n_batches", "reps", "t", "branching_eps_grid", "leftmost_eps_grid",
                   "leftmost_t", "leftmost_reps", "leftmost_burn_in", "serial"});
  const Kernel kernel = resolve_kernel(cfg);
  const auto seed = static_cast<std::uint64_t>(int_or(cfg, "seed", 1));
  const BudgetSpec budget = budget_from(cfg);
  const bool serial = bool_or(cfg, "serial", false);

  Output output(str_or(cfg, "out", ""));
  CsvWriter csv(output.stream());
  write_header(csv, "bounds", cfg);
  csv.row(kColumns);
  const std::string kid = kernel.id();

  bool any_fail = false, any_inconclusive = false;

  for (double eps : grid_or(cfg, "eps_grid", {0.05, 0.2, 0.5})) {
    const auto check = equilibrium_bound_check(kernel, eps, budget, seed);
    const double z = check.report.std_error > 0.0
                         ? (check.report.value - check.bound) / check.report.std_error
                         : 0.0;
    csv.row({"equilibrium-bound", kid, format_double(eps), check.report.observable,
             format_double(check.report.value), format_double(check.report.std_error),
             format_double(check.bound), format_double(z), seed_tag(seed, 0)});
    any_fail = any_fail || !check.satisfied;
    any_inconclusive = any_inconclusive || check.report.inconclusive;
  }

  const double t = num_or(cfg, "t", 1.0);
  const std::int64_t reps = int_or(cfg, "reps", 10000);
  for (double eps : grid_or(cfg, "branching_eps_grid", {0.0, 0.5, 0.9})) {
    const auto r = branching_bound_experiment(kernel, eps, InterfaceConfig::heaviside(0), t, reps,
                                              seed, !serial);
    csv.row({"branching-bound", kid, format_double(eps), "I1_at_t", format_double(r.mean),
             format_double(r.std_error), format_double(r.bound), "", seed_tag(seed, 0)});
    any_fail = any_fail || !r.satisfied;
    any_inconclusive = any_inconclusive || r.inconclusive;
  }

  const double lt = num_or(cfg, "leftmost_t", 1.0);
  const std::int64_t lreps = int_or(cfg, "leftmost_reps", 2000);
  const double lburn = num_or(cfg, "leftmost_burn_in", 200.0);
  for (double eps : grid_or(cfg, "leftmost_eps_grid", {0.0, 0.5})) {
    const auto r = leftmost_displacement_experiment(kernel, eps, lt, lreps, lburn, seed, !serial);
    csv.row({"leftmost-displacement", kid, format_double(eps), "abs_leftmost_shift",
             format_double(r.mean), format_double(r.std_error), format_double(r.bound), "",
             seed_tag(seed, 0)});
    any_fail = any_fail || !r.satisfied;
    any_inconclusive = any_inconclusive || r.inconclusive;
  }

  if (any_fail) return kExitFail;
  if (any_inconclusive) return kExitInconclusive;
  return kExitPass;
}

int run_continuity(json cfg) {
  check_keys(cfg, {"experiment", "kernel", "seed", "out", "eps_grid", "ell", "burn_in", "horizon",
                   "n_batches", "serial"});
  const Kernel kernel = resolve_kernel(cfg);
  const auto seed = static_cast<std::uint64_t>(int_or(cfg, "seed", 1));
  const BudgetSpec budget = budget_from(cfg);
  const std::int64_t ell = int_or(cfg, "ell", 8);
  const bool serial = bool_or(cfg, "serial", false);
  const std::vector<double> grid = grid_or(cfg, "eps_grid", {0.0, 0.05, 0.1, 0.2, 0.4});

  const auto rows = continuity_experiment(kernel, grid, ell, budget, seed, !serial);

  Output output(str_or(cfg, "out", ""));
  CsvWriter csv(output.stream());
  write_header(csv, "continuity", cfg);
  csv.row(kColumns);
  const std::string kid = kernel.id();
  for (std::size_t g = 0; g < rows.size(); ++g) {
    const auto& row = rows[g];
    const std::string eps_s = format_double(row.eps);
    const std::string tag = seed_tag(seed, g);
    csv.row({"continuity", kid, eps_s, "tv(ell=" + std::to_string(ell) + ")",
             format_double(row.tv), format_double(row.tv_se), "", "", tag});
    csv.row({"continuity", kid, eps_s, "p_heaviside", format_double(row.heaviside_mass), "", "",
             "", tag});
    csv.row({"continuity", kid, eps_s, "p_tail", format_double(row.tail_mass), "", "", "", tag});
  }

  // weak trend assertion: the smallest positive bias must sit measurably
  // below the largest one
  const ContinuityRow* low = nullptr;
  const ContinuityRow* high = nullptr;
  for (const auto& row : rows) {
    if (row.eps == 0.0) continue;
    if (!low || row.eps < low->eps) low = &row;
    if (!high || row.eps > high->eps) high = &row;
  }
  if (low && high && low != high) {
    const double combined = std::sqrt(low->tv_se * low->tv_se + high->tv_se * high->tv_se);
    if (!(low->tv < high->tv - 3.0 * combined)) return kExitFail;
  }
  return kExitPass;
}

int run_return_times(json cfg) {
  check_keys(cfg, {"experiment", "kernel", "seed", "out", "eps", "reps", "cap", "serial"});
  const Kernel kernel = resolve_kernel(cfg);
  const double eps = num_or(cfg, "eps", 0.0);
  const auto seed = static_cast<std::uint64_t>(int_or(cfg, "seed", 1));
  const std::int64_t reps = int_or(cfg, "reps", 2000);
  const double cap = num_or(cfg, "cap", 2000.0);
  const bool serial = bool_or(cfg, "serial", false);

  const auto r = return_time_experiment(kernel, eps, reps, cap, seed, !serial);

  Output output(str_or(cfg, "out", ""));
  CsvWriter csv(output.stream());
  write_header(csv, "return-times", cfg);
  csv.row(kColumns);
  const std::string kid = kernel.id();
  const std::string eps_s = format_double(eps);
  csv.row({"return-times", kid, eps_s, "mean_tau_half_cap", format_double(r.mean_half_cap), "",
           "", "", seed_tag(seed, 0)});
  csv.row({"return-times", kid, eps_s, "mean_tau_full_cap", format_double(r.mean_full_cap), "",
           "", "", seed_tag(seed, 0)});
  csv.row({"return-times", kid, eps_s, "hit_fraction", format_double(r.hit_fraction), "", "", "",
           seed_tag(seed, 0)});
  csv.row({"return-times", kid, eps_s, "rel_change", format_double(r.rel_change), "", "0.1", "",
           seed_tag(seed, 0)});
  return r.rel_change < 0.1 ? kExitPass : kExitFail;
}

int run_martingale(json cfg) {
  check_keys(cfg, {"experiment", "kernel", "seed", "out", "m", "t", "reps", "serial"});
  const Kernel kernel = resolve_kernel(cfg);
  const auto seed = static_cast<std::uint64_t>(int_or(cfg, "seed", 1));
  const std::int64_t m = int_or(cfg, "m", 3);
  const double t = num_or(cfg, "t", 1.0);
  const std::int64_t reps = int_or(cfg, "reps", 20000);
  const bool serial = bool_or(cfg, "serial", false);

  const auto r = hm_martingale_check(kernel, m, t, reps, seed, !serial);

  Output output(str_or(cfg, "out", ""));
  CsvWriter csv(output.stream());
  write_header(csv, "martingale", cfg);
  csv.row(kColumns);
  const std::string kid = kernel.id();
  csv.row({"martingale", kid, "0", "hM_terminal_mean", format_double(r.lhs), "", "", "",
           seed_tag(seed, 0)});
  csv.row({"martingale", kid, "0", "hM_integral_mean", format_double(r.rhs), "", "", "",
           seed_tag(seed, 0)});
  csv.row({"martingale", kid, "0", "hM_paired_diff", format_double(r.diff),
           format_double(r.diff_se), "0", format_double(r.z), seed_tag(seed, 0)});
  return std::fabs(r.z) <= 3.0 ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------

struct SubcommandState {
  std::string config_path;
  json overlay = json::object();
};

void add_common(CLI::App* sub, SubcommandState& state) {
  sub->add_option("config", state.config_path, "JSON experiment config");
  sub->add_option_function<std::int64_t>(
      "--seed", [&state](std::int64_t v) { state.overlay["seed"] = v; }, "rng seed");
  sub->add_option_function<std::string>(
      "--out", [&state](const std::string& v) { state.overlay["out"] = v; }, "output CSV path");
  sub->add_option_function<std::string>(
      "--kernel",
      [&state](const std::string& v) {
        try {
          state.overlay["kernel"] = json::parse(v);
        } catch (const json::parse_error& e) {
          throw CLI::ValidationError("--kernel", e.what());
        }
      },
      "inline kernel JSON, e.g. '{\"rates\":{\"1\":0.5,\"-1\":0.5}}'");
  sub->add_flag_function(
      "--serial", [&state](std::int64_t) { state.overlay["serial"] = true; },
      "run replicas on one thread");
}

json resolve_config(const SubcommandState& state, const std::string& experiment) {
  json cfg = state.config_path.empty() ? json::object() : load_config_file(state.config_path);
  if (!cfg.is_object()) throw ConfigError("experiment config must be a JSON object");
  if (cfg.contains("experiment")) {
    if (!cfg.at("experiment").is_string() || cfg.at("experiment").get<std::string>() != experiment)
      throw ConfigError("config field 'experiment' does not match subcommand '" + experiment +
                        "'");
  }
  cfg["experiment"] = experiment;
  for (const auto& [key, value] : state.overlay.items()) cfg[key] = value;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"event-driven biased voter interface simulator and verification suite"};
  app.require_subcommand(1);

  struct Registration {
    std::string name;
    std::string description;
    int (*runner)(json);
    std::vector<std::pair<std::string, std::string>> numeric_flags;  // flag -> config key
    std::vector<std::pair<std::string, std::string>> int_flags;
    std::vector<std::pair<std::string, std::string>> string_flags;
  };

  const std::vector<Registration> registrations = {
      {"validate", "kernel validation report", run_validate, {}, {}, {}},
      {"simulate",
       "one event-driven trajectory",
       run_simulate,
       {{"--eps", "eps"}, {"--horizon", "horizon"}},
       {{"--events", "events"}},
       {{"--init", "init"}, {"--trace", "trace"}}},
      {"gh-check",
       "generator identity verification corpus",
       run_gh_check,
       {},
       {{"--configs", "configs"}, {"--max-core", "max_core"}},
       {}},
      {"duality-check",
       "pathwise duality on a space-time window",
       run_duality_check,
       {{"--eps", "eps"}, {"--tmax", "t_max"}},
       {{"--window", "window"},
        {"--reps", "reps"},
        {"--a-lo", "a_lo"},
        {"--a-hi", "a_hi"},
        {"--b-lo", "b_lo"},
        {"--b-hi", "b_hi"}},
       {}},
      {"equilibrium",
       "equilibrium boundary-sum estimate and identity/bound check",
       run_equilibrium,
       {{"--eps", "eps"}, {"--burn-in", "burn_in"}, {"--horizon", "horizon"}},
       {{"--batches", "n_batches"}},
       {}},
      {"bounds",
       "one-sided bound experiments",
       run_bounds,
       {{"--t", "t"}, {"--leftmost-t", "leftmost_t"}, {"--burn-in", "burn_in"},
        {"--horizon", "horizon"}, {"--leftmost-burn-in", "leftmost_burn_in"}},
       {{"--reps", "reps"}, {"--leftmost-reps", "leftmost_reps"}, {"--batches", "n_batches"}},
       {}},
      {"continuity",
       "invariant-law distance across the bias grid",
       run_continuity,
       {{"--burn-in", "burn_in"}, {"--horizon", "horizon"}},
       {{"--ell", "ell"}, {"--batches", "n_batches"}},
       {}},
      {"return-times",
       "stability of heaviside return times under cap doubling",
       run_return_times,
       {{"--eps", "eps"}, {"--cap", "cap"}},
       {{"--reps", "reps"}},
       {}},
      {"martingale",
       "terminal vs integrated truncated inversion count",
       run_martingale,
       {{"--t", "t"}},
       {{"--M", "m"}, {"--reps", "reps"}},
       {}},
  };

  std::vector<std::unique_ptr<SubcommandState>> states;
  int (*selected_runner)(json) = nullptr;
  SubcommandState* selected_state = nullptr;
  std::string selected_name;

  for (const auto& reg : registrations) {
    auto* sub = app.add_subcommand(reg.name, reg.description);
    states.push_back(std::make_unique<SubcommandState>());
    SubcommandState* state = states.back().get();
    add_common(sub, *state);
    for (const auto& [flag, key] : reg.numeric_flags) {
      const std::string k = key;
      sub->add_option_function<double>(
          flag, [state, k](double v) { state->overlay[k] = v; });
    }
    for (const auto& [flag, key] : reg.int_flags) {
      const std::string k = key;
      sub->add_option_function<std::int64_t>(
          flag, [state, k](std::int64_t v) { state->overlay[k] = v; });
    }
    for (const auto& [flag, key] : reg.string_flags) {
      const std::string k = key;
      sub->add_option_function<std::string>(
          flag, [state, k](const std::string& v) { state->overlay[k] = v; });
    }
    auto runner = reg.runner;
    auto name = reg.name;
    sub->callback([&selected_runner, &selected_state, &selected_name, state, runner, name]() {
      selected_runner = runner;
      selected_state = state;
      selected_name = name;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    const json cfg = resolve_config(*selected_state, selected_name);
    return selected_runner(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
