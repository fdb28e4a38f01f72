#include "gausscurv/cli/run.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include "gausscurv/cli/generate.hpp"
#include "gausscurv/error.hpp"
#include "gausscurv/experiments.hpp"
#include "gausscurv/plane.hpp"
#include "gausscurv/weights.hpp"

namespace gausscurv::cli {

namespace {

using Json = nlohmann::ordered_json;

struct TrialFailure {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::string message;
};

unsigned thread_count() {
  unsigned threads = 0;
  if (const char* env = std::getenv("GAUSSCURV_THREADS")) {
    threads = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
  }
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  return threads;
}

/// Runs body(i) for i in [0, count) on a small pool. Results land in
/// caller-owned slots, so completion order does not matter. Returns the
/// failure with the lowest index, if any.
std::optional<std::pair<std::size_t, std::string>> parallel_for(
    std::size_t count, const std::function<void(std::size_t)>& body) {
  std::vector<std::string> errors(count);
  std::vector<char> failed(count, 0);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (const std::exception& e) {
        failed[i] = 1;
        errors[i] = e.what();
      }
    }
  };
  const unsigned threads = std::min<std::size_t>(thread_count(), std::max<std::size_t>(count, 1));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < count; ++i) {
    if (failed[i]) return std::make_pair(i, errors[i]);
  }
  return std::nullopt;
}

Json to_json(const InequalityReport& r) {
  return Json{{"lhs", r.lhs},
              {"rhs", r.rhs},
              {"margin", r.margin},
              {"quad_error", r.quad_error},
              {"passed", r.passed}};
}

Json config_json(const RunConfig& c) {
  Json j;
  j["command"] = command_name(c.command);
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  j["n"] = c.n;
  j["r"] = c.r;
  j["k"] = c.k;
  j["epsilon"] = c.epsilon;
  j["amplitude"] = c.amplitude;
  j["weight"] = c.weight;
  j["tolerance"] = c.tolerance ? Json(*c.tolerance) : Json(nullptr);
  j["output"] = c.output;
  return j;
}

struct NamedWeight {
  std::string name;
  WeightPair pair;
};

WeightPair named_weight(const std::string& name) {
  if (name == "rational") {
    return make_weight([](double r) { return 1.0 / (1.0 + r * r); },
                       [](double r) { return -2.0 * r / ((1.0 + r * r) * (1.0 + r * r)); });
  }
  if (name == "sech") {
    return make_weight([](double r) { return 1.0 / std::cosh(r); },
                       [](double r) { return -std::tanh(r) / std::cosh(r); }, 50.0);
  }
  return make_gaussian_weight();
}

std::vector<NamedWeight> selected_weights(const std::string& option) {
  std::vector<NamedWeight> out;
  if (option == "all") {
    for (const char* name : {"gaussian", "rational", "sech"}) {
      out.push_back({name, named_weight(name)});
    }
  } else {
    out.push_back({option, named_weight(option)});
  }
  return out;
}

/// Accumulates the summary block.
struct Summary {
  std::size_t total = 0;
  std::size_t passed = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  double max_relative_error = 0.0;

  void add(bool ok) {
    ++total;
    if (ok) ++passed;
  }
  void margin(double m) { worst_margin = std::min(worst_margin, m); }
  void relative(double e) { max_relative_error = std::max(max_relative_error, e); }

  Json json() const {
    Json j;
    j["entries"] = total;
    j["passed"] = passed;
    j["failed"] = total - passed;
    j["worst_margin"] = std::isfinite(worst_margin) ? Json(worst_margin) : Json(nullptr);
    j["max_relative_error"] = max_relative_error;
    return j;
  }
};

struct CommandResult {
  std::vector<Json> entries;
  Summary summary;
  std::string csv;
  std::optional<TrialFailure> failure;
  Json extra;
};

std::string csv_header() { return "r,predicted,measured,relative_error\n"; }

std::string csv_row(double r, double predicted, double measured, double rel) {
  std::ostringstream out;
  out.precision(17);
  out << r << ',' << predicted << ',' << measured << ',' << rel << '\n';
  return out.str();
}

template <typename Trial>
void run_trials(const RunConfig& config, CommandResult& result, Trial&& trial) {
  const auto count = static_cast<std::size_t>(config.trials);
  std::vector<std::vector<Json>> slots(count);
  const auto failure = parallel_for(count, [&](std::size_t i) {
    slots[i] = trial(i, trial_seed(config.seed, i));
  });
  const std::size_t usable = failure ? failure->first : count;
  for (std::size_t i = 0; i < usable; ++i) {
    for (auto& e : slots[i]) result.entries.push_back(std::move(e));
  }
  if (failure) {
    result.failure = TrialFailure{failure->first, trial_seed(config.seed, failure->first),
                                  failure->second};
  }
}

CommandResult run_verify2d(const RunConfig& config) {
  if (config.amplitude > 0.3) throw ConfigError("verify2d: amplitude must be <= 0.3");
  const auto weights = selected_weights(config.weight);
  const double slack = config.tolerance.value_or(1e-8);
  CommandResult result;
  run_trials(config, result, [&](std::size_t i, std::uint64_t seed) {
    const auto curve = generate_convex_polar(seed, config.amplitude);
    std::vector<Json> out;
    for (const auto& w : weights) {
      const auto rep = verify_two_sided(curve, w.pair, slack);
      Json e;
      e["trial"] = i;
      e["seed"] = seed;
      e["weight"] = w.name;
      e["radius"] = rep.radius;
      e["gap"] = rep.gap;
      e["lower"] = to_json(rep.lower);
      e["upper"] = to_json(rep.upper);
      e["lower_radial"] = to_json(rep.lower_radial);
      e["ball_bound"] = to_json(rep.ball_bound);
      e["passed"] = rep.lower.passed && rep.upper.passed;
      out.push_back(std::move(e));
    }
    return out;
  });
  std::size_t radial_passed = 0;
  for (const auto& e : result.entries) {
    result.summary.add(e["passed"].get<bool>());
    result.summary.margin(e["lower"]["margin"].get<double>());
    result.summary.margin(e["upper"]["margin"].get<double>());
    if (e["lower_radial"]["passed"].get<bool>()) ++radial_passed;
  }
  result.extra["lower_radial_passed"] = radial_passed;
  return result;
}

CommandResult run_bounds2d(const RunConfig& config) {
  const double amplitude = config.amplitude_set ? config.amplitude : 0.3;
  const auto weights = selected_weights(config.weight);
  const double slack = config.tolerance.value_or(1e-8);
  CommandResult result;
  run_trials(config, result, [&](std::size_t i, std::uint64_t seed) {
    const auto curve = generate_star_polar(seed, amplitude);
    std::vector<Json> out;
    for (const auto& w : weights) {
      const auto rep = boundary_inverse_weight(curve, w.pair, slack);
      Json e;
      e["trial"] = i;
      e["seed"] = seed;
      e["weight"] = w.name;
      e["convex"] = curve.is_convex();
      e["report"] = to_json(rep);
      e["passed"] = rep.passed;
      out.push_back(std::move(e));
    }
    return out;
  });
  std::size_t nonconvex = 0;
  for (const auto& e : result.entries) {
    result.summary.add(e["passed"].get<bool>());
    result.summary.margin(e["report"]["margin"].get<double>());
    if (!e["convex"].get<bool>()) ++nonconvex;
  }
  result.extra["nonconvex_entries"] = nonconvex;
  return result;
}

CommandResult run_stability2d(const RunConfig& config) {
  const double r = config.r_set ? config.r : 1.0;
  const double bound = config.tolerance.value_or(10.0);
  const auto weights = selected_weights(config.weight);
  CommandResult result;
  for (const char* family : {"ellipse", "bump"}) {
    const int first = 4;
    const int last = 64;
    const auto curves = stability_family(family, r, first, last);
    for (const auto& w : weights) {
      Json e;
      e["family"] = family;
      e["weight"] = w.name;
      Json hs = Json::array();
      Json ratios = Json::array();
      double tail_max = 0.0;
      double tail_min = std::numeric_limits<double>::infinity();
      double all_max = 0.0;
      double all_min = std::numeric_limits<double>::infinity();
      for (int h = first; h <= last; ++h) {
        const auto& curve = curves[h - first];
        if (!curve.is_convex()) continue;
        const double ratio = stability_ratio(std::span(&curve, 1), w.pair, r).front();
        hs.push_back(h);
        ratios.push_back(ratio);
        all_max = std::max(all_max, ratio);
        all_min = std::min(all_min, ratio);
        if (h >= 16) {
          tail_max = std::max(tail_max, ratio);
          tail_min = std::min(tail_min, ratio);
        }
      }
      const double spread = tail_max / tail_min;
      e["h"] = hs;
      e["ratio"] = ratios;
      e["tail_max"] = tail_max;
      e["tail_min"] = tail_min;
      e["tail_spread"] = spread;
      e["full_spread"] = all_max / all_min;
      e["passed"] = tail_min > 0.0 && spread <= bound;
      result.summary.add(e["passed"].get<bool>());
      result.summary.margin(bound - spread);
      result.entries.push_back(std::move(e));
    }
  }
  return result;
}

CommandResult run_counterexample(const RunConfig& config) {
  std::vector<double> radii;
  if (config.r_set) {
    radii.push_back(config.r);
  } else {
    for (int i = 1; i <= 100; ++i) radii.push_back(0.25 * i / 100.0);
  }
  CommandResult result;
  result.csv = csv_header();
  for (double r : radii) {
    const double gap = counterexample_gap(r);
    const auto capped = capped_counterexample(r, 40.0);
    const double capped_gap = capped.capped.energy.value - capped.ball_energy;
    Json e;
    e["r"] = r;
    e["s"] = capped.s;
    e["gap"] = gap;
    e["gap_exceeds_one"] = gap > 1.0;
    e["capped"] = Json{{"T", capped.T},
                       {"volume", capped.capped.volume.value},
                       {"energy", capped.capped.energy.value},
                       {"matched_radius", capped.matched_radius},
                       {"ball_energy", capped.ball_energy},
                       {"report", to_json(capped.report)}};
    const bool ok = gap > 1.0 && capped.report.passed;
    e["passed"] = ok;
    result.summary.add(ok);
    result.summary.margin(gap - 1.0);
    const double rel = std::abs(capped_gap - gap) / std::max(std::abs(gap), 1e-300);
    result.summary.relative(rel);
    result.csv += csv_row(r, gap, capped_gap, rel);
    result.entries.push_back(std::move(e));
  }
  return result;
}

std::vector<int> pick(bool set, int value, std::vector<int> defaults) {
  return set ? std::vector<int>{value} : defaults;
}

Json variation_json(const VariationReport& v) {
  Json e;
  e["n"] = v.n;
  e["r"] = v.r;
  e["k"] = v.k;
  e["epsilon"] = v.epsilon;
  e["gaps"] = v.gaps;
  e["measured_gap"] = v.measured_gap;
  e["predicted_quadratic"] = v.predicted_quadratic;
  e["extrapolated_coefficient"] = v.extrapolated_coefficient;
  e["predicted_coefficient"] = v.predicted_coefficient;
  e["relative_error"] = v.relative_error;
  return e;
}

void require_body_dimension(const RunConfig& config) {
  if (config.n < 3) throw ConfigError(command_name(config.command) + ": n must be >= 3");
  if (config.n == 3 && config.k > 16) {
    throw ConfigError(command_name(config.command) + ": k must be <= 16 for n = 3");
  }
}

CommandResult run_second_variation(const RunConfig& config) {
  require_body_dimension(config);
  const double tol = config.tolerance.value_or(0.05);
  std::vector<double> radii =
      config.r_set ? std::vector<double>{config.r} : std::vector<double>{0.3, 1.0, 2.0};
  CommandResult result;
  result.csv = csv_header();
  for (int n : pick(config.n_set, config.n, {3, 4})) {
    for (int k : pick(config.k_set, config.k, {2, 4})) {
      for (double r : radii) {
        const auto v = measure_second_variation(n, r, k, config.epsilon);
        auto e = variation_json(v);
        const bool ok = v.relative_error <= tol;
        e["passed"] = ok;
        result.summary.add(ok);
        result.summary.relative(v.relative_error);
        result.summary.margin(tol - v.relative_error);
        result.csv += csv_row(r, v.predicted_coefficient, v.extrapolated_coefficient,
                              v.relative_error);
        result.entries.push_back(std::move(e));
      }
    }
  }
  return result;
}

CommandResult run_threshold_scan(const RunConfig& config) {
  require_body_dimension(config);
  const double tol = config.tolerance.value_or(1e-3);
  CommandResult result;
  result.csv = csv_header();
  for (int n : pick(config.n_set, config.n, {3, 4})) {
    const int k = config.k;
    const auto t = threshold_scan(n, k, config.epsilon);
    Json e;
    e["n"] = n;
    e["k"] = k;
    e["measured_r2"] = t.measured;
    e["algebraic_r2"] = t.algebraic;
    e["proof_candidate_r2"] = t.proof_candidate;
    e["statement_candidate_r2"] = t.statement_candidate;
    e["evaluations"] = t.evaluations;
    const double err = std::abs(t.measured - t.algebraic);
    e["abs_error"] = err;
    const bool ok = err <= tol;
    e["passed"] = ok;
    result.summary.add(ok);
    result.summary.margin(tol - err);
    for (int i = 1; i <= 24; ++i) {
      const double r2 = (n - 1.5) * i / 24.0;
      const auto v = measure_second_variation(n, std::sqrt(r2), k, config.epsilon);
      result.csv += csv_row(std::sqrt(r2), v.predicted_coefficient, v.extrapolated_coefficient,
                            v.relative_error);
    }
    result.entries.push_back(std::move(e));
  }
  return result;
}

CommandResult run_calibration(const RunConfig& config) {
  if (config.n_set && config.n != 3) throw ConfigError("calibration: only n = 3 is supported");
  const double r = config.r_set ? config.r : 3.0;
  const double amplitude = config.amplitude_set ? config.amplitude : 0.02;
  const double slack = config.tolerance.value_or(1e-6);
  CommandResult result;
  run_trials(config, result, [&](std::size_t i, std::uint64_t seed) {
    const auto body = generate_even_body(seed, r, amplitude);
    double M = 0.0;
    for (double h : body.node_curvature()) M = std::max(M, std::abs(h));
    M *= 1.0 + 1e-12;
    const auto c = calibration_check(body, M, slack);
    Json e;
    e["trial"] = i;
    e["seed"] = seed;
    e["volume"] = c.volume;
    e["matched_radius"] = c.matched_radius;
    e["inscribed_radius"] = c.inscribed_radius;
    e["curvature_bound"] = c.curvature_bound;
    e["hypothesis_ok"] = c.hypothesis_ok;
    e["inscribed_gate"] = c.inscribed_gate;
    e["inscribed_gate_strong"] = c.inscribed_gate_strong;
    e["ineq1"] = to_json(c.ineq1);
    e["ineq3"] = to_json(c.ineq3);
    e["passed"] = !c.hypothesis_ok || (c.ineq1.passed && c.ineq3.passed);
    return std::vector<Json>{std::move(e)};
  });
  std::size_t gated = 0;
  for (const auto& e : result.entries) {
    result.summary.add(e["passed"].get<bool>());
    if (e["hypothesis_ok"].get<bool>()) {
      ++gated;
      result.summary.margin(e["ineq1"]["margin"].get<double>());
      result.summary.margin(e["ineq3"]["margin"].get<double>());
    }
  }
  result.extra["hypothesis_ok_entries"] = gated;
  return result;
}

CommandResult run_moments(const RunConfig& config) {
  const double tol = config.tolerance.value_or(1e-10);
  const std::vector<double> radii =
      config.r_set ? std::vector<double>{config.r} : std::vector<double>{0.1, 0.5, 1, 2, 4};
  CommandResult result;
  for (int n : pick(config.n_set, config.n, {2, 3, 4, 5, 6, 7, 8})) {
    for (double r : radii) {
      const auto m = radial_moments(n, r);
      Json e;
      e["n"] = n;
      e["r"] = r;
      e["a"] = m.a;
      e["b"] = m.b;
      e["c"] = m.c;
      e["b_recurrence"] = m.b_recurrence;
      e["c_recurrence"] = m.c_recurrence;
      e["residual_b"] = m.residual_b;
      e["residual_c"] = m.residual_c;
      const double worst = std::max(m.residual_b, m.residual_c);
      const bool ok = worst < tol;
      e["passed"] = ok;
      result.summary.add(ok);
      result.summary.margin(tol - worst);
      result.entries.push_back(std::move(e));
    }
  }
  return result;
}

CommandResult dispatch(const RunConfig& config) {
  switch (config.command) {
    case Command::verify2d: return run_verify2d(config);
    case Command::bounds2d: return run_bounds2d(config);
    case Command::stability2d: return run_stability2d(config);
    case Command::counterexample: return run_counterexample(config);
    case Command::second_variation: return run_second_variation(config);
    case Command::threshold_scan: return run_threshold_scan(config);
    case Command::calibration: return run_calibration(config);
    case Command::moments: return run_moments(config);
  }
  throw UsageError("unknown command");
}

}  // namespace

RunReport run(const RunConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  CommandResult result;
  try {
    result = dispatch(config);
  } catch (const NumericalError& e) {
    result.failure = TrialFailure{0, config.seed, e.what()};
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  RunReport report;
  report.json["config"] = config_json(config);
  report.json["entries"] = result.entries;
  auto summary = result.summary.json();
  for (const auto& [key, value] : result.extra.items()) summary[key] = value;
  summary["wall_time"] = wall;
  report.json["summary"] = summary;
  if (result.failure) {
    report.json["failure"] = Json{{"trial", result.failure->trial},
                                  {"seed", result.failure->seed},
                                  {"message", result.failure->message}};
  }
  report.csv = result.csv;
  report.numerical_failure = result.failure.has_value();
  report.all_passed = !report.numerical_failure && result.summary.passed == result.summary.total;
  return report;
}

int main_entry(const std::vector<std::string>& args) {
  std::optional<RunConfig> config;
  try {
    config = parse_config(args);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (!config) return kExitPass;

  RunReport report;
  try {
    report = run(*config);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }

  const std::string text = report.json.dump(2) + "\n";
  if (config->output.empty()) {
    std::cout << text;
  } else {
    std::ofstream json_out(config->output + ".json");
    json_out << text;
    if (!json_out) {
      std::cerr << "config error: cannot write " << config->output << ".json\n";
      return kExitConfig;
    }
    if (!report.csv.empty()) {
      std::ofstream csv_out(config->output + ".csv");
      csv_out << report.csv;
      if (!csv_out) {
        std::cerr << "config error: cannot write " << config->output << ".csv\n";
        return kExitConfig;
      }
    }
  }
  const auto& summary = report.json["summary"];
  std::cerr << command_name(config->command) << ": " << summary["passed"].get<std::size_t>()
            << "/" << summary["entries"].get<std::size_t>() << " passed\n";
  if (report.numerical_failure) {
    std::cerr << "numerical failure in trial " << report.json["failure"]["trial"]
              << " (seed " << report.json["failure"]["seed"]
              << "): " << report.json["failure"]["message"].get<std::string>() << '\n';
    return kExitNumerical;
  }
  return report.all_passed ? kExitPass : kExitFailed;
}

}  // namespace gausscurv::cli
