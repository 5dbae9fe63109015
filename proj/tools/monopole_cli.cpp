// Command-line front end: solve single cases, sweep parameter grids, emit
// solution profiles and stability/diagnostic reports as CSV or JSON.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <iostream>
#include <optional>
#include <random>
#include <semaphore>
#include <string>
#include <thread>
#include <vector>

#include "monopole/io.hpp"
#include "monopole/model.hpp"
#include "monopole/reference.hpp"
#include "monopole/series.hpp"
#include "monopole/shooting.hpp"

namespace {

using namespace monopole;
using nlohmann::json;

void print_error(const std::string& code, const std::string& detail,
                 json context = json::object()) {
  std::cerr << error_json(code, detail, std::move(context)).dump(2) << "\n";
}

SeedCoeffs parse_guess(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("--guess expects 'a1,b2', got '" + text + "'");
  return {parse_double(std::string_view(text).substr(0, comma)),
          parse_double(std::string_view(text).substr(comma + 1))};
}

/// MONOPOLE_THREADS caps row parallelism; 0 or unset means one thread per
/// hardware core.
unsigned resolve_threads(std::size_t rows) {
  unsigned n = 0;
  if (const char* env = std::getenv("MONOPOLE_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v < 0) throw std::invalid_argument("negative");
      n = static_cast<unsigned>(v);
    } catch (const std::exception&) {
      throw std::invalid_argument("MONOPOLE_THREADS must be a non-negative integer");
    }
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(rows, 1)));
}

/// Row-parallel sweep with deterministic, order-preserving output.
std::vector<SolveResult> parallel_sweep(const std::vector<double>& epsilons,
                                        const std::vector<double>& lambdas,
                                        const ShootingConfig& config) {
  const unsigned threads = resolve_threads(epsilons.size());
  if (threads <= 1 || epsilons.size() <= 1)
    return continuation_sweep(epsilons, lambdas, config);
  std::counting_semaphore<256> gate(threads);
  std::vector<std::future<std::vector<SolveResult>>> rows;
  rows.reserve(epsilons.size());
  for (const double eps : epsilons) {
    rows.push_back(std::async(std::launch::async, [&, eps] {
      gate.acquire();
      auto row = continuation_sweep({eps}, lambdas, config);
      gate.release();
      return row;
    }));
  }
  std::vector<SolveResult> results;
  results.reserve(epsilons.size() * lambdas.size());
  for (auto& fut : rows)
    for (auto& r : fut.get()) results.push_back(std::move(r));
  return results;
}

json config_json(const ShootingConfig& c) {
  return {{"r_match", c.r_match},
          {"series_order", c.series_order},
          {"n_steps", c.integrator.n_steps},
          {"record_every", c.integrator.record_every},
          {"newton_tol", c.newton_tol},
          {"max_iters", c.max_iters},
          {"fd_step", c.fd_step},
          {"damping_factor", c.damping_factor},
          {"max_backtracks", c.max_backtracks}};
}

void emit_with_manifest(const std::string& out_path, const std::string& content,
                        const std::string& command, json config, json outcomes) {
  write_file_atomic(out_path, content);
  RunManifest manifest;
  manifest.timestamp = utc_timestamp();
  manifest.command = command;
  manifest.config = std::move(config);
  manifest.outcomes = std::move(outcomes);
  manifest.files = {out_path};
  write_file_atomic(out_path + ".manifest.json", to_json(manifest).dump(2) + "\n");
}

json brief_outcome(const SolveResult& r) {
  return {{"epsilon", r.params.epsilon},
          {"lambda", r.params.lambda},
          {"status", to_string(r.status)},
          {"a1", r.seed.a1},
          {"b2", r.seed.b2},
          {"iterations", r.iterations}};
}

struct CommonFlags {
  double epsilon = 1.0;
  double lambda = 0.0;
  std::string guess;
  ShootingConfig config{};
  std::string out;
  std::string format = "csv";
  int sample = -1;

  void add_params(CLI::App* cmd, bool epsilon_required = true) {
    auto* e = cmd->add_option("-e,--epsilon", epsilon, "gauge stiffness epsilon (> 0)");
    if (epsilon_required) e->required();
    cmd->add_option("-l,--lambda", lambda, "potential strength lambda (>= 0)");
  }
  void add_guess(CLI::App* cmd) {
    cmd->add_option("--guess", guess, "starting seed 'a1,b2' (default: nearest reference cell)");
  }
  void add_config(CLI::App* cmd) {
    cmd->add_option("--r-match", config.r_match, "series/integrator handoff radius");
    cmd->add_option("--series-order", config.series_order, "origin expansion order (even)");
    cmd->add_option("--steps", config.integrator.n_steps, "RK4 steps on [r_match, 1]");
    cmd->add_option("--tol", config.newton_tol, "boundary residual tolerance");
    cmd->add_option("--max-iters", config.max_iters, "Newton iteration cap");
  }
  void add_output(CLI::App* cmd) {
    cmd->add_option("--out", out, "write output to this file (atomic)");
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
  }
  SeedCoeffs resolve_guess(const Params& params) const {
    return guess.empty() ? default_guess(params) : parse_guess(guess);
  }
};

void print_solve_summary(const SolveResult& r) {
  std::cout << "status          " << to_string(r.status) << "\n"
            << "epsilon         " << format_double(r.params.epsilon) << "\n"
            << "lambda          " << format_double(r.params.lambda) << "\n"
            << "a1              " << format_double(r.seed.a1) << "\n"
            << "b2              " << format_double(r.seed.b2) << "\n"
            << "residual        (" << format_double(r.residual[0]) << ", "
            << format_double(r.residual[1]) << ")\n"
            << "iterations      " << r.iterations << "\n"
            << "action          " << format_double(r.action_value) << "\n"
            << "el_residual_max " << format_double(r.el_residual_max) << "\n";
}

Profile sampled_profile(const SolveResult& r, int sample) {
  if (sample <= 0) return r.profile;
  const int record_every =
      std::max(1, r.config.integrator.n_steps / std::max(1, sample));
  const int series_samples =
      std::max(2, static_cast<int>(std::llround(r.config.r_match * sample)));
  return build_full_profile(r.seed, r.params, r.config, series_samples, record_every);
}

int cmd_solve(const CommonFlags& flags) {
  const Params params{flags.epsilon, flags.lambda};
  params.validate();
  flags.config.validate();
  const SolveResult result = newton_solve(params, flags.resolve_guess(params), flags.config);
  if (!result.converged()) {
    print_error("non_convergence", result.detail,
                {{"status", to_string(result.status)},
                 {"epsilon", params.epsilon},
                 {"lambda", params.lambda},
                 {"iterations", result.iterations},
                 {"best_seed", {result.seed.a1, result.seed.b2}}});
    return 1;
  }
  if (flags.format == "json")
    std::cout << to_json(result).dump(2) << "\n";
  else
    print_solve_summary(result);
  if (!flags.out.empty()) {
    const Profile prof = sampled_profile(result, flags.sample);
    const std::string content =
        flags.format == "json" ? to_json(prof).dump(2) + "\n" : profile_csv(prof);
    emit_with_manifest(flags.out, content, "solve", config_json(flags.config),
                       json::array({brief_outcome(result)}));
  }
  return 0;
}

int cmd_table(const CommonFlags& flags, std::vector<double> eps_grid,
              std::vector<double> lam_grid, const std::string& check_path) {
  for (const double e : eps_grid) Params{e, 0.0}.validate();
  for (const double l : lam_grid) Params{1.0, l}.validate();
  flags.config.validate();

  const std::vector<SolveResult> results = parallel_sweep(eps_grid, lam_grid, flags.config);
  const bool all_converged =
      std::all_of(results.begin(), results.end(),
                  [](const SolveResult& r) { return r.converged(); });

  std::string rendered;
  if (flags.format == "json") {
    json arr = json::array();
    for (const auto& r : results) arr.push_back(to_json(r));
    rendered = arr.dump(2) + "\n";
  } else {
    rendered = table_csv(results);
  }
  if (flags.out.empty()) {
    std::cout << rendered;
  } else {
    json outcomes = json::array();
    for (const auto& r : results) outcomes.push_back(brief_outcome(r));
    json cfg = config_json(flags.config);
    cfg["eps_grid"] = eps_grid;
    cfg["lam_grid"] = lam_grid;
    emit_with_manifest(flags.out, rendered, "table", std::move(cfg), std::move(outcomes));
  }

  int code = all_converged ? 0 : 1;
  if (!all_converged)
    print_error("non_convergence", "one or more grid cells failed to converge");

  if (!check_path.empty()) {
    const std::vector<ReferenceSeed> expected = load_reference_csv(check_path);
    double worst_a1 = 0.0, worst_b2 = 0.0;
    int matched = 0, failed = 0;
    for (const auto& row : expected) {
      const auto it = std::find_if(results.begin(), results.end(), [&](const SolveResult& r) {
        return r.params.epsilon == row.epsilon && r.params.lambda == row.lambda;
      });
      if (it == results.end()) continue;
      ++matched;
      const double da = std::abs(it->seed.a1 - row.a1);
      const double db = std::abs(it->seed.b2 - row.b2);
      worst_a1 = std::max(worst_a1, da);
      worst_b2 = std::max(worst_b2, db);
      if (!it->converged() || da > 1e-4 || db > 1e-4) {
        ++failed;
        std::cout << "check FAIL eps=" << format_double(row.epsilon)
                  << " lambda=" << format_double(row.lambda)
                  << " |da1|=" << format_double(da) << " |db2|=" << format_double(db)
                  << "\n";
      }
    }
    std::cout << "check: " << matched << " cells compared, " << failed
              << " failed, max |da1| = " << format_double(worst_a1)
              << ", max |db2| = " << format_double(worst_b2) << "\n";
    if (failed > 0)
      std::cout << "note: deviations up to ~1.6e-4 against the bundled seeds are"
                   " expected; their source scheme imposed the outer boundary one"
                   " mesh spacing inside r=1 (see README)\n";
    if (failed > 0 || matched == 0) code = 1;
  }
  return code;
}

int cmd_profile(const CommonFlags& flags) {
  const Params params{flags.epsilon, flags.lambda};
  params.validate();
  flags.config.validate();
  const SolveResult result = newton_solve(params, flags.resolve_guess(params), flags.config);
  if (!result.converged()) {
    print_error("non_convergence", result.detail,
                {{"status", to_string(result.status)},
                 {"epsilon", params.epsilon},
                 {"lambda", params.lambda}});
    return 1;
  }
  const int sample = flags.sample < 0 ? 200 : flags.sample;
  const Profile prof = sampled_profile(result, sample);
  const std::string content =
      flags.format == "json" ? to_json(prof).dump(2) + "\n" : profile_csv(prof);
  if (flags.out.empty())
    std::cout << content;
  else
    emit_with_manifest(flags.out, content, "profile", config_json(flags.config),
                       json::array({brief_outcome(result)}));
  return 0;
}

int cmd_stability(double epsilon, double lambda, double r) {
  const Params params{epsilon, lambda};
  params.validate();
  json reports = json::array();
  for (const FixedPointId id : kAllFixedPoints)
    reports.push_back(to_json(classify_stability(id, r, params)));
  const auto [gauge_scale, higgs_scale] = length_scales(params);
  const json doc = {{"epsilon", epsilon},
                    {"lambda", lambda},
                    {"r", r},
                    {"solution_length_scales",
                     {{"gamma", gauge_scale},
                      {"phi", std::isfinite(higgs_scale) ? json(higgs_scale) : json()}}},
                    {"fixed_points", std::move(reports)}};
  std::cout << doc.dump(2) << "\n";
  return 0;
}

struct VerifySelection {
  bool series = false;
  bool order = false;
  bool table = false;
  bool overlap = false;
  bool symmetry = false;
  bool residual = false;

  bool any() const { return series || order || table || overlap || symmetry || residual; }
  void select_all() { series = order = table = overlap = symmetry = residual = true; }
};

int cmd_verify(const CommonFlags& flags, VerifySelection sel) {
  if (!sel.any()) sel.select_all();
  flags.config.validate();
  const Params cell{flags.epsilon, flags.lambda};
  cell.validate();
  bool all_ok = true;
  const auto report = [&](bool ok, const std::string& line) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << line << "\n";
    all_ok = all_ok && ok;
  };

  std::optional<SolveResult> solved;
  const auto need_solved = [&]() -> const SolveResult& {
    if (!solved) {
      solved = newton_solve(cell, flags.resolve_guess(cell), flags.config);
      if (!solved->converged())
        throw MapFailure(solved->seed, 1.0, "verify cell failed to converge: " + solved->detail);
    }
    return *solved;
  };

  if (sel.series) {
    std::mt19937_64 rng(20240915);
    std::uniform_real_distribution<double> coeff(-10.0, 10.0);
    double worst = 0.0;
    for (const double eps : {0.1, 1.0, 10.0})
      for (const double lam : {0.0, 1.0, 30.0}) {
        const Params p{eps, lam};
        for (int k = 0; k < 100; ++k)
          worst = std::max(worst, verify_series_coeffs({coeff(rng), coeff(rng)}, p));
      }
    report(worst <= 1e-12,
           "series recursion vs closed forms: max scaled deviation = " +
               format_double(worst) + " (tol 1e-12)");
  }
  if (sel.order) {
    const OdeState start{0.1, -0.05, -0.5, 0.15, 1.5};
    const OrderEstimate est = estimate_order(Params{1.0, 1.0}, start);
    const bool ok = !est.exact && est.order >= 3.8 && est.order <= 4.2;
    report(ok, "integrator empirical order = " +
                   (est.exact ? std::string("exact to roundoff") : format_double(est.order)) +
                   " (expected within [3.8, 4.2])");
  }
  if (sel.table) {
    const std::vector<double> eps_grid{10, 3, 1, 0.3, 0.1};
    const std::vector<double> lam_grid{0, 1, 3, 10, 30};
    const auto results = parallel_sweep(eps_grid, lam_grid, flags.config);
    double worst_a1 = 0.0, worst_b2 = 0.0;
    int bad = 0;
    for (const auto& r : results) {
      const ReferenceSeed* ref = find_reference_seed(r.params.epsilon, r.params.lambda);
      if (ref == nullptr || !r.converged()) {
        ++bad;
        continue;
      }
      const double da = std::abs(r.seed.a1 - ref->a1);
      const double db = std::abs(r.seed.b2 - ref->b2);
      worst_a1 = std::max(worst_a1, da);
      worst_b2 = std::max(worst_b2, db);
      if (da > 1e-4 || db > 1e-4) {
        ++bad;
        std::cout << "  cell eps=" << format_double(r.params.epsilon)
                  << " lambda=" << format_double(r.params.lambda)
                  << ": |da1|=" << format_double(da) << " |db2|=" << format_double(db)
                  << "\n";
      }
    }
    report(bad == 0, "reference table regression: max |da1| = " + format_double(worst_a1) +
                         ", max |db2| = " + format_double(worst_b2) +
                         " over 25 cells (tol 1e-4)");
    if (bad != 0)
      std::cout << "  note: the bundled digits were produced with their boundary one"
                   " mesh spacing inside r=1; this solver imposes it at r=1 exactly,"
                   " which accounts for deviations up to ~1.6e-4 (see README)\n";
  }
  if (sel.overlap) {
    const double dev = overlap_check(need_solved(), flags.config.r_match / 2);
    report(dev <= 1e-8, "handoff overlap at r_match/2: boundary deviation = " +
                            format_double(dev) + " (tol 1e-8)");
  }
  if (sel.symmetry) {
    const SolveResult& r = need_solved();
    const TaylorSeries series = compute_coeffs(r.seed, r.params, flags.config.series_order);
    // The energy integrand is even in phi and invariant under the gauge
    // reflection, so both flipped profiles must price out identically.
    const double base = action(r.profile, series);
    const double flipped = action(apply_phi_flip(r.profile), series);
    const double reflected = action(apply_gauge_flip(r.profile), series);
    const double rel = std::max(std::abs(flipped - base), std::abs(reflected - base)) /
                       std::max(1.0, std::abs(base));
    report(rel <= 1e-12, "action invariance under phi flip / gauge reflection: rel dev = " +
                             format_double(rel) + " (tol 1e-12)");
  }
  if (sel.residual) {
    const SolveResult& r = need_solved();
    report(r.el_residual_max <= 1e-4,
           "field-equation residual on [0.02, 0.98]: max = " +
               format_double(r.el_residual_max) + " (tol 1e-4)");
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spherically symmetric monopole boundary-value solver"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  CommonFlags solve_flags;
  auto* solve = app.add_subcommand("solve", "solve one (epsilon, lambda) cell by shooting");
  solve_flags.add_params(solve);
  solve_flags.add_guess(solve);
  solve_flags.add_config(solve);
  solve_flags.add_output(solve);
  solve->add_option("--sample", solve_flags.sample,
                    "profile samples for --out (0 = full grid)");

  CommonFlags table_flags;
  std::vector<double> eps_grid{10, 3, 1, 0.3, 0.1};
  std::vector<double> lam_grid{0, 1, 3, 10, 30};
  std::string check_path;
  auto* table = app.add_subcommand("table", "sweep a parameter grid via continuation");
  table->add_option("--eps", eps_grid, "epsilon grid values (continuation row order)");
  table->add_option("--lam", lam_grid, "lambda grid values (within-row order)");
  table_flags.add_config(table);
  table_flags.add_output(table);
  table->add_option("--check", check_path, "compare against a reference CSV");

  CommonFlags profile_flags;
  auto* profile = app.add_subcommand("profile", "emit a solved trajectory r, gamma, phi, dgamma, dphi");
  profile_flags.add_params(profile);
  profile_flags.add_guess(profile);
  profile_flags.add_config(profile);
  profile_flags.add_output(profile);
  profile->add_option("--sample", profile_flags.sample,
                      "sample count (0 = full grid, default 200)");

  CommonFlags stab_flags;
  double stab_r = 0.5;
  auto* stability = app.add_subcommand("stability", "classify the five fixed points at radius r");
  stab_flags.add_params(stability);
  stability->add_option("--r", stab_r, "radius at which to freeze coefficients")->required();

  CommonFlags verify_flags;
  VerifySelection selection;
  auto* verify = app.add_subcommand("verify", "run self-checks (all when none selected)");
  verify_flags.add_params(verify, /*epsilon_required=*/false);
  verify_flags.add_guess(verify);
  verify_flags.add_config(verify);
  verify->add_flag("--series", selection.series, "series recursion vs closed forms");
  verify->add_flag("--order", selection.order, "empirical integrator order");
  verify->add_flag("--table", selection.table, "reference table regression");
  verify->add_flag("--overlap", selection.overlap, "handoff radius sensitivity");
  verify->add_flag("--symmetry", selection.symmetry, "action invariance under flips");
  verify->add_flag("--residual", selection.residual, "field-equation residual");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  }

  try {
    if (solve->parsed()) return cmd_solve(solve_flags);
    if (table->parsed()) return cmd_table(table_flags, eps_grid, lam_grid, check_path);
    if (profile->parsed()) return cmd_profile(profile_flags);
    if (stability->parsed()) return cmd_stability(stab_flags.epsilon, stab_flags.lambda, stab_r);
    if (verify->parsed()) return cmd_verify(verify_flags, selection);
  } catch (const MapFailure& e) {
    print_error("non_convergence", e.what(),
                {{"seed", {e.seed.a1, e.seed.b2}}, {"radius", e.radius}});
    return 1;
  } catch (const std::domain_error& e) {
    print_error("validation", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    print_error("validation", e.what());
    return 2;
  } catch (const std::exception& e) {
    print_error("io", e.what());
    return 2;
  }
  return 2;
}
