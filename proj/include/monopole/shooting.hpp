#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "monopole/integrator.hpp"
#include "monopole/model.hpp"
#include "monopole/series.hpp"

namespace monopole {

/// Settings for the series-seeded shooting solver.
struct ShootingConfig {
  double r_match = 0.01;      // series/integrator handoff radius
  int series_order = 10;      // truncation order of the origin expansion
  IntegratorConfig integrator{};
  double newton_tol = 1e-10;  // max-norm target on the boundary residual
  int max_iters = 50;         // Newton iterations
  double fd_step = 1e-6;      // relative Jacobian probe size
  double damping_factor = 0.5;
  int max_backtracks = 20;

  /// Throws std::invalid_argument for out-of-range settings
  /// (r_match in (0, 0.1], order even in [2, 64], positive tolerances).
  void validate() const;
};

/// Thrown when the boundary map cannot be evaluated at a seed: the series
/// blows up at r_match or the trajectory diverges before reaching r = 1.
struct MapFailure : std::runtime_error {
  SeedCoeffs seed;
  double radius;
  MapFailure(const SeedCoeffs& seed_, double radius_, const std::string& what_);
};

/// Boundary values reached at r = 1.
struct BoundaryValues {
  double gamma1 = 0.0;
  double phi1 = 0.0;
};

/// 2x2 Jacobian d(gamma(1), phi(1)) / d(a1, b2), row-major.
struct Matrix2 {
  double m00 = 0.0, m01 = 0.0;
  double m10 = 0.0, m11 = 0.0;

  double det() const { return m00 * m11 - m01 * m10; }
};

enum class SolveStatus { converged, max_iters_exceeded, diverged };
const char* to_string(SolveStatus status);

/// Full outcome of a shooting solve. On success `profile` covers [0, 1]
/// (series segment followed by the integrated one), `residual` holds
/// (gamma(1) + 1/2, phi(1) - 1), and the scalar diagnostics are filled in.
/// On failure the best seed seen is kept, `profile` may be empty, and
/// `detail` explains what stopped the iteration.
struct SolveResult {
  SolveStatus status = SolveStatus::diverged;
  Params params{};
  ShootingConfig config{};
  SeedCoeffs seed{};
  std::array<double, 2> residual{0.0, 0.0};
  int iterations = 0;
  Profile profile{};
  double action_value = 0.0;
  double el_residual_max = 0.0;
  std::string detail;

  bool converged() const { return status == SolveStatus::converged; }
};

/// Evaluates the shooting map (a1, b2) -> (gamma(1), phi(1)): expands the
/// seed to config.series_order, hands off at r_match, and integrates to 1.
/// Throws MapFailure when the trajectory cannot reach the boundary.
BoundaryValues boundary_map(const SeedCoeffs& seed, const Params& params,
                            const ShootingConfig& config);

/// Central finite-difference Jacobian of the shooting map, probing each seed
/// component with step fd_step * max(1, |component|).
Matrix2 jacobian_fd(const SeedCoeffs& seed, const Params& params,
                    const ShootingConfig& config);

/// Damped Newton iteration on the shooting map toward the boundary target
/// (gamma(1), phi(1)) = (-1/2, 1). Backtracks by `damping_factor` (at most
/// `max_backtracks` times) whenever a step fails to reduce the max-norm
/// residual or the map fails outright. Never throws for numerical reasons;
/// inspect SolveResult::status.
SolveResult newton_solve(const Params& params, const SeedCoeffs& guess,
                         const ShootingConfig& config);

/// Convenience overload starting from default_guess(params).
SolveResult newton_solve(const Params& params, const ShootingConfig& config);

/// Solves a parameter grid row by row: within each epsilon row the lambdas
/// are visited in the order given, each converged seed priming its successor;
/// every row starts independently from default_guess, so rows may safely be
/// solved concurrently. When a cell rejects its chained guess (large lambda
/// hops shrink the Newton basin), the row retries from the nearest bundled
/// seed and then walks intermediate lambdas toward the target, halving the
/// hop on failure. Results are in row-major (epsilon, lambda) order.
std::vector<SolveResult> continuation_sweep(const std::vector<double>& epsilons,
                                            const std::vector<double>& lambdas,
                                            const ShootingConfig& config);

/// Re-runs the boundary map of a converged result with the handoff moved to
/// r_alt (0 < r_alt <= r_match) and returns the max-norm change of the
/// boundary values, a direct estimate of the handoff truncation error.
double overlap_check(const SolveResult& result, double r_alt);

/// Starting guess: the (a1, b2) of the nearest reference seed in
/// (log eps, log(1+lambda)) distance.
SeedCoeffs default_guess(const Params& params);

/// Assembles the composite profile for a seed: series samples on
/// [0, r_match) followed by the recorded integration on [r_match, 1].
/// `series_samples` and `record_every` override the natural grid density
/// when positive. Throws MapFailure if the trajectory diverges.
Profile build_full_profile(const SeedCoeffs& seed, const Params& params,
                           const ShootingConfig& config,
                           int series_samples = 0, int record_every = 0);

}  // namespace monopole
