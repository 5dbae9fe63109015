#pragma once

#include <limits>
#include <vector>

#include "monopole/model.hpp"

namespace monopole {

/// Fixed-step integration settings. `n_steps` counts RK4 intervals over
/// [start.r, r_end]; every `record_every`-th node is kept when recording.
struct IntegratorConfig {
  int n_steps = 10000;
  int record_every = 1;

  /// Throws std::invalid_argument unless n_steps >= 10 and record_every >= 1.
  void validate() const;
};

/// Any state component beyond this magnitude (or non-finite) counts as a
/// diverged trajectory.
inline constexpr double kDivergenceThreshold = 1e8;

enum class IntegrationStatus { ok, diverged };

/// Outcome of integrate(). On divergence the recorded samples stop at the
/// last finite node and `failure_radius` holds the radius of the offending
/// step; on success `failure_radius` is NaN and the final recorded radius is
/// exactly r_end.
struct IntegrationResult {
  IntegrationStatus status = IntegrationStatus::ok;
  double failure_radius = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> radii;
  std::vector<OdeState> states;

  bool ok() const { return status == IntegrationStatus::ok; }

  /// Converts a successful run into a validated Profile. Throws
  /// std::logic_error if the run diverged.
  Profile to_profile(const Params& params) const;
};

/// One classical RK4 step of size h from `state`. Throws std::domain_error
/// if the state radius is not positive.
OdeState rk4_step(const OdeState& state, double h, const Params& params);

/// Integrates from `start` to r_end with n_steps uniform RK4 steps,
/// recording every `record_every`-th node plus both endpoints. Node radii
/// are computed as start.r + i*h (never accumulated), and the last node is
/// pinned to exactly r_end.
IntegrationResult integrate(const OdeState& start, double r_end,
                            const IntegratorConfig& config, const Params& params);

/// Endpoint-only variant with bitwise-identical arithmetic to integrate().
IntegrationResult integrate_endpoint(const OdeState& start, double r_end,
                                     const IntegratorConfig& config,
                                     const Params& params);

/// Observed convergence order from a Richardson triple. `exact` is set when
/// successive refinements agree to roundoff, in which case `order` is NaN.
struct OrderEstimate {
  double order = 0.0;
  bool exact = false;
};

/// Empirical order of the stepper on [start.r, 1]: integrates at three
/// resolutions n, 2n, 4n (n = 256, coarse enough that truncation error still
/// dominates roundoff) and returns log2 of the successive-difference ratio.
OrderEstimate estimate_order(const Params& params, const OdeState& start);

}  // namespace monopole
