#include "monopole/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "monopole/reference.hpp"

namespace monopole {

namespace {

constexpr double kTargetGamma = -0.5;
constexpr double kTargetPhi = 1.0;

struct Residual {
  double g = 0.0, p = 0.0;
  double norm() const { return std::max(std::abs(g), std::abs(p)); }
};

Residual residual_of(const BoundaryValues& bv) {
  return {bv.gamma1 - kTargetGamma, bv.phi1 - kTargetPhi};
}

}  // namespace

void ShootingConfig::validate() const {
  integrator.validate();
  if (!(r_match > 0.0) || r_match > 0.1)
    throw std::invalid_argument("r_match must lie in (0, 0.1]");
  if (series_order < 2 || series_order > 64 || series_order % 2 != 0)
    throw std::invalid_argument("series_order must be even and within [2, 64]");
  if (!(newton_tol > 0.0)) throw std::invalid_argument("newton_tol must be > 0");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(fd_step > 0.0)) throw std::invalid_argument("fd_step must be > 0");
  if (!(damping_factor > 0.0) || damping_factor >= 1.0)
    throw std::invalid_argument("damping_factor must lie in (0, 1)");
  if (max_backtracks < 0) throw std::invalid_argument("max_backtracks must be >= 0");
}

MapFailure::MapFailure(const SeedCoeffs& seed_, double radius_, const std::string& what_)
    : std::runtime_error(what_), seed(seed_), radius(radius_) {}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iters_exceeded: return "max_iters_exceeded";
    case SolveStatus::diverged: return "diverged";
  }
  return "unknown";
}

BoundaryValues boundary_map(const SeedCoeffs& seed, const Params& params,
                            const ShootingConfig& config) {
  config.validate();
  params.validate();
  OdeState handoff;
  try {
    const TaylorSeries series = compute_coeffs(seed, params, config.series_order);
    handoff = eval_series(series, config.r_match);
  } catch (const SeriesOverflow& e) {
    throw MapFailure(seed, config.r_match,
                     std::string("series expansion overflowed: ") + e.what());
  }
  const IntegrationResult res =
      integrate_endpoint(handoff, 1.0, config.integrator, params);
  if (!res.ok())
    throw MapFailure(seed, res.failure_radius,
                     "trajectory diverged at r = " + std::to_string(res.failure_radius));
  return {res.states.back().gamma, res.states.back().phi};
}

Matrix2 jacobian_fd(const SeedCoeffs& seed, const Params& params,
                    const ShootingConfig& config) {
  const double ha = config.fd_step * std::max(1.0, std::abs(seed.a1));
  const double hb = config.fd_step * std::max(1.0, std::abs(seed.b2));
  const BoundaryValues ap = boundary_map({seed.a1 + ha, seed.b2}, params, config);
  const BoundaryValues am = boundary_map({seed.a1 - ha, seed.b2}, params, config);
  const BoundaryValues bp = boundary_map({seed.a1, seed.b2 + hb}, params, config);
  const BoundaryValues bm = boundary_map({seed.a1, seed.b2 - hb}, params, config);
  Matrix2 j;
  j.m00 = (ap.gamma1 - am.gamma1) / (2 * ha);
  j.m01 = (bp.gamma1 - bm.gamma1) / (2 * hb);
  j.m10 = (ap.phi1 - am.phi1) / (2 * ha);
  j.m11 = (bp.phi1 - bm.phi1) / (2 * hb);
  return j;
}

SolveResult newton_solve(const Params& params, const SeedCoeffs& guess,
                         const ShootingConfig& config) {
  config.validate();
  params.validate();

  SolveResult result;
  result.params = params;
  result.config = config;
  result.seed = guess;

  SeedCoeffs seed = guess;
  Residual res;
  try {
    res = residual_of(boundary_map(seed, params, config));
  } catch (const MapFailure& e) {
    result.status = SolveStatus::diverged;
    result.detail = std::string("initial guess unusable: ") + e.what();
    return result;
  }

  const auto finish_converged = [&](const SeedCoeffs& s, const Residual& r, int iters) {
    result.status = SolveStatus::converged;
    result.seed = s;
    result.residual = {r.g, r.p};
    result.iterations = iters;
    result.profile = build_full_profile(s, params, config);
    const TaylorSeries series = compute_coeffs(s, params, config.series_order);
    result.action_value = action(result.profile, series);
    result.el_residual_max = el_residual(result.profile, params, 0.02, 0.98);
  };

  for (int iter = 0; iter < config.max_iters; ++iter) {
    if (res.norm() <= config.newton_tol) {
      finish_converged(seed, res, iter);
      return result;
    }

    Matrix2 j;
    try {
      j = jacobian_fd(seed, params, config);
    } catch (const MapFailure& e) {
      result.status = SolveStatus::diverged;
      result.seed = seed;
      result.residual = {res.g, res.p};
      result.iterations = iter;
      result.detail = std::string("jacobian probe failed: ") + e.what();
      return result;
    }
    const double det = j.det();
    const double scale = std::max({std::abs(j.m00), std::abs(j.m01),
                                   std::abs(j.m10), std::abs(j.m11)});
    if (!std::isfinite(det) || std::abs(det) <= 1e-14 * scale * scale) {
      result.status = SolveStatus::diverged;
      result.seed = seed;
      result.residual = {res.g, res.p};
      result.iterations = iter;
      result.detail = "shooting jacobian is numerically singular";
      return result;
    }

    // Newton direction J d = -F by Cramer's rule.
    const double da = (-res.g * j.m11 + res.p * j.m01) / det;
    const double db = (-res.p * j.m00 + res.g * j.m10) / det;

    // Backtracking line search: halve the step until the residual norm
    // actually drops; a map failure along the way just counts as a failed try.
    double t = 1.0;
    bool accepted = false;
    for (int k = 0; k <= config.max_backtracks; ++k) {
      const SeedCoeffs trial{seed.a1 + t * da, seed.b2 + t * db};
      try {
        const Residual trial_res = residual_of(boundary_map(trial, params, config));
        if (trial_res.norm() < res.norm()) {
          seed = trial;
          res = trial_res;
          accepted = true;
          break;
        }
      } catch (const MapFailure&) {
      }
      t *= config.damping_factor;
    }
    if (!accepted) {
      result.status = SolveStatus::diverged;
      result.seed = seed;
      result.residual = {res.g, res.p};
      result.iterations = iter;
      result.detail = "line search stalled: no damped step reduced the residual";
      return result;
    }
  }

  if (res.norm() <= config.newton_tol) {
    finish_converged(seed, res, config.max_iters);
    return result;
  }
  result.status = SolveStatus::max_iters_exceeded;
  result.seed = seed;
  result.residual = {res.g, res.p};
  result.iterations = config.max_iters;
  result.detail = "residual " + std::to_string(res.norm()) + " above tolerance after " +
                  std::to_string(config.max_iters) + " iterations";
  return result;
}

SolveResult newton_solve(const Params& params, const ShootingConfig& config) {
  return newton_solve(params, default_guess(params), config);
}

namespace {

// Walks lambda from a converged anchor toward the target, geometrically in
// 1+lambda, doubling the hop after a success and halving it after a failure.
// The phi equation stiffens like exp(2 sqrt(lambda) (1-r)), so a single
// large hop can land the chained guess outside the Newton basin even though
// a short chain of intermediate solves crosses the same gap easily.
SolveResult walk_lambda(const Params& target, double lam_anchor, SeedCoeffs seed,
                        const ShootingConfig& config, SolveResult fallback) {
  const double u_target = std::log1p(target.lambda);
  double u_cur = std::log1p(lam_anchor);
  double du = (u_target - u_cur) / 2;
  for (int attempts = 0; attempts < 32 && std::abs(du) > 1e-3; ++attempts) {
    const double u_next = u_cur + du;
    const bool final_hop = (du > 0) ? u_next >= u_target : u_next <= u_target;
    const Params p{target.epsilon, final_hop ? target.lambda : std::expm1(u_next)};
    SolveResult res = newton_solve(p, seed, config);
    if (res.converged()) {
      if (final_hop) {
        res.detail = "converged after lambda continuation";
        return res;
      }
      u_cur = u_next;
      seed = res.seed;
      if (std::abs(du * 2) <= std::abs(u_target - u_cur)) du *= 2;
    } else {
      if (final_hop) fallback = std::move(res);
      du /= 2;
    }
  }
  return fallback;
}

}  // namespace

std::vector<SolveResult> continuation_sweep(const std::vector<double>& epsilons,
                                            const std::vector<double>& lambdas,
                                            const ShootingConfig& config) {
  config.validate();
  std::vector<SolveResult> results;
  results.reserve(epsilons.size() * lambdas.size());
  for (const double eps : epsilons) {
    const SolveResult* prev = nullptr;
    for (const double lam : lambdas) {
      const Params params{eps, lam};
      const bool chained = prev != nullptr && prev->converged();
      const SeedCoeffs guess = chained ? prev->seed : default_guess(params);
      SolveResult res = newton_solve(params, guess, config);
      if (!res.converged() && chained) {
        SolveResult retry = newton_solve(params, default_guess(params), config);
        if (retry.converged()) {
          res = std::move(retry);
        } else {
          res = walk_lambda(params, prev->params.lambda, prev->seed, config,
                            std::move(res));
        }
      }
      results.push_back(std::move(res));
      prev = &results.back();
    }
  }
  return results;
}

double overlap_check(const SolveResult& result, double r_alt) {
  if (!result.converged())
    throw std::invalid_argument("overlap_check needs a converged result");
  if (!(r_alt > 0.0) || r_alt > result.config.r_match)
    throw std::invalid_argument("overlap_check requires 0 < r_alt <= r_match");
  ShootingConfig alt = result.config;
  alt.r_match = r_alt;
  const BoundaryValues moved = boundary_map(result.seed, result.params, alt);
  const double g_ref = kTargetGamma + result.residual[0];
  const double p_ref = kTargetPhi + result.residual[1];
  return std::max(std::abs(moved.gamma1 - g_ref), std::abs(moved.phi1 - p_ref));
}

SeedCoeffs default_guess(const Params& params) {
  params.validate();
  const double le = std::log(params.epsilon);
  const double ll = std::log1p(params.lambda);
  const ReferenceSeed* best = nullptr;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (const auto& row : reference_seeds()) {
    const double de = std::log(row.epsilon) - le;
    const double dl = std::log1p(row.lambda) - ll;
    const double d2 = de * de + dl * dl;
    if (d2 < best_d2) {
      best_d2 = d2;
      best = &row;
    }
  }
  return best != nullptr ? SeedCoeffs{best->a1, best->b2} : SeedCoeffs{1.6, -1.0};
}

Profile build_full_profile(const SeedCoeffs& seed, const Params& params,
                           const ShootingConfig& config,
                           int series_samples, int record_every) {
  config.validate();
  params.validate();
  const TaylorSeries series = compute_coeffs(seed, params, config.series_order);
  const OdeState handoff = eval_series(series, config.r_match);

  IntegratorConfig icfg = config.integrator;
  if (record_every > 0) icfg.record_every = record_every;
  const IntegrationResult res = integrate(handoff, 1.0, icfg, params);
  if (!res.ok())
    throw MapFailure(seed, res.failure_radius,
                     "trajectory diverged at r = " + std::to_string(res.failure_radius));

  // Sample the series densely enough to match the recorded grid spacing.
  int m = series_samples;
  if (m <= 0) {
    const double spacing =
        (1.0 - config.r_match) / config.integrator.n_steps * icfg.record_every;
    m = std::max(2, static_cast<int>(std::llround(config.r_match / spacing)));
  }
  std::vector<OdeState> states;
  states.reserve(static_cast<std::size_t>(m) + res.states.size());
  for (int i = 0; i < m; ++i)
    states.push_back(eval_series(series, config.r_match * i / m));
  states.insert(states.end(), res.states.begin(), res.states.end());
  return make_profile(params, std::move(states));
}

}  // namespace monopole
