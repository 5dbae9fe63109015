#include "monopole/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "monopole/series.hpp"

namespace monopole {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Integral over [lo, hi] of the quadratic through (x0,f0), (x1,f1), (x2,f2),
/// written in Newton form so uneven spacing costs nothing.
double quad_integral(double x0, double f0, double x1, double f1, double x2,
                     double f2, double lo, double hi) {
  const double c1 = (f1 - f0) / (x1 - x0);
  const double c2 = ((f2 - f1) / (x2 - x1) - c1) / (x2 - x0);
  const auto antideriv = [&](double x) {
    const double u = x - x0;
    return f0 * x + c1 * u * u / 2 + c2 * (u * u * u / 3 + (x0 - x1) * u * u / 2);
  };
  return antideriv(hi) - antideriv(lo);
}

/// Composite quadratic rule over arbitrary strictly increasing samples.
/// Even interval counts reduce to composite Simpson; an odd count spends the
/// first interval on its own three-point fit; two samples fall back to the
/// trapezoid rule.
double integrate_samples(const std::vector<double>& x, const std::vector<double>& f) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  if (n == 2) return (x[1] - x[0]) * (f[0] + f[1]) / 2;
  double total = 0.0;
  std::size_t i = 0;
  if ((n - 1) % 2 == 1) {
    total += quad_integral(x[0], f[0], x[1], f[1], x[2], f[2], x[0], x[1]);
    i = 1;
  }
  for (; i + 2 < n; i += 2) {
    total += quad_integral(x[i], f[i], x[i + 1], f[i + 1], x[i + 2], f[i + 2],
                           x[i], x[i + 2]);
  }
  return total;
}

struct GaussRule {
  std::array<double, 33> nodes;    // on [-1, 1]
  std::array<double, 33> weights;
};

/// Gauss-Legendre nodes/weights by Newton iteration on P_n; computed once.
const GaussRule& gauss33() {
  static const GaussRule rule = [] {
    GaussRule r{};
    constexpr int n = 33;
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      const double w = 2.0 / ((1 - x * x) * dp * dp);
      r.nodes[i] = -x;
      r.weights[i] = w;
      r.nodes[n - 1 - i] = x;
      r.weights[n - 1 - i] = w;
    }
    return r;
  }();
  return rule;
}

double action_integrand(const OdeState& s, const Params& p) {
  if (s.r == 0.0) return 0.0;  // analytic limit for admissible profiles
  const double g = s.gamma;
  const double q = g * g + g;
  const double w = 1 + 2 * g;
  const double p2 = s.phi * s.phi;
  return 2 * p.epsilon * (s.dgamma * s.dgamma + 2 * q * q / (s.r * s.r)) +
         s.r * s.r * s.dphi * s.dphi + 2 * p2 * w * w +
         p.lambda * s.r * s.r * (p2 - 1) * (p2 - 1);
}

}  // namespace

void Params::validate() const {
  if (!std::isfinite(epsilon) || epsilon <= 0.0)
    throw std::domain_error("epsilon must be finite and > 0, got " +
                            std::to_string(epsilon));
  if (!std::isfinite(lambda) || lambda < 0.0)
    throw std::domain_error("lambda must be finite and >= 0, got " +
                            std::to_string(lambda));
}

StateDeriv rhs(const OdeState& s, const Params& p) {
  if (!(s.r > 0.0))
    throw std::domain_error("rhs requires r > 0, got r = " + std::to_string(s.r));
  const double r2 = s.r * s.r;
  const double w = 1 + 2 * s.gamma;
  StateDeriv d;
  d.dgamma = s.dgamma;
  d.d2gamma = (2.0 / p.epsilon) * s.phi * s.phi * w +
              (2.0 / r2) * (s.gamma * s.gamma + s.gamma) * w;
  d.dphi = s.dphi;
  d.d2phi = -2 * s.dphi / s.r + (2 * s.phi / r2) * w * w +
            2 * p.lambda * s.phi * (s.phi * s.phi - 1);
  return d;
}

void Profile::validate() const {
  if (radii.size() != states.size())
    throw std::invalid_argument("profile radii/states length mismatch");
  if (radii.size() < 2)
    throw std::invalid_argument("profile needs at least two samples");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!std::isfinite(radii[i]) || radii[i] < 0.0 || radii[i] > 1.0)
      throw std::invalid_argument("profile radius outside [0, 1]");
    if (radii[i] != states[i].r)
      throw std::invalid_argument("profile radii misaligned with states");
    if (i > 0 && !(radii[i] > radii[i - 1]))
      throw std::invalid_argument("profile radii must be strictly increasing");
  }
}

Profile make_profile(const Params& params, std::vector<OdeState> states) {
  Profile p;
  p.params = params;
  p.states = std::move(states);
  p.radii.reserve(p.states.size());
  for (const auto& s : p.states) p.radii.push_back(s.r);
  p.validate();
  return p;
}

double action(const Profile& profile, const TaylorSeries& series) {
  profile.validate();
  if (!profile.complete())
    throw std::invalid_argument("action requires a profile reaching r = 1");
  std::vector<double> f(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i)
    f[i] = action_integrand(profile.states[i], profile.params);
  double integral = integrate_samples(profile.radii, f);
  const double r0 = profile.radii.front();
  if (r0 > 0.0) {
    const auto& rule = gauss33();
    double head = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double r = r0 * (rule.nodes[k] + 1) / 2;
      head += rule.weights[k] * action_integrand(eval_series(series, r), profile.params);
    }
    integral += head * r0 / 2;
  }
  return 4 * std::numbers::pi * integral;
}

double el_residual(const Profile& profile, const Params& params, double r_lo,
                   double r_hi) {
  profile.validate();
  if (profile.size() < 5)
    throw std::invalid_argument("el_residual needs at least five samples");
  params.validate();
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < profile.size(); ++i) {
    const double r = profile.radii[i];
    if (r < r_lo || r > r_hi || r <= 0.0) continue;
    const double h0 = profile.radii[i] - profile.radii[i - 1];
    const double h1 = profile.radii[i + 1] - profile.radii[i];
    const auto second = [&](double fm, double f0, double fp) {
      const double c1 = (f0 - fm) / h0;
      return 2 * ((fp - f0) / h1 - c1) / (h0 + h1);
    };
    const auto first = [&](double fm, double f0, double fp) {
      const double c1 = (f0 - fm) / h0;
      return c1 + ((fp - f0) / h1 - c1) / (h0 + h1) * h0;
    };
    const OdeState& sm = profile.states[i - 1];
    const OdeState& s0 = profile.states[i];
    const OdeState& sp = profile.states[i + 1];
    const double d2g = second(sm.gamma, s0.gamma, sp.gamma);
    const double d2p = second(sm.phi, s0.phi, sp.phi);
    const double dp = first(sm.phi, s0.phi, sp.phi);
    const OdeState probe{r, s0.gamma, s0.dgamma, s0.phi, dp};
    const StateDeriv d = rhs(probe, params);
    worst = std::max(worst, std::abs(d2g - d.d2gamma));
    worst = std::max(worst, std::abs(d2p - d.d2phi));
  }
  return worst;
}

Profile apply_phi_flip(Profile profile) {
  for (auto& s : profile.states) {
    s.phi = -s.phi;
    s.dphi = -s.dphi;
  }
  return profile;
}

Profile apply_gauge_flip(Profile profile) {
  for (auto& s : profile.states) {
    s.gamma = -1.0 - s.gamma;
    s.dgamma = -s.dgamma;
  }
  return profile;
}

std::pair<bool, bool> profile_monotonicity(const Profile& profile) {
  bool gamma_down = true, phi_up = true;
  for (std::size_t i = 1; i < profile.size(); ++i) {
    if (profile.states[i].gamma > profile.states[i - 1].gamma) gamma_down = false;
    if (profile.states[i].phi < profile.states[i - 1].phi) phi_up = false;
  }
  return {gamma_down, phi_up};
}

std::pair<double, double> fixed_point_values(FixedPointId id) {
  switch (id) {
    case FixedPointId::GammaHalfPhiPlus: return {-0.5, 1.0};
    case FixedPointId::GammaHalfPhiMinus: return {-0.5, -1.0};
    case FixedPointId::GammaHalfPhiZero: return {-0.5, 0.0};
    case FixedPointId::Origin: return {0.0, 0.0};
    case FixedPointId::GammaMinusOnePhiZero: return {-1.0, 0.0};
  }
  throw std::invalid_argument("unknown fixed point id");
}

const char* to_string(FixedPointId id) {
  switch (id) {
    case FixedPointId::GammaHalfPhiPlus: return "gamma=-1/2,phi=+1";
    case FixedPointId::GammaHalfPhiMinus: return "gamma=-1/2,phi=-1";
    case FixedPointId::GammaHalfPhiZero: return "gamma=-1/2,phi=0";
    case FixedPointId::Origin: return "gamma=0,phi=0";
    case FixedPointId::GammaMinusOnePhiZero: return "gamma=-1,phi=0";
  }
  return "unknown";
}

StabilityReport classify_stability(FixedPointId id, double r, const Params& params) {
  params.validate();
  if (!std::isfinite(r) || r <= 0.0)
    throw std::domain_error("classify_stability requires r > 0");
  StabilityReport rep;
  rep.fixed_point = id;
  rep.r = r;
  rep.params = params;
  rep.gamma_length_scale = std::sqrt(params.epsilon) / 2;
  rep.phi_length_scale =
      params.lambda > 0.0 ? 1 / (2 * std::sqrt(params.lambda)) : kInf;

  // Frozen-coefficient linearization about (gamma*, phi*). About the vacuum
  // pair (-1/2, +-1) the gamma mode sees the exponent 4/eps - 1/r^2, so it
  // turns unstable exactly where r^2 > eps/4, while the phi mode picks up
  // the exponent 4 lambda: a growing direction for lambda > 0, neutral (and
  // counted stable) at lambda = 0. About phi* = 0 the potential term acts as
  // a restoring force that makes phi perturbations oscillatory; gamma
  // perturbations there grow unless the 1/r^2 barrier of the gamma = -1/2
  // branch protects them.
  switch (id) {
    case FixedPointId::GammaHalfPhiPlus:
    case FixedPointId::GammaHalfPhiMinus:
      rep.gamma_mode_stable = r * r < params.epsilon / 4;
      rep.phi_mode_stable = params.lambda == 0.0;
      rep.phi_oscillatory = false;
      break;
    case FixedPointId::GammaHalfPhiZero:
      rep.gamma_mode_stable = true;
      rep.phi_mode_stable = true;
      rep.phi_oscillatory = params.lambda > 0.0;
      break;
    case FixedPointId::Origin:
    case FixedPointId::GammaMinusOnePhiZero:
      rep.gamma_mode_stable = false;
      rep.phi_mode_stable = params.lambda > 0.0 && r * r > 1 / params.lambda;
      rep.phi_oscillatory = rep.phi_mode_stable;
      break;
  }
  rep.unstable_mode_count =
      (rep.gamma_mode_stable ? 0 : 1) + (rep.phi_mode_stable ? 0 : 1);
  return rep;
}

std::pair<double, double> length_scales(const Params& params) {
  params.validate();
  const double gauge = std::min(std::sqrt(params.epsilon), 1.0);
  double higgs = params.lambda > 0.0 ? 1 / std::sqrt(params.lambda) : kInf;
  higgs = std::min({std::sqrt(params.epsilon), higgs, 1.0});
  return {gauge, higgs};
}

}  // namespace monopole
