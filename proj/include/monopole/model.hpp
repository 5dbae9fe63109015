#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

namespace monopole {

/// Model parameters: `epsilon` weights the gauge-field stiffness,
/// `lambda` the strength of the symmetry-breaking potential.
struct Params {
  double epsilon = 1.0;
  double lambda = 0.0;

  /// Throws std::domain_error unless epsilon > 0 and lambda >= 0, both finite.
  void validate() const;
};

/// Point of the first-order phase space (gamma, gamma', phi, phi') at radius r.
struct OdeState {
  double r = 0.0;
  double gamma = 0.0;
  double dgamma = 0.0;
  double phi = 0.0;
  double dphi = 0.0;
};

/// Derivative vector produced by rhs(): (gamma', gamma'', phi', phi'').
struct StateDeriv {
  double dgamma = 0.0;
  double d2gamma = 0.0;
  double dphi = 0.0;
  double d2phi = 0.0;
};

/// Right-hand side of the radial field equations
///
///   gamma'' = (2/eps) phi^2 (1 + 2 gamma) + (2/r^2)(gamma^2 + gamma)(1 + 2 gamma)
///   phi''   = -2 phi'/r + (2 phi/r^2)(1 + 2 gamma)^2 + 2 lambda phi (phi^2 - 1)
///
/// Throws std::domain_error for r <= 0; the singular origin is covered by the
/// series module instead.
StateDeriv rhs(const OdeState& state, const Params& params);

/// Radial trajectory sampled on a strictly increasing grid in [0, 1].
/// `radii[i]` always mirrors `states[i].r`.
struct Profile {
  Params params{};
  std::vector<double> radii;
  std::vector<OdeState> states;

  std::size_t size() const { return radii.size(); }
  bool complete() const { return !radii.empty() && radii.back() == 1.0; }

  /// Throws std::invalid_argument if the grid is malformed (fewer than two
  /// samples, radii not strictly increasing, outside [0, 1], or misaligned
  /// with the states).
  void validate() const;
};

/// Builds a validated Profile, deriving the grid from the states themselves.
Profile make_profile(const Params& params, std::vector<OdeState> states);

struct TaylorSeries;  // series.hpp

/// Energy of a complete profile (one that reaches r = 1):
///
///   S = 4 pi * Integral_0^1 [ 2 eps (gamma'^2 + 2 (gamma^2+gamma)^2 / r^2)
///                             + r^2 phi'^2 + 2 phi^2 (1+2 gamma)^2
///                             + lambda r^2 (phi^2-1)^2 ] dr
///
/// The sampled part is integrated with a composite quadratic rule that
/// tolerates uneven spacing; the gap [0, radii.front()] is integrated with a
/// 33-point Gauss-Legendre rule applied to `series`. If the profile already
/// starts at r = 0 the series is not consulted. Throws std::invalid_argument
/// for incomplete profiles.
double action(const Profile& profile, const TaylorSeries& series);

/// Max-norm residual of both field equations over interior grid points with
/// r_lo <= r <= r_hi, using non-uniform central differences for the second
/// derivatives. Requires at least five samples.
double el_residual(const Profile& profile, const Params& params,
                   double r_lo = 0.0, double r_hi = 1.0);

/// Sign flip phi -> -phi (with phi' -> -phi'); an exact involution.
Profile apply_phi_flip(Profile profile);

/// Gauge reflection gamma -> -1 - gamma (with gamma' -> -gamma'); maps
/// solutions to solutions and is an involution up to one rounding of 1+gamma.
Profile apply_gauge_flip(Profile profile);

/// Soft diagnostic: whether gamma is non-increasing and phi non-decreasing
/// along the grid. Expected of physical solutions but not enforced anywhere.
std::pair<bool, bool> profile_monotonicity(const Profile& profile);

/// The five constant solutions of the field equations.
enum class FixedPointId {
  GammaHalfPhiPlus,    // gamma = -1/2, phi = +1
  GammaHalfPhiMinus,   // gamma = -1/2, phi = -1
  GammaHalfPhiZero,    // gamma = -1/2, phi =  0
  Origin,              // gamma =  0,   phi =  0
  GammaMinusOnePhiZero // gamma = -1,   phi =  0
};

inline constexpr std::array<FixedPointId, 5> kAllFixedPoints = {
    FixedPointId::GammaHalfPhiPlus, FixedPointId::GammaHalfPhiMinus,
    FixedPointId::GammaHalfPhiZero, FixedPointId::Origin,
    FixedPointId::GammaMinusOnePhiZero};

/// (gamma, phi) values of a fixed point.
std::pair<double, double> fixed_point_values(FixedPointId id);

/// Stable token for serialization, e.g. "gamma=-1/2,phi=+1".
const char* to_string(FixedPointId id);

/// Linearized behaviour of radial perturbations about a fixed point, frozen
/// at radius r. A mode is "stable" when its local growth exponent is not
/// positive; oscillatory means the phi mode has locally imaginary frequency.
struct StabilityReport {
  FixedPointId fixed_point{};
  double r = 0.0;
  Params params{};
  bool gamma_mode_stable = false;
  bool phi_mode_stable = false;
  bool phi_oscillatory = false;
  int unstable_mode_count = 0;
  double gamma_length_scale = 0.0;  // sqrt(eps)/2 where meaningful
  double phi_length_scale = 0.0;    // 1/(2 sqrt(lambda)), +inf for lambda = 0
};

/// Classifies the frozen-coefficient stability of perturbations about the
/// given fixed point at radius r > 0. The gamma mode about gamma = -1/2,
/// phi = +-1 flips from stable to unstable exactly at r^2 = eps/4.
StabilityReport classify_stability(FixedPointId id, double r, const Params& params);

/// Characteristic variation scales of a solution, both clipped at the domain
/// size: gamma varies on min(sqrt(eps), 1), phi on min(sqrt(eps), 1/sqrt(lambda), 1).
std::pair<double, double> length_scales(const Params& params);

}  // namespace monopole
