#pragma once

#include <stdexcept>
#include <vector>

#include "monopole/model.hpp"

namespace monopole {

/// Free parameters of the regular solution branch at the origin:
/// phi ~ a1 r, gamma ~ b2 r^2.
struct SeedCoeffs {
  double a1 = 0.0;
  double b2 = 0.0;
};

/// Thrown when the coefficient recursion blows past its magnitude guard,
/// which signals a seed far outside the radius of convergence at r_match.
struct SeriesOverflow : std::runtime_error {
  int index;
  double magnitude;
  SeriesOverflow(int index_, double magnitude_);
};

/// Truncated power series of the regular solution at r = 0:
///   phi(r)   = sum_{k>=0} a[k] r^(2k+1)   (odd powers only)
///   gamma(r) = sum_{k>=0} b[k] r^(2k+2)   (even powers, starting at r^2)
/// `order` is the highest gamma power kept, so a has order/2 + 1 entries
/// (up to r^(order+1)) and b has order/2 entries.
struct TaylorSeries {
  Params params{};
  SeedCoeffs seed{};
  int order = 0;
  std::vector<double> a;  // a1, a3, ..., a_{order+1}
  std::vector<double> b;  // b2, b4, ..., b_order
};

/// Expands the regular solution seeded by (a1, b2) to the requested order
/// (even, between 2 and 64) by solving the field equations power by power:
///
///   odd n >= 3:
///     (n-1)(n+2) a_n = 8 sum_{i+j=n} a_i b_j + 8 sum_{i+j+l=n} a_i b_j b_l
///                      + 2 lambda (sum_{i+j+l=n-2} a_i a_j a_l - a_{n-2})
///   even n >= 4:
///     (n+1)(n-2) b_n = (2/eps) sum_{i+j=n-2} a_i a_j
///                      + (4/eps) sum_{i+j+l=n-2} a_i a_j b_l
///                      + 6 sum_{i+j=n} b_i b_j + 4 sum_{i+j+l=n} b_i b_j b_l
///
/// where a-indices run over odd values >= 1, b-indices over even values >= 2,
/// and tuple sums are over ordered index tuples. Throws std::invalid_argument
/// for a bad order and SeriesOverflow when any coefficient exceeds 1e12.
TaylorSeries compute_coeffs(const SeedCoeffs& seed, const Params& params, int order);

/// Evaluates the truncated series and its derivative. Intended for
/// 0 <= r <= r_match; returns the exact limits (0, 0, 0, a1) at r = 0.
OdeState eval_series(const TaylorSeries& series, double r);

/// Cross-checks the generic recursion against independently hard-coded
/// closed forms of the first eight non-seed coefficients (a3..a9, b4..b10).
/// Returns the maximum deviation, scaled by max(1, |coefficient|).
double verify_series_coeffs(const SeedCoeffs& seed, const Params& params);

}  // namespace monopole
