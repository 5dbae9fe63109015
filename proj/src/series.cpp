#include "monopole/series.hpp"

#include <cassert>
#include <cmath>
#include <cstdlib>
#include <string>

namespace monopole {

namespace {

constexpr double kCoeffLimit = 1e12;

}  // namespace

SeriesOverflow::SeriesOverflow(int index_, double magnitude_)
    : std::runtime_error("series coefficient " + std::to_string(index_) +
                         " exceeded magnitude guard (" +
                         std::to_string(magnitude_) + ")"),
      index(index_),
      magnitude(magnitude_) {}

TaylorSeries compute_coeffs(const SeedCoeffs& seed, const Params& params, int order) {
  params.validate();
  if (order < 2 || order > 64 || order % 2 != 0)
    throw std::invalid_argument("series order must be even and within [2, 64], got " +
                                std::to_string(order));
  if (!std::isfinite(seed.a1) || !std::isfinite(seed.b2))
    throw std::invalid_argument("series seed must be finite");

  TaylorSeries ts;
  ts.params = params;
  ts.seed = seed;
  ts.order = order;
  ts.a.assign(static_cast<std::size_t>(order / 2 + 1), 0.0);
  ts.b.assign(static_cast<std::size_t>(order / 2), 0.0);
  ts.a[0] = seed.a1;
  ts.b[0] = seed.b2;

  // a(i): coefficient of r^i in phi for odd i, zero outside the filled range;
  // b(i): coefficient of r^i in gamma for even i. The recursion only ever
  // reads entries computed on earlier passes of the ascending loop.
  const auto a_of = [&](int i) -> double {
    assert(i >= 1 && i % 2 == 1);
    return ts.a[static_cast<std::size_t>((i - 1) / 2)];
  };
  const auto b_of = [&](int i) -> double {
    assert(i >= 2 && i % 2 == 0);
    return ts.b[static_cast<std::size_t>(i / 2 - 1)];
  };

  for (int n = 3; n <= order + 1; ++n) {
    double value = 0.0;
    if (n % 2 == 1) {
      // sum_{i+j=n} a_i b_j over odd i >= 1, even j >= 2
      double s_ab = 0.0;
      for (int i = 1; i <= n - 2; i += 2) s_ab += a_of(i) * b_of(n - i);
      // sum_{i+j+l=n} a_i b_j b_l, ordered (j, l)
      double s_abb = 0.0;
      for (int i = 1; i <= n - 4; i += 2)
        for (int j = 2; j <= n - i - 2; j += 2) s_abb += a_of(i) * b_of(j) * b_of(n - i - j);
      // sum_{i+j+l=n-2} a_i a_j a_l, ordered
      double s_aaa = 0.0;
      for (int i = 1; i <= n - 4; i += 2)
        for (int j = 1; j <= n - 3 - i; j += 2) s_aaa += a_of(i) * a_of(j) * a_of(n - 2 - i - j);
      value = (8 * s_ab + 8 * s_abb +
               2 * params.lambda * (s_aaa - a_of(n - 2))) /
              ((n - 1) * (n + 2));
      ts.a[static_cast<std::size_t>((n - 1) / 2)] = value;
    } else {
      // sum_{i+j=n-2} a_i a_j over odd indices
      double s_aa = 0.0;
      for (int i = 1; i <= n - 3; i += 2) s_aa += a_of(i) * a_of(n - 2 - i);
      // sum_{i+j+l=n-2} a_i a_j b_l, ordered (i, j)
      double s_aab = 0.0;
      for (int i = 1; i <= n - 5; i += 2)
        for (int j = 1; j <= n - 4 - i; j += 2) s_aab += a_of(i) * a_of(j) * b_of(n - 2 - i - j);
      // sum_{i+j=n} b_i b_j over even indices >= 2
      double s_bb = 0.0;
      for (int i = 2; i <= n - 2; i += 2) s_bb += b_of(i) * b_of(n - i);
      // sum_{i+j+l=n} b_i b_j b_l, ordered
      double s_bbb = 0.0;
      for (int i = 2; i <= n - 4; i += 2)
        for (int j = 2; j <= n - i - 2; j += 2) s_bbb += b_of(i) * b_of(j) * b_of(n - i - j);
      value = ((2.0 / params.epsilon) * s_aa + (4.0 / params.epsilon) * s_aab +
               6 * s_bb + 4 * s_bbb) /
              ((n + 1) * (n - 2));
      ts.b[static_cast<std::size_t>(n / 2 - 1)] = value;
    }
    if (!std::isfinite(value) || std::abs(value) > kCoeffLimit)
      throw SeriesOverflow(n, std::abs(value));
  }
  return ts;
}

OdeState eval_series(const TaylorSeries& series, double r) {
  const double u = r * r;
  // Horner in r^2; phi carries odd powers, gamma even ones.
  double phi_poly = 0.0, dphi_poly = 0.0;
  for (std::size_t k = series.a.size(); k-- > 0;) {
    const double c = series.a[k];
    phi_poly = phi_poly * u + c;
    dphi_poly = dphi_poly * u + static_cast<double>(2 * k + 1) * c;
  }
  double gamma_poly = 0.0, dgamma_poly = 0.0;
  for (std::size_t k = series.b.size(); k-- > 0;) {
    const double c = series.b[k];
    gamma_poly = gamma_poly * u + c;
    dgamma_poly = dgamma_poly * u + static_cast<double>(2 * (k + 1)) * c;
  }
  OdeState s;
  s.r = r;
  // + 0.0 normalizes the signed zero these products produce at r = 0
  s.phi = r * phi_poly + 0.0;
  s.dphi = dphi_poly;
  s.gamma = u * gamma_poly + 0.0;
  s.dgamma = r * dgamma_poly + 0.0;
  return s;
}

double verify_series_coeffs(const SeedCoeffs& seed, const Params& params) {
  const TaylorSeries ts = compute_coeffs(seed, params, 10);
  const double a1 = seed.a1, b2 = seed.b2;
  const double lam = params.lambda, ie = 1.0 / params.epsilon;

  // Closed forms obtained by expanding the field equations order by order,
  // chained so they never consult the generic recursion.
  const double a3 = (4 * a1 * b2 - lam * a1) / 5;
  const double b4 = (3 * b2 * b2 + ie * a1 * a1) / 5;
  const double a5 =
      (4 * a1 * b4 + 4 * a3 * b2 + 4 * a1 * b2 * b2 + lam * (a1 * a1 * a1 - a3)) / 14;
  const double b6 = (b2 * b2 * b2 + 3 * b2 * b4 + ie * (a1 * a3 + a1 * a1 * b2)) / 7;
  const double a7 = (4 * (a1 * b6 + a3 * b4 + a5 * b2 + a3 * b2 * b2 +
                          2 * a1 * b2 * b4) +
                     lam * (3 * a1 * a1 * a3 - a5)) /
                    27;
  const double b8 = (3 * (2 * b2 * b2 * b4 + b4 * b4 + 2 * b2 * b6) +
                     ie * (a3 * a3 + 2 * a1 * a5 + 2 * a1 * a1 * b4 +
                           4 * a1 * a3 * b2)) /
                    27;
  const double a9 = (4 * (a1 * b8 + a3 * b6 + a5 * b4 + a7 * b2 + a5 * b2 * b2 +
                          2 * a3 * b2 * b4 + a1 * b4 * b4 + 2 * a1 * b2 * b6) +
                     lam * (3 * a1 * a1 * a5 + 3 * a1 * a3 * a3 - a7)) /
                    44;
  const double b10 = (3 * (b2 * b2 * b6 + b2 * b4 * b4 + b2 * b8 + b4 * b6) +
                      ie * (a1 * a7 + a3 * a5 + a1 * a1 * b6 + a3 * a3 * b2 +
                            2 * a1 * a3 * b4 + 2 * a1 * a5 * b2)) /
                     22;

  const double expected_a[] = {a3, a5, a7, a9};
  const double expected_b[] = {b4, b6, b8, b10};
  double worst = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double da = std::abs(ts.a[static_cast<std::size_t>(k + 1)] - expected_a[k]);
    const double db = std::abs(ts.b[static_cast<std::size_t>(k + 1)] - expected_b[k]);
    worst = std::max(worst, da / std::max(1.0, std::abs(expected_a[k])));
    worst = std::max(worst, db / std::max(1.0, std::abs(expected_b[k])));
  }
  return worst;
}

}  // namespace monopole
