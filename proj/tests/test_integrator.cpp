#include <doctest.h>

#include <cmath>

#include "monopole/integrator.hpp"
#include "monopole/series.hpp"

using namespace monopole;

namespace {

OdeState series_start(const SeedCoeffs& seed, const Params& p, double r) {
  return eval_series(compute_coeffs(seed, p, 10), r);
}

}  // namespace

TEST_CASE("IntegratorConfig validation") {
  CHECK_THROWS_AS((IntegratorConfig{5, 1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((IntegratorConfig{100, 0}.validate()), std::invalid_argument);
  CHECK_NOTHROW(IntegratorConfig{10, 3}.validate());
}

TEST_CASE("rk4_step requires a positive radius and is exact on fixed points") {
  const Params p{0.7, 4.0};
  CHECK_THROWS_AS(rk4_step(OdeState{0.0, 0, 0, 0, 0}, 0.1, p), std::domain_error);

  const OdeState vac{0.25, -0.5, 0.0, 1.0, 0.0};
  const OdeState next = rk4_step(vac, 0.125, p);
  CHECK(next.r == 0.375);
  CHECK(next.gamma == -0.5);
  CHECK(next.dgamma == 0.0);
  CHECK(next.phi == 1.0);
  CHECK(next.dphi == 0.0);
}

TEST_CASE("integrate records the exact node grid") {
  const Params p{1.0, 0.0};
  const OdeState start = series_start({1.67, -1.03}, p, 0.01);
  IntegratorConfig cfg{100, 7};
  const IntegrationResult res = integrate(start, 1.0, cfg, p);
  REQUIRE(res.ok());
  // nodes 0, 7, ..., 98 plus the forced final one
  CHECK(res.radii.size() == 16);
  CHECK(res.radii.front() == 0.01);
  CHECK(res.radii.back() == 1.0);
  const double h = (1.0 - 0.01) / 100;
  for (std::size_t k = 0; k + 1 < res.radii.size(); ++k)
    CHECK(res.radii[k] == 0.01 + static_cast<double>(7 * k) * h);
  for (std::size_t k = 0; k < res.radii.size(); ++k)
    CHECK(res.radii[k] == res.states[k].r);

  const Profile prof = res.to_profile(p);
  CHECK(prof.complete());
}

TEST_CASE("integrate validates its arguments") {
  const Params p{1.0, 0.0};
  const OdeState start = series_start({1.67, -1.03}, p, 0.01);
  CHECK_THROWS_AS(integrate(OdeState{0.0, 0, 0, 0, 1}, 1.0, IntegratorConfig{}, p),
                  std::invalid_argument);
  CHECK_THROWS_AS(integrate(start, 0.005, IntegratorConfig{}, p), std::invalid_argument);
  CHECK_THROWS_AS(integrate(start, 1.0, IntegratorConfig{3, 1}, p), std::invalid_argument);
}

TEST_CASE("endpoint-only integration is bitwise identical to recording") {
  const Params p{0.3, 10.0};
  const OdeState start = series_start({3.59, -2.87}, p, 0.01);
  const IntegratorConfig cfg{2000, 1};
  const IntegrationResult full = integrate(start, 1.0, cfg, p);
  const IntegrationResult end = integrate_endpoint(start, 1.0, cfg, p);
  REQUIRE(full.ok());
  REQUIRE(end.ok());
  CHECK(full.states.back().r == end.states.back().r);
  CHECK(full.states.back().gamma == end.states.back().gamma);
  CHECK(full.states.back().dgamma == end.states.back().dgamma);
  CHECK(full.states.back().phi == end.states.back().phi);
  CHECK(full.states.back().dphi == end.states.back().dphi);

  const IntegrationResult again = integrate_endpoint(start, 1.0, cfg, p);
  CHECK(again.states.back().gamma == end.states.back().gamma);
  CHECK(again.states.back().phi == end.states.back().phi);
}

TEST_CASE("divergence is detected and reported with its radius") {
  const Params p{1.0, 30.0};
  // A state far outside the basin: the cubic potential term blows up fast.
  const OdeState bad{0.5, 0.0, 0.0, 1e7, 0.0};
  const IntegrationResult res = integrate(bad, 1.0, IntegratorConfig{1000, 10}, p);
  CHECK_FALSE(res.ok());
  CHECK(res.status == IntegrationStatus::diverged);
  CHECK(res.failure_radius > 0.5);
  CHECK(res.failure_radius <= 1.0);
  CHECK(res.radii.size() >= 1);
  CHECK(res.radii.back() < res.failure_radius);
  CHECK_THROWS_AS(res.to_profile(p), std::logic_error);
}

TEST_CASE("global error shrinks at fourth order") {
  const Params p{1.0, 1.0};
  const OdeState start = series_start({1.86, -1.08}, p, 0.01);
  const auto endpoint = [&](int n) {
    return integrate_endpoint(start, 1.0, IntegratorConfig{n, 1}, p).states.back();
  };
  // The 1/r^2 terms near the handoff radius keep coarse grids out of the
  // asymptotic regime, so start the Richardson triple reasonably fine.
  const OdeState a = endpoint(1600);
  const OdeState b = endpoint(3200);
  const OdeState c = endpoint(6400);
  const double e1 = std::max(std::abs(a.gamma - b.gamma), std::abs(a.phi - b.phi));
  const double e2 = std::max(std::abs(b.gamma - c.gamma), std::abs(b.phi - c.phi));
  const double order = std::log2(e1 / e2);
  CHECK(order > 3.8);
  CHECK(order < 4.2);
}

TEST_CASE("estimate_order reports fourth order on a generic trajectory") {
  const OrderEstimate est =
      estimate_order(Params{1.0, 1.0}, OdeState{0.1, -0.05, -0.5, 0.15, 1.5});
  CHECK_FALSE(est.exact);
  CHECK(est.order > 3.8);
  CHECK(est.order < 4.2);
}

TEST_CASE("estimate_order flags constant solutions as exact") {
  const OrderEstimate est =
      estimate_order(Params{2.0, 5.0}, OdeState{0.3, -0.5, 0.0, 1.0, 0.0});
  CHECK(est.exact);
  CHECK(std::isnan(est.order));
}
