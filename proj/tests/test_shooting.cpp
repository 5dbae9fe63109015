#include <doctest.h>

#include <cmath>

#include "monopole/reference.hpp"
#include "monopole/shooting.hpp"

using namespace monopole;

namespace {

const ReferenceSeed& ref_cell(double eps, double lam) {
  const ReferenceSeed* row = find_reference_seed(eps, lam);
  REQUIRE(row != nullptr);
  return *row;
}

}  // namespace

TEST_CASE("ShootingConfig validation") {
  ShootingConfig c;
  CHECK_NOTHROW(c.validate());
  c.r_match = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.r_match = 0.2;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ShootingConfig{};
  c.series_order = 9;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ShootingConfig{};
  c.newton_tol = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ShootingConfig{};
  c.damping_factor = 1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ShootingConfig{};
  c.integrator.n_steps = 4;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("boundary_map reaches the boundary from a sane seed") {
  // Bundled reference digits sit ~1.4e-4 off the exact r=1 root (their
  // source scheme stopped one mesh spacing short of the boundary), so a map
  // from them lands near, not on, the targets.
  const Params p{1.0, 0.0};
  const ShootingConfig cfg;
  const BoundaryValues bv = boundary_map({1.67098122, -1.02894746}, p, cfg);
  CHECK(std::abs(bv.gamma1 + 0.5) < 2e-4);
  CHECK(std::abs(bv.phi1 - 1.0) < 2e-4);
}

TEST_CASE("boundary_map failures carry the seed and radius") {
  const Params p{1.0, 0.0};
  const ShootingConfig cfg;
  CHECK_THROWS_AS(boundary_map({1e7, -1e7}, p, cfg), MapFailure);
  try {
    boundary_map({1e7, -1e7}, p, cfg);
  } catch (const MapFailure& e) {
    CHECK(e.seed.a1 == 1e7);
    CHECK(e.radius == cfg.r_match);
  }

  // Strong potential, wildly hot seed: the trajectory blows up mid-interval.
  const Params hot{0.1, 30.0};
  try {
    boundary_map({20.0, -1.0}, hot, cfg);
    FAIL("expected MapFailure");
  } catch (const MapFailure& e) {
    CHECK(e.radius > cfg.r_match);
    CHECK(e.radius <= 1.0);
  }
}

TEST_CASE("jacobian_fd is finite, stable in step size, and nonsingular") {
  const Params p{1.0, 0.0};
  ShootingConfig cfg;
  const SeedCoeffs seed{1.67, -1.03};
  const Matrix2 j1 = jacobian_fd(seed, p, cfg);
  cfg.fd_step = 3e-6;
  const Matrix2 j2 = jacobian_fd(seed, p, cfg);
  for (const auto& [a, b] : {std::pair{j1.m00, j2.m00}, std::pair{j1.m01, j2.m01},
                             std::pair{j1.m10, j2.m10}, std::pair{j1.m11, j2.m11}}) {
    CHECK(std::isfinite(a));
    CHECK(a == doctest::Approx(b).epsilon(1e-6));
  }
  CHECK(std::abs(j1.det()) > 1e-6);
}

TEST_CASE("newton_solve lands on the reference cell (1, 0)") {
  const Params p{1.0, 0.0};
  const ShootingConfig cfg;
  const SolveResult res = newton_solve(p, cfg);
  REQUIRE(res.converged());
  // 2e-4 covers the bundled digits' boundary-lattice offset (~1.4e-4 here)
  const ReferenceSeed& ref = ref_cell(1.0, 0.0);
  CHECK(std::abs(res.seed.a1 - ref.a1) < 2e-4);
  CHECK(std::abs(res.seed.b2 - ref.b2) < 2e-4);
  CHECK(std::abs(res.residual[0]) <= cfg.newton_tol);
  CHECK(std::abs(res.residual[1]) <= cfg.newton_tol);
  CHECK(res.iterations <= 10);
  CHECK(res.detail.empty());

  // attached profile: complete, starts at the origin, boundary bitwise equal
  // to the shooting map's endpoint
  REQUIRE(res.profile.size() > 2);
  CHECK(res.profile.radii.front() == 0.0);
  CHECK(res.profile.complete());
  CHECK(res.profile.states.back().gamma == -0.5 + res.residual[0]);
  CHECK(res.profile.states.back().phi == 1.0 + res.residual[1]);
  CHECK(res.profile.states.front().dphi == res.seed.a1);

  CHECK(res.action_value > 0.0);
  CHECK(std::isfinite(res.action_value));
  CHECK(res.el_residual_max <= 1e-4);
}

TEST_CASE("newton_solve converges from the documented manual guess") {
  const SolveResult res =
      newton_solve(Params{1.0, 0.0}, SeedCoeffs{1.5, -0.8}, ShootingConfig{});
  REQUIRE(res.converged());
  const ReferenceSeed& ref = ref_cell(1.0, 0.0);
  CHECK(std::abs(res.seed.a1 - ref.a1) < 2e-4);
  CHECK(std::abs(res.seed.b2 - ref.b2) < 2e-4);
}

TEST_CASE("newton_solve reports max_iters_exceeded for an impossible tolerance") {
  ShootingConfig cfg;
  cfg.newton_tol = 1e-30;
  cfg.max_iters = 2;
  const SolveResult res = newton_solve(Params{1.0, 0.0}, cfg);
  CHECK(res.status == SolveStatus::max_iters_exceeded);
  CHECK(res.iterations == 2);
  CHECK_FALSE(res.detail.empty());
  CHECK(std::isfinite(res.seed.a1));
  CHECK(res.profile.size() == 0);
}

TEST_CASE("newton_solve reports diverged for an unusable initial guess") {
  const SolveResult res =
      newton_solve(Params{1.0, 0.0}, SeedCoeffs{1e7, -1e7}, ShootingConfig{});
  CHECK(res.status == SolveStatus::diverged);
  CHECK_FALSE(res.detail.empty());
}

TEST_CASE("continuation_sweep single cell equals a direct solve") {
  const ShootingConfig cfg;
  const auto swept = continuation_sweep({1.0}, {0.0}, cfg);
  REQUIRE(swept.size() == 1);
  const SolveResult direct = newton_solve(Params{1.0, 0.0}, cfg);
  CHECK(swept[0].seed.a1 == direct.seed.a1);
  CHECK(swept[0].seed.b2 == direct.seed.b2);
  CHECK(swept[0].iterations == direct.iterations);
}

TEST_CASE("continuation_sweep chains within rows and matches the reference") {
  const ShootingConfig cfg;
  const std::vector<double> eps{1.0, 0.3};
  const std::vector<double> lam{0.0, 1.0};
  const auto results = continuation_sweep(eps, lam, cfg);
  REQUIRE(results.size() == 4);
  const double expect[4][2] = {{1.0, 0.0}, {1.0, 1.0}, {0.3, 0.0}, {0.3, 1.0}};
  for (int i = 0; i < 4; ++i) {
    CHECK(results[i].params.epsilon == expect[i][0]);
    CHECK(results[i].params.lambda == expect[i][1]);
    REQUIRE(results[i].converged());
    const ReferenceSeed& ref = ref_cell(expect[i][0], expect[i][1]);
    CHECK(std::abs(results[i].seed.a1 - ref.a1) < 2e-4);
    CHECK(std::abs(results[i].seed.b2 - ref.b2) < 2e-4);
  }
}

TEST_CASE("overlap_check quantifies handoff sensitivity") {
  const SolveResult res = newton_solve(Params{1.0, 0.0}, ShootingConfig{});
  REQUIRE(res.converged());
  CHECK(overlap_check(res, res.config.r_match) == 0.0);
  CHECK(overlap_check(res, res.config.r_match / 2) < 1e-8);
  CHECK_THROWS_AS(overlap_check(res, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(overlap_check(res, 0.02), std::invalid_argument);

  SolveResult failed = res;
  failed.status = SolveStatus::diverged;
  CHECK_THROWS_AS(overlap_check(failed, 0.005), std::invalid_argument);
}

TEST_CASE("default_guess picks the nearest reference cell in log space") {
  const SeedCoeffs exact = default_guess(Params{0.3, 10.0});
  const ReferenceSeed& row = ref_cell(0.3, 10.0);
  CHECK(exact.a1 == row.a1);
  CHECK(exact.b2 == row.b2);

  // (0.2, 5) sits closest to the (0.3, 3) cell in (log eps, log(1+lambda)).
  const SeedCoeffs near = default_guess(Params{0.2, 5.0});
  const ReferenceSeed& anchor = ref_cell(0.3, 3.0);
  CHECK(near.a1 == anchor.a1);
  CHECK(near.b2 == anchor.b2);
}

TEST_CASE("build_full_profile honours sampling overrides") {
  const SolveResult res = newton_solve(Params{1.0, 0.0}, ShootingConfig{});
  REQUIRE(res.converged());
  const Profile coarse = build_full_profile(res.seed, res.params, res.config, 4, 2500);
  // 4 series samples on [0, r_match) plus 10000/2500 + 1 recorded nodes
  CHECK(coarse.size() == 9);
  CHECK(coarse.radii.front() == 0.0);
  CHECK(coarse.complete());
}
