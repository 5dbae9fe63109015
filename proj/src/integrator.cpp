#include "monopole/integrator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace monopole {

namespace {

bool bounded(const OdeState& s) {
  return std::isfinite(s.gamma) && std::isfinite(s.dgamma) &&
         std::isfinite(s.phi) && std::isfinite(s.dphi) &&
         std::abs(s.gamma) <= kDivergenceThreshold &&
         std::abs(s.dgamma) <= kDivergenceThreshold &&
         std::abs(s.phi) <= kDivergenceThreshold &&
         std::abs(s.dphi) <= kDivergenceThreshold;
}

/// Shared stepping loop. The recorder receives (step_index, state) for the
/// retained nodes; both entry points use the exact same arithmetic, so a
/// recorded run and an endpoint-only run agree bitwise. Node radii come from
/// start.r + i*h rather than accumulation, and the final node is pinned to
/// r_end, so the grid is reproducible to the last ulp.
template <typename Recorder>
IntegrationStatus run(OdeState y, double r_end, const IntegratorConfig& cfg,
                      const Params& p, Recorder&& record, double& failure_radius) {
  const double r0 = y.r;
  const double h = (r_end - r0) / cfg.n_steps;
  record(0, y);
  for (int i = 0; i < cfg.n_steps; ++i) {
    const double r_next = (i + 1 == cfg.n_steps) ? r_end : r0 + (i + 1) * h;
    y = rk4_step(y, r_next - y.r, p);
    y.r = r_next;
    if (!bounded(y)) {
      failure_radius = r_next;
      return IntegrationStatus::diverged;
    }
    record(i + 1, y);
  }
  return IntegrationStatus::ok;
}

}  // namespace

void IntegratorConfig::validate() const {
  if (n_steps < 10)
    throw std::invalid_argument("n_steps must be at least 10, got " +
                                std::to_string(n_steps));
  if (record_every < 1)
    throw std::invalid_argument("record_every must be at least 1, got " +
                                std::to_string(record_every));
}

Profile IntegrationResult::to_profile(const Params& params) const {
  if (!ok())
    throw std::logic_error("cannot convert a diverged trajectory to a profile");
  return make_profile(params, states);
}

OdeState rk4_step(const OdeState& s, double h, const Params& p) {
  if (!(s.r > 0.0))
    throw std::domain_error("rk4_step requires r > 0, got r = " + std::to_string(s.r));
  const auto eval = [&p](const OdeState& base, double dr, const StateDeriv& k) {
    OdeState probe;
    probe.r = base.r + dr;
    probe.gamma = base.gamma + dr * k.dgamma;
    probe.dgamma = base.dgamma + dr * k.d2gamma;
    probe.phi = base.phi + dr * k.dphi;
    probe.dphi = base.dphi + dr * k.d2phi;
    return rhs(probe, p);
  };
  const StateDeriv k1 = rhs(s, p);
  const StateDeriv k2 = eval(s, h / 2, k1);
  const StateDeriv k3 = eval(s, h / 2, k2);
  const StateDeriv k4 = eval(s, h, k3);
  OdeState out;
  out.r = s.r + h;
  out.gamma = s.gamma + h / 6 * (k1.dgamma + 2 * k2.dgamma + 2 * k3.dgamma + k4.dgamma);
  out.dgamma =
      s.dgamma + h / 6 * (k1.d2gamma + 2 * k2.d2gamma + 2 * k3.d2gamma + k4.d2gamma);
  out.phi = s.phi + h / 6 * (k1.dphi + 2 * k2.dphi + 2 * k3.dphi + k4.dphi);
  out.dphi = s.dphi + h / 6 * (k1.d2phi + 2 * k2.d2phi + 2 * k3.d2phi + k4.d2phi);
  return out;
}

IntegrationResult integrate(const OdeState& start, double r_end,
                            const IntegratorConfig& config, const Params& params) {
  config.validate();
  params.validate();
  if (!(start.r > 0.0) || !(r_end > start.r))
    throw std::invalid_argument("integrate requires 0 < start.r < r_end");
  IntegrationResult result;
  result.radii.reserve(static_cast<std::size_t>(config.n_steps / config.record_every) + 2);
  result.states.reserve(result.radii.capacity());
  const auto record = [&](int i, const OdeState& y) {
    if (i % config.record_every == 0 || i == config.n_steps) {
      result.radii.push_back(y.r);
      result.states.push_back(y);
    }
  };
  result.status = run(start, r_end, config, params, record, result.failure_radius);
  return result;
}

IntegrationResult integrate_endpoint(const OdeState& start, double r_end,
                                     const IntegratorConfig& config,
                                     const Params& params) {
  config.validate();
  params.validate();
  if (!(start.r > 0.0) || !(r_end > start.r))
    throw std::invalid_argument("integrate requires 0 < start.r < r_end");
  IntegrationResult result;
  OdeState last = start;
  const auto record = [&last](int, const OdeState& y) { last = y; };
  result.status = run(start, r_end, config, params, record, result.failure_radius);
  result.radii.push_back(last.r);
  result.states.push_back(last);
  return result;
}

OrderEstimate estimate_order(const Params& params, const OdeState& start) {
  params.validate();
  if (!(start.r > 0.0) || !(start.r < 1.0))
    throw std::invalid_argument("estimate_order requires 0 < start.r < 1");
  IntegratorConfig cfg;
  OdeState end[3];
  for (int k = 0; k < 3; ++k) {
    cfg.n_steps = 256 << k;
    const IntegrationResult res = integrate_endpoint(start, 1.0, cfg, params);
    if (!res.ok())
      throw std::invalid_argument("estimate_order start state leads to divergence");
    end[k] = res.states.back();
  }
  const auto gap = [](const OdeState& x, const OdeState& y) {
    return std::max(std::max(std::abs(x.gamma - y.gamma), std::abs(x.dgamma - y.dgamma)),
                    std::max(std::abs(x.phi - y.phi), std::abs(x.dphi - y.dphi)));
  };
  const auto scale = [](const OdeState& s) {
    return std::max({1.0, std::abs(s.gamma), std::abs(s.dgamma), std::abs(s.phi),
                     std::abs(s.dphi)});
  };
  const double e1 = gap(end[0], end[1]);
  const double e2 = gap(end[1], end[2]);
  OrderEstimate est;
  if (e1 <= 1e-14 * scale(end[2]) || e2 <= 1e-14 * scale(end[2])) {
    est.exact = true;
    est.order = std::numeric_limits<double>::quiet_NaN();
    return est;
  }
  est.order = std::log2(e1 / e2);
  return est;
}

}  // namespace monopole
