#include "monopole/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>
#include <system_error>

namespace monopole {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

nlohmann::json num_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

double num_from(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_null()) return kNaN;
  return v.get<double>();
}

}  // namespace

nlohmann::json to_json(const RunManifest& m) {
  return {{"tool_version", m.tool_version}, {"timestamp", m.timestamp},
          {"command", m.command},           {"config", m.config},
          {"outcomes", m.outcomes},         {"files", m.files}};
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf.data(), end);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  return v;
}

std::string profile_csv(const Profile& profile) {
  std::string out = "r,gamma,phi,dgamma,dphi\n";
  for (const auto& s : profile.states) {
    out += format_double(s.r);
    out += ',';
    out += format_double(s.gamma);
    out += ',';
    out += format_double(s.phi);
    out += ',';
    out += format_double(s.dgamma);
    out += ',';
    out += format_double(s.dphi);
    out += '\n';
  }
  return out;
}

std::string table_csv(const std::vector<SolveResult>& results) {
  std::string out = "epsilon,lambda,a1,b2,residual_inf,iterations,status\n";
  for (const auto& r : results) {
    const double rinf = std::max(std::abs(r.residual[0]), std::abs(r.residual[1]));
    out += format_double(r.params.epsilon);
    out += ',';
    out += format_double(r.params.lambda);
    out += ',';
    out += format_double(r.seed.a1);
    out += ',';
    out += format_double(r.seed.b2);
    out += ',';
    out += format_double(rinf);
    out += ',';
    out += std::to_string(r.iterations);
    out += ',';
    out += to_string(r.status);
    out += '\n';
  }
  return out;
}

nlohmann::json to_json(const StabilityReport& rep) {
  const auto [gamma, phi] = fixed_point_values(rep.fixed_point);
  return {{"fixed_point", to_string(rep.fixed_point)},
          {"gamma", gamma},
          {"phi", phi},
          {"r", rep.r},
          {"epsilon", rep.params.epsilon},
          {"lambda", rep.params.lambda},
          {"gamma_mode_stable", rep.gamma_mode_stable},
          {"phi_mode_stable", rep.phi_mode_stable},
          {"phi_oscillatory", rep.phi_oscillatory},
          {"unstable_mode_count", rep.unstable_mode_count},
          {"gamma_length_scale", num_or_null(rep.gamma_length_scale)},
          {"phi_length_scale", num_or_null(rep.phi_length_scale)}};
}

nlohmann::json to_json(const Profile& profile) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& s : profile.states)
    rows.push_back({{"r", s.r},
                    {"gamma", s.gamma},
                    {"phi", s.phi},
                    {"dgamma", s.dgamma},
                    {"dphi", s.dphi}});
  return {{"epsilon", profile.params.epsilon},
          {"lambda", profile.params.lambda},
          {"samples", std::move(rows)}};
}

nlohmann::json to_json(const SolveResult& r) {
  return {{"status", to_string(r.status)},
          {"epsilon", r.params.epsilon},
          {"lambda", r.params.lambda},
          {"a1", r.seed.a1},
          {"b2", r.seed.b2},
          {"residual", {num_or_null(r.residual[0]), num_or_null(r.residual[1])}},
          {"iterations", r.iterations},
          {"action", num_or_null(r.action_value)},
          {"el_residual_max", num_or_null(r.el_residual_max)},
          {"detail", r.detail},
          {"config",
           {{"r_match", r.config.r_match},
            {"series_order", r.config.series_order},
            {"n_steps", r.config.integrator.n_steps},
            {"record_every", r.config.integrator.record_every},
            {"newton_tol", r.config.newton_tol},
            {"max_iters", r.config.max_iters},
            {"fd_step", r.config.fd_step},
            {"damping_factor", r.config.damping_factor},
            {"max_backtracks", r.config.max_backtracks}}}};
}

SolveResult solve_result_from_json(const nlohmann::json& j) {
  SolveResult r;
  const std::string status = j.at("status").get<std::string>();
  if (status == "converged")
    r.status = SolveStatus::converged;
  else if (status == "max_iters_exceeded")
    r.status = SolveStatus::max_iters_exceeded;
  else if (status == "diverged")
    r.status = SolveStatus::diverged;
  else
    throw std::invalid_argument("unknown solve status: " + status);
  r.params.epsilon = num_from(j, "epsilon");
  r.params.lambda = num_from(j, "lambda");
  r.seed.a1 = num_from(j, "a1");
  r.seed.b2 = num_from(j, "b2");
  const auto& res = j.at("residual");
  r.residual = {res.at(0).is_null() ? kNaN : res.at(0).get<double>(),
                res.at(1).is_null() ? kNaN : res.at(1).get<double>()};
  r.iterations = j.at("iterations").get<int>();
  r.action_value = num_from(j, "action");
  r.el_residual_max = num_from(j, "el_residual_max");
  r.detail = j.at("detail").get<std::string>();
  const auto& c = j.at("config");
  r.config.r_match = c.at("r_match").get<double>();
  r.config.series_order = c.at("series_order").get<int>();
  r.config.integrator.n_steps = c.at("n_steps").get<int>();
  r.config.integrator.record_every = c.at("record_every").get<int>();
  r.config.newton_tol = c.at("newton_tol").get<double>();
  r.config.max_iters = c.at("max_iters").get<int>();
  r.config.fd_step = c.at("fd_step").get<double>();
  r.config.damping_factor = c.at("damping_factor").get<double>();
  r.config.max_backtracks = c.at("max_backtracks").get<int>();
  return r;
}

nlohmann::json error_json(const std::string& code, const std::string& detail,
                          nlohmann::json context) {
  return {{"error", code}, {"detail", detail}, {"context", std::move(context)}};
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  if (!dir.empty() && !fs::exists(dir, ec))
    throw std::runtime_error("output directory does not exist: " + dir.string());

  std::random_device rd;
  const fs::path tmp =
      dir / (path.filename().string() + ".tmp." + std::to_string(rd()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open temp file: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      throw std::runtime_error("failed writing temp file: " + tmp.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("failed to move output into place: " + path.string());
  }
}

}  // namespace monopole
