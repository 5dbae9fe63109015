#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "monopole/model.hpp"
#include "monopole/shooting.hpp"

namespace monopole {

inline constexpr const char* kToolVersion = "0.1.0";

/// Provenance record written next to every emitted data file: which tool
/// version produced it, when, from which resolved configuration, and what
/// came out.
struct RunManifest {
  std::string tool_version = kToolVersion;
  std::string timestamp;  // ISO 8601 UTC
  std::string command;
  nlohmann::json config;
  nlohmann::json outcomes;
  std::vector<std::string> files;
};

nlohmann::json to_json(const RunManifest& manifest);

/// Current time as "YYYY-MM-DDTHH:MM:SSZ".
std::string utc_timestamp();

/// Shortest round-trip decimal form of v (std::to_chars).
std::string format_double(double v);

/// Strict full-string parse; throws std::invalid_argument on anything else.
double parse_double(std::string_view text);

/// CSV with header r,gamma,phi,dgamma,dphi, one row per sample.
std::string profile_csv(const Profile& profile);

/// CSV with header epsilon,lambda,a1,b2,residual_inf,iterations,status.
std::string table_csv(const std::vector<SolveResult>& results);

nlohmann::json to_json(const StabilityReport& report);
nlohmann::json to_json(const SolveResult& result);
nlohmann::json to_json(const Profile& profile);

/// Inverse of to_json(SolveResult); numeric nulls round-trip as NaN.
SolveResult solve_result_from_json(const nlohmann::json& j);

/// Uniform error payload for the CLI:
/// {"error": code, "detail": detail, "context": {...}}.
nlohmann::json error_json(const std::string& code, const std::string& detail,
                          nlohmann::json context = nlohmann::json::object());

/// Writes via a temp file + rename so readers never observe partial output.
/// Throws std::runtime_error on filesystem failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace monopole
