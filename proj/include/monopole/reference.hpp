#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace monopole {

/// One converged (epsilon, lambda) cell of the bundled regression table.
struct ReferenceSeed {
  double epsilon;
  double lambda;
  double a1;
  double b2;
};

/// The 25-cell regression table (epsilon ascending, lambda ascending within),
/// embedded in the library so regression runs never depend on data files.
std::span<const ReferenceSeed> reference_seeds();

/// Looks up a cell by exact (epsilon, lambda); nullptr when absent.
const ReferenceSeed* find_reference_seed(double epsilon, double lambda);

/// FNV-1a 64-bit hash, used to pin the bundled CSV copy of the table.
std::uint64_t fnv1a64(std::string_view text);

/// Hash of data/reference_seeds.csv; a test asserts file and table agree.
inline constexpr std::uint64_t kReferenceCsvHash = 0x661b8084ee5a576bull;

/// Parses a CSV with header epsilon,lambda,a1,b2 (as written by the table
/// command). Throws std::runtime_error on malformed input.
std::vector<ReferenceSeed> load_reference_csv(const std::string& path);

}  // namespace monopole
