#include "monopole/reference.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace monopole {

namespace {

// Converged seeds of the 5x5 regression grid, quoted to the eight decimals
// the solver reproduces.
constexpr std::array<ReferenceSeed, 25> kTable = {{
    {0.1, 0.0, 2.82909077, -4.47460232},
    {0.1, 1.0, 3.14773551, -4.92072556},
    {0.1, 3.0, 3.62692766, -5.57110938},
    {0.1, 10.0, 4.62892407, -6.81947999},
    {0.1, 30.0, 6.19274693, -8.46474894},
    {0.3, 0.0, 2.01904955, -1.88549902},
    {0.3, 1.0, 2.26118176, -2.04994984},
    {0.3, 3.0, 2.66517994, -2.31673622},
    {0.3, 10.0, 3.59550462, -2.86817001},
    {0.3, 30.0, 5.12510342, -3.58374045},
    {1.0, 0.0, 1.67098122, -1.02894746},
    {1.0, 1.0, 1.85973704, -1.07504639},
    {1.0, 3.0, 2.19572981, -1.15577783},
    {1.0, 10.0, 3.04898441, -1.34041824},
    {1.0, 30.0, 4.55384341, -1.58910470},
    {3.0, 0.0, 1.57081044, -0.80615986},
    {3.0, 1.0, 1.74184236, -0.82078859},
    {3.0, 3.0, 2.05156143, -0.84695210},
    {3.0, 10.0, 2.86750186, -0.90924487},
    {3.0, 30.0, 4.35776101, -0.99551235},
    {10.0, 0.0, 1.53622287, -0.73146686},
    {10.0, 1.0, 1.70099654, -0.73576432},
    {10.0, 3.0, 2.00102288, -0.74350147},
    {10.0, 10.0, 2.80198139, -0.76219107},
    {10.0, 30.0, 4.28571713, -0.78838676},
}};

}  // namespace

std::span<const ReferenceSeed> reference_seeds() { return kTable; }

const ReferenceSeed* find_reference_seed(double epsilon, double lambda) {
  for (const auto& row : kTable)
    if (row.epsilon == epsilon && row.lambda == lambda) return &row;
  return nullptr;
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::vector<ReferenceSeed> load_reference_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open reference csv: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "epsilon,lambda,a1,b2")
    throw std::runtime_error("reference csv must start with header epsilon,lambda,a1,b2");
  std::vector<ReferenceSeed> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    ReferenceSeed row{};
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(ss >> row.epsilon >> c1 >> row.lambda >> c2 >> row.a1 >> c3 >> row.b2) ||
        c1 != ',' || c2 != ',' || c3 != ',' || (ss >> std::ws, !ss.eof()))
      throw std::runtime_error("malformed reference csv at line " +
                               std::to_string(lineno));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace monopole
