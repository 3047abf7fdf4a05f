#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "trb/core_types.hpp"
#include "trb/oracle.hpp"

namespace trb {

enum class Family {
  MaxQuartic,     // max_i g_i'x + x'H_i x/2 + c_i/24 |x|^4
  SumAbsQuartic,  // sum_i |g_i'x + x'H_i x/2 + c_i/24 |x|^4|
  MaxEigenvalue,  // lambda_max(A_0 + sum_i x_i A_i)
  SineGrowth,     // x^{p+1} sin(1/x) + |x|^p / p, one-dimensional
  ToyQuadratic,   // |x|^2
  AbsValue,       // |x|_1
};

const char* family_name(Family family);
Family family_from_name(const std::string& name);

/// A seeded test function with its ground-truth metadata.
struct ProblemInstance {
  Family family = Family::ToyQuadratic;
  int n = 1;
  int m = 0;
  std::uint64_t seed = 0;
  int growth_order = 0;  // 0 = unknown
  double f_star = 0.0;
  std::optional<Point> x_star;
  bool x_star_is_reference = false;  // true when x_star came from a numerical run
  int sine_power = 1;                // p of the SineGrowth family

  Matrix g;                // m x n, row i is g_i
  std::vector<Matrix> H;   // m matrices, n x n
  Vector c;                // m
  std::vector<Matrix> A;   // A_0 ... A_n, each m x m
};

/// Builds a random instance satisfying the family's structural invariants.
///
/// For the quartic families, the first min(n+1, m) linear terms are shifted
/// so that a strictly positive convex combination of them vanishes. The
/// minimizer is then 0 with f* = 0; growth is sharp when n < m and
/// quadratic otherwise. For MaxEigenvalue, m is the matrix size and
/// A_1..A_n are made trace-free, which rules out a positive definite
/// combination and keeps f bounded below.
ProblemInstance generate(Family family, int n, int m, std::uint64_t seed, int sine_power = 1);

std::shared_ptr<const Oracle> oracle_of(const ProblemInstance& instance);

/// Suggested starting point used by the reference experiments.
Point default_start(const ProblemInstance& instance);

/// Text round trip. Numbers are written with 17 significant digits.
void write_instance(std::ostream& out, const ProblemInstance& instance);
ProblemInstance read_instance(std::istream& in);

std::string serialize(const ProblemInstance& instance);
ProblemInstance deserialize(const std::string& text);

void save_instance(const std::string& path, const ProblemInstance& instance);
ProblemInstance load_instance(const std::string& path);

}  // namespace trb
