#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "trb/bundle_builder.hpp"
#include "trb/problems.hpp"

namespace trb {

enum class TauSchedule { Constant, Vanishing, Explicit };

struct RunConfig {
  int p = 1;  // growth exponent in the decrease test
  int q = 1;  // model order, q >= p
  double delta0 = 1.0;
  double delta_ratio = 0.1;
  std::vector<double> deltas;  // explicit radii; overrides delta0/delta_ratio when nonempty
  TauSchedule tau_schedule = TauSchedule::Constant;
  double tau = 1e-5;        // constant value, or tau_0 of the vanishing schedule
  double tau_ratio = 0.1;   // vanishing schedule: tau_j = tau * tau_ratio^j
  std::vector<double> taus; // explicit schedule
  double sigma = 0.5;
  double cap = 0.1;
  int j_max = 5;
  int max_inner = 10000;
  int max_builder_iter = 200;
  std::size_t memory_capacity = 100;
  std::uint64_t seed = 0;
  Point x0;
  /// K-hat used for the per-level bound on Lambda^p (0 when not estimated).
  double remainder_constant = 0.0;

  double radius(int j) const;  // j >= 1
  double tau_at(int j) const;  // j >= 1
  NormKind norm() const { return q == 1 ? NormKind::MaxNorm : NormKind::Euclidean; }
  void validate() const;
};

/// One (j, i) pass of the inner loop: x = x^{j,i}, with the outcome of the
/// decrease test on the subproblem point.
struct IterateRecord {
  int j = 0;
  int i = 0;
  Point x;
  double f = 0.0;
  double delta = 0.0;
  double tau = 0.0;
  double f_trial = 0.0;  // f(z_bar^{j,i})
  double decrease_ratio = 0.0;
  double gap = 0.0;
  std::size_t bundle_size = 0;
  int builder_iterations = 0;
  long oracle_calls_cumulative = 0;
  bool accepted = false;
  std::optional<double> dist_to_xstar;  // Euclidean, logging only
};

/// State at the end of outer level j: x^j = x^{j,N_j}.
struct LevelRecord {
  int j = 0;
  double delta = 0.0;
  double tau = 0.0;
  Point x;
  double f = 0.0;
  int steps = 0;  // N_j
  double decrease_ratio = 0.0;  // at the break
  double gap = 0.0;             // at the break
  double lambda_bound = 0.0;    // tau_j + delta^{q-p+sigma} + K delta^{q-p+1}
};

struct HandoffEntry {
  int j = 0;
  Point x;
  double delta = 0.0;
  double f = 0.0;
};

struct RunResult {
  std::vector<IterateRecord> trace;
  std::vector<LevelRecord> levels;
  std::vector<HandoffEntry> handoff;
  Point final_point;
  double final_value = 0.0;
  long oracle_calls = 0;
  int fallback_solves = 0;
  double max_feasibility_violation = 0.0;  // max over steps of dist/radius - 1
};

class DriverError : public Error {
 public:
  DriverError(const std::string& what, RunResult partial);
  const RunResult& partial() const { return partial_; }

 private:
  RunResult partial_;
};

/// Outer radius schedule with an inner sufficient-decrease loop. Each inner
/// pass builds a bundle at x^{j,i}, takes z_bar if
/// (f(x) - f(z_bar)) / delta_j^p >= tau_j and otherwise moves to the next
/// radius. `x_star` only feeds the distance column of the trace.
RunResult global_solve(const Oracle& oracle, const RunConfig& config,
                       const std::optional<Point>& x_star = std::nullopt);

struct EnclosureLevel {
  int j = 0;
  double distance = 0.0;  // in the trust-region norm
  double euclidean_distance = 0.0;
  double delta = 0.0;
  bool enclosed = false;
};

/// Per outer level: is x_star inside the closed trust region around x^j?
std::vector<EnclosureLevel> enclosure_report(const RunResult& run, const Point& x_star,
                                             NormKind norm);

/// Reference minimizer for instances without a closed-form one: a deep q = 1
/// run (max-norm trust regions) from the default start.
Point compute_reference_minimizer(const ProblemInstance& instance, int j_max = 8);

}  // namespace trb
