#pragma once

#include <cstdint>
#include <vector>

#include "trb/cutting_plane_model.hpp"

namespace trb {

enum class SolveStatus { Optimal, MaxIterFallback };

struct SubproblemSolution {
  Point z_bar;
  double theta = 0.0;  // model value at z_bar
  SolveStatus status = SolveStatus::Optimal;
  double kkt_residual = 0.0;
  std::vector<std::size_t> active_cuts;
};

struct SubproblemOptions {
  /// Absolute accuracy target on theta for the smoothed q = 2 solver.
  double accuracy = 1e-10;
  std::uint64_t seed = 0;
  int random_restarts = 4;
  /// Nonconvex models: besides the center, this many of the best-ranked
  /// restart points get the full continuation; the rest stay candidates.
  int full_restarts = 8;
  int max_newton_per_stage = 80;
};

/// min over the bundle's region of the max-affine model (q = 1, max-norm).
SubproblemSolution solve_linear(const Bundle& bundle);

/// min over the bundle's Euclidean ball of the max-of-quadratics model (q = 2).
///
/// Log-sum-exp smoothing with a temperature schedule 1e-1, 1e-2, ... times
/// the model's variation over the ball, continued until the smoothing error
/// drops below the accuracy target. Each stage runs Newton steps whose
/// subproblem is solved exactly on the ball, followed by backtracking. The
/// best point under the true max model among all stage outputs and all
/// restart points is returned, so theta never exceeds the model at the center.
SubproblemSolution solve_quadratic(const Bundle& bundle, const SubproblemOptions& options = {});

/// Dispatches on (order, norm): (1, max) and (2, Euclidean) are supported.
SubproblemSolution solve_subproblem(const Bundle& bundle, const SubproblemOptions& options = {});

}  // namespace trb
