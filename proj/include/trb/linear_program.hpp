#pragma once

#include <cstddef>
#include <vector>

#include "trb/core_types.hpp"

namespace trb {

struct MaxAffineLpResult {
  Vector step;                       // minimizing d, |d|_inf <= radius
  double objective = 0.0;            // max_k (a_k + b_k'd) at `step`
  Vector multipliers;                // convex weights on the cuts (dual solution)
  std::vector<std::size_t> active;   // cuts with zero slack in the final basis
  double duality_gap = 0.0;          // objective minus the dual bound, >= 0 up to rounding
  int pivots = 0;
};

/// Solves  min_{|d|_inf <= radius} max_k (constants_k + slopes.row(k) d)
/// exactly with a dense bounded-variable primal simplex on the epigraph form.
///
/// The start (d at its lower bounds, theta at the max) is feasible, so no
/// phase one is needed. Dantzig pricing falls back to Bland's rule after a
/// run of degenerate pivots.
MaxAffineLpResult solve_max_affine_lp(const Vector& constants, const Matrix& slopes,
                                      double radius);

}  // namespace trb
