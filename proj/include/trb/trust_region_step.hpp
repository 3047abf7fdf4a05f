#pragma once

#include "trb/core_types.hpp"

namespace trb {

struct TrustRegionStep {
  Vector step;
  double model_value = 0.0;  // g'w + w'Bw/2 at the step
  bool on_boundary = false;
  bool hard_case = false;
};

/// Global minimizer of g'w + w'Bw/2 over |w|_2 <= radius for symmetric,
/// possibly indefinite B (eigen-decomposition plus a safeguarded Newton
/// iteration on the secular equation; the hard case is handled explicitly).
TrustRegionStep solve_trust_region_step(const Vector& g, const Matrix& B, double radius);

}  // namespace trb
