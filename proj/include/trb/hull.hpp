#pragma once

#include <vector>

#include "trb/core_types.hpp"

namespace trb {

struct MinNormPoint {
  Vector point;
  Vector weights;  // convex weights over the input vectors
};

/// Minimum-norm point of conv{vectors} via Wolfe's algorithm.
MinNormPoint min_norm_hull_point(const std::vector<Vector>& vectors);

}  // namespace trb
