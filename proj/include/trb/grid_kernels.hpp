#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "trb/core_types.hpp"

namespace trb {

using ScalarField = std::function<double(const Point&)>;

enum class Exec { Serial, Parallel };

/// Tensor lattice with `per_axis` points per coordinate spanning
/// [center - half_width, center + half_width]. Lattice points outside the
/// region are replaced by their projection onto it, so the boundary is
/// covered as well. Index order is lexicographic, last coordinate fastest.
class Lattice {
 public:
  Lattice(const TrustRegion& region, Point center, double half_width, int per_axis);

  std::size_t size() const { return size_; }
  double spacing() const { return spacing_; }
  Point point(std::size_t index) const;

 private:
  const TrustRegion* region_;
  Point center_;
  double half_width_;
  int per_axis_;
  double spacing_;
  std::size_t size_;
};

/// f at every lattice point. Both policies return identical vectors.
std::vector<double> lattice_values(const ScalarField& f, const Lattice& lattice, Exec exec);

/// Calls fn(i) for every i < count. fn must be safe to run concurrently.
void for_indices(std::size_t count, const std::function<void(std::size_t)>& fn, Exec exec);

/// fn(0), ..., fn(count - 1), evaluated in parallel or serially.
std::vector<double> map_indices(std::size_t count, const std::function<double(std::size_t)>& fn,
                                Exec exec);

struct LatticeMin {
  std::size_t index;
  double value;
};

/// Smallest value; ties go to the smallest index. NaN entries are skipped.
LatticeMin lattice_argmin(const std::vector<double>& values, Exec exec);

}  // namespace trb
