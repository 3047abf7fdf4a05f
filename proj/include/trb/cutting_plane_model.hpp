#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <vector>

#include "trb/core_types.hpp"
#include "trb/oracle.hpp"

namespace trb {

/// Coordinates closer than this (max-abs) are treated as the same bundle point.
inline constexpr double kDuplicateTol = 1e-14;

bool same_point(const Point& a, const Point& b, double tol = kDuplicateTol);

/// Nonempty set of oracle samples whose base points lie in one trust region.
class Bundle {
 public:
  Bundle(OracleSample first, TrustRegion region);

  const std::vector<OracleSample>& samples() const { return samples_; }
  const TrustRegion& region() const { return region_; }
  std::size_t size() const { return samples_.size(); }
  int order() const { return samples_.front().order; }

  bool has_point(const Point& z) const;

  /// Adds a sample; returns false (and leaves the bundle unchanged) when its
  /// base duplicates an existing point. Throws if the base is outside the
  /// region or the order differs.
  bool add(OracleSample sample);

 private:
  std::vector<OracleSample> samples_;
  TrustRegion region_;
};

struct ModelValue {
  double value;
  std::size_t active_index;  // first sample attaining the max
};

/// max over bundle samples of their Taylor expansions at z.
ModelValue model_eval(const Bundle& bundle, const Point& z);

/// f(z) minus the model value at z. Nonpositive at bundle points.
double model_gap(const Bundle& bundle, const Oracle& oracle, const Point& z);

/// A cut re-expanded around the trust-region center x, as a function of the
/// step d = z - x:  constant + linear'd + d'hessian d / 2.
struct CenteredCut {
  double constant;
  Vector linear;
  std::optional<Matrix> hessian;

  double eval(const Vector& d) const {
    double v = constant + linear.dot(d);
    if (hessian) v += 0.5 * d.dot(*hessian * d);
    return v;
  }
  Vector gradient(const Vector& d) const {
    return hessian ? Vector(linear + *hessian * d) : linear;
  }
};

std::vector<CenteredCut> centered_cuts(const Bundle& bundle);

/// FIFO memory of the most recent oracle samples.
class PointMemory {
 public:
  explicit PointMemory(std::size_t capacity = 100);

  void push(const OracleSample& sample);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  const std::deque<OracleSample>& items() const { return items_; }
  void clear() { items_.clear(); }

 private:
  std::size_t capacity_;
  std::deque<OracleSample> items_;
};

/// {center} plus the memorized samples inside the region, without duplicates.
/// Memorized samples of a different order than the center are skipped.
Bundle seed_bundle(const PointMemory& memory, const OracleSample& center_sample,
                   const TrustRegion& region);

}  // namespace trb
