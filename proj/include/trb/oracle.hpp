#pragma once

#include <cstdint>
#include <optional>

#include "trb/core_types.hpp"

namespace trb {

/// Output of one oracle call: f(y) and the derivatives of one active
/// selection function at y, up to the requested order (1 or 2).
///
/// The oracle also records which selection branch it picked. That tag is
/// private: algorithm code never sees it. Tests and the finite-difference
/// checker read it through `inspect_selector_tag`.
class OracleSample {
 public:
  OracleSample() = default;
  OracleSample(Point base, double value, Vector grad, std::optional<Matrix> hess, int order,
               std::uint64_t selector_tag);

  Point base;
  double value = 0.0;
  Vector grad;
  std::optional<Matrix> hess;  // present iff order >= 2
  int order = 1;

  Eigen::Index dim() const { return base.size(); }

 private:
  std::uint64_t selector_tag_ = 0;
  friend std::uint64_t inspect_selector_tag(const OracleSample& sample);
};

std::uint64_t inspect_selector_tag(const OracleSample& sample);

/// f = max_s f_s with access to one active branch per point. Implementations
/// are immutable after construction and may be queried concurrently.
class Oracle {
 public:
  virtual ~Oracle() = default;

  virtual Eigen::Index dim() const = 0;

  /// Value and derivatives of the branch chosen at x. Deterministic in x.
  virtual OracleSample query(const Point& x, int order) const = 0;

  virtual double value(const Point& x) const = 0;

  /// f_{s(y)}(z): the branch selected at y, evaluated at z. Empty when the
  /// family has no explicitly enumerable branch set.
  virtual std::optional<double> branch_value(const Point& y, const Point& z) const;
};

/// q-order Taylor expansion of the sampled branch, evaluated at z.
double taylor_eval(const OracleSample& sample, const Point& z);

struct FdCheckResult {
  double max_rel_error = 0.0;
  bool kink_adjacent = false;
  int probe_pairs = 0;
  int rejected_pairs = 0;
};

/// Central differences of the selected branch against the oracle's gradient
/// (and Hessian when the oracle provides order 2). A coordinate pair whose
/// probes land on a different branch is rejected; if more than half of the
/// pairs are rejected the point is reported as kink-adjacent.
FdCheckResult finite_difference_check(const Oracle& oracle, const Point& x, double h,
                                      int order = 2);

}  // namespace trb
