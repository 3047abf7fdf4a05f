#pragma once

#include <cstddef>
#include <optional>

#include "trb/cutting_plane_model.hpp"
#include "trb/subproblem.hpp"

namespace trb {

struct BuilderParams {
  int q = 1;
  double sigma = 0.5;
  double cap = 0.1;  // c
  int max_iter = 200;
  SubproblemOptions subproblem;
};

struct BuilderResult {
  Bundle bundle;
  Point z_bar;
  OracleSample z_bar_sample;
  double f_z_bar = 0.0;
  double theta = 0.0;  // model value at z_bar from the same solve
  double gap = 0.0;
  int iterations = 0;
  int oracle_calls = 0;
  int fallback_solves = 0;  // subproblem solves that hit their iteration caps
};

/// Raised when the bundle loop exceeds max_iter; carries the last result.
class BuilderError : public Error {
 public:
  BuilderError(const std::string& what, BuilderResult best);
  const BuilderResult& best() const { return best_; }

 private:
  BuilderResult best_;
};

/// Stopping threshold min(radius^{q+sigma}, cap).
double gap_threshold(double radius, int q, double sigma, double cap);

/// Enriches the bundle at the region center until the model gap at the
/// subproblem solution is at most min(radius^{q+sigma}, cap).
///
/// The initial bundle is the center sample plus the memorized samples that
/// fall inside the region. Every oracle query made here is pushed to
/// `memory`. One oracle query per iteration.
BuilderResult compute_W(const Oracle& oracle, const OracleSample& center_sample,
                        const TrustRegion& region, const BuilderParams& params,
                        PointMemory& memory);

}  // namespace trb
