#include "trb/bundle_builder.hpp"

#include <algorithm>
#include <cmath>

namespace trb {

BuilderError::BuilderError(const std::string& what, BuilderResult best)
    : Error(what), best_(std::move(best)) {}

double gap_threshold(double radius, int q, double sigma, double cap) {
  return std::min(std::pow(radius, q + sigma), cap);
}

BuilderResult compute_W(const Oracle& oracle, const OracleSample& center_sample,
                        const TrustRegion& region, const BuilderParams& params,
                        PointMemory& memory) {
  if (!(params.sigma > 0.0 && params.sigma < 1.0)) throw Error("compute_W: sigma must lie in (0,1)");
  if (!(params.cap > 0.0)) throw Error("compute_W: cap must be positive");
  if (params.max_iter < 1) throw Error("compute_W: max_iter must be >= 1");
  if (center_sample.order != params.q) throw Error("compute_W: center sample has the wrong order");

  const double threshold = gap_threshold(region.radius(), params.q, params.sigma, params.cap);
  SubproblemOptions sub = params.subproblem;
  sub.accuracy = std::min(sub.accuracy, kDefaultTolerances.sub_opt_tol_factor * threshold);

  BuilderResult result{seed_bundle(memory, center_sample, region), Point(), OracleSample(), 0.0,
                       0.0, 0.0, 0, 0, 0};
  for (int iter = 1;; ++iter) {
    sub.seed = derive_seed(params.subproblem.seed, static_cast<std::uint64_t>(iter));
    const SubproblemSolution sol = solve_subproblem(result.bundle, sub);
    if (sol.status == SolveStatus::MaxIterFallback) ++result.fallback_solves;

    OracleSample sample = params.q >= 2 ? oracle.query(sol.z_bar, 2) : oracle.query(sol.z_bar, 1);
    ++result.oracle_calls;
    memory.push(sample);

    result.iterations = iter;
    result.z_bar = sol.z_bar;
    result.theta = sol.theta;
    result.f_z_bar = sample.value;
    result.gap = sample.value - sol.theta;
    result.z_bar_sample = sample;

    if (result.gap <= threshold) return result;
    if (iter >= params.max_iter) {
      throw BuilderError("compute_W: no termination within " + std::to_string(params.max_iter) +
                             " iterations (gap " + std::to_string(result.gap) + ")",
                         result);
    }
    // gap > 0 implies z_bar is not a bundle point
    if (!result.bundle.add(std::move(sample))) {
      throw BuilderError("compute_W: positive gap at an existing bundle point (internal error)",
                         result);
    }
  }
}

}  // namespace trb
