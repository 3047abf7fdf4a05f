#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "trb/grid_kernels.hpp"
#include "trb/hull.hpp"
#include "trb/oracle.hpp"

namespace trb {

enum class SearchMethod { Grid1D, Grid2D, Grid3D, MultiStartPolish };

const char* to_string(SearchMethod method);

struct SearchOptions {
  /// Empty: lattice search chosen by dimension (errors above 3).
  std::optional<SearchMethod> method;
  int per_axis = 201;     // dim <= 2
  int per_axis_3d = 61;
  int polish_candidates = 4;
  int multistart_points = 32;
  std::uint64_t seed = 0;
  Exec exec = Exec::Parallel;
};

struct RegionMinimum {
  Point z;
  double value = 0.0;
  SearchMethod method = SearchMethod::Grid1D;
};

/// Brute-force minimum of f over a trust region: a dense lattice, then
/// zoomed lattices around the best few separated lattice points. The region
/// center is always a candidate.
RegionMinimum minimize_over_region(const ScalarField& f, const TrustRegion& region,
                                   const SearchOptions& options = {});

/// argmin of f over the region.
Point z_star_oracle(const Oracle& oracle, const TrustRegion& region,
                    const SearchOptions& options = {});

struct LambdaEstimate {
  Point x;
  double delta = 0.0;
  int p = 1;
  Point z_star;
  double lambda_value = 0.0;
  SearchMethod method = SearchMethod::Grid1D;
};

/// (f(x) - min_{ball} f) / delta^p.
LambdaEstimate lambda_p(const Oracle& oracle, const Point& x, double delta, int p,
                        NormKind norm = NormKind::Euclidean, const SearchOptions& options = {});

struct ProbeSample {
  Point x;
  double delta = 0.0;
  double lambda = 0.0;
  bool from_local_min = false;
};

struct ProbeOptions {
  double box_radius = 0.2;
  int num_samples = 200;
  std::uint64_t seed = 0;
  NormKind norm = NormKind::Euclidean;
  /// Also probe the local minimum reached by pattern search from each sample.
  bool descent_candidates = true;
  SearchOptions search;
};

struct ProbeResult {
  double empirical_inf = 0.0;
  std::vector<ProbeSample> witnesses;  // five smallest, ascending
  std::vector<ProbeSample> samples;    // in generation order
};

/// Empirical infimum of lambda_p over pairs (x, delta) with x in the box
/// around x_star and delta in (1e-6 r, r), r = |x - x_star|.
ProbeResult property_p_probe(const Oracle& oracle, const Point& x_star, int p,
                             const ProbeOptions& options = {});

/// Local minimum by compass search restricted to `region`.
Point compass_search(const ScalarField& f, const TrustRegion& region, Point start,
                     double initial_step, double min_step);

/// Norm of the min-norm point of the convex hull of gradients sampled
/// uniformly in the epsilon ball around x (x included).
double criticality_certificate(const Oracle& oracle, const Point& x, double epsilon,
                               int num_samples, std::uint64_t seed,
                               NormKind norm = NormKind::Euclidean);

struct RemainderOptions {
  int q = 1;
  double sigma = 0.5;
  double cap = 0.1;
  int samples_per_delta = 200;
  int max_builder_iter = 200;
  std::uint64_t seed = 0;
};

struct RemainderEstimate {
  double k_hat = 0.0;
  double slope = 0.0;  // NaN when fewer than two deltas rise above rounding
  /// True when the oracle has no branch values and f - T was used instead.
  bool proxy = false;
  std::vector<double> deltas;
  std::vector<double> max_remainder;
};

/// For each delta: build a bundle at x, then sample |f^W - T^{q,W}| in the
/// ball (half interior, half boundary). K-hat is the largest
/// max|R| / delta^{q+1}; the slope is a least-squares fit of log max|R|
/// against log delta. The ball norm follows q (max-norm for q = 1).
RemainderEstimate remainder_constant_estimator(const Oracle& oracle, const Point& x,
                                               const std::vector<double>& deltas,
                                               const RemainderOptions& options = {});

}  // namespace trb
