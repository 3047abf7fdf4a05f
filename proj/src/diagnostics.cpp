#include "trb/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "trb/bundle_builder.hpp"

namespace trb {

const char* to_string(SearchMethod method) {
  switch (method) {
    case SearchMethod::Grid1D: return "grid1d";
    case SearchMethod::Grid2D: return "grid2d";
    case SearchMethod::Grid3D: return "grid3d";
    case SearchMethod::MultiStartPolish: return "multistart-polish";
  }
  return "?";
}

Point compass_search(const ScalarField& f, const TrustRegion& region, Point start,
                     double initial_step, double min_step) {
  Point z = region.contains(start, 0.0) ? std::move(start) : region.project(start);
  double fz = f(z);
  double step = initial_step;
  const auto n = z.size();
  long evals = 0;
  constexpr long kMaxEvals = 200000;
  while (step >= min_step && evals < kMaxEvals) {
    bool improved = false;
    for (Eigen::Index k = 0; k < n; ++k) {
      for (double sign : {1.0, -1.0}) {
        Point trial = z;
        trial(k) += sign * step;
        if (!region.contains(trial, 0.0)) trial = region.project(trial);
        const double ft = f(trial);
        ++evals;
        if (ft < fz) {
          z = std::move(trial);
          fz = ft;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return z;
}

namespace {

SearchMethod pick_method(const TrustRegion& region, const SearchOptions& options) {
  const auto n = region.dim();
  const SearchMethod by_dim = n == 1   ? SearchMethod::Grid1D
                              : n == 2 ? SearchMethod::Grid2D
                                       : SearchMethod::Grid3D;
  if (!options.method) {
    if (n > 3) throw Error("minimize_over_region: lattice search needs dimension <= 3");
    return by_dim;
  }
  if (*options.method == SearchMethod::MultiStartPolish) return SearchMethod::MultiStartPolish;
  if (n > 3 || *options.method != by_dim) {
    throw Error(std::string("minimize_over_region: ") + to_string(*options.method) +
                " does not match dimension " + std::to_string(n));
  }
  return by_dim;
}

// successive lattices of half width 2h around the incumbent, spacing shrinking
std::pair<Point, double> zoom(const ScalarField& f, const TrustRegion& region, Point z, double fz,
                              double h, Exec exec) {
  const int per = region.dim() == 3 ? 11 : 41;
  const double floor = 1e-13 * region.radius();
  for (int level = 0; level < 60 && h > floor; ++level) {
    const Lattice lat(region, z, 2.0 * h, per);
    const auto vals = lattice_values(f, lat, exec);
    const LatticeMin m = lattice_argmin(vals, exec);
    if (m.value < fz) {
      z = lat.point(m.index);
      fz = m.value;
    }
    h = lat.spacing();
  }
  return {std::move(z), fz};
}

}  // namespace

RegionMinimum minimize_over_region(const ScalarField& f, const TrustRegion& region,
                                   const SearchOptions& options) {
  const SearchMethod method = pick_method(region, options);
  RegionMinimum best{region.center(), f(region.center()), method};

  if (method == SearchMethod::MultiStartPolish) {
    Rng rng = make_rng(options.seed, 0x3a11);
    std::vector<Point> starts{region.center()};
    for (int k = 0; k < options.multistart_points; ++k) starts.push_back(sample_in_region(region, rng));
    std::vector<Point> ends(starts.size());
    for_indices(
        starts.size(),
        [&](std::size_t k) {
          ends[k] = compass_search(f, region, starts[k], 0.25 * region.radius(),
                                   1e-10 * region.radius());
        },
        options.exec);
    for (auto& z : ends) {
      const double v = f(z);
      if (v < best.value) best = {std::move(z), v, method};
    }
    return best;
  }

  const int per = region.dim() == 3 ? options.per_axis_3d : options.per_axis;
  const Lattice lat(region, region.center(), region.radius(), per);
  const auto vals = lattice_values(f, lat, options.exec);

  std::vector<std::size_t> order(vals.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const bool na = std::isnan(vals[a]), nb = std::isnan(vals[b]);
    if (na != nb) return nb;
    return vals[a] < vals[b];
  });

  std::vector<Point> picked;
  const double sep = 3.0 * lat.spacing();
  for (std::size_t idx : order) {
    if (static_cast<int>(picked.size()) >= options.polish_candidates) break;
    if (std::isnan(vals[idx])) break;
    Point z = lat.point(idx);
    const bool far = std::all_of(picked.begin(), picked.end(), [&](const Point& w) {
      return (w - z).lpNorm<Eigen::Infinity>() > sep;
    });
    if (far) picked.push_back(std::move(z));
  }

  for (const Point& c : picked) {
    auto [z, v] = zoom(f, region, c, f(c), lat.spacing(), options.exec);
    if (v < best.value) best = {std::move(z), v, method};
  }
  return best;
}

Point z_star_oracle(const Oracle& oracle, const TrustRegion& region, const SearchOptions& options) {
  return minimize_over_region([&](const Point& z) { return oracle.value(z); }, region, options).z;
}

LambdaEstimate lambda_p(const Oracle& oracle, const Point& x, double delta, int p, NormKind norm,
                        const SearchOptions& options) {
  if (p < 1) throw Error("lambda_p: p must be >= 1");
  const TrustRegion region(x, delta, norm);
  const RegionMinimum m =
      minimize_over_region([&](const Point& z) { return oracle.value(z); }, region, options);
  const double fx = oracle.value(x);
  LambdaEstimate out;
  out.x = x;
  out.delta = delta;
  out.p = p;
  out.method = m.method;
  out.z_star = m.value < fx ? m.z : x;
  out.lambda_value = std::max(0.0, fx - std::min(fx, m.value)) / std::pow(delta, p);
  return out;
}

ProbeResult property_p_probe(const Oracle& oracle, const Point& x_star, int p,
                             const ProbeOptions& options) {
  if (!(options.box_radius > 0.0)) throw Error("property_p_probe: box radius must be positive");
  if (options.num_samples < 1) throw Error("property_p_probe: need at least one sample");
  const TrustRegion box(x_star, options.box_radius, NormKind::MaxNorm);
  const ScalarField f = [&](const Point& z) { return oracle.value(z); };
  Rng rng = make_rng(options.seed, 0x9e0b);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<ProbeSample> samples;
  std::vector<Point> starts;
  while (static_cast<int>(samples.size()) < options.num_samples) {
    Point x = sample_in_region(box, rng);
    const double r = norm(x - x_star, options.norm);
    if (!(r > 0.0)) continue;
    const double delta = r * std::pow(10.0, -6.0 * (1.0 - unit(rng)));  // (1e-6 r, r]
    samples.push_back({x, std::min(delta, r * (1.0 - 1e-12)), 0.0, false});
    starts.push_back(std::move(x));
  }

  if (options.descent_candidates) {
    std::vector<Point> minima(starts.size());
    for_indices(
        starts.size(),
        [&](std::size_t k) {
          minima[k] = compass_search(f, box, starts[k], 0.05 * options.box_radius,
                                     1e-13 * options.box_radius);
        },
        options.search.exec);
    for (auto& xm : minima) {
      const double rho = norm(xm - x_star, options.norm);
      const double draw = unit(rng);
      if (rho < 1e-6 * options.box_radius) continue;
      samples.push_back({std::move(xm), rho * std::pow(10.0, -2.0 - 4.0 * draw), 0.0, true});
    }
  }

  SearchOptions inner = options.search;
  inner.exec = Exec::Serial;
  for_indices(
      samples.size(),
      [&](std::size_t k) {
        samples[k].lambda =
            lambda_p(oracle, samples[k].x, samples[k].delta, p, options.norm, inner).lambda_value;
      },
      options.search.exec);

  ProbeResult out;
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return samples[a].lambda < samples[b].lambda; });
  out.empirical_inf = samples[order.front()].lambda;
  for (std::size_t k = 0; k < order.size() && k < 5; ++k) out.witnesses.push_back(samples[order[k]]);
  out.samples = std::move(samples);
  return out;
}

double criticality_certificate(const Oracle& oracle, const Point& x, double epsilon,
                               int num_samples, std::uint64_t seed, NormKind norm_kind) {
  if (!(epsilon > 0.0)) throw Error("criticality_certificate: epsilon must be positive");
  const TrustRegion ball(x, epsilon, norm_kind);
  Rng rng = make_rng(seed, 0xc217);
  std::vector<Point> points{x};
  for (int k = 0; k < num_samples; ++k) points.push_back(sample_in_region(ball, rng));
  std::vector<Vector> grads(points.size());
  for_indices(
      points.size(), [&](std::size_t k) { grads[k] = oracle.query(points[k], 1).grad; },
      Exec::Parallel);
  return min_norm_hull_point(grads).point.norm();
}

RemainderEstimate remainder_constant_estimator(const Oracle& oracle, const Point& x,
                                               const std::vector<double>& deltas,
                                               const RemainderOptions& options) {
  if (deltas.size() < 4) throw Error("remainder_constant_estimator: need at least 4 radii");
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    if (!(deltas[k] > 0.0)) throw Error("remainder_constant_estimator: radii must be positive");
    if (k > 0 && !(deltas[k] < deltas[k - 1])) {
      throw Error("remainder_constant_estimator: radii must be decreasing");
    }
  }
  const int q = options.q;
  const NormKind kind = q == 1 ? NormKind::MaxNorm : NormKind::Euclidean;
  BuilderParams params;
  params.q = q;
  params.sigma = options.sigma;
  params.cap = options.cap;
  params.max_iter = options.max_builder_iter;
  const OracleSample center = oracle.query(x, q);

  RemainderEstimate out;
  out.deltas = deltas;
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    const TrustRegion region(x, deltas[k], kind);
    PointMemory memory;
    memory.push(center);
    params.subproblem.seed = derive_seed(options.seed, k);
    const BuilderResult built = compute_W(oracle, center, region, params, memory);
    const auto& W = built.bundle.samples();

    Rng rng = make_rng(options.seed, 0x4e11 + k);
    double worst = 0.0;
    for (int s = 0; s < options.samples_per_delta; ++s) {
      const Point z = s % 2 == 0 ? sample_in_region(region, rng) : sample_on_boundary(region, rng);
      double fw = -std::numeric_limits<double>::infinity();
      for (const auto& y : W) {
        const auto b = oracle.branch_value(y.base, z);
        if (!b) {
          out.proxy = true;
          fw = oracle.value(z);
          break;
        }
        fw = std::max(fw, *b);
      }
      worst = std::max(worst, std::abs(fw - model_eval(built.bundle, z).value));
    }
    out.max_remainder.push_back(worst);
    out.k_hat = std::max(out.k_hat, worst / std::pow(deltas[k], q + 1));
  }

  // rounding floor of the remainder evaluation
  const double floor = 20.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(center.value));
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    if (out.max_remainder[k] > floor) {
      lx.push_back(std::log(deltas[k]));
      ly.push_back(std::log(out.max_remainder[k]));
    }
  }
  if (lx.size() < 2) {
    out.slope = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  out.slope = sxy / sxx;
  return out;
}

}  // namespace trb
