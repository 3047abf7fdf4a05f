#include "trb/driver.hpp"

#include <cmath>

namespace trb {

double RunConfig::radius(int j) const {
  if (j < 1) throw Error("RunConfig: level index starts at 1");
  if (!deltas.empty()) {
    if (j > static_cast<int>(deltas.size())) throw Error("RunConfig: explicit radius schedule too short");
    return deltas[static_cast<std::size_t>(j - 1)];
  }
  return delta0 * std::pow(delta_ratio, j - 1);
}

double RunConfig::tau_at(int j) const {
  switch (tau_schedule) {
    case TauSchedule::Constant: return tau;
    case TauSchedule::Vanishing: return tau * std::pow(tau_ratio, j);
    case TauSchedule::Explicit:
      if (j < 1 || j > static_cast<int>(taus.size())) throw Error("RunConfig: explicit tau schedule too short");
      return taus[static_cast<std::size_t>(j - 1)];
  }
  return tau;
}

void RunConfig::validate() const {
  if (q < 1 || q > 2) throw Error("RunConfig: q must be 1 or 2");
  if (p < 1 || p > q) throw Error("RunConfig: need 1 <= p <= q");
  if (deltas.empty()) {
    if (!(delta0 > 0.0)) throw Error("RunConfig: delta0 must be positive");
    if (!(delta_ratio > 0.0 && delta_ratio < 1.0)) throw Error("RunConfig: delta_ratio must lie in (0,1)");
  } else {
    if (static_cast<int>(deltas.size()) < j_max) throw Error("RunConfig: explicit radii shorter than j_max");
    for (double d : deltas) {
      if (!(d > 0.0)) throw Error("RunConfig: radii must be positive");
    }
  }
  if (tau_schedule == TauSchedule::Explicit && static_cast<int>(taus.size()) < j_max) {
    throw Error("RunConfig: explicit tau schedule shorter than j_max");
  }
  for (int j = 1; j <= j_max; ++j) {
    if (!(tau_at(j) > 0.0)) throw Error("RunConfig: tau must be positive");
  }
  if (tau_schedule == TauSchedule::Vanishing && !(tau_ratio > 0.0 && tau_ratio < 1.0)) {
    throw Error("RunConfig: tau_ratio must lie in (0,1)");
  }
  if (!(sigma > 0.0 && sigma < 1.0)) throw Error("RunConfig: sigma must lie in (0,1)");
  if (!(cap > 0.0)) throw Error("RunConfig: cap must be positive");
  if (j_max < 1) throw Error("RunConfig: j_max must be >= 1");
  if (max_inner < 1) throw Error("RunConfig: max_inner must be >= 1");
  if (x0.size() == 0) throw Error("RunConfig: missing x0");
  require_finite(x0, "RunConfig x0");
}

DriverError::DriverError(const std::string& what, RunResult partial)
    : Error(what), partial_(std::move(partial)) {}

RunResult global_solve(const Oracle& oracle, const RunConfig& config,
                       const std::optional<Point>& x_star) {
  config.validate();
  if (config.x0.size() != oracle.dim()) throw Error("global_solve: x0 dimension mismatch");

  const NormKind kind = config.norm();
  PointMemory memory(config.memory_capacity);
  BuilderParams params;
  params.q = config.q;
  params.sigma = config.sigma;
  params.cap = config.cap;
  params.max_iter = config.max_builder_iter;

  RunResult run;
  Point x = config.x0;
  OracleSample x_sample = oracle.query(x, config.q);
  memory.push(x_sample);
  run.oracle_calls = 1;

  for (int j = 1; j <= config.j_max; ++j) {
    const double delta = config.radius(j);
    const double tau = config.tau_at(j);
    const double delta_p = std::pow(delta, config.p);
    LevelRecord level;
    level.j = j;
    level.delta = delta;
    level.tau = tau;

    for (int i = 0;; ++i) {
      if (i >= config.max_inner) {
        run.final_point = x;
        run.final_value = x_sample.value;
        throw DriverError("global_solve: inner loop exceeded max_inner at level " + std::to_string(j),
                          std::move(run));
      }
      const TrustRegion region(x, delta, kind);
      params.subproblem.seed = derive_seed(config.seed, (static_cast<std::uint64_t>(j) << 32) |
                                                            static_cast<std::uint64_t>(i));
      BuilderResult built = [&] {
        try {
          return compute_W(oracle, x_sample, region, params, memory);
        } catch (const BuilderError& e) {
          run.oracle_calls += e.best().oracle_calls;
          run.final_point = x;
          run.final_value = x_sample.value;
          throw DriverError(std::string("global_solve: ") + e.what(), std::move(run));
        }
      }();
      run.oracle_calls += built.oracle_calls;
      run.fallback_solves += built.fallback_solves;
      run.max_feasibility_violation =
          std::max(run.max_feasibility_violation, region.distance(built.z_bar) / delta - 1.0);

      IterateRecord rec;
      rec.j = j;
      rec.i = i;
      rec.x = x;
      rec.f = x_sample.value;
      rec.delta = delta;
      rec.tau = tau;
      rec.f_trial = built.f_z_bar;
      rec.decrease_ratio = (x_sample.value - built.f_z_bar) / delta_p;
      rec.gap = built.gap;
      rec.bundle_size = built.bundle.size();
      rec.builder_iterations = built.iterations;
      rec.oracle_calls_cumulative = run.oracle_calls;
      rec.accepted = rec.decrease_ratio >= tau;
      if (x_star) rec.dist_to_xstar = (x - *x_star).norm();
      run.trace.push_back(rec);

      if (!rec.accepted) {
        level.steps = i;
        level.decrease_ratio = rec.decrease_ratio;
        level.gap = rec.gap;
        break;
      }
      x = built.z_bar;
      x_sample = std::move(built.z_bar_sample);
    }

    level.x = x;
    level.f = x_sample.value;
    level.lambda_bound = tau + std::pow(delta, config.q - config.p + config.sigma) +
                         config.remainder_constant * std::pow(delta, config.q - config.p + 1);
    run.levels.push_back(level);
    run.handoff.push_back({j, x, delta, x_sample.value});
  }
  run.final_point = x;
  run.final_value = x_sample.value;
  return run;
}

std::vector<EnclosureLevel> enclosure_report(const RunResult& run, const Point& x_star,
                                             NormKind norm_kind) {
  std::vector<EnclosureLevel> out;
  for (const auto& lvl : run.levels) {
    EnclosureLevel e;
    e.j = lvl.j;
    e.delta = lvl.delta;
    e.distance = norm(lvl.x - x_star, norm_kind);
    e.euclidean_distance = (lvl.x - x_star).norm();
    e.enclosed = e.distance <= lvl.delta;
    out.push_back(e);
  }
  return out;
}

Point compute_reference_minimizer(const ProblemInstance& instance, int j_max) {
  const auto oracle = oracle_of(instance);
  RunConfig cfg;
  cfg.p = 1;
  cfg.q = 1;
  cfg.j_max = j_max;
  cfg.max_builder_iter = 2000;
  cfg.x0 = default_start(instance);
  cfg.seed = derive_seed(instance.seed, 0xbe5);
  return global_solve(*oracle, cfg).final_point;
}

}  // namespace trb
