// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include "trb/bundle_builder.hpp"
#include "trb/diagnostics.hpp"
#include "trb/driver.hpp"
#include "trb/problems.hpp"
#include "trb/subproblem.hpp"

#include "test_util.hpp"

using namespace trb;
using namespace trb::testing;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok) { pass = pass && ok; }
};

int failures = 0;

void report(int id, const char* title, Verdict& v, double seconds) {
  std::printf("%s criterion %d (%s): %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", id, title,
              v.detail.str().c_str(), seconds);
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

template <class F>
void criterion(int id, const char* title, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    body(v);
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail << " exception: " << e.what();
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(id, title, v, s);
}

struct Setting {
  const char* name;
  Family family;
  int n, m, q;
};

struct DriverRun {
  const Setting* setting;
  std::uint64_t seed;
  ProblemInstance instance;
  RunConfig config;
  RunResult result;
};

std::vector<DriverRun> all_runs;  // every driver run, for the invariant suite

const Setting kSettings[] = {
    {"max-quartic sharp n=20 m=40 q=p=1", Family::MaxQuartic, 20, 40, 1},
    {"max-quartic quadratic n=20 m=15 q=p=2", Family::MaxQuartic, 20, 15, 2},
    {"sum-abs-quartic sharp n=10 m=40 q=p=1", Family::SumAbsQuartic, 10, 40, 1},
    {"sum-abs-quartic quadratic n=20 m=16 q=p=2", Family::SumAbsQuartic, 20, 16, 2},
};

RunConfig defaults_for(const ProblemInstance& inst, int q, std::uint64_t seed) {
  RunConfig cfg;
  cfg.q = q;
  cfg.p = q;
  cfg.seed = seed;
  cfg.x0 = default_start(inst);
  return cfg;
}

void enclosure_reproduction(Verdict& v) {
  for (const Setting& s : kSettings) {
    int ok = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      DriverRun run{&s, seed, generate(s.family, s.n, s.m, seed), {}, {}};
      run.config = defaults_for(run.instance, s.q, seed);
      const auto oracle = oracle_of(run.instance);
      run.result = global_solve(*oracle, run.config, run.instance.x_star);
      bool enclosed = run.result.levels.size() == 5;
      for (const auto& e : enclosure_report(run.result, *run.instance.x_star, run.config.norm())) {
        enclosed = enclosed && e.enclosed;
      }
      ok += enclosed ? 1 : 0;
      all_runs.push_back(std::move(run));
    }
    v.require(ok >= 9);
    v.detail << " " << s.name << ": " << ok << "/10;";
  }
}

void shrinking_start_schedule(Verdict& v) {
  const auto inst = generate(Family::ToyQuadratic, 1, 0, 0);
  const auto oracle = oracle_of(inst);
  const RunResult run = global_solve(*oracle, outside_start_config());
  int seen = 0;
  double worst = 0.0;
  for (const auto& r : run.trace) {
    if (r.i != 0) continue;
    const double expected = std::pow(0.5, r.j * r.j);
    worst = std::max(worst, std::abs(r.x(0) - expected));
    v.require(r.x(0) > r.delta);
    ++seen;
  }
  v.require(seen == 4 && worst <= 1e-12);
  v.detail << " x^{j,0} for j=1..4, max error " << worst << ", all > delta_j";
}

void termination_bound(Verdict& v) {
  int worst = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = generate(Family::MaxQuartic, 5, 4, seed);
    const auto oracle = oracle_of(inst);
    Rng rng = make_rng(seed, 7);
    const Point x = sample_in_region(TrustRegion(Point::Zero(5), 1e-3, NormKind::MaxNorm), rng);
    for (int q : {1, 2}) {
      PointMemory mem;
      BuilderParams params;
      params.q = q;
      const TrustRegion r(x, 1e-3, q == 1 ? NormKind::MaxNorm : NormKind::Euclidean);
      worst = std::max(worst, compute_W(*oracle, oracle->query(x, q), r, params, mem).iterations);
    }
  }
  v.require(worst <= 4);
  v.detail << " max iterations over 20 instances and q in {1,2}: " << worst;
}

void remainder_order(Verdict& v) {
  const auto oracle = oracle_of(generate(Family::MaxQuartic, 2, 3, 1));
  Point x(2);
  x << 0.3, -0.2;
  for (int q : {1, 2}) {
    RemainderOptions opt;
    opt.q = q;
    const RemainderEstimate e = remainder_constant_estimator(*oracle, x, {1e-1, 1e-2, 1e-3, 1e-4}, opt);
    v.require(e.slope >= q + 0.75 && e.slope <= q + 1.25);
    v.detail << " q=" << q << " slope " << e.slope << " K_hat " << e.k_hat << ";";
  }
}

void subproblem_equivalence(Verdict& v) {
  double worst_lp = 0.0, worst_quad = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Bundle b = random_bundle(seed, 1);
    worst_lp = std::max(worst_lp, std::abs(solve_linear(b).theta - grid_theta(b)));
  }
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Bundle b = random_bundle(seed, 2);
    SubproblemOptions opt;
    opt.seed = seed;
    worst_quad = std::max(worst_quad, std::abs(solve_quadratic(b, opt).theta - grid_theta(b)));
  }
  double slack = 0.0;
  for (const auto& r : all_runs) slack = std::max(slack, r.result.max_feasibility_violation);
  v.require(worst_lp <= 1e-6 && worst_quad <= 1e-6 && slack <= 1e-9);
  v.detail << " max |theta - oracle|: LP " << worst_lp << ", quadratic " << worst_quad
           << "; max relative feasibility slack over " << all_runs.size() << " runs " << slack;
}

void lambda_certificate(Verdict& v) {
  struct Case {
    const char* name;
    Family family;
    int m, q;
  };
  const Case cases[] = {{"max-quartic n=2 m=4 q=p=1", Family::MaxQuartic, 4, 1},
                        {"max-quartic n=2 m=2 q=p=2", Family::MaxQuartic, 2, 2},
                        {"sum-abs-quartic n=2 m=4 q=p=1", Family::SumAbsQuartic, 4, 1}};
  for (const Case& c : cases) {
    const auto inst = generate(c.family, 2, c.m, 1);
    const auto oracle = oracle_of(inst);
    RunConfig cfg = defaults_for(inst, c.q, 1);
    const RunResult run = global_solve(*oracle, cfg, inst.x_star);
    all_runs.push_back({nullptr, 1, inst, cfg, run});
    double k_max = 0.0, worst_margin = -INFINITY;
    for (const auto& level : run.levels) {
      RemainderOptions ro;
      ro.q = c.q;
      ro.samples_per_delta = 100;
      const double d = level.delta;
      const double k_hat =
          remainder_constant_estimator(*oracle, level.x, {d, 1e-1 * d, 1e-2 * d, 1e-3 * d}, ro).k_hat;
      k_max = std::max(k_max, k_hat);
      const double bound = level.tau + std::pow(d, cfg.q - cfg.p + cfg.sigma) +
                           k_hat * std::pow(d, cfg.q - cfg.p + 1);
      const double lambda = lambda_p(*oracle, level.x, d, cfg.p, cfg.norm()).lambda_value;
      v.require(lambda <= bound);
      worst_margin = std::max(worst_margin, lambda - bound);
    }
    v.detail << " " << c.name << ": max(lambda - bound) " << worst_margin << ";";

    RunConfig van = cfg;
    van.tau_schedule = TauSchedule::Vanishing;
    van.remainder_constant = k_max;
    const RunResult vrun = global_solve(*oracle, van, inst.x_star);
    all_runs.push_back({nullptr, 1, inst, van, vrun});
    bool strict = vrun.levels.size() == 5;
    for (std::size_t k = 1; k < vrun.levels.size(); ++k) {
      strict = strict && vrun.levels[k].lambda_bound < vrun.levels[k - 1].lambda_bound;
    }
    v.require(strict);
    v.detail << (strict ? " vanishing-tau bound strictly decreasing;" : " vanishing-tau bound NOT decreasing;");
  }
}

void property_p_falsification(Verdict& v) {
  for (int p : {1, 2}) {
    const auto inst = generate(Family::SineGrowth, 1, 0, 0, p);
    ProbeOptions opt;
    opt.seed = static_cast<std::uint64_t>(p);
    const ProbeResult r = property_p_probe(*oracle_of(inst), *inst.x_star, p, opt);
    bool witness = false;
    for (const auto& w : r.witnesses) {
      witness = witness || (w.from_local_min && w.x(0) != 0.0 && w.lambda <= 1e-6);
    }
    v.require(r.empirical_inf <= 1e-6 && witness);
    v.detail << " sine p=" << p << " inf " << r.empirical_inf;
    if (!r.witnesses.empty()) v.detail << " at x=" << r.witnesses.front().x(0);
    v.detail << ";";
  }
  const auto sharp = generate(Family::MaxQuartic, 2, 4, 1);
  ProbeOptions opt;
  opt.seed = 1;
  const ProbeResult r = property_p_probe(*oracle_of(sharp), *sharp.x_star, 1, opt);
  v.require(r.empirical_inf >= 1e-3);
  v.detail << " max-quartic sharp n=2 m=4 p=1 inf " << r.empirical_inf;
}

void monotone_descent(Verdict& v) {
  long accepted = 0, records = 0;
  for (const auto& run : all_runs) {
    const int p = run.config.p;
    const auto& trace = run.result.trace;
    for (std::size_t k = 0; k < trace.size(); ++k) {
      const auto& r = trace[k];
      ++records;
      if (r.accepted) {
        ++accepted;
        v.require(r.decrease_ratio >= r.tau);
        v.require(r.f - r.f_trial >= r.tau * std::pow(r.delta, p) * (1.0 - 1e-14));
      }
      if (k > 0) v.require(r.f <= trace[k - 1].f);
    }
    const auto& levels = run.result.levels;
    for (std::size_t k = 1; k < levels.size(); ++k) v.require(levels[k].f <= levels[k - 1].f);
  }
  v.detail << " " << all_runs.size() << " runs, " << records << " inner records, " << accepted
           << " accepted steps";
}

void oracle_correctness(Verdict& v) {
  struct Case {
    ProblemInstance inst;
    double scale;
    int order;
  };
  std::vector<Case> cases{
      {generate(Family::MaxQuartic, 4, 6, 1), 1.0, 2},
      {generate(Family::SumAbsQuartic, 4, 6, 1), 1.0, 2},
      {generate(Family::MaxEigenvalue, 5, 6, 1), 1.0, 1},
      {generate(Family::SineGrowth, 1, 0, 0, 1), 0.5, 2},
      {generate(Family::SineGrowth, 1, 0, 0, 2), 0.5, 2},
      {generate(Family::ToyQuadratic, 3, 0, 0), 1.0, 2},
  };
  Rng rng = make_rng(9, 0);
  double worst = 0.0;
  for (const auto& c : cases) {
    const auto oracle = oracle_of(c.inst);
    int checked = 0;
    while (checked < 100) {
      const Point x = random_point(rng, c.inst.n, c.scale);
      if (c.inst.family == Family::SineGrowth && std::abs(x(0)) < 0.05) continue;
      const FdCheckResult r = finite_difference_check(*oracle, x, 1e-5, c.order);
      if (r.kink_adjacent || r.rejected_pairs > 0) continue;
      worst = std::max(worst, r.max_rel_error);
      ++checked;
    }
  }
  double eig = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = generate(Family::MaxEigenvalue, 4, 25, seed);
    const Point x = random_point(rng, 4, 1.0);
    const double lam = power_iteration_top(assemble(inst, x));
    eig = std::max(eig, std::abs(oracle_of(inst)->value(x) - lam) / std::max(1.0, std::abs(lam)));
  }
  v.require(worst <= 1e-5 && eig <= 1e-10);
  v.detail << " FD max rel error " << worst << " over 100 points x " << cases.size()
           << " families; lambda_max vs power iteration " << eig;
}

void criticality(Verdict& v) {
  double worst = 0.0;
  int count = 0;
  for (const auto& run : all_runs) {
    if (run.setting == nullptr) continue;
    const auto oracle = oracle_of(run.instance);
    const double eps = run.config.radius(5);
    worst = std::max(worst, criticality_certificate(*oracle, run.result.final_point, eps, 200,
                                                    run.seed, run.config.norm()));
    ++count;
  }
  v.require(count == 40 && worst <= 1e-2);
  v.detail << " max certificate over " << count << " runs with eps = delta_5: " << worst;
}

void eigenvalue_smoke() {
  const auto t0 = std::chrono::steady_clock::now();
  ProblemInstance inst = generate(Family::MaxEigenvalue, 10, 8, 1);
  inst.x_star = compute_reference_minimizer(inst);
  const auto oracle = oracle_of(inst);
  const RunConfig cfg = defaults_for(inst, 2, 1);
  const RunResult run = global_solve(*oracle, cfg, inst.x_star);
  std::printf("INFO max-eigenvalue n=10 m=8 q=p=2 smoke run, enclosure against reference minimizer:");
  for (const auto& e : enclosure_report(run, *inst.x_star, cfg.norm())) {
    std::printf(" j=%d %s", e.j, e.enclosed ? "yes" : "no");
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf(" [%.1fs]\n", s);
}

}  // namespace

int main() {
  criterion(1, "enclosure reproduction", enclosure_reproduction);
  criterion(2, "start outside every radius", shrinking_start_schedule);
  criterion(3, "inner loop termination bound", termination_bound);
  criterion(4, "remainder order", remainder_order);
  criterion(5, "subproblem oracle equivalence", subproblem_equivalence);
  criterion(6, "Lambda^p bound certificate", lambda_certificate);
  criterion(7, "property (P) falsification", property_p_falsification);
  criterion(8, "monotone descent invariant", monotone_descent);
  criterion(9, "oracle correctness", oracle_correctness);
  criterion(10, "criticality certificate", criticality);
  try {
    eigenvalue_smoke();
  } catch (const std::exception& e) {
    std::printf("INFO max-eigenvalue smoke run raised: %s\n", e.what());
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
