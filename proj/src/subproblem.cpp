#include "trb/subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "trb/hull.hpp"
#include "trb/linear_program.hpp"
#include "trb/trust_region_step.hpp"

namespace trb {

namespace {

std::vector<std::size_t> tight_cuts(const std::vector<CenteredCut>& cuts, const Vector& d,
                                    double theta, double tol) {
  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    if (cuts[k].eval(d) >= theta - tol) active.push_back(k);
  }
  return active;
}

// Min-norm convex combination of the active cut gradients, with the
// outward component along the ball normal removed on the boundary.
double projected_subgradient_norm(const std::vector<CenteredCut>& cuts,
                                  const std::vector<std::size_t>& active, const Vector& d,
                                  double radius, NormKind kind) {
  if (active.empty()) return 0.0;
  std::vector<Vector> grads;
  grads.reserve(active.size());
  for (std::size_t k : active) grads.push_back(cuts[k].gradient(d));
  Vector g = min_norm_hull_point(grads).point;
  if (kind == NormKind::MaxNorm) {
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      if (d(i) >= radius * (1.0 - 1e-9) && g(i) < 0.0) g(i) = 0.0;
      if (d(i) <= -radius * (1.0 - 1e-9) && g(i) > 0.0) g(i) = 0.0;
    }
    return g.norm();
  }
  const double len = d.norm();
  if (len >= radius * (1.0 - 1e-9) && len > 0.0) {
    const Vector normal = d / len;
    const double nu = std::max(0.0, -g.dot(normal));
    g += nu * normal;
  }
  return g.norm();
}

struct Smoothed {
  double value;
  Vector grad;
  Matrix hess;
};

class SmoothedModel {
 public:
  SmoothedModel(const std::vector<CenteredCut>& cuts, Eigen::Index n) : cuts_(cuts), n_(n) {}

  double value(const Vector& d, double mu) const {
    const auto K = cuts_.size();
    Vector q(static_cast<Eigen::Index>(K));
    for (std::size_t k = 0; k < K; ++k) q(static_cast<Eigen::Index>(k)) = cuts_[k].eval(d);
    const double M = q.maxCoeff();
    return M + mu * std::log((((q.array() - M) / mu).exp()).sum());
  }

  Smoothed full(const Vector& d, double mu) const {
    const auto K = static_cast<Eigen::Index>(cuts_.size());
    Vector q(K);
    Matrix G(K, n_);
    for (Eigen::Index k = 0; k < K; ++k) {
      const auto& c = cuts_[static_cast<std::size_t>(k)];
      q(k) = c.eval(d);
      G.row(k) = c.gradient(d).transpose();
    }
    const double M = q.maxCoeff();
    Vector w = ((q.array() - M) / mu).exp().matrix();
    const double total = w.sum();
    w /= total;
    Smoothed s;
    s.value = M + mu * std::log(total);
    s.grad = G.transpose() * w;
    s.hess = Matrix::Zero(n_, n_);
    for (Eigen::Index k = 0; k < K; ++k) {
      if (w(k) < 1e-300) continue;
      const auto& h = cuts_[static_cast<std::size_t>(k)].hessian;
      if (h) s.hess += w(k) * *h;
    }
    const Matrix Gw = G.transpose() * w.asDiagonal();
    s.hess += (Gw * G - s.grad * s.grad.transpose()) / mu;
    s.hess = 0.5 * (s.hess + s.hess.transpose());
    return s;
  }

 private:
  const std::vector<CenteredCut>& cuts_;
  Eigen::Index n_;
};

double true_model(const std::vector<CenteredCut>& cuts, const Vector& d) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& c : cuts) best = std::max(best, c.eval(d));
  return best;
}

bool all_convex(const std::vector<CenteredCut>& cuts) {
  for (const auto& c : cuts) {
    if (!c.hessian) continue;
    Eigen::SelfAdjointEigenSolver<Matrix> es(*c.hessian, Eigen::EigenvaluesOnly);
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    if (es.eigenvalues()(0) < -1e-12 * scale) return false;
  }
  return true;
}

SubproblemSolution finalize(const Bundle& bundle, const std::vector<CenteredCut>& cuts,
                            const Vector& d, SolveStatus status, double tol) {
  const TrustRegion& region = bundle.region();
  SubproblemSolution sol;
  sol.z_bar = region.center() + d;
  sol.theta = model_eval(bundle, sol.z_bar).value;
  sol.status = status;
  const double cut_theta = true_model(cuts, d);
  sol.active_cuts = tight_cuts(cuts, d, cut_theta, tol);
  sol.kkt_residual = projected_subgradient_norm(cuts, sol.active_cuts, d, region.radius(),
                                                region.norm_kind());
  return sol;
}

}  // namespace

SubproblemSolution solve_linear(const Bundle& bundle) {
  const TrustRegion& region = bundle.region();
  if (bundle.order() != 1) throw Error("solve_linear: bundle must hold first-order samples");
  if (region.norm_kind() != NormKind::MaxNorm) throw Error("solve_linear: needs a max-norm region");
  const auto cuts = centered_cuts(bundle);
  const auto K = static_cast<Eigen::Index>(cuts.size());
  const auto n = region.dim();
  Vector a(K);
  Matrix B(K, n);
  for (Eigen::Index k = 0; k < K; ++k) {
    a(k) = cuts[static_cast<std::size_t>(k)].constant;
    B.row(k) = cuts[static_cast<std::size_t>(k)].linear.transpose();
  }
  const MaxAffineLpResult lp = solve_max_affine_lp(a, B, region.radius());

  Vector d = lp.step;
  // the center is always feasible; keep it if rounding made the LP point worse
  if (model_eval(bundle, region.center() + d).value > model_eval(bundle, region.center()).value) {
    d.setZero();
  }
  SubproblemSolution sol;
  sol.z_bar = region.center() + d;
  sol.theta = model_eval(bundle, sol.z_bar).value;
  sol.status = SolveStatus::Optimal;
  sol.kkt_residual = lp.duality_gap;
  const double tol = 1e-9 * std::max(1.0, std::abs(sol.theta));
  for (std::size_t k : lp.active) {
    if (std::abs(cuts[k].eval(d) - lp.objective) <= tol) sol.active_cuts.push_back(k);
  }
  return sol;
}

SubproblemSolution solve_quadratic(const Bundle& bundle, const SubproblemOptions& opt) {
  const TrustRegion& region = bundle.region();
  if (bundle.order() != 2) throw Error("solve_quadratic: bundle must hold second-order samples");
  if (region.norm_kind() != NormKind::Euclidean) {
    throw Error("solve_quadratic: needs a Euclidean region");
  }
  const auto cuts = centered_cuts(bundle);
  const auto n = region.dim();
  const double radius = region.radius();
  const auto K = cuts.size();

  // variation of the model over the ball, used to scale temperatures
  double lin = 0.0, curv = 0.0, cmin = cuts[0].constant, cmax = cuts[0].constant;
  for (const auto& c : cuts) {
    lin = std::max(lin, c.linear.norm());
    if (c.hessian) curv = std::max(curv, c.hessian->cwiseAbs().rowwise().sum().maxCoeff());
    cmin = std::min(cmin, c.constant);
    cmax = std::max(cmax, c.constant);
  }
  const double scale = std::max(lin * radius + curv * radius * radius + (cmax - cmin), 1e-300);
  const double accuracy = std::max(opt.accuracy, 1e-15 * scale);

  // starting points: center, bundle bases, random boundary points
  std::vector<Vector> starts;
  starts.push_back(Vector::Zero(n));
  for (const auto& s : bundle.samples()) {
    Vector d = region.project(s.base) - region.center();
    starts.push_back(std::move(d));
  }
  Rng rng = make_rng(opt.seed, 0x5eed);
  for (int r = 0; r < opt.random_restarts; ++r) {
    starts.push_back(sample_on_boundary(region, rng) - region.center());
  }

  std::vector<Vector> candidates = starts;

  std::vector<std::size_t> full_runs{0};
  if (!all_convex(cuts)) {
    std::vector<std::size_t> order(starts.size() - 1);
    std::iota(order.begin(), order.end(), 1);
    std::vector<double> vals(starts.size());
    for (std::size_t i = 0; i < starts.size(); ++i) vals[i] = true_model(cuts, starts[i]);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    for (std::size_t i = 0; i < order.size() && static_cast<int>(i) < opt.full_restarts; ++i) {
      full_runs.push_back(order[i]);
    }
  }

  const SmoothedModel smooth(cuts, n);
  const double log_k = std::log(static_cast<double>(K));
  SolveStatus status = SolveStatus::Optimal;

  for (std::size_t idx : full_runs) {
    Vector d = starts[idx];
    double mu = 0.1 * scale;
    for (int stage = 0; stage < 60; ++stage) {
      int iter = 0;
      for (; iter < opt.max_newton_per_stage; ++iter) {
        const Smoothed s = smooth.full(d, mu);
        // Newton model over the ball in absolute coordinates w = d + step
        const Vector lin_w = s.grad - s.hess * d;
        const TrustRegionStep trs = solve_trust_region_step(lin_w, s.hess, radius);
        const Vector step = trs.step - d;
        const double pred = s.grad.dot(step) + 0.5 * step.dot(s.hess * step);
        const double negligible = 1e-16 * (std::abs(s.value) + scale);
        if (!(pred < 0.0) || -pred <= std::max(1e-3 * mu, negligible)) break;
        double alpha = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 50; ++ls) {
          Vector trial = d + alpha * step;
          if (trial.norm() > radius) trial *= radius / trial.norm();
          if (smooth.value(trial, mu) <= s.value + 1e-4 * alpha * pred) {
            d = std::move(trial);
            accepted = true;
            break;
          }
          alpha *= 0.5;
        }
        if (accepted) continue;
        // the chord to the ball-wide step crosses higher ground; take local
        // trust-region steps instead. On the sphere with an outward pull they
        // live in the tangent space with the Lagrangian curvature.
        Matrix basis = Matrix::Identity(n, n);
        Vector g_loc = s.grad;
        Matrix h_loc = s.hess;
        const double dn = d.norm();
        const bool on_sphere = dn >= radius * (1.0 - 1e-12) && s.grad.dot(d) < 0.0;
        if (on_sphere) {
          if (n == 1) break;
          const Vector normal = d / dn;
          const Eigen::HouseholderQR<Matrix> qr{Matrix(normal)};
          const Matrix full = qr.householderQ() * Matrix::Identity(n, n);
          basis = full.rightCols(n - 1);
          const double lambda = -s.grad.dot(normal) / dn;
          g_loc = basis.transpose() * s.grad;
          h_loc = basis.transpose() * (s.hess + lambda * Matrix::Identity(n, n)) * basis;
          h_loc = 0.5 * (h_loc + h_loc.transpose());
        }
        double rho = on_sphere ? radius : 0.5 * step.norm();
        double gain = 0.0;
        for (int ls = 0; ls < 60 && rho > 1e-15 * radius; ++ls, rho *= 0.25) {
          const TrustRegionStep local = solve_trust_region_step(g_loc, h_loc, rho);
          Vector trial = d + basis * local.step;
          if (trial.norm() > radius || on_sphere) trial *= radius / trial.norm();
          double m;
          if (on_sphere) {
            m = g_loc.dot(local.step) + 0.5 * local.step.dot(h_loc * local.step);
          } else {
            const Vector delta = trial - d;
            m = s.grad.dot(delta) + 0.5 * delta.dot(s.hess * delta);
          }
          if (!(m < 0.0)) continue;
          const double v = smooth.value(trial, mu);
          if (v <= s.value + 1e-4 * m) {
            gain = s.value - v;
            d = std::move(trial);
            accepted = true;
            break;
          }
        }
        if (!accepted || gain <= negligible) break;
      }
      if (iter >= opt.max_newton_per_stage) status = SolveStatus::MaxIterFallback;
      candidates.push_back(d);
      if (K == 1 || mu * log_k <= accuracy) break;
      mu *= 0.1;
    }
  }

  std::size_t best = 0;
  double best_val = model_eval(bundle, region.center() + candidates[0]).value;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double v = model_eval(bundle, region.center() + candidates[i]).value;
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  const double tol = std::max(10.0 * accuracy, 1e-12 * scale);
  return finalize(bundle, cuts, candidates[best], status, tol);
}

SubproblemSolution solve_subproblem(const Bundle& bundle, const SubproblemOptions& options) {
  const int q = bundle.order();
  const NormKind kind = bundle.region().norm_kind();
  if (q == 1 && kind == NormKind::MaxNorm) return solve_linear(bundle);
  if (q == 2 && kind == NormKind::Euclidean) return solve_quadratic(bundle, options);
  throw Error("solve_subproblem: unsupported combination of model order and trust-region norm");
}

}  // namespace trb
