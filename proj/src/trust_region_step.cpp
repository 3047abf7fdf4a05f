#include "trb/trust_region_step.hpp"

#include <algorithm>
#include <cmath>

namespace trb {

namespace {

double model(const Vector& g, const Matrix& B, const Vector& w) {
  return g.dot(w) + 0.5 * w.dot(B * w);
}

}  // namespace

TrustRegionStep solve_trust_region_step(const Vector& g, const Matrix& B, double radius) {
  const auto n = g.size();
  if (B.rows() != n || B.cols() != n) throw Error("trust-region step: shape mismatch");
  if (!(radius > 0.0)) throw Error("trust-region step: radius must be positive");

  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (B + B.transpose()));
  if (es.info() != Eigen::Success) throw Error("trust-region step: eigen-decomposition failed");
  const Vector& lam = es.eigenvalues();  // ascending
  const Matrix& Q = es.eigenvectors();
  const Vector alpha = Q.transpose() * g;
  const double lam_min = lam(0);
  const double lam_scale = std::max({1e-300, lam.cwiseAbs().maxCoeff(), g.norm() / radius});
  const double eig_tol = 1e-12 * lam_scale;

  TrustRegionStep out;
  auto finish = [&](Vector w, bool boundary, bool hard) {
    if (boundary) {
      const double len = w.norm();
      if (len > 0.0) w *= radius / len;
    }
    out.model_value = model(g, B, w);
    out.step = std::move(w);
    out.on_boundary = boundary;
    out.hard_case = hard;
    return out;
  };

  // interior Newton point
  if (lam_min > eig_tol) {
    Vector coef = -alpha.cwiseQuotient(lam);
    if (coef.norm() <= radius) return finish(Q * coef, false, false);
  }

  // index range of the (numerically) smallest eigenspace
  Eigen::Index n_min = 0;
  while (n_min < n && lam(n_min) - lam_min <= eig_tol) ++n_min;
  const double shift_lo = std::max(0.0, -lam_min);
  const double g_scale = std::max(g.norm(), 1e-300);
  const double alpha_min_sq = alpha.head(n_min).squaredNorm();

  if (lam_min <= eig_tol && alpha_min_sq <= std::pow(1e-12 * g_scale, 2)) {
    // potential hard case: solve on the complement with shift -lam_min
    Vector coef = Vector::Zero(n);
    for (Eigen::Index i = n_min; i < n; ++i) coef(i) = -alpha(i) / (lam(i) + shift_lo);
    const double len = coef.norm();
    if (len <= radius) {
      if (lam_min >= -eig_tol) return finish(Q * coef, false, false);  // PSD, minimizer inside
      coef(0) += std::sqrt(std::max(0.0, radius * radius - len * len));
      return finish(Q * coef, true, true);
    }
  }

  // secular equation |w(nu)| = radius on (shift_lo, inf)
  auto step_norm_sq = [&](double nu) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = lam(i) + nu;
      s += alpha(i) * alpha(i) / (d * d);
    }
    return s;
  };
  double lo = shift_lo;
  double hi = shift_lo + g_scale / radius + lam.cwiseAbs().maxCoeff() + 1e-300;
  while (std::sqrt(step_norm_sq(hi)) > radius) hi *= 2.0;
  double nu = hi;
  for (int it = 0; it < 200; ++it) {
    const double sq = step_norm_sq(nu);
    const double len = std::sqrt(sq);
    if (std::abs(len - radius) <= 1e-14 * radius) break;
    if (len > radius) {
      lo = std::max(lo, nu);
    } else {
      hi = std::min(hi, nu);
    }
    // Newton on 1/|w| - 1/radius
    double dsq = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = lam(i) + nu;
      dsq += -2.0 * alpha(i) * alpha(i) / (d * d * d);
    }
    const double phi = 1.0 / len - 1.0 / radius;
    const double dphi = -0.5 * dsq / (sq * len);
    double next = nu - phi / dphi;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (hi - lo <= 1e-16 * std::max(1.0, hi)) break;
    nu = next;
  }
  Vector coef(n);
  for (Eigen::Index i = 0; i < n; ++i) coef(i) = -alpha(i) / (lam(i) + nu);
  return finish(Q * coef, true, false);
}

}  // namespace trb
