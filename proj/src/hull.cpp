#include "trb/hull.hpp"

#include <algorithm>
#include <cmath>

namespace trb {

namespace {

// argmin ||sum mu_i p_i|| subject to sum mu_i = 1 over the corral
Vector affine_minimizer(const Matrix& P, const std::vector<Eigen::Index>& corral) {
  const auto k = static_cast<Eigen::Index>(corral.size());
  Matrix kkt = Matrix::Zero(k + 1, k + 1);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      kkt(a, b) = P.col(corral[static_cast<std::size_t>(a)]).dot(P.col(corral[static_cast<std::size_t>(b)]));
    }
    kkt(a, k) = 1.0;
    kkt(k, a) = 1.0;
  }
  Vector rhs = Vector::Zero(k + 1);
  rhs(k) = 1.0;
  const Vector sol = kkt.colPivHouseholderQr().solve(rhs);
  return sol.head(k);
}

}  // namespace

MinNormPoint min_norm_hull_point(const std::vector<Vector>& vectors) {
  if (vectors.empty()) throw Error("min_norm_hull_point: empty input");
  const auto n = vectors.front().size();
  const auto m = static_cast<Eigen::Index>(vectors.size());
  Matrix P(n, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    if (vectors[static_cast<std::size_t>(j)].size() != n) {
      throw Error("min_norm_hull_point: dimension mismatch");
    }
    P.col(j) = vectors[static_cast<std::size_t>(j)];
  }
  double max_sq = 0.0;
  Eigen::Index start = 0;
  for (Eigen::Index j = 0; j < m; ++j) {
    const double sq = P.col(j).squaredNorm();
    max_sq = std::max(max_sq, sq);
    if (sq < P.col(start).squaredNorm()) start = j;
  }
  const double tol = 1e-15 * std::max(max_sq, 1e-300);

  std::vector<Eigen::Index> corral{start};
  Vector lambda = Vector::Zero(m);
  lambda(start) = 1.0;
  Vector x = P.col(start);

  for (int major = 0; major < 10 * m + 100; ++major) {
    if (x.squaredNorm() <= tol) break;
    Eigen::Index j_best = 0;
    double best = P.col(0).dot(x);
    for (Eigen::Index j = 1; j < m; ++j) {
      const double v = P.col(j).dot(x);
      if (v < best) {
        best = v;
        j_best = j;
      }
    }
    if (x.squaredNorm() - best <= 1e-12 * max_sq) break;
    if (std::find(corral.begin(), corral.end(), j_best) != corral.end()) break;
    corral.push_back(j_best);

    for (int minor = 0; minor < 10 * m + 100; ++minor) {
      const Vector mu = affine_minimizer(P, corral);
      bool interior = true;
      for (Eigen::Index a = 0; a < mu.size(); ++a) {
        if (mu(a) <= 1e-14) interior = false;
      }
      if (interior) {
        lambda.setZero();
        for (std::size_t a = 0; a < corral.size(); ++a) lambda(corral[a]) = mu(static_cast<Eigen::Index>(a));
        break;
      }
      // step from lambda toward mu until a weight hits zero
      double theta = 1.0;
      for (std::size_t a = 0; a < corral.size(); ++a) {
        const double la = lambda(corral[a]);
        const double ma = mu(static_cast<Eigen::Index>(a));
        if (ma < la && ma <= 1e-14) theta = std::min(theta, la / (la - ma));
      }
      for (std::size_t a = 0; a < corral.size(); ++a) {
        const double la = lambda(corral[a]);
        lambda(corral[a]) = la + theta * (mu(static_cast<Eigen::Index>(a)) - la);
      }
      std::vector<Eigen::Index> kept;
      for (Eigen::Index idx : corral) {
        if (lambda(idx) > 1e-14) {
          kept.push_back(idx);
        } else {
          lambda(idx) = 0.0;
        }
      }
      corral.swap(kept);
      if (corral.empty()) throw Error("min_norm_hull_point: corral emptied (internal error)");
    }
    lambda /= lambda.sum();
    x = P * lambda;
  }

  lambda = lambda.cwiseMax(0.0);
  lambda /= lambda.sum();
  return {P * lambda, lambda};
}

}  // namespace trb
