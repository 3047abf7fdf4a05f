#include "trb/linear_program.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Status { Basic, AtLower, AtUpper, FreeNonbasic };

}  // namespace

MaxAffineLpResult solve_max_affine_lp(const Vector& constants, const Matrix& slopes,
                                      double radius) {
  const Eigen::Index K = constants.size();
  const Eigen::Index n = slopes.cols();
  if (K == 0) throw Error("max-affine LP: no cuts");
  if (slopes.rows() != K) throw Error("max-affine LP: shape mismatch");
  if (!(radius > 0.0)) throw Error("max-affine LP: radius must be positive");

  // columns: d_0..d_{n-1}, theta, s_0..s_{K-1}
  const Eigen::Index theta = n;
  const Eigen::Index N = n + 1 + K;
  auto slack = [&](Eigen::Index k) { return n + 1 + k; };

  Vector lo(N), hi(N), cost = Vector::Zero(N), x(N);
  for (Eigen::Index i = 0; i < n; ++i) {
    lo(i) = -radius;
    hi(i) = radius;
  }
  lo(theta) = -kInf;
  hi(theta) = kInf;
  cost(theta) = 1.0;
  for (Eigen::Index k = 0; k < K; ++k) {
    lo(slack(k)) = 0.0;
    hi(slack(k)) = kInf;
  }

  // rows: b_k'd - theta + s_k = -a_k, basis = slacks
  Matrix T(K, N);
  T.leftCols(n) = slopes;
  T.col(theta).setConstant(-1.0);
  T.rightCols(K).setIdentity();

  std::vector<Status> status(static_cast<std::size_t>(N), Status::AtLower);
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(K));
  x.head(n).setConstant(-radius);
  const Vector r0 = constants + slopes * x.head(n);
  x(theta) = r0.maxCoeff();
  status[static_cast<std::size_t>(theta)] = Status::FreeNonbasic;
  for (Eigen::Index k = 0; k < K; ++k) {
    basis[static_cast<std::size_t>(k)] = slack(k);
    status[static_cast<std::size_t>(slack(k))] = Status::Basic;
    x(slack(k)) = x(theta) - r0(k);
  }

  // reduced costs for the slack basis (c_B = 0)
  Vector rc = cost;

  const double scale = std::max(1.0, slopes.cwiseAbs().maxCoeff());
  const double rc_tol = 1e-12 * scale;
  const double piv_tol = 1e-11;
  const int max_pivots = static_cast<int>(50 * (N + K) + 1000);
  int degenerate_run = 0;
  bool bland = false;

  MaxAffineLpResult result;
  for (;;) {
    // pricing
    Eigen::Index enter = -1;
    double dir = 0.0, best_score = 0.0;
    for (Eigen::Index j = 0; j < N; ++j) {
      const Status st = status[static_cast<std::size_t>(j)];
      if (st == Status::Basic) continue;
      double score = 0.0, d = 0.0;
      if ((st == Status::AtLower || st == Status::FreeNonbasic) && rc(j) < -rc_tol) {
        score = -rc(j);
        d = 1.0;
      } else if ((st == Status::AtUpper || st == Status::FreeNonbasic) && rc(j) > rc_tol) {
        score = rc(j);
        d = -1.0;
      }
      if (d == 0.0) continue;
      if (bland) {
        enter = j;
        dir = d;
        break;
      }
      if (score > best_score) {
        best_score = score;
        enter = j;
        dir = d;
      }
    }
    if (enter < 0) break;
    if (++result.pivots > max_pivots) throw Error("max-affine LP: pivot limit exceeded");

    // ratio test
    double t_max = hi(enter) - lo(enter);  // bound flip
    Eigen::Index leave_row = -1;
    bool leave_to_lower = true;
    for (Eigen::Index r = 0; r < K; ++r) {
      const double alpha = dir * T(r, enter);
      if (std::abs(alpha) <= piv_tol) continue;
      const Eigen::Index b = basis[static_cast<std::size_t>(r)];
      double t;
      bool to_lower;
      if (alpha > 0.0) {
        if (lo(b) == -kInf) continue;
        t = std::max(0.0, (x(b) - lo(b)) / alpha);
        to_lower = true;
      } else {
        if (hi(b) == kInf) continue;
        t = std::max(0.0, (hi(b) - x(b)) / -alpha);
        to_lower = false;
      }
      const bool better =
          t < t_max || (leave_row >= 0 && t == t_max &&
                        (bland ? b < basis[static_cast<std::size_t>(leave_row)]
                               : std::abs(alpha) > std::abs(T(leave_row, enter))));
      if (better) {
        t_max = t;
        leave_row = r;
        leave_to_lower = to_lower;
      }
    }
    if (t_max == kInf) throw Error("max-affine LP: unbounded direction (internal error)");

    if (t_max <= 0.0) {
      if (++degenerate_run > 50) bland = true;
    } else {
      degenerate_run = 0;
    }

    // move along the edge
    x(enter) += dir * t_max;
    for (Eigen::Index r = 0; r < K; ++r) {
      x(basis[static_cast<std::size_t>(r)]) -= dir * t_max * T(r, enter);
    }

    if (leave_row < 0) {
      status[static_cast<std::size_t>(enter)] =
          dir > 0.0 ? Status::AtUpper : Status::AtLower;
      x(enter) = dir > 0.0 ? hi(enter) : lo(enter);
      continue;
    }

    const Eigen::Index leave = basis[static_cast<std::size_t>(leave_row)];
    x(leave) = leave_to_lower ? lo(leave) : hi(leave);
    status[static_cast<std::size_t>(leave)] = leave_to_lower ? Status::AtLower : Status::AtUpper;
    status[static_cast<std::size_t>(enter)] = Status::Basic;
    basis[static_cast<std::size_t>(leave_row)] = enter;

    const double piv = T(leave_row, enter);
    T.row(leave_row) /= piv;
    for (Eigen::Index r = 0; r < K; ++r) {
      if (r == leave_row) continue;
      const double f = T(r, enter);
      if (f != 0.0) T.row(r) -= f * T.row(leave_row);
    }
    const double fr = rc(enter);
    rc -= fr * T.row(leave_row).transpose();
    rc(enter) = 0.0;
  }

  Vector d = x.head(n).cwiseMax(-radius).cwiseMin(radius);
  const Vector vals = constants + slopes * d;
  result.step = d;
  result.objective = vals.maxCoeff();

  Vector lam(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const bool basic = status[static_cast<std::size_t>(slack(k))] == Status::Basic;
    lam(k) = basic ? 0.0 : std::max(0.0, rc(slack(k)));
    if (!basic) result.active.push_back(static_cast<std::size_t>(k));
  }
  const double lam_sum = lam.sum();
  if (lam_sum > 0.0) {
    lam /= lam_sum;
  } else {
    lam.setZero();
    Eigen::Index k_best = 0;
    vals.maxCoeff(&k_best);
    lam(k_best) = 1.0;
  }
  result.multipliers = lam;
  const Vector agg = slopes.transpose() * lam;
  const double dual_bound = lam.dot(constants) - radius * agg.lpNorm<1>();
  result.duality_gap = std::max(0.0, result.objective - dual_bound);
  return result;
}

}  // namespace trb
