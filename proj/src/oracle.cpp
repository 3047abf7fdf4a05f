#include "trb/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace trb {

OracleSample::OracleSample(Point base_in, double value_in, Vector grad_in,
                           std::optional<Matrix> hess_in, int order_in, std::uint64_t selector_tag)
    : base(std::move(base_in)),
      value(value_in),
      grad(std::move(grad_in)),
      hess(std::move(hess_in)),
      order(order_in),
      selector_tag_(selector_tag) {
  if (!std::isfinite(value)) throw Error("oracle sample: non-finite value");
  if (grad.size() != base.size()) throw Error("oracle sample: gradient dimension mismatch");
  if (order < 1 || order > 2) throw Error("oracle sample: order must be 1 or 2");
  if ((order >= 2) != hess.has_value()) throw Error("oracle sample: Hessian presence must match order");
  if (hess && (hess->rows() != base.size() || hess->cols() != base.size())) {
    throw Error("oracle sample: Hessian dimension mismatch");
  }
  if (hess) {
    const double scale = std::max(1.0, hess->cwiseAbs().maxCoeff());
    if ((*hess - hess->transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw Error("oracle sample: Hessian is not symmetric");
    }
  }
}

std::uint64_t inspect_selector_tag(const OracleSample& sample) { return sample.selector_tag_; }

std::optional<double> Oracle::branch_value(const Point&, const Point&) const { return std::nullopt; }

double taylor_eval(const OracleSample& sample, const Point& z) {
  if (z.size() != sample.base.size()) throw Error("taylor_eval: dimension mismatch");
  const Vector d = z - sample.base;
  double t = sample.value + sample.grad.dot(d);
  if (sample.order >= 2) t += 0.5 * d.dot(*sample.hess * d);
  return t;
}

namespace {

double rel_err(double approx, double exact) {
  return std::abs(approx - exact) / std::max(1.0, std::abs(exact));
}

}  // namespace

FdCheckResult finite_difference_check(const Oracle& oracle, const Point& x, double h, int order) {
  if (!(h > 0.0)) throw Error("finite_difference_check: step must be positive");
  const auto n = oracle.dim();
  if (x.size() != n) throw Error("finite_difference_check: dimension mismatch");
  const OracleSample center = oracle.query(x, order);
  const std::uint64_t tag = inspect_selector_tag(center);

  FdCheckResult result;
  for (Eigen::Index i = 0; i < n; ++i) {
    ++result.probe_pairs;
    Point xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    const OracleSample sp = oracle.query(xp, order);
    const OracleSample sm = oracle.query(xm, order);
    if (inspect_selector_tag(sp) != tag || inspect_selector_tag(sm) != tag) {
      ++result.rejected_pairs;
      continue;
    }
    const double step = xp(i) - xm(i);
    const double g_fd = (sp.value - sm.value) / step;
    result.max_rel_error = std::max(result.max_rel_error, rel_err(g_fd, center.grad(i)));
    if (order >= 2 && center.hess) {
      const Vector col_fd = (sp.grad - sm.grad) / step;
      for (Eigen::Index r = 0; r < n; ++r) {
        result.max_rel_error =
            std::max(result.max_rel_error, rel_err(col_fd(r), (*center.hess)(r, i)));
      }
    }
  }
  result.kink_adjacent = 2 * result.rejected_pairs > result.probe_pairs;
  return result;
}

}  // namespace trb
