#include "trb/grid_kernels.hpp"

#include <cmath>
#include <limits>

namespace trb {

Lattice::Lattice(const TrustRegion& region, Point center, double half_width, int per_axis)
    : region_(&region), center_(std::move(center)), half_width_(half_width), per_axis_(per_axis) {
  if (per_axis < 2) throw Error("Lattice: need at least 2 points per axis");
  if (!(half_width > 0.0)) throw Error("Lattice: half width must be positive");
  if (center_.size() != region.dim()) throw Error("Lattice: dimension mismatch");
  spacing_ = 2.0 * half_width / (per_axis - 1);
  size_ = 1;
  for (Eigen::Index k = 0; k < center_.size(); ++k) {
    if (size_ > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(per_axis)) {
      throw Error("Lattice: too many points");
    }
    size_ *= static_cast<std::size_t>(per_axis);
  }
}

Point Lattice::point(std::size_t index) const {
  const auto n = center_.size();
  Point z(n);
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    const auto digit = static_cast<int>(index % static_cast<std::size_t>(per_axis_));
    index /= static_cast<std::size_t>(per_axis_);
    z(k) = center_(k) - half_width_ + digit * spacing_;
  }
  if (region_->contains(z, 0.0)) return z;
  return region_->project(z);
}

std::vector<double> lattice_values(const ScalarField& f, const Lattice& lattice, Exec exec) {
  const auto count = static_cast<long long>(lattice.size());
  std::vector<double> out(lattice.size());
  if (exec == Exec::Serial) {
    for (long long i = 0; i < count; ++i) out[i] = f(lattice.point(static_cast<std::size_t>(i)));
    return out;
  }
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < count; ++i) out[i] = f(lattice.point(static_cast<std::size_t>(i)));
  return out;
}

void for_indices(std::size_t count, const std::function<void(std::size_t)>& fn, Exec exec) {
  const auto c = static_cast<long long>(count);
  if (exec == Exec::Serial) {
    for (long long i = 0; i < c; ++i) fn(static_cast<std::size_t>(i));
    return;
  }
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < c; ++i) fn(static_cast<std::size_t>(i));
}

std::vector<double> map_indices(std::size_t count, const std::function<double(std::size_t)>& fn,
                                Exec exec) {
  std::vector<double> out(count);
  for_indices(count, [&](std::size_t i) { out[i] = fn(i); }, exec);
  return out;
}

namespace {

// strict (value, index) order, so any reduction order gives the same winner
inline bool better(double v, std::size_t i, double bv, std::size_t bi) {
  return v < bv || (v == bv && i < bi);
}

}  // namespace

LatticeMin lattice_argmin(const std::vector<double>& values, Exec exec) {
  LatticeMin best{values.size(), std::numeric_limits<double>::infinity()};
  const auto count = static_cast<long long>(values.size());
  if (exec == Exec::Serial) {
    for (long long i = 0; i < count; ++i) {
      const double v = values[i];
      if (!std::isnan(v) && better(v, static_cast<std::size_t>(i), best.value, best.index)) {
        best = {static_cast<std::size_t>(i), v};
      }
    }
  } else {
#pragma omp parallel
    {
      LatticeMin local = best;
#pragma omp for schedule(static) nowait
      for (long long i = 0; i < count; ++i) {
        const double v = values[i];
        if (!std::isnan(v) && better(v, static_cast<std::size_t>(i), local.value, local.index)) {
          local = {static_cast<std::size_t>(i), v};
        }
      }
#pragma omp critical(trb_lattice_argmin)
      if (better(local.value, local.index, best.value, best.index)) best = local;
    }
  }
  if (best.index == values.size()) throw Error("lattice_argmin: no finite value");
  return best;
}

}  // namespace trb
