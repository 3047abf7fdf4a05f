#include "trb/core_types.hpp"

#include <cmath>

namespace trb {

const char* to_string(NormKind kind) {
  return kind == NormKind::Euclidean ? "euclidean" : "max";
}

NormKind norm_kind_from_string(const std::string& name) {
  if (name == "euclidean") return NormKind::Euclidean;
  if (name == "max") return NormKind::MaxNorm;
  throw Error("unknown norm kind '" + name + "'");
}

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw Error(std::string(what) + ": non-finite entry");
}

double norm(const Vector& v, NormKind kind) {
  require_finite(v, "norm");
  if (v.size() == 0) return 0.0;
  return kind == NormKind::Euclidean ? v.norm() : v.lpNorm<Eigen::Infinity>();
}

TrustRegion::TrustRegion(Point center, double radius, NormKind norm_kind)
    : center_(std::move(center)), radius_(radius), norm_(norm_kind) {
  require_finite(center_, "trust-region center");
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) {
    throw Error("trust-region radius must be positive and finite");
  }
}

double TrustRegion::distance(const Point& z) const {
  if (z.size() != center_.size()) throw Error("trust region: dimension mismatch");
  return norm(z - center_, norm_);
}

bool TrustRegion::contains(const Point& z, double feas_tol) const {
  return distance(z) <= radius_ * (1.0 + feas_tol);
}

Point TrustRegion::project(const Point& z) const {
  Vector d = z - center_;
  if (norm_ == NormKind::MaxNorm) {
    return center_ + d.cwiseMax(-radius_).cwiseMin(radius_);
  }
  const double len = d.norm();
  if (len <= radius_) return z;
  return center_ + (radius_ / len) * d;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  // splitmix64 over a mix of both inputs
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Point sample_in_region(const TrustRegion& region, Rng& rng) {
  const auto n = region.dim();
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  if (region.norm_kind() == NormKind::MaxNorm) {
    Vector d(n);
    for (Eigen::Index i = 0; i < n; ++i) d(i) = unif(rng);
    return region.center() + region.radius() * d;
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = gauss(rng);
  double len = d.norm();
  if (len == 0.0) return region.center();
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double r = region.radius() * std::pow(u01(rng), 1.0 / static_cast<double>(n));
  return region.center() + (r / len) * d;
}

Point sample_on_boundary(const TrustRegion& region, Rng& rng) {
  const auto n = region.dim();
  if (region.norm_kind() == NormKind::MaxNorm) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::uniform_int_distribution<Eigen::Index> face(0, n - 1);
    std::bernoulli_distribution sign(0.5);
    Vector d(n);
    for (Eigen::Index i = 0; i < n; ++i) d(i) = unif(rng);
    d(face(rng)) = sign(rng) ? 1.0 : -1.0;
    return region.center() + region.radius() * d;
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector d(n);
  do {
    for (Eigen::Index i = 0; i < n; ++i) d(i) = gauss(rng);
  } while (d.norm() == 0.0);
  return region.center() + (region.radius() / d.norm()) * d;
}

}  // namespace trb
