#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace trb {

using Point = Eigen::VectorXd;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NormKind { Euclidean, MaxNorm };

const char* to_string(NormKind kind);
NormKind norm_kind_from_string(const std::string& name);

struct Tolerances {
  double feas_tol = 1e-9;            // relative trust-region membership slack
  double sub_opt_tol_factor = 0.01;  // subproblem accuracy relative to the gap threshold
  double fd_check_tol = 1e-5;
  double grid_oracle_tol = 1e-6;
};

inline constexpr Tolerances kDefaultTolerances{};

/// Throws if any entry of `v` is NaN or infinite.
void require_finite(const Vector& v, const char* what);

double norm(const Vector& v, NormKind kind);

/// Closed ball around `center` in the chosen norm.
class TrustRegion {
 public:
  TrustRegion(Point center, double radius, NormKind norm_kind);

  const Point& center() const { return center_; }
  double radius() const { return radius_; }
  NormKind norm_kind() const { return norm_; }
  Eigen::Index dim() const { return center_.size(); }

  double distance(const Point& z) const;
  bool contains(const Point& z, double feas_tol = kDefaultTolerances.feas_tol) const;

  /// Nearest point of the region to `z` (Euclidean projection for both norms).
  Point project(const Point& z) const;

 private:
  Point center_;
  double radius_;
  NormKind norm_;
};

/// Derives an independent 64-bit seed for stream `stream` of a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t base, std::uint64_t stream) {
  return Rng(derive_seed(base, stream));
}

/// Uniform sample from a trust region (uniform in the ball or the box).
Point sample_in_region(const TrustRegion& region, Rng& rng);

/// Uniform sample from the boundary sphere / box surface.
Point sample_on_boundary(const TrustRegion& region, Rng& rng);

}  // namespace trb
