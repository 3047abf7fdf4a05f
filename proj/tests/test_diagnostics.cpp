#include <gtest/gtest.h>

#include <cmath>

#include "trb/diagnostics.hpp"
#include "trb/problems.hpp"

using namespace trb;

namespace {

Point p1(double v) { return Point::Constant(1, v); }

// first local minimum of the sine-growth function in (lo, hi), from a
// sign change of a central-difference derivative on a fine scan
double scan_local_min(const Oracle& f, double lo, double hi) {
  const int steps = 200000;
  const double h = (hi - lo) / steps;
  auto d = [&](double x) { return (f.value(p1(x + 1e-9)) - f.value(p1(x - 1e-9))) / 2e-9; };
  double prev = d(lo);
  for (int k = 1; k <= steps; ++k) {
    const double x = lo + k * h;
    const double cur = d(x);
    if (prev < 0.0 && cur >= 0.0) {
      double a = x - h, b = x;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        (d(mid) < 0.0 ? a : b) = mid;
      }
      return 0.5 * (a + b);
    }
    prev = cur;
  }
  return NAN;
}

}  // namespace

TEST(ZStar, OneDimensionalExamples) {
  const auto abs = oracle_of(generate(Family::AbsValue, 1, 0, 0));
  const auto quad = oracle_of(generate(Family::ToyQuadratic, 1, 0, 0));
  EXPECT_NEAR(z_star_oracle(*abs, TrustRegion(p1(0.3), 0.1, NormKind::Euclidean))(0), 0.2, 1e-12);
  EXPECT_NEAR(z_star_oracle(*quad, TrustRegion(p1(1.0), 0.5, NormKind::Euclidean))(0), 0.5, 1e-12);
  const Point z = z_star_oracle(*abs, TrustRegion(p1(0.3), 0.5, NormKind::Euclidean));
  EXPECT_NEAR(abs->value(z), 0.0, 1e-12);
}

TEST(ZStar, NeverWorseThanLattice) {
  const auto inst = generate(Family::SumAbsQuartic, 2, 4, 3);
  const auto oracle = oracle_of(inst);
  const TrustRegion r(Point::Constant(2, 0.4), 0.3, NormKind::Euclidean);
  const Point z = z_star_oracle(*oracle, r);
  const Lattice lat(r, r.center(), r.radius(), 51);
  for (std::size_t k = 0; k < lat.size(); ++k) EXPECT_LE(oracle->value(z), oracle->value(lat.point(k)));
  EXPECT_TRUE(r.contains(z));
}

TEST(ZStar, DimensionLimits) {
  const auto oracle = oracle_of(generate(Family::ToyQuadratic, 4, 0, 0));
  const TrustRegion r(Point::Ones(4), 0.5, NormKind::Euclidean);
  EXPECT_THROW(z_star_oracle(*oracle, r), Error);
  SearchOptions opt;
  opt.method = SearchMethod::Grid2D;
  EXPECT_THROW(z_star_oracle(*oracle, r, opt), Error);
  opt.method = SearchMethod::MultiStartPolish;
  const Point z = z_star_oracle(*oracle, r, opt);
  EXPECT_NEAR(z.norm(), 1.5, 1e-8);
}

TEST(ZStar, SerialAndParallelAgree) {
  const auto oracle = oracle_of(generate(Family::MaxQuartic, 2, 5, 8));
  const TrustRegion r(Point::Constant(2, 0.2), 0.5, NormKind::MaxNorm);
  SearchOptions s, p;
  s.exec = Exec::Serial;
  p.exec = Exec::Parallel;
  EXPECT_EQ(z_star_oracle(*oracle, r, s), z_star_oracle(*oracle, r, p));
}

TEST(LambdaP, Examples) {
  const auto abs = oracle_of(generate(Family::AbsValue, 1, 0, 0));
  const auto quad = oracle_of(generate(Family::ToyQuadratic, 1, 0, 0));
  EXPECT_NEAR(lambda_p(*abs, p1(0.3), 0.1, 1).lambda_value, 1.0, 1e-10);
  EXPECT_NEAR(lambda_p(*quad, p1(1.0), 0.5, 2).lambda_value, 3.0, 1e-10);
  const LambdaEstimate e = lambda_p(*quad, p1(1.0), 0.5, 2);
  EXPECT_EQ(e.method, SearchMethod::Grid1D);
  EXPECT_LE(std::abs(e.z_star(0) - 1.0), 0.5);
}

TEST(LambdaP, MonotoneInP) {
  const auto inst = generate(Family::SumAbsQuartic, 2, 3, 2);
  const auto oracle = oracle_of(inst);
  Rng rng = make_rng(2, 0);
  const TrustRegion box(Point::Zero(2), 1.0, NormKind::MaxNorm);
  for (int t = 0; t < 10; ++t) {
    const Point x = sample_in_region(box, rng);
    const double d = std::pow(10.0, -1.0 - t % 3);
    EXPECT_GE(lambda_p(*oracle, x, d, 2).lambda_value, lambda_p(*oracle, x, d, 1).lambda_value);
  }
}

TEST(LambdaP, SineGrowthLocalMinimum) {
  const auto oracle = oracle_of(generate(Family::SineGrowth, 1, 0, 0, 1));
  const double xm = scan_local_min(*oracle, 0.05, 0.2);
  ASSERT_TRUE(std::isfinite(xm));
  EXPECT_GT(xm, 0.0);
  EXPECT_LT(xm, 0.2);
  EXPECT_LT(lambda_p(*oracle, p1(xm), 1e-4 * xm, 1).lambda_value, 1e-6);
}

TEST(PropertyP, SineGrowthFails) {
  for (int p : {1, 2}) {
    const auto inst = generate(Family::SineGrowth, 1, 0, 0, p);
    const auto oracle = oracle_of(inst);
    ProbeOptions opt;
    opt.num_samples = 60;
    opt.seed = 5;
    const ProbeResult r = property_p_probe(*oracle, *inst.x_star, p, opt);
    EXPECT_LE(r.empirical_inf, 1e-6) << "p=" << p;
    ASSERT_FALSE(r.witnesses.empty());
    EXPECT_TRUE(r.witnesses.front().from_local_min);
    EXPECT_GT(std::abs(r.witnesses.front().x(0)), 0.0);
    for (const auto& s : r.samples) EXPECT_LT(s.delta, std::abs(s.x(0)));
  }
}

TEST(PropertyP, SharpInstanceHolds) {
  const auto inst = generate(Family::MaxQuartic, 2, 4, 1);
  const auto oracle = oracle_of(inst);
  ProbeOptions opt;
  opt.num_samples = 60;
  opt.seed = 1;
  const ProbeResult r = property_p_probe(*oracle, *inst.x_star, 1, opt);
  EXPECT_GE(r.empirical_inf, 1e-2);
  EXPECT_EQ(r.witnesses.size(), 5u);
  for (std::size_t k = 1; k < r.witnesses.size(); ++k) {
    EXPECT_LE(r.witnesses[k - 1].lambda, r.witnesses[k].lambda);
  }
}

TEST(PropertyP, QuadraticInstanceHolds) {
  const auto inst = generate(Family::MaxQuartic, 2, 2, 3);
  ASSERT_EQ(inst.growth_order, 2);
  const auto oracle = oracle_of(inst);
  ProbeOptions opt;
  opt.num_samples = 60;
  opt.seed = 3;
  EXPECT_GT(property_p_probe(*oracle, *inst.x_star, 2, opt).empirical_inf, 0.0);
}

TEST(Criticality, Examples) {
  const auto quad = oracle_of(generate(Family::ToyQuadratic, 1, 0, 0));
  const auto abs = oracle_of(generate(Family::AbsValue, 1, 0, 0));
  EXPECT_LE(criticality_certificate(*quad, p1(0.0), 0.1, 50, 1), 0.2);
  EXPECT_LE(criticality_certificate(*abs, p1(0.0), 0.1, 50, 1), 0.1);
  EXPECT_NEAR(criticality_certificate(*abs, p1(1.0), 0.1, 50, 1), 1.0, 1e-15);
  EXPECT_THROW(criticality_certificate(*abs, p1(0.0), 0.0, 50, 1), Error);
}

TEST(Remainder, SmoothQuadraticIsExact) {
  const auto oracle = oracle_of(generate(Family::ToyQuadratic, 2, 0, 0));
  RemainderOptions opt;
  opt.q = 2;
  const RemainderEstimate e =
      remainder_constant_estimator(*oracle, Point::Constant(2, 0.3), {1e-1, 1e-2, 1e-3, 1e-4}, opt);
  EXPECT_LT(e.k_hat, 1e-3);
  EXPECT_TRUE(std::isnan(e.slope));
  EXPECT_FALSE(e.proxy);
}

TEST(Remainder, MaxQuarticSlopes) {
  const auto oracle = oracle_of(generate(Family::MaxQuartic, 2, 3, 1));
  Point x(2);
  x << 0.3, -0.2;
  for (int q : {1, 2}) {
    RemainderOptions opt;
    opt.q = q;
    const RemainderEstimate e = remainder_constant_estimator(*oracle, x, {1e-1, 1e-2, 1e-3, 1e-4}, opt);
    EXPECT_NEAR(e.slope, q + 1, 0.25) << "q=" << q;
    EXPECT_GT(e.k_hat, 0.0);
    EXPECT_FALSE(e.proxy);
  }
}

TEST(Remainder, EigenvalueUsesProxy) {
  const auto oracle = oracle_of(generate(Family::MaxEigenvalue, 2, 4, 1));
  RemainderOptions opt;
  opt.samples_per_delta = 20;
  const RemainderEstimate e =
      remainder_constant_estimator(*oracle, Point::Constant(2, 0.1), {1e-1, 1e-2, 1e-3, 1e-4}, opt);
  EXPECT_TRUE(e.proxy);
}

TEST(Remainder, InputValidation) {
  const auto oracle = oracle_of(generate(Family::ToyQuadratic, 1, 0, 0));
  EXPECT_THROW(remainder_constant_estimator(*oracle, p1(0.0), {1e-1, 1e-2, 1e-3}), Error);
  EXPECT_THROW(remainder_constant_estimator(*oracle, p1(0.0), {1e-1, 1e-2, 1e-2, 1e-3}), Error);
}
