#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "trb/problems.hpp"

#include "test_util.hpp"

using namespace trb;
using namespace trb::testing;

TEST(Generate, GrowthOrderFromDimensions) {
  EXPECT_EQ(generate(Family::MaxQuartic, 50, 100, 1).growth_order, 1);
  EXPECT_EQ(generate(Family::MaxQuartic, 50, 40, 1).growth_order, 2);
  const auto toy = generate(Family::ToyQuadratic, 1, 0, 0);
  EXPECT_EQ(toy.growth_order, 2);
  EXPECT_EQ(*toy.x_star, Point::Zero(1));
}

TEST(Generate, InvalidDimensions) {
  EXPECT_THROW(generate(Family::MaxQuartic, 0, 3, 1), Error);
  EXPECT_THROW(generate(Family::SumAbsQuartic, 2, 0, 1), Error);
  EXPECT_THROW(generate(Family::MaxEigenvalue, 10, 3, 1), Error);
  EXPECT_THROW(generate(Family::ToyQuadratic, 0, 0, 1), Error);
}

TEST(Generate, QuarticStructure) {
  for (Family f : {Family::MaxQuartic, Family::SumAbsQuartic}) {
    for (auto [n, m] : {std::pair{5, 8}, {6, 4}, {3, 3}}) {
      const auto inst = generate(f, n, m, 42);
      const int k = std::min(n + 1, m);
      for (int i = 0; i < m; ++i) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(inst.H[i]);
        EXPECT_GT(es.eigenvalues()(0), 0.0);
        EXPECT_GT(inst.c(i), 0.5);
        EXPECT_LT(inst.c(i), 1.5);
      }
      // some strictly positive convex combination of the first k rows vanishes:
      // the origin is in the relative interior of their hull
      std::vector<Vector> rows;
      for (int i = 0; i < k; ++i) rows.push_back(inst.g.row(i).transpose());
      Matrix D(n, k - 1);
      for (int i = 1; i < k; ++i) D.col(i - 1) = rows[i] - rows[0];
      Eigen::ColPivHouseholderQR<Matrix> qr(D);
      EXPECT_EQ(qr.rank(), k - 1) << "affinely dependent";
    }
  }
}

TEST(Generate, OriginIsGlobalMinimum) {
  Rng rng = make_rng(5, 0);
  for (Family f : {Family::MaxQuartic, Family::SumAbsQuartic}) {
    for (auto [n, m] : {std::pair{5, 8}, {6, 4}}) {
      const auto inst = generate(f, n, m, 3);
      const auto oracle = oracle_of(inst);
      EXPECT_EQ(oracle->value(Point::Zero(n)), 0.0);
      for (int t = 0; t < 100; ++t) {
        const double scale = std::pow(10.0, -3 + t % 4);
        EXPECT_GT(oracle->value(random_point(rng, n, scale)), 0.0);
      }
    }
  }
}

TEST(Generate, SharpGrowth) {
  const auto inst = generate(Family::MaxQuartic, 5, 8, 7);
  const auto oracle = oracle_of(inst);
  Rng rng = make_rng(7, 1);
  std::normal_distribution<double> N(0.0, 1.0);
  const double t = 1e-4;
  double beta = INFINITY;
  for (int k = 0; k < 1000; ++k) {
    Vector d(5);
    for (int i = 0; i < 5; ++i) d(i) = N(rng);
    d.normalize();
    beta = std::min(beta, oracle->value(t * d) / t);
  }
  EXPECT_GT(beta, 0.0);
}

TEST(Generate, QuadraticGrowth) {
  const int n = 5, m = 4;
  const auto inst = generate(Family::MaxQuartic, n, m, 7);
  const auto oracle = oracle_of(inst);
  Rng rng = make_rng(7, 2);
  std::normal_distribution<double> N(0.0, 1.0);
  const double t = 1e-4;
  double beta = INFINITY;
  for (int k = 0; k < 1000; ++k) {
    Vector d(n);
    for (int i = 0; i < n; ++i) d(i) = N(rng);
    d.normalize();
    beta = std::min(beta, oracle->value(t * d) / (t * t));
  }
  EXPECT_GT(beta, 0.0);
  // directions orthogonal to all g_i see only curvature: f(td)/t -> 0
  Eigen::JacobiSVD<Matrix> svd(inst.g, Eigen::ComputeFullV);
  const Vector d = svd.matrixV().col(n - 1);
  EXPECT_LT(oracle->value(t * d) / t, 1e-2);
  const double ratio = oracle->value(t * d) / (t * t);
  EXPECT_GT(ratio, 0.0);
  EXPECT_LT(ratio, 1e3);
}

TEST(Oracle, FiniteDifferencesEveryFamily) {
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
      {generate(Family::SineGrowth, 1, 0, 0, 4), 0.5, 2},
      {generate(Family::ToyQuadratic, 3, 0, 0), 1.0, 2},
      {generate(Family::AbsValue, 3, 0, 0), 1.0, 2},
  };
  Rng rng = make_rng(99, 0);
  for (const auto& c : cases) {
    const auto oracle = oracle_of(c.inst);
    int checked = 0;
    while (checked < 100) {
      Point x = random_point(rng, c.inst.n, c.scale);
      if (c.inst.family == Family::SineGrowth && std::abs(x(0)) < 0.05) continue;
      const FdCheckResult r = finite_difference_check(*oracle, x, 1e-5, c.order);
      if (r.kink_adjacent || r.rejected_pairs > 0) continue;  // not a smooth point
      EXPECT_LE(r.max_rel_error, 1e-5) << family_name(c.inst.family) << " at " << x.transpose();
      ++checked;
    }
  }
}

TEST(Oracle, EigenvalueMatchesPowerIteration) {
  Rng rng = make_rng(25, 0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = generate(Family::MaxEigenvalue, 4, 25, seed);
    const auto oracle = oracle_of(inst);
    const Point x = random_point(rng, 4, 1.0);
    const double lam = power_iteration_top(assemble(inst, x));
    EXPECT_NEAR(oracle->value(x), lam, 1e-10 * std::max(1.0, std::abs(lam)));
    const OracleSample s = oracle->query(x, 2);
    EXPECT_EQ(s.hess->norm(), 0.0);
  }
}

TEST(Oracle, EigenvalueDiagonalAtOrigin) {
  ProblemInstance inst;
  inst.family = Family::MaxEigenvalue;
  inst.n = 2;
  inst.m = 3;
  inst.A = {Vector::LinSpaced(3, -1.0, 2.5).asDiagonal(), Matrix::Identity(3, 3),
            Matrix::Identity(3, 3)};
  EXPECT_DOUBLE_EQ(oracle_of(inst)->value(Point::Zero(2)), 2.5);
}

TEST(Oracle, SumAbsGradientAllPositive) {
  const auto inst = generate(Family::SumAbsQuartic, 3, 5, 11);
  const auto oracle = oracle_of(inst);
  const Point x = Point::Constant(3, 4.0);  // quartic terms dominate
  Vector expected = Vector::Zero(3);
  for (int i = 0; i < 5; ++i) {
    const double term = inst.g.row(i).dot(x) + 0.5 * x.dot(inst.H[i] * x) +
                        inst.c(i) / 24.0 * std::pow(x.squaredNorm(), 2);
    ASSERT_GT(term, 0.0);
    expected += inst.g.row(i).transpose() + inst.H[i] * x + inst.c(i) / 6.0 * x.squaredNorm() * x;
  }
  EXPECT_LT((oracle->query(x, 1).grad - expected).norm(), 1e-10 * expected.norm());
}

TEST(Oracle, SineGrowthClosedForm) {
  const auto oracle = oracle_of(generate(Family::SineGrowth, 1, 0, 0, 2));
  const double x = 0.01;
  EXPECT_NEAR(oracle->value(Point::Constant(1, x)), x * x * x * std::sin(1.0 / x) + 0.5 * x * x,
              1e-14);
}

TEST(Serialize, RoundTripIsBitExact) {
  std::vector<ProblemInstance> insts{
      generate(Family::MaxQuartic, 4, 6, 1), generate(Family::SumAbsQuartic, 3, 7, 2),
      generate(Family::MaxEigenvalue, 5, 4, 3), generate(Family::SineGrowth, 1, 0, 4, 4),
      generate(Family::ToyQuadratic, 2, 0, 0), generate(Family::AbsValue, 3, 0, 0)};
  insts[2].x_star = Point::Constant(5, 1.0 / 3.0);
  insts[2].x_star_is_reference = true;
  insts[2].f_star = 0.1 + 0.2;
  for (const auto& a : insts) {
    const ProblemInstance b = deserialize(serialize(a));
    EXPECT_EQ(a.family, b.family);
    EXPECT_EQ(a.n, b.n);
    EXPECT_EQ(a.m, b.m);
    EXPECT_EQ(a.seed, b.seed);
    EXPECT_EQ(a.growth_order, b.growth_order);
    EXPECT_EQ(a.sine_power, b.sine_power);
    EXPECT_EQ(a.x_star_is_reference, b.x_star_is_reference);
    if (std::isnan(a.f_star)) {
      EXPECT_TRUE(std::isnan(b.f_star));
    } else {
      EXPECT_EQ(a.f_star, b.f_star);
    }
    ASSERT_EQ(a.x_star.has_value(), b.x_star.has_value());
    if (a.x_star) EXPECT_EQ(*a.x_star, *b.x_star);
    EXPECT_EQ(a.g, b.g);
    EXPECT_EQ(a.c, b.c);
    ASSERT_EQ(a.H.size(), b.H.size());
    for (std::size_t i = 0; i < a.H.size(); ++i) EXPECT_EQ(a.H[i], b.H[i]);
    ASSERT_EQ(a.A.size(), b.A.size());
    for (std::size_t i = 0; i < a.A.size(); ++i) EXPECT_EQ(a.A[i], b.A[i]);
    EXPECT_EQ(serialize(a), serialize(b));
  }
}

TEST(Serialize, MalformedInputReportsLine) {
  const std::string good = serialize(generate(Family::MaxQuartic, 2, 3, 1));
  auto expect_error = [](const std::string& text, const std::string& fragment) {
    try {
      deserialize(text);
      FAIL() << "accepted malformed input";
    } catch (const Error& e) {
      EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
  };
  expect_error("not-an-instance\n", "line 1");
  std::string bad = good;
  bad.replace(bad.find("\nn 2\n") + 1, 3, "n x");
  expect_error(bad, "line");
  expect_error(good.substr(0, good.size() / 2), "");
}
