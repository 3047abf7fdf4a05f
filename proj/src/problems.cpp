#include "trb/problems.hpp"

#include <algorithm>
#include <cmath>

namespace trb {

const char* family_name(Family family) {
  switch (family) {
    case Family::MaxQuartic: return "max-quartic";
    case Family::SumAbsQuartic: return "sum-abs-quartic";
    case Family::MaxEigenvalue: return "max-eig";
    case Family::SineGrowth: return "sine-growth";
    case Family::ToyQuadratic: return "toy-quadratic";
    case Family::AbsValue: return "abs-value";
  }
  return "unknown";
}

Family family_from_name(const std::string& name) {
  for (Family f : {Family::MaxQuartic, Family::SumAbsQuartic, Family::MaxEigenvalue,
                   Family::SineGrowth, Family::ToyQuadratic, Family::AbsValue}) {
    if (name == family_name(f)) return f;
  }
  throw Error("unknown problem family '" + name + "'");
}

namespace {

std::uint64_t hash_signs(const std::vector<signed char>& signs) {
  std::uint64_t h = 1469598103934665603ULL;
  for (signed char s : signs) {
    h ^= static_cast<std::uint64_t>(s > 0 ? 1 : 2);
    h *= 1099511628211ULL;
  }
  return h;
}

// Shared pieces of the two quartic families.
class QuarticTerms {
 public:
  explicit QuarticTerms(const ProblemInstance& inst) : g_(inst.g), H_(inst.H), c_(inst.c) {}

  Eigen::Index count() const { return g_.rows(); }
  Eigen::Index dim() const { return g_.cols(); }

  double value(Eigen::Index i, const Point& x) const {
    const double sq = x.squaredNorm();
    return g_.row(i).dot(x) + 0.5 * x.dot(H_[i] * x) + c_(i) / 24.0 * sq * sq;
  }

  Vector grad(Eigen::Index i, const Point& x) const {
    return g_.row(i).transpose() + H_[i] * x + (c_(i) / 6.0 * x.squaredNorm()) * x;
  }

  Matrix hess(Eigen::Index i, const Point& x) const {
    const auto n = dim();
    Matrix h = H_[i] + (c_(i) / 6.0) * (x.squaredNorm() * Matrix::Identity(n, n) +
                                        2.0 * x * x.transpose());
    return 0.5 * (h + h.transpose());
  }

 private:
  Matrix g_;
  std::vector<Matrix> H_;
  Vector c_;
};

class MaxQuarticOracle final : public Oracle {
 public:
  explicit MaxQuarticOracle(const ProblemInstance& inst) : terms_(inst) {}

  Eigen::Index dim() const override { return terms_.dim(); }

  double value(const Point& x) const override { return terms_.value(active(x), x); }

  OracleSample query(const Point& x, int order) const override {
    check(x);
    const Eigen::Index i = active(x);
    std::optional<Matrix> h;
    if (order >= 2) h = terms_.hess(i, x);
    return {x, terms_.value(i, x), terms_.grad(i, x), std::move(h), order,
            static_cast<std::uint64_t>(i)};
  }

  std::optional<double> branch_value(const Point& y, const Point& z) const override {
    return terms_.value(active(y), z);
  }

 private:
  void check(const Point& x) const {
    if (x.size() != dim()) throw Error("max-quartic oracle: dimension mismatch");
  }

  // argmax, ties to the smallest index
  Eigen::Index active(const Point& x) const {
    Eigen::Index best = 0;
    double best_v = terms_.value(0, x);
    for (Eigen::Index i = 1; i < terms_.count(); ++i) {
      const double v = terms_.value(i, x);
      if (v > best_v) {
        best_v = v;
        best = i;
      }
    }
    return best;
  }

  QuarticTerms terms_;
};

class SumAbsQuarticOracle final : public Oracle {
 public:
  explicit SumAbsQuarticOracle(const ProblemInstance& inst) : terms_(inst) {}

  Eigen::Index dim() const override { return terms_.dim(); }

  double value(const Point& x) const override {
    double f = 0.0;
    for (Eigen::Index i = 0; i < terms_.count(); ++i) f += std::abs(terms_.value(i, x));
    return f;
  }

  OracleSample query(const Point& x, int order) const override {
    if (x.size() != dim()) throw Error("sum-abs-quartic oracle: dimension mismatch");
    const auto n = dim();
    const auto signs = sign_pattern(x);
    double f = 0.0;
    Vector g = Vector::Zero(n);
    std::optional<Matrix> h;
    if (order >= 2) h = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < terms_.count(); ++i) {
      const double s = signs[static_cast<std::size_t>(i)];
      f += s * terms_.value(i, x);
      g += s * terms_.grad(i, x);
      if (h) *h += s * terms_.hess(i, x);
    }
    return {x, f, std::move(g), std::move(h), order, hash_signs(signs)};
  }

  std::optional<double> branch_value(const Point& y, const Point& z) const override {
    const auto signs = sign_pattern(y);
    double f = 0.0;
    for (Eigen::Index i = 0; i < terms_.count(); ++i) {
      f += signs[static_cast<std::size_t>(i)] * terms_.value(i, z);
    }
    return f;
  }

 private:
  std::vector<signed char> sign_pattern(const Point& x) const {
    std::vector<signed char> s(static_cast<std::size_t>(terms_.count()));
    for (Eigen::Index i = 0; i < terms_.count(); ++i) {
      s[static_cast<std::size_t>(i)] = terms_.value(i, x) >= 0.0 ? 1 : -1;
    }
    return s;
  }

  QuarticTerms terms_;
};

class MaxEigenvalueOracle final : public Oracle {
 public:
  explicit MaxEigenvalueOracle(const ProblemInstance& inst) : A_(inst.A), n_(inst.n) {}

  Eigen::Index dim() const override { return n_; }

  double value(const Point& x) const override {
    Eigen::SelfAdjointEigenSolver<Matrix> es(assemble(x), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error("max-eig oracle: eigen-decomposition failed");
    return es.eigenvalues()(es.eigenvalues().size() - 1);
  }

  OracleSample query(const Point& x, int order) const override {
    Eigen::SelfAdjointEigenSolver<Matrix> es(assemble(x));
    if (es.info() != Eigen::Success) throw Error("max-eig oracle: eigen-decomposition failed");
    const auto m = es.eigenvalues().size();
    const double lam = es.eigenvalues()(m - 1);
    Vector u = es.eigenvectors().col(m - 1);
    for (Eigen::Index k = 0; k < m; ++k) {
      if (std::abs(u(k)) > 1e-12) {
        if (u(k) < 0.0) u = -u;
        break;
      }
    }
    Vector g(n_);
    for (Eigen::Index i = 0; i < n_; ++i) g(i) = u.dot(A_[static_cast<std::size_t>(i) + 1] * u);
    std::optional<Matrix> h;
    if (order >= 2) h = Matrix::Zero(n_, n_);
    // multiplicity of the top eigenvalue identifies the smooth stratum
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    std::uint64_t mult = 0;
    for (Eigen::Index k = m; k-- > 0;) {
      if (lam - es.eigenvalues()(k) <= 1e-9 * scale) ++mult;
    }
    return {x, lam, std::move(g), std::move(h), order, mult};
  }

 private:
  Matrix assemble(const Point& x) const {
    if (x.size() != n_) throw Error("max-eig oracle: dimension mismatch");
    require_finite(x, "max-eig oracle");
    Matrix M = A_[0];
    for (Eigen::Index i = 0; i < n_; ++i) M += x(i) * A_[static_cast<std::size_t>(i) + 1];
    return M;
  }

  std::vector<Matrix> A_;
  Eigen::Index n_;
};

class SineGrowthOracle final : public Oracle {
 public:
  explicit SineGrowthOracle(int p) : p_(p) {}

  Eigen::Index dim() const override { return 1; }

  double value(const Point& x) const override {
    check(x);
    return f(x(0));
  }

  OracleSample query(const Point& x, int order) const override {
    check(x);
    const double t = x(0);
    Vector g(1);
    g(0) = df(t);
    std::optional<Matrix> h;
    if (order >= 2) h = Matrix::Constant(1, 1, d2f(t));
    return {x, f(t), std::move(g), std::move(h), order, t >= 0.0 ? 1u : 0u};
  }

  std::optional<double> branch_value(const Point& y, const Point& z) const override {
    check(z);
    const double t = z(0);
    if (t == 0.0) return 0.0;
    const double sign = (p_ % 2 == 1 && y(0) < 0.0) ? -1.0 : 1.0;
    return ipow(t, p_ + 1) * std::sin(1.0 / t) + ipow(sign * t, p_) / p_;
  }

 private:
  void check(const Point& x) const {
    if (x.size() != 1) throw Error("sine-growth oracle: dimension mismatch");
  }

  static double ipow(double t, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= t;
    return r;
  }

  double f(double t) const {
    if (t == 0.0) return 0.0;
    return ipow(t, p_ + 1) * std::sin(1.0 / t) + ipow(std::abs(t), p_) / p_;
  }

  double df(double t) const {
    if (t == 0.0) return p_ == 1 ? 1.0 : 0.0;  // branch x >= 0 at the tie
    const double s = std::sin(1.0 / t), c = std::cos(1.0 / t);
    const double sign = t > 0.0 ? 1.0 : -1.0;
    return (p_ + 1) * ipow(t, p_) * s - ipow(t, p_ - 1) * c + sign * ipow(std::abs(t), p_ - 1);
  }

  double d2f(double t) const {
    if (t == 0.0) return 0.0;
    const double s = std::sin(1.0 / t), c = std::cos(1.0 / t);
    const double inv = 1.0 / t;
    // x^{p-2} and x^{p-3} may be negative powers
    const double tp1 = ipow(t, p_ - 1);
    const double tp2 = tp1 * inv;
    const double tp3 = tp2 * inv;
    const double abs_part = p_ >= 2 ? (p_ - 1) * ipow(std::abs(t), p_ - 2) : 0.0;
    return (p_ + 1) * p_ * tp1 * s - 2.0 * p_ * tp2 * c - tp3 * s + abs_part;
  }

  int p_;
};

class ToyQuadraticOracle final : public Oracle {
 public:
  explicit ToyQuadraticOracle(int n) : n_(n) {}
  Eigen::Index dim() const override { return n_; }
  double value(const Point& x) const override { return x.squaredNorm(); }
  OracleSample query(const Point& x, int order) const override {
    if (x.size() != n_) throw Error("toy-quadratic oracle: dimension mismatch");
    std::optional<Matrix> h;
    if (order >= 2) h = 2.0 * Matrix::Identity(n_, n_);
    return {x, x.squaredNorm(), 2.0 * x, std::move(h), order, 0};
  }
  std::optional<double> branch_value(const Point&, const Point& z) const override {
    return z.squaredNorm();
  }

 private:
  Eigen::Index n_;
};

class AbsValueOracle final : public Oracle {
 public:
  explicit AbsValueOracle(int n) : n_(n) {}
  Eigen::Index dim() const override { return n_; }
  double value(const Point& x) const override { return x.lpNorm<1>(); }
  OracleSample query(const Point& x, int order) const override {
    if (x.size() != n_) throw Error("abs-value oracle: dimension mismatch");
    std::vector<signed char> signs(static_cast<std::size_t>(n_));
    Vector g(n_);
    for (Eigen::Index i = 0; i < n_; ++i) {
      signs[static_cast<std::size_t>(i)] = x(i) >= 0.0 ? 1 : -1;
      g(i) = signs[static_cast<std::size_t>(i)];
    }
    std::optional<Matrix> h;
    if (order >= 2) h = Matrix::Zero(n_, n_);
    return {x, x.lpNorm<1>(), std::move(g), std::move(h), order, hash_signs(signs)};
  }
  std::optional<double> branch_value(const Point& y, const Point& z) const override {
    double f = 0.0;
    for (Eigen::Index i = 0; i < n_; ++i) f += (y(i) >= 0.0 ? 1.0 : -1.0) * z(i);
    return f;
  }

 private:
  Eigen::Index n_;
};

Matrix random_symmetric(Eigen::Index m, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix B(m, m);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = 0; c < m; ++c) B(r, c) = gauss(rng);
  return 0.5 * (B + B.transpose());
}

void generate_quartic_data(ProblemInstance& inst, Rng& rng) {
  const int n = inst.n, m = inst.m;
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> c_dist(0.5, 1.5);
  std::uniform_real_distribution<double> lam_dist(0.5, 1.5);

  inst.g.resize(m, n);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < n; ++k) inst.g(i, k) = gauss(rng);

  // shift the first min(n+1, m) rows so that sum_i lambda_i g_i = 0
  const int k_sub = std::min(n + 1, m);
  Vector lambda(k_sub);
  for (int i = 0; i < k_sub; ++i) lambda(i) = lam_dist(rng);
  lambda /= lambda.sum();
  const Vector mean = inst.g.topRows(k_sub).transpose() * lambda;
  for (int i = 0; i < k_sub; ++i) inst.g.row(i) -= mean.transpose();

  const double b_scale = 1.0 / std::sqrt(static_cast<double>(n));
  inst.H.clear();
  for (int i = 0; i < m; ++i) {
    Matrix B(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) B(r, c) = b_scale * gauss(rng);
    Matrix Hi = B.transpose() * B + 0.1 * Matrix::Identity(n, n);
    inst.H.push_back(0.5 * (Hi + Hi.transpose()));
  }
  inst.c.resize(m);
  for (int i = 0; i < m; ++i) inst.c(i) = c_dist(rng);

  inst.x_star = Point::Zero(n);
  inst.f_star = 0.0;
  inst.growth_order = n < m ? 1 : 2;
}

}  // namespace

ProblemInstance generate(Family family, int n, int m, std::uint64_t seed, int sine_power) {
  ProblemInstance inst;
  inst.family = family;
  inst.n = n;
  inst.m = m;
  inst.seed = seed;
  Rng rng = make_rng(seed, 0);

  switch (family) {
    case Family::MaxQuartic:
    case Family::SumAbsQuartic:
      if (n < 1 || m < 1) throw Error("generate: quartic families need n >= 1 and m >= 1");
      generate_quartic_data(inst, rng);
      break;
    case Family::MaxEigenvalue: {
      if (n < 1 || m < 2) throw Error("generate: max-eig needs n >= 1 and matrix size m >= 2");
      if (static_cast<long>(n) > static_cast<long>(m) * (m + 1) / 2 - 1) {
        throw Error("generate: max-eig needs n <= m(m+1)/2 - 1 for a bounded objective");
      }
      inst.A.clear();
      inst.A.push_back(random_symmetric(m, rng));
      for (int i = 0; i < n; ++i) {
        Matrix Ai = random_symmetric(m, rng);
        Ai.diagonal().array() -= Ai.trace() / m;
        inst.A.push_back(std::move(Ai));
      }
      inst.growth_order = 0;
      inst.x_star.reset();
      inst.f_star = std::nan("");  // unknown until a reference run fills x_star
      break;
    }
    case Family::SineGrowth:
      if (sine_power < 1) throw Error("generate: sine-growth power must be >= 1");
      inst.n = 1;
      inst.m = 0;
      inst.sine_power = sine_power;
      inst.growth_order = sine_power;
      inst.x_star = Point::Zero(1);
      inst.f_star = 0.0;
      break;
    case Family::ToyQuadratic:
    case Family::AbsValue:
      if (n < 1) throw Error("generate: n must be >= 1");
      inst.m = 0;
      inst.growth_order = family == Family::ToyQuadratic ? 2 : 1;
      inst.x_star = Point::Zero(n);
      inst.f_star = 0.0;
      break;
  }
  return inst;
}

std::shared_ptr<const Oracle> oracle_of(const ProblemInstance& inst) {
  switch (inst.family) {
    case Family::MaxQuartic: return std::make_shared<MaxQuarticOracle>(inst);
    case Family::SumAbsQuartic: return std::make_shared<SumAbsQuarticOracle>(inst);
    case Family::MaxEigenvalue: return std::make_shared<MaxEigenvalueOracle>(inst);
    case Family::SineGrowth: return std::make_shared<SineGrowthOracle>(inst.sine_power);
    case Family::ToyQuadratic: return std::make_shared<ToyQuadraticOracle>(inst.n);
    case Family::AbsValue: return std::make_shared<AbsValueOracle>(inst.n);
  }
  throw Error("oracle_of: unknown family");
}

Point default_start(const ProblemInstance& inst) {
  switch (inst.family) {
    case Family::SumAbsQuartic: {
      Point x = Point::Ones(inst.n);
      x(0) = 2.0;
      return x;
    }
    case Family::ToyQuadratic: return Point::Constant(inst.n, 0.5);
    case Family::SineGrowth: return Point::Constant(1, 0.15);
    default: return Point::Ones(inst.n);
  }
}

}  // namespace trb
