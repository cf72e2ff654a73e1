#include "adaptsa/problems.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

namespace adaptsa {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

// ---------------------------------------------------------------------------
// PiecewiseLinear

PiecewiseLinear::PiecewiseLinear(Vector v, Vector s)
    : v_(std::move(v)), s_(std::move(s)) {
  if (v_.size() == 0 || v_.size() != s_.size()) {
    throw InvalidInput("PiecewiseLinear: need matching nonempty v and s");
  }
  if (!all_finite(v_) || !all_finite(s_)) {
    throw InvalidInput("PiecewiseLinear: non-finite coefficients");
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(v_.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return s_(a) != s_(b) ? s_(a) < s_(b) : v_(a) > v_(b);
  });
  auto cross = [&](Eigen::Index a, Eigen::Index b) {
    return (v_(a) - v_(b)) / (s_(b) - s_(a));
  };
  for (Eigen::Index i : order) {
    if (!hull_.empty() && s_(hull_.back()) == s_(i)) continue;
    while (hull_.size() >= 2 &&
           cross(hull_[hull_.size() - 2], i) <=
               cross(hull_[hull_.size() - 2], hull_.back())) {
      hull_.pop_back();
    }
    hull_.push_back(i);
  }
  for (std::size_t j = 0; j + 1 < hull_.size(); ++j) {
    breaks_.push_back(cross(hull_[j], hull_[j + 1]));
  }
}

double PiecewiseLinear::value(double t) const {
  return (v_.array() + s_.array() * t).maxCoeff();
}

Eigen::Index PiecewiseLinear::active(double t) const {
  Eigen::Index best = 0;
  (v_.array() + s_.array() * t).maxCoeff(&best);
  return best;
}

PiecewiseLinear::Expectation PiecewiseLinear::gaussian_expectation(
    double mu, double sigma) const {
  if (!(sigma >= 0.0)) throw InvalidInput("gaussian_expectation: sigma < 0");
  if (sigma == 0.0) {
    const Eigen::Index i = active(mu);
    return {value(mu), s_(i), 0.0};
  }
  Expectation e{0.0, 0.0, 0.0};
  for (std::size_t j = 0; j < hull_.size(); ++j) {
    const double ta = j == 0 ? -kInf : breaks_[j - 1];
    const double tb = j + 1 == hull_.size() ? kInf : breaks_[j];
    const double ga = (ta - mu) / sigma;
    const double gb = (tb - mu) / sigma;
    const double mass = ga < 0.0 ? normal_cdf(gb) - normal_cdf(ga)
                                 : normal_cdf(-ga) - normal_cdf(-gb);
    const double dens = normal_pdf(ga) - normal_pdf(gb);
    const double v = v_(hull_[j]);
    const double s = s_(hull_[j]);
    e.value += (v + s * mu) * mass + s * sigma * dens;
    e.d_mu += s * mass;
    e.d_sigma += s * dens;
  }
  return e;
}

// ---------------------------------------------------------------------------
// UtilityProblem

UtilityProblem::UtilityProblem(int n, Vector v, Vector s, double eta,
                               double epsilon)
    : n_(n), phi_(std::move(v), std::move(s)), eta_(eta), epsilon_(epsilon) {
  if (n < 1) throw ConfigError("UtilityProblem: n must be at least 1");
  if (!(eta >= 0.0) || !(epsilon >= 0.0)) {
    throw ConfigError("UtilityProblem: eta and epsilon must be nonnegative");
  }
  a_ = Vector::LinSpaced(n, 1.0, n) / static_cast<double>(n);
}

UtilityProblem UtilityProblem::generate(const UtilityParams& params,
                                        std::uint64_t seed) {
  if (params.pieces < 1) throw ConfigError("UtilityProblem: pieces < 1");
  Rng rng(seed, Stream::kInstance);
  std::vector<double> v(static_cast<std::size_t>(params.pieces));
  std::vector<double> s(v.size());
  for (double& x : v) x = rng.uniform();
  for (double& x : s) x = rng.uniform();
  std::sort(v.begin(), v.end(), std::greater<>());
  std::sort(s.begin(), s.end());
  return UtilityProblem(params.n,
                        Eigen::Map<Vector>(v.data(), params.pieces),
                        Eigen::Map<Vector>(s.data(), params.pieces),
                        params.eta, params.epsilon);
}

Vector UtilityProblem::draw(Rng& rng) const {
  Vector xi(n_);
  for (int i = 0; i < n_; ++i) xi(i) = rng.normal();
  return xi;
}

double UtilityProblem::value(const Vector& u, const Vector& xi) const {
  return phi_.value((a_ + xi).dot(u)) + 0.5 * eta_ * u.squaredNorm();
}

Vector UtilityProblem::piece_subgradient(const Vector& u,
                                         const Vector& xi) const {
  if (u.size() != n_ || xi.size() != n_) {
    throw InvalidInput("UtilityProblem: dimension mismatch");
  }
  const Vector c = a_ + xi;
  return phi_.slopes()(phi_.active(c.dot(u))) * c;
}

Vector UtilityProblem::subgradient(const Vector& u, const Vector& xi) const {
  Vector g = piece_subgradient(u, xi);
  if (truncation_) {
    const double norm = g.norm();
    if (norm > *truncation_) g *= *truncation_ / norm;
  }
  return g + eta_ * u;
}

double UtilityProblem::expected_value(const Vector& u) const {
  const auto e = phi_.gaussian_expectation(a_.dot(u), u.norm());
  return e.value + 0.5 * eta_ * u.squaredNorm();
}

Vector UtilityProblem::expected_gradient(const Vector& u) const {
  const double sigma = u.norm();
  const auto e = phi_.gaussian_expectation(a_.dot(u), sigma);
  Vector g = e.d_mu * a_ + eta_ * u;
  if (sigma > 0.0) g += (e.d_sigma / sigma) * u;
  return g;
}

double UtilityProblem::estimate_subgradient_bound(const Point& x, int draws,
                                                  double percentile,
                                                  double factor,
                                                  Rng& rng) const {
  if (draws < 1 || !(percentile > 0.0 && percentile <= 1.0)) {
    throw InvalidInput("estimate_subgradient_bound: bad pilot settings");
  }
  std::vector<double> norms(static_cast<std::size_t>(draws));
  for (double& v : norms) {
    const Vector xi = draw(rng);
    const Vector z = sample_ball(n_, epsilon_, rng);
    v = piece_subgradient(x + z, xi).norm();
  }
  const auto idx = static_cast<std::size_t>(
      std::ceil(percentile * static_cast<double>(draws))) - 1;
  std::nth_element(norms.begin(), norms.begin() + static_cast<long>(idx),
                   norms.end());
  return factor * norms[idx];
}

void UtilityProblem::set_truncation(std::optional<double> C) {
  if (C && !(*C > 0.0)) throw ConfigError("truncation bound must be positive");
  truncation_ = C;
}

Point UtilityProblem::barycenter() const {
  return Vector::Constant(n_, 1.0 / n_);
}

GradientSample utility_oracle(const UtilityProblem& problem, const Point& x,
                              Rng& rng) {
  return smoothed_subgradient(problem, x, problem.epsilon(), rng);
}

// ---------------------------------------------------------------------------
// Bimatrix

Matrix bimatrix_matrix(int n) {
  if (n < 1) throw ConfigError("bimatrix_matrix: n must be at least 1");
  Matrix A(n, n);
  const double denom = 2.0 * n - 1.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = (i + j + 1) / denom;
  }
  return A;
}

Eigen::Index sample_index(const Vector& w, Rng& rng) {
  const double shift = std::min(0.0, w.minCoeff());
  const double total = w.sum() - shift * static_cast<double>(w.size());
  if (!(total > 0.0)) {
    throw NumericalFailure("sample_index: weights do not sum to a positive",
                           total);
  }
  const double u = rng.uniform() * total;
  double acc = 0.0;
  for (Eigen::Index q = 0; q < w.size(); ++q) {
    acc += w(q) - shift;
    if (u < acc) return q;
  }
  for (Eigen::Index q = w.size() - 1; q >= 0; --q) {
    if (w(q) - shift > 0.0) return q;
  }
  return w.size() - 1;
}

BimatrixProblem::BimatrixProblem(int n, double eta, double epsilon)
    : n_(n), eta_(eta), epsilon_(epsilon), A_(bimatrix_matrix(n)) {
  if (!(eta >= 0.0) || !(epsilon >= 0.0)) {
    throw ConfigError("BimatrixProblem: eta and epsilon must be nonnegative");
  }
}

std::pair<GradientSample, GradientSample> BimatrixProblem::sample(
    const SaddlePoint& z, Rng& rng) const {
  if (z.x.size() != n_ || z.y.size() != n_) {
    throw InvalidInput("BimatrixProblem: dimension mismatch");
  }
  Vector u = z.x;
  Vector w = z.y;
  if (epsilon_ > 0.0) {
    const Vector zeta = sample_ball(2 * n_, epsilon_, rng);
    u += zeta.head(n_);
    w += zeta.tail(n_);
  }
  const Eigen::Index l = sample_index(w, rng);
  const Eigen::Index p = sample_index(u, rng);
  GradientSample gx = A_.col(l) + eta_ * u;
  GradientSample gy = A_.row(p).transpose() - eta_ * w;
  return {std::move(gx), std::move(gy)};
}

double BimatrixProblem::value(const Point& x, const Point& y) const {
  return x.dot(A_ * y) + 0.5 * eta_ * (x.squaredNorm() - y.squaredNorm());
}

std::pair<Vector, Vector> BimatrixProblem::exact_gradient(
    const SaddlePoint& z) const {
  return {A_ * z.y + eta_ * z.x, A_.transpose() * z.x - eta_ * z.y};
}

SaddlePoint BimatrixProblem::barycenter() const {
  const Vector b = Vector::Constant(n_, 1.0 / n_);
  return {b, b};
}

// ---------------------------------------------------------------------------
// Network

Vector network_capacity(int which) {
  Vector base(9);
  base << 0.10, 0.15, 0.20, 0.10, 0.15, 0.20, 0.20, 0.15, 0.25;
  switch (which) {
    case 1:
      return 2.0 * base;
    case 2:
      return base / 0.75;
    case 3:
      return base;
    default:
      throw ConfigError("network_capacity: preset must be 1, 2 or 3");
  }
}

Matrix random_adjacency(Eigen::Index links, Eigen::Index users, double density,
                        Rng& rng) {
  if (links < 1 || users < 1) throw ConfigError("random_adjacency: empty shape");
  if (!(density > 0.0 && density <= 1.0)) {
    throw ConfigError("random_adjacency: density must lie in (0, 1]");
  }
  Matrix A = Matrix::Zero(links, users);
  for (Eigen::Index l = 0; l < links; ++l) {
    for (Eigen::Index i = 0; i < users; ++i) {
      if (rng.uniform() < density) A(l, i) = 1.0;
    }
  }
  for (Eigen::Index l = 0; l < links; ++l) {
    if (A.row(l).sum() == 0.0) {
      A(l, static_cast<Eigen::Index>(rng.index(users))) = 1.0;
    }
  }
  for (Eigen::Index i = 0; i < users; ++i) {
    if (A.col(i).sum() == 0.0) {
      A(static_cast<Eigen::Index>(rng.index(links)), i) = 1.0;
    }
  }
  return A;
}

Vector network_gradient(const Vector& x, const Vector& k, const Matrix& A) {
  if (x.size() != k.size() || A.cols() != x.size()) {
    throw InvalidInput("network_gradient: dimension mismatch");
  }
  if (x.size() > 0 && x.minCoeff() <= -1.0) {
    throw DomainError("network_gradient: x_i <= -1");
  }
  return (-k.array() / (1.0 + x.array())).matrix() +
         2.0 * A.transpose() * (A * x);
}

double network_value(const Vector& x, const Vector& k, const Matrix& A) {
  if (x.size() != k.size() || A.cols() != x.size()) {
    throw InvalidInput("network_value: dimension mismatch");
  }
  if (x.size() > 0 && x.minCoeff() <= -1.0) {
    throw DomainError("network_value: x_i <= -1");
  }
  return -(k.array() * x.array().log1p()).sum() + (A * x).squaredNorm();
}

NetworkProblem::NetworkProblem(Matrix A, Vector C, double k_lo, double k_hi)
    : A_(std::move(A)),
      C_(std::move(C)),
      k_lo_(k_lo),
      k_hi_(k_hi),
      proj_(A_, C_) {
  if (!(k_lo > 0.0) || !(k_hi > k_lo)) {
    throw ConfigError("NetworkProblem: need 0 < k_lo < k_hi");
  }
  for (Eigen::Index i = 0; i < A_.cols(); ++i) {
    if (A_.col(i).sum() <= 0.0) {
      throw ConfigError("NetworkProblem: every user must cross a link");
    }
  }
}

NetworkProblem NetworkProblem::generate(const NetworkParams& params,
                                        std::uint64_t seed) {
  Rng rng(seed, Stream::kInstance);
  Vector C = network_capacity(params.capacity_set);
  Matrix A = random_adjacency(C.size(), params.n, params.density, rng);
  return NetworkProblem(std::move(A), std::move(C));
}

Vector NetworkProblem::draw_k(Rng& rng) const {
  Vector k(A_.cols());
  for (Eigen::Index i = 0; i < k.size(); ++i) k(i) = rng.uniform(k_lo_, k_hi_);
  return k;
}

GradientSample NetworkProblem::sample_gradient(const Point& x, Rng& rng) const {
  return network_gradient(x, draw_k(rng), A_);
}

Vector NetworkProblem::x_max() const {
  Vector m = Vector::Constant(A_.cols(), kInf);
  for (Eigen::Index l = 0; l < A_.rows(); ++l) {
    for (Eigen::Index i = 0; i < A_.cols(); ++i) {
      if (A_(l, i) > 0.0) m(i) = std::min(m(i), C_(l) / A_(l, i));
    }
  }
  return m;
}

double NetworkProblem::strong_convexity() const {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(2.0 * A_.transpose() * A_,
                                                 Eigen::EigenvaluesOnly);
  const double xm = x_max().maxCoeff();
  return k_lo_ / ((1.0 + xm) * (1.0 + xm)) +
         std::max(0.0, es.eigenvalues().minCoeff());
}

double NetworkProblem::lipschitz() const {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(2.0 * A_.transpose() * A_,
                                                 Eigen::EigenvaluesOnly);
  return k_hi_ + es.eigenvalues().maxCoeff();
}

double NetworkProblem::diameter2() const { return x_max().squaredNorm(); }

}  // namespace adaptsa
