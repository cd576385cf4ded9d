#include "umbra/bodies.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <functional>
#include <random>

#include "umbra/errors.hpp"

namespace umbra {

namespace {

constexpr double kBoundaryTol = 1e-10;
constexpr double kDegenerateTol = 1e-10;

// orthonormal tangent basis of normal^perp, deterministic in the normal
Mat tangent_basis(const Vec& normal) {
  const int n = static_cast<int>(normal.size());
  int skip = 0;
  normal.cwiseAbs().maxCoeff(&skip);
  Mat T(n, n - 1);
  int col = 0;
  for (int j = 0; j < n; ++j) {
    if (j == skip) continue;
    Vec v = Vec::Unit(n, j);
    v -= normal * normal.dot(v);
    for (int k = 0; k < col; ++k) v -= T.col(k) * T.col(k).dot(v);
    T.col(col++) = v.normalized();
  }
  return T;
}

// eigenvectors sorted by descending eigenvalue, first significant component
// forced positive
void deterministic_eigs(const Mat& H, Mat& Q, Vec& lam) {
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  const int d = static_cast<int>(H.rows());
  std::vector<int> order(d);
  for (int i = 0; i < d; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return es.eigenvalues()[a] > es.eigenvalues()[b]; });
  Q.resize(d, d);
  lam.resize(d);
  for (int i = 0; i < d; ++i) {
    Vec v = es.eigenvectors().col(order[i]);
    const double mx = v.cwiseAbs().maxCoeff();
    for (int j = 0; j < d; ++j) {
      if (std::abs(v[j]) > 1e-8 * mx) {
        if (v[j] < 0) v = -v;
        break;
      }
    }
    Q.col(i) = v;
    lam[i] = es.eigenvalues()[order[i]];
  }
}

// solve F(frame.ambient(t, z)) = 0 for z near z0 by Newton
double height_newton(const BodyPatch& body, const CanonicalFrame& frame, const Vec& t, double z0) {
  const Vec axis = frame.Minv.col(frame.Minv.cols() - 1);
  double z = z0;
  for (int it = 0; it < 60; ++it) {
    const Vec x = frame.ambient(t, z);
    const double F = body.implicit_value(x);
    const double dF = body.implicit_gradient(x).dot(axis);
    if (dF == 0.0) break;
    const double step = F / dF;
    z -= step;
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(z))) return z;
  }
  const Vec x = frame.ambient(t, z);
  if (std::abs(body.implicit_value(x)) > 1e-9 * (1.0 + body.length_scale()))
    throw NumericError("body_height: Newton failed to converge");
  return z;
}

// iterated central difference of mixed partial given exponent pattern
double fd_mixed(const std::function<double(const Vec&)>& f, int d, const Mono& alpha, double h) {
  std::vector<int> vars;
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < alpha.e[i]; ++k) vars.push_back(i);
  std::function<double(const Vec&, size_t)> rec = [&](const Vec& x, size_t level) -> double {
    if (level == vars.size()) return f(x);
    Vec xp = x, xm = x;
    xp[vars[level]] += h;
    xm[vars[level]] -= h;
    return (rec(xp, level + 1) - rec(xm, level + 1)) / (2.0 * h);
  };
  return rec(Vec::Zero(d), 0);
}

// Richardson ladder; `levels` halvings starting at base step
double fd_mixed_richardson(const std::function<double(const Vec&)>& f, int d, const Mono& alpha,
                           double base_h, int levels) {
  std::vector<double> row(levels);
  for (int i = 0; i < levels; ++i) row[i] = fd_mixed(f, d, alpha, base_h / std::pow(2.0, i));
  // iterated central differences have an even error expansion in h
  double pow4 = 4.0;
  for (int k = 1; k < levels; ++k) {
    for (int i = levels - 1; i >= k; --i) row[i] = (pow4 * row[i] - row[i - 1]) / (pow4 - 1.0);
    pow4 *= 4.0;
  }
  return row[levels - 1];
}

}  // namespace

Vec CanonicalFrame::ambient(const Vec& t, double z) const {
  Vec y(t.size() + 1);
  y.head(t.size()) = t;
  y[t.size()] = z;
  return from_canonical(y);
}

// ---------------------------------------------------------------------------
// QuadricBody
// ---------------------------------------------------------------------------

QuadricBody::QuadricBody(Mat A, Vec c) : A_(std::move(A)), c_(std::move(c)) {
  if (A_.rows() != A_.cols() || A_.rows() != c_.size())
    throw ArgumentError("QuadricBody: shape mismatch");
  if ((A_ - A_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * A_.cwiseAbs().maxCoeff())
    throw ArgumentError("QuadricBody: A must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(A_);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw ArgumentError("QuadricBody: A must be positive definite");
}

double QuadricBody::implicit_value(const Vec& x) const {
  const Vec d = x - c_;
  return d.dot(A_ * d) - 1.0;
}

Vec QuadricBody::implicit_gradient(const Vec& x) const { return 2.0 * (A_ * (x - c_)); }

std::optional<Poly> QuadricBody::implicit_poly() const {
  const int n = dim();
  Poly F(n, -1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (A_(i, j) == 0.0) continue;
      Poly xi = Poly::variable(n, i) - Poly(n, c_[i]);
      Poly xj = Poly::variable(n, j) - Poly(n, c_[j]);
      F += xi * xj * A_(i, j);
    }
  return F;
}

double QuadricBody::length_scale() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(A_);
  return 1.0 / std::sqrt(es.eigenvalues().maxCoeff());
}

Vec QuadricBody::boundary_point(const Vec& dir) const {
  const double q = dir.dot(A_ * dir);
  if (q <= 0.0) throw ArgumentError("QuadricBody::boundary_point: zero direction");
  return c_ + dir / std::sqrt(q);
}

QuadricBody QuadricBody::unit_sphere(int n) {
  return QuadricBody(Mat::Identity(n, n), Vec::Zero(n));
}

// ---------------------------------------------------------------------------
// LpBallBody
// ---------------------------------------------------------------------------

LpBallBody::LpBallBody(int p, int n) : p_(p), n_(n) {
  if (p < 4 || p % 2 != 0) throw ArgumentError("LpBallBody: p must be an even integer >= 4");
  if (n < 2) throw ArgumentError("LpBallBody: dimension must be >= 2");
}

double LpBallBody::implicit_value(const Vec& x) const {
  double s = -1.0;
  for (int i = 0; i < n_; ++i) s += std::pow(x[i], p_);
  return s;
}

Vec LpBallBody::implicit_gradient(const Vec& x) const {
  Vec g(n_);
  for (int i = 0; i < n_; ++i) g[i] = p_ * std::pow(x[i], p_ - 1);
  return g;
}

std::optional<Poly> LpBallBody::implicit_poly() const {
  Poly F(n_, -1.0);
  for (int i = 0; i < n_; ++i) {
    Poly xi = Poly::variable(n_, i);
    Poly t(n_, 1.0);
    for (int k = 0; k < p_; ++k) t = t * xi;
    F += t;
  }
  return F;
}

// ---------------------------------------------------------------------------
// ShearedQuadricBody
// ---------------------------------------------------------------------------

ShearedQuadricBody::ShearedQuadricBody(const QuadricBody& base, const Vec& base_point,
                                       const Vec& eta)
    : ShearedQuadricBody([&] {
        const int n = base.dim();
        if (eta.size() != n - 1) throw ArgumentError("ShearedQuadricBody: eta must have dim n-1");
        auto [jet, frame] = canonical_jet(base, base_point, 3);
        (void)jet;
        // shear in canonical coordinates: y -> S y with S = [[I, eta],[0,1]]
        Mat S = Mat::Identity(n, n);
        S.block(0, n - 1, n - 1, 1) = eta;
        // ambient map x -> Minv S M (x - p) + p; image of the quadric
        Mat L = frame.Minv * S * frame.M;
        Vec b = base_point - L * base_point;
        Mat Li = L.inverse();
        Mat A2 = Li.transpose() * base.A() * Li;
        A2 = 0.5 * (A2 + A2.transpose());
        Vec c2 = L * base.center() + b;
        return ShearedQuadricBody(std::move(A2), std::move(c2), base_point, eta, frame);
      }()) {}

ShearedQuadricBody::ShearedQuadricBody(Mat A, Vec c, Vec p0, Vec eta, CanonicalFrame f)
    : QuadricBody(std::move(A), std::move(c)),
      p0_(std::move(p0)),
      eta_(std::move(eta)),
      base_frame_(std::move(f)) {}

// ---------------------------------------------------------------------------
// PerturbedQuadricBody
// ---------------------------------------------------------------------------

PerturbedQuadricBody::PerturbedQuadricBody(Mat A, Vec c, double eps, uint64_t seed)
    : A_(std::move(A)), c_(std::move(c)), eps_(eps), seed_(seed) {
  const int n = dim();
  if (A_.rows() != n || A_.cols() != n) throw ArgumentError("PerturbedQuadricBody: shape mismatch");
  // seeded random quartic bump; coefficients O(1), scaled by eps at eval time
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  bump_ = Poly(n);
  std::vector<Mono> monos;
  std::function<void(Mono, int, int)> gen = [&](Mono m, int var, int deg) {
    if (var == n) {
      if (m.degree() >= 3) monos.push_back(m);  // cubic+quartic terms only
      return;
    }
    for (int k = 0; k + deg <= 4; ++k) {
      Mono mm = m;
      mm.e[var] = static_cast<uint8_t>(k);
      gen(mm, var + 1, deg + k);
    }
  };
  gen(Mono{}, 0, 0);
  std::sort(monos.begin(), monos.end());
  for (const Mono& m : monos) bump_.set_coeff(m, U(g));
  for (int i = 0; i < n; ++i) bump_grad_.push_back(bump_.derivative(i));
}

double PerturbedQuadricBody::implicit_value(const Vec& x) const {
  const Vec d = x - c_;
  return d.dot(A_ * d) - 1.0 + eps_ * bump_.eval(d);
}

Vec PerturbedQuadricBody::implicit_gradient(const Vec& x) const {
  const Vec d = x - c_;
  Vec g = 2.0 * (A_ * d);
  for (int i = 0; i < dim(); ++i) g[i] += eps_ * bump_grad_[i].eval(d);
  return g;
}

double PerturbedQuadricBody::length_scale() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(A_);
  return 1.0 / std::sqrt(es.eigenvalues().maxCoeff());
}

// ---------------------------------------------------------------------------
// TransformedBody
// ---------------------------------------------------------------------------

TransformedBody::TransformedBody(std::shared_ptr<const BodyPatch> inner, Mat L, Vec b)
    : inner_(std::move(inner)), L_(std::move(L)), b_(std::move(b)) {
  if (L_.rows() != L_.cols() || L_.rows() != b_.size())
    throw ArgumentError("TransformedBody: shape mismatch");
  Linv_ = L_.inverse();
}

double TransformedBody::implicit_value(const Vec& x) const {
  return inner_->implicit_value(Linv_ * (x - b_));
}

Vec TransformedBody::implicit_gradient(const Vec& x) const {
  return Linv_.transpose() * inner_->implicit_gradient(Linv_ * (x - b_));
}

std::optional<Poly> TransformedBody::implicit_poly() const {
  auto inner_poly = inner_->implicit_poly();
  if (!inner_poly) return std::nullopt;
  // F(Linv (x - b)) as a polynomial in x
  return inner_poly->substitute_affine(Linv_, Vec(-(Linv_ * b_)));
}

double TransformedBody::length_scale() const {
  return inner_->length_scale() * L_.cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// operations
// ---------------------------------------------------------------------------

Vec project_to_boundary(const BodyPatch& body, const Vec& x) {
  const double F = body.implicit_value(x);
  const Vec g = body.implicit_gradient(x);
  const double g2 = g.squaredNorm();
  if (g2 == 0.0) throw ArgumentError("project_to_boundary: vanishing gradient");
  return x - g * (F / g2);
}

Vec outward_normal(const BodyPatch& body, const Vec& x) {
  const Vec xp = project_to_boundary(body, x);
  if (std::abs(body.implicit_value(xp)) > kBoundaryTol * (1.0 + body.length_scale()) ||
      (xp - x).norm() > 1e-6 * (1.0 + x.norm()))
    throw ArgumentError("outward_normal: point is not on the boundary");
  return body.implicit_gradient(xp).normalized();
}

std::pair<BoundaryJet, CanonicalFrame> canonical_jet(const BodyPatch& body, const Vec& p, int K) {
  if (K < 2 || K > 5) throw ArgumentError("canonical_jet: order must be in 2..5");
  if (K > body.smoothness()) throw ArgumentError("canonical_jet: order unavailable");
  const int n = body.dim();
  const int d = n - 1;

  Vec p0 = project_to_boundary(body, p);
  if (std::abs(body.implicit_value(p0)) > kBoundaryTol * (1.0 + body.length_scale()))
    throw ArgumentError("canonical_jet: point is not on the boundary");
  const Vec nu = body.implicit_gradient(p0).normalized();
  const Vec w = -nu;  // inward graph direction
  const Mat T = tangent_basis(nu);

  // provisional frame with unscaled tangent coordinates
  CanonicalFrame pre;
  pre.p = p0;
  pre.M.resize(n, n);
  pre.M.topRows(d) = T.transpose();
  pre.M.row(d) = w.transpose();
  pre.Minv = pre.M.inverse();

  // Hessian of the height function at 0
  Mat H(d, d);
  auto poly = body.implicit_poly();
  Poly height_series;  // filled on the exact route
  if (poly) {
    // exact route: implicit in canonical coordinates, series-solved for z
    Poly Ft = poly->substitute_affine(pre.Minv, p0);
    std::vector<Poly> args;
    for (int i = 0; i < d; ++i) args.push_back(Poly::variable(d, i));
    args.push_back(Poly(d, 0.0));
    Poly Fz = Ft.derivative(d);
    Poly z(d);
    for (int it = 0; it < K + 2; ++it) {
      args[d] = z;
      Poly num = Ft.substitute(args, K);
      Poly den = Fz.substitute(args, K);
      z = (z - num.mul_trunc(den.inverse_series(K), K)).truncated(K);
    }
    height_series = z;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) H(i, j) = height_series.partial_at_zero({i, j});
  } else {
    auto h = [&](const Vec& t) { return height_newton(body, pre, t, 0.0); };
    const double step = 1e-2 * body.length_scale();
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        Mono m;
        m.e[i] += 1;
        m.e[j] += 1;
        H(i, j) = H(j, i) = fd_mixed_richardson(h, d, m, step, 3);
      }
  }

  Mat Q;
  Vec lam;
  deterministic_eigs(H, Q, lam);
  if (lam.minCoeff() <= kDegenerateTol) throw ArgumentError("canonical_jet: degenerate point");

  // full canonical frame: x = Lambda^(1/2) Q^T t
  CanonicalFrame frame;
  frame.p = p0;
  frame.M.resize(n, n);
  frame.M.topRows(d) = lam.cwiseSqrt().asDiagonal() * Q.transpose() * T.transpose();
  frame.M.row(d) = w.transpose();
  frame.Minv = frame.M.inverse();

  BoundaryJet jet(d, K);
  if (poly) {
    // re-express the height series in the scaled coordinates t = Q Lambda^(-1/2) x
    Mat back = Q * lam.cwiseSqrt().cwiseInverse().asDiagonal();
    Poly f = height_series.substitute_affine(back, Vec::Zero(d));
    jet = BoundaryJet::from_poly(f, d, K);
  } else {
    auto f = [&](const Vec& t) { return height_newton(body, frame, t, 0.0); };
    // canonical coordinates have unit curvature; sqrt(scale) keeps the step
    // dimensionally consistent with the chart
    const double scale = std::sqrt(body.length_scale());
    for (int k = 3; k <= K; ++k) {
      // base step and ladder depth balance truncation against roundoff of
      // the k-th difference; see module tests for the accuracy floor
      const double step = (k <= 3 ? 1e-2 : 2.5e-2) * scale;
      const int levels = (k <= 3 ? 3 : 2);
      SymTensor& t_k = jet.tensor(k);
      const auto& pats = t_k.patterns();
      for (int r = 0; r < t_k.entry_count(); ++r)
        t_k.coef(r) = fd_mixed_richardson(f, d, pats[r], step, levels);
    }
  }

  if (jet.canonical_defect() > 1e-7)
    throw NumericError("canonical_jet: canonical normalization failed");
  // snap the low orders to their exact canonical values
  jet.tensor(0) = SymTensor(0, d);
  jet.tensor(1) = SymTensor(1, d);
  jet.tensor(2) = SymTensor::identity_form(d);
  return {std::move(jet), std::move(frame)};
}

double body_height(const BodyPatch& body, const CanonicalFrame& frame, const Vec& t) {
  return height_newton(body, frame, t, 0.0);
}

std::optional<double> lp_flat_source(int p, const Vec& x, int axis) {
  if (axis < 0 || axis >= x.size()) throw ArgumentError("lp_flat_source: axis out of range");
  const double xi = x[axis];
  if (xi == 0.0) return std::nullopt;  // source at infinity
  return std::pow(std::abs(xi), 1.0 - p) * (xi > 0 ? 1.0 : -1.0);
}

bool check_general_position(const std::vector<Vec>& points, const Vec& p) {
  const int d = static_cast<int>(p.size());
  if (static_cast<int>(points.size()) < d)
    throw ArgumentError("check_general_position: need at least d points");
  std::vector<int> idx(d);
  std::function<bool(int, int)> rec = [&](int start, int slot) -> bool {
    if (slot == d) {
      Mat U(d, d);
      double scale = 1.0;
      for (int k = 0; k < d; ++k) {
        U.col(k) = points[idx[k]] - p;
        scale *= U.col(k).norm();
      }
      return std::abs(U.determinant()) > 1e-10 * scale;
    }
    for (int i = start; i <= static_cast<int>(points.size()) - (d - slot); ++i) {
      idx[slot] = i;
      if (!rec(i + 1, slot + 1)) return false;
    }
    return true;
  };
  return rec(0, 0);
}

}  // namespace umbra
