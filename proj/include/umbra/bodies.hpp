#pragma once

#include <memory>
#include <optional>
#include <string>

#include "umbra/tensor_jets.hpp"

namespace umbra {

/// Affine chart carrying a boundary point to the canonical parametrization:
/// y = M (x - p) with y_n the inward graph coordinate and the tangent
/// coordinates scaled so the second fundamental form becomes the identity.
struct CanonicalFrame {
  Mat M;     // n x n, invertible (not orthogonal: includes the II scaling)
  Vec p;     // base point on the boundary
  Mat Minv;  // cached inverse

  Vec to_canonical(const Vec& x) const { return M * (x - p); }
  Vec from_canonical(const Vec& y) const { return Minv * y + p; }
  /// Ambient point of canonical tangent coordinates t and height z.
  Vec ambient(const Vec& t, double z) const;
};

/// Evaluatable convex hypersurface patch. Implicit convention: F < 0 strictly
/// inside, so the gradient points outward on the boundary.
class BodyPatch {
 public:
  virtual ~BodyPatch() = default;
  virtual int dim() const = 0;
  virtual double implicit_value(const Vec& x) const = 0;
  virtual Vec implicit_gradient(const Vec& x) const = 0;
  /// Highest jet order canonical_jet supports for this body.
  virtual int smoothness() const = 0;
  /// Exact polynomial implicit, when the body has one. Bodies without it get
  /// the finite-difference jet route.
  virtual std::optional<Poly> implicit_poly() const { return std::nullopt; }
  virtual std::string tag() const = 0;
  virtual double length_scale() const { return 1.0; }
};

/// Ellipsoid {x : <A(x-c), x-c> = 1}, A symmetric positive definite.
class QuadricBody : public BodyPatch {
 public:
  QuadricBody(Mat A, Vec c);

  int dim() const override { return static_cast<int>(c_.size()); }
  double implicit_value(const Vec& x) const override;
  Vec implicit_gradient(const Vec& x) const override;
  int smoothness() const override { return 5; }
  std::optional<Poly> implicit_poly() const override;
  std::string tag() const override { return "quadric"; }
  double length_scale() const override;

  const Mat& A() const { return A_; }
  const Vec& center() const { return c_; }

  /// Boundary point in direction dir from the center.
  Vec boundary_point(const Vec& dir) const;

  static QuadricBody unit_sphere(int n);

 private:
  Mat A_;
  Vec c_;
};

/// Unit ball of l^p, p even >= 4 (guarantees the smoothness the jets need,
/// away from the coordinate hyperplanes).
class LpBallBody : public BodyPatch {
 public:
  LpBallBody(int p, int n);

  int dim() const override { return n_; }
  double implicit_value(const Vec& x) const override;
  Vec implicit_gradient(const Vec& x) const override;
  int smoothness() const override { return 5; }
  std::optional<Poly> implicit_poly() const override;
  std::string tag() const override { return "lp_ball"; }

  int p() const { return p_; }

 private:
  int p_;
  int n_;
};

/// Quadric obtained by applying the shear-gauge ambient map with parameter
/// eta (in the canonical chart at base_point of the given quadric). Still a
/// quadric; the provenance is kept so tests can predict the canonical cubic.
class ShearedQuadricBody : public QuadricBody {
 public:
  ShearedQuadricBody(const QuadricBody& base, const Vec& base_point, const Vec& eta);

  std::string tag() const override { return "sheared_quadric"; }
  const Vec& eta() const { return eta_; }
  const Vec& base_point() const { return p0_; }
  const CanonicalFrame& base_frame() const { return base_frame_; }

 private:
  ShearedQuadricBody(Mat A, Vec c, Vec p0, Vec eta, CanonicalFrame f);
  Vec p0_;
  Vec eta_;
  CanonicalFrame base_frame_;
};

/// Quadric with a small seeded polynomial perturbation of the implicit.
/// Deliberately does not expose the polynomial: jets go through the
/// finite-difference route.
class PerturbedQuadricBody : public BodyPatch {
 public:
  PerturbedQuadricBody(Mat A, Vec c, double eps, uint64_t seed);

  int dim() const override { return static_cast<int>(c_.size()); }
  double implicit_value(const Vec& x) const override;
  Vec implicit_gradient(const Vec& x) const override;
  int smoothness() const override { return 4; }
  std::string tag() const override { return "perturbed_quadric"; }
  double length_scale() const override;

  double eps() const { return eps_; }
  uint64_t seed() const { return seed_; }
  const Mat& A() const { return A_; }
  const Vec& center() const { return c_; }

 private:
  Mat A_;
  Vec c_;
  double eps_;
  uint64_t seed_;
  Poly bump_;  // perturbation polynomial in (x - c)
  std::vector<Poly> bump_grad_;
};

/// Body composed with an affine map x -> L x + b (image body). Keeps exact
/// jets when the inner body has them.
class TransformedBody : public BodyPatch {
 public:
  TransformedBody(std::shared_ptr<const BodyPatch> inner, Mat L, Vec b);

  int dim() const override { return static_cast<int>(b_.size()); }
  double implicit_value(const Vec& x) const override;
  Vec implicit_gradient(const Vec& x) const override;
  int smoothness() const override { return inner_->smoothness(); }
  std::optional<Poly> implicit_poly() const override;
  std::string tag() const override { return "transformed:" + inner_->tag(); }
  double length_scale() const override;

 private:
  std::shared_ptr<const BodyPatch> inner_;
  Mat L_, Linv_;
  Vec b_;
};

// ---------------------------------------------------------------------------
// operations
// ---------------------------------------------------------------------------

/// One Newton projection onto the boundary along the gradient.
Vec project_to_boundary(const BodyPatch& body, const Vec& x);

/// Unit outward normal; x must satisfy the boundary tolerance.
Vec outward_normal(const BodyPatch& body, const Vec& x);

/// Canonical jet of order K at boundary point p, with the frame that realizes
/// it. Throws ArgumentError("degenerate point") if II is not positive
/// definite, ArgumentError("order unavailable") if K exceeds smoothness.
std::pair<BoundaryJet, CanonicalFrame> canonical_jet(const BodyPatch& body, const Vec& p, int K);

/// Height of the boundary graph above canonical tangent coordinates t
/// (solves along the canonical graph axis; Newton).
double body_height(const BodyPatch& body, const CanonicalFrame& frame, const Vec& t);

/// Light source position lambda e_i that makes the shadow boundary of B_p^n
/// through x flat: lambda = |x_i|^(1-p) sgn x_i. Empty when x_i = 0 (source
/// at infinity).
std::optional<double> lp_flat_source(int p, const Vec& x, int axis);

/// True iff every d-subset of (points - p) spans (general linear position
/// with respect to p). Volume test at 1e-10 relative.
bool check_general_position(const std::vector<Vec>& points, const Vec& p);

}  // namespace umbra
