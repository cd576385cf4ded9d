#pragma once

#include <span>
#include <vector>

#include "umbra/poly.hpp"

namespace umbra {

/// Symmetric order-k multilinear form on R^d.
///
/// Entries are stored once per sorted multi-index, encoded as an exponent
/// pattern alpha (alpha[i] = multiplicity of basis index i, |alpha| = k), in
/// lexicographic order. Symmetry is structural: evaluation cannot depend on
/// the input order because only the pattern is ever consulted.
class SymTensor {
 public:
  SymTensor() = default;
  SymTensor(int order, int dim);  // zero tensor

  static SymTensor identity_form(int dim);  // order 2, <a,b>
  /// Order-k derivative tensor D^k p(0) of a polynomial (k-th mixed partials).
  static SymTensor from_poly(const Poly& p, int order);

  int order() const { return order_; }
  int dim() const { return dim_; }
  int entry_count() const { return static_cast<int>(coef_.size()); }

  double& at(std::span<const int> multi_index);
  double at(std::span<const int> multi_index) const;
  const std::vector<Mono>& patterns() const;
  double& coef(int rank) { return coef_[rank]; }
  double coef(int rank) const { return coef_[rank]; }

  /// Multilinear symmetric evaluation on k vectors.
  double apply(std::span<const Vec> vectors) const;
  double apply(const Vec& a) const;                              // k = 1..
  double apply(const Vec& a, const Vec& b) const;                // convenience
  double apply(const Vec& a, const Vec& b, const Vec& c) const;  // overloads

  /// T(u, ., ..., .) as an order-(k-1) tensor.
  SymTensor contract(const Vec& u) const;

  /// Entries of (v1,...,vk) -> T(L v1, ..., L vk).
  SymTensor domain_map(const Mat& L) const;

  /// T[x,...,x]/k! as a polynomial in d variables (the Taylor term).
  Poly taylor_poly() const;

  SymTensor operator+(const SymTensor& o) const;
  SymTensor operator-(const SymTensor& o) const;
  SymTensor operator*(double s) const;

  /// Frobenius norm over all d^k slots (multiplicities counted).
  double norm() const;
  double max_abs_entry() const;

 private:
  int order_ = 0;
  int dim_ = 0;
  std::vector<double> coef_;

  int rank_of(const Mono& m) const;
};

/// sym3(a,b,c; w) = <a,b><c,w> + <b,c><a,w> + <c,a><b,w> as an order-3 tensor.
/// This is the cubic shape produced by the shear gauge (up to scale).
SymTensor shear_cubic(const Vec& w);

/// Canonical Taylor data of a boundary patch at a point: tensors D^k f for
/// k = 0..K with D^0 f = 0, D f = 0, D^2 f = identity.
class BoundaryJet {
 public:
  BoundaryJet() = default;
  /// Jet of the round paraboloid f = |x|^2/2 (all higher tensors zero).
  BoundaryJet(int dim, int max_order);

  static BoundaryJet from_poly(const Poly& f, int dim, int max_order);

  int dim() const { return dim_; }
  int max_order() const { return static_cast<int>(tensors_.size()) - 1; }
  const SymTensor& tensor(int k) const { return tensors_[k]; }
  SymTensor& tensor(int k) { return tensors_[k]; }

  /// Deviation from the canonical normalization of orders 0..2.
  double canonical_defect() const;

  /// Polynomial truncation sum_k D^k f [x..x] / k!.
  Poly truncation() const;

  /// Jet of f o R for orthogonal R (orthogonality enforced at 1e-12).
  BoundaryJet rotated(const Mat& R) const;

  /// Shear gauge: apply the ambient map (x, z) -> (x + eta z, z) to the graph
  /// of the truncation, re-solve for graph form and re-extract the jet.
  /// Orders 0..2 are unchanged; the order-3 change is -3 <x,x><x,eta> on the
  /// diagonal (constant calibrated by test, frozen as a regression value).
  BoundaryJet sheared(const Vec& eta) const;

 private:
  int dim_ = 0;
  std::vector<SymTensor> tensors_;
};

}  // namespace umbra
