#include "umbra/tensor_jets.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "umbra/errors.hpp"

namespace umbra {

namespace {

struct PatternTable {
  std::vector<Mono> patterns;      // lex order
  std::map<Mono, int> rank;
};

// enumerate exponent patterns over `dim` slots with total `order`
void enumerate_patterns(int dim, int order, int slot, Mono cur, std::vector<Mono>& out) {
  if (slot == dim - 1) {
    cur.e[slot] = static_cast<uint8_t>(order);
    out.push_back(cur);
    return;
  }
  for (int k = order; k >= 0; --k) {
    cur.e[slot] = static_cast<uint8_t>(k);
    enumerate_patterns(dim, order - k, slot + 1, cur, out);
  }
}

const PatternTable& table_for(int dim, int order) {
  static std::map<std::pair<int, int>, PatternTable> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(dim, order);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  PatternTable t;
  if (dim > 0) {
    Mono m;
    enumerate_patterns(dim, order, 0, m, t.patterns);
    std::sort(t.patterns.begin(), t.patterns.end());
    for (int i = 0; i < static_cast<int>(t.patterns.size()); ++i) t.rank[t.patterns[i]] = i;
  }
  return cache.emplace(key, std::move(t)).first->second;
}

double multinomial(int k, const Mono& alpha) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  for (int j = 0; j < Mono::kMaxVars; ++j)
    for (int i = 2; i <= alpha.e[j]; ++i) f /= i;
  return f;
}

double factorial_product(const Mono& alpha) {
  double f = 1.0;
  for (int j = 0; j < Mono::kMaxVars; ++j)
    for (int i = 2; i <= alpha.e[j]; ++i) f *= i;
  return f;
}

}  // namespace

SymTensor::SymTensor(int order, int dim) : order_(order), dim_(dim) {
  if (order < 0 || dim < 1 || dim > Mono::kMaxVars)
    throw ArgumentError("SymTensor: order must be >= 0 and 1 <= dim <= 8");
  coef_.assign(table_for(dim, order).patterns.size(), 0.0);
}

SymTensor SymTensor::identity_form(int dim) {
  SymTensor t(2, dim);
  for (int i = 0; i < dim; ++i) {
    const int idx[2] = {i, i};
    t.at(idx) = 1.0;
  }
  return t;
}

SymTensor SymTensor::from_poly(const Poly& p, int order) {
  SymTensor t(order, p.nvars());
  const auto& tab = table_for(p.nvars(), order);
  for (int r = 0; r < static_cast<int>(tab.patterns.size()); ++r) {
    const Mono& a = tab.patterns[r];
    t.coef_[r] = p.coeff(a) * factorial_product(a);
  }
  return t;
}

const std::vector<Mono>& SymTensor::patterns() const { return table_for(dim_, order_).patterns; }

int SymTensor::rank_of(const Mono& m) const {
  const auto& tab = table_for(dim_, order_);
  auto it = tab.rank.find(m);
  if (it == tab.rank.end()) throw ArgumentError("SymTensor: bad multi-index");
  return it->second;
}

double& SymTensor::at(std::span<const int> multi_index) {
  if (static_cast<int>(multi_index.size()) != order_)
    throw ArgumentError("SymTensor::at: arity mismatch");
  Mono m;
  for (int i : multi_index) {
    if (i < 0 || i >= dim_) throw ArgumentError("SymTensor::at: index out of range");
    m.e[i] += 1;
  }
  return coef_[rank_of(m)];
}

double SymTensor::at(std::span<const int> multi_index) const {
  return const_cast<SymTensor*>(this)->at(multi_index);
}

double SymTensor::apply(std::span<const Vec> vectors) const {
  if (static_cast<int>(vectors.size()) != order_)
    throw ArgumentError("SymTensor::apply: arity mismatch");
  for (const auto& v : vectors)
    if (v.size() != dim_) throw ArgumentError("SymTensor::apply: dimension mismatch");
  if (order_ == 0) return coef_.empty() ? 0.0 : coef_[0];
  // Canonical input order makes the evaluation bitwise invariant under input
  // permutations (the form is symmetric, so the value is unaffected).
  std::vector<const Vec*> vs(order_);
  for (int i = 0; i < order_; ++i) vs[i] = &vectors[i];
  std::sort(vs.begin(), vs.end(), [this](const Vec* a, const Vec* b) {
    for (int i = 0; i < dim_; ++i) {
      if ((*a)[i] != (*b)[i]) return (*a)[i] < (*b)[i];
    }
    return false;
  });
  const auto& tab = table_for(dim_, order_);
  double total = 0.0;
  std::vector<int> idx(order_, 0);
  auto rec = [&](auto&& self, int slot, double prod, Mono m) -> void {
    if (slot == order_) {
      total += prod * coef_[tab.rank.at(m)];
      return;
    }
    for (int i = 0; i < dim_; ++i) {
      const double x = (*vs[slot])[i];
      if (x == 0.0) continue;
      Mono mm = m;
      mm.e[i] += 1;
      self(self, slot + 1, prod * x, mm);
    }
  };
  rec(rec, 0, 1.0, Mono{});
  return total;
}

double SymTensor::apply(const Vec& a) const {
  const Vec vs[1] = {a};
  return apply(std::span<const Vec>(vs, 1));
}
double SymTensor::apply(const Vec& a, const Vec& b) const {
  const Vec vs[2] = {a, b};
  return apply(std::span<const Vec>(vs, 2));
}
double SymTensor::apply(const Vec& a, const Vec& b, const Vec& c) const {
  const Vec vs[3] = {a, b, c};
  return apply(std::span<const Vec>(vs, 3));
}

SymTensor SymTensor::contract(const Vec& u) const {
  if (order_ < 1) throw ArgumentError("SymTensor::contract: order-0 tensor");
  if (u.size() != dim_) throw ArgumentError("SymTensor::contract: dimension mismatch");
  SymTensor out(order_ - 1, dim_);
  const auto& out_tab = table_for(dim_, order_ - 1);
  const auto& in_tab = table_for(dim_, order_);
  for (int r = 0; r < static_cast<int>(out_tab.patterns.size()); ++r) {
    const Mono& beta = out_tab.patterns[r];
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) {
      if (u[i] == 0.0) continue;
      Mono alpha = beta;
      alpha.e[i] += 1;
      s += coef_[in_tab.rank.at(alpha)] * u[i];
    }
    out.coef_[r] = s;
  }
  return out;
}

SymTensor SymTensor::domain_map(const Mat& L) const {
  if (L.rows() != dim_ || L.cols() != dim_)
    throw ArgumentError("SymTensor::domain_map: matrix size mismatch");
  // T'(v..) = T(Lv..): substitute x -> L x in the diagonal polynomial
  Poly p = taylor_poly();  // T[x..x]/k!
  Poly q = p.substitute_affine(L, Vec::Zero(dim_));
  return from_poly(q, order_);  // from_poly multiplies the factorials back in
}

Poly SymTensor::taylor_poly() const {
  Poly p(dim_);
  const auto& tab = table_for(dim_, order_);
  for (int r = 0; r < static_cast<int>(tab.patterns.size()); ++r) {
    if (coef_[r] == 0.0) continue;
    p.set_coeff(tab.patterns[r], coef_[r] / factorial_product(tab.patterns[r]));
  }
  return p;
}

SymTensor SymTensor::operator+(const SymTensor& o) const {
  if (o.order_ != order_ || o.dim_ != dim_) throw ArgumentError("SymTensor: shape mismatch");
  SymTensor r = *this;
  for (size_t i = 0; i < coef_.size(); ++i) r.coef_[i] += o.coef_[i];
  return r;
}

SymTensor SymTensor::operator-(const SymTensor& o) const {
  if (o.order_ != order_ || o.dim_ != dim_) throw ArgumentError("SymTensor: shape mismatch");
  SymTensor r = *this;
  for (size_t i = 0; i < coef_.size(); ++i) r.coef_[i] -= o.coef_[i];
  return r;
}

SymTensor SymTensor::operator*(double s) const {
  SymTensor r = *this;
  for (auto& c : r.coef_) c *= s;
  return r;
}

double SymTensor::norm() const {
  const auto& tab = table_for(dim_, order_);
  double s = 0.0;
  for (int r = 0; r < static_cast<int>(tab.patterns.size()); ++r)
    s += multinomial(order_, tab.patterns[r]) * coef_[r] * coef_[r];
  return std::sqrt(s);
}

double SymTensor::max_abs_entry() const {
  double m = 0.0;
  for (double c : coef_) m = std::max(m, std::abs(c));
  return m;
}

SymTensor shear_cubic(const Vec& w) {
  const int d = static_cast<int>(w.size());
  SymTensor t(3, d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j)
      for (int k = j; k < d; ++k) {
        const int idx[3] = {i, j, k};
        double v = 0.0;
        if (i == j) v += w[k];
        if (j == k) v += w[i];
        if (i == k) v += w[j];
        t.at(idx) = v;
      }
  return t;
}

BoundaryJet::BoundaryJet(int dim, int max_order) : dim_(dim) {
  if (max_order < 2) throw ArgumentError("BoundaryJet: max_order must be >= 2");
  tensors_.reserve(max_order + 1);
  for (int k = 0; k <= max_order; ++k) tensors_.emplace_back(k, dim);
  tensors_[2] = SymTensor::identity_form(dim);
}

BoundaryJet BoundaryJet::from_poly(const Poly& f, int dim, int max_order) {
  BoundaryJet j(dim, max_order);
  for (int k = 0; k <= max_order; ++k) j.tensors_[k] = SymTensor::from_poly(f, k);
  return j;
}

double BoundaryJet::canonical_defect() const {
  double d = std::abs(tensors_[0].coef(0));
  for (int r = 0; r < tensors_[1].entry_count(); ++r) d = std::max(d, std::abs(tensors_[1].coef(r)));
  SymTensor diff = tensors_[2] - SymTensor::identity_form(dim_);
  d = std::max(d, diff.max_abs_entry());
  return d;
}

Poly BoundaryJet::truncation() const {
  Poly f(dim_);
  for (const auto& t : tensors_) f += t.taylor_poly();
  return f;
}

BoundaryJet BoundaryJet::rotated(const Mat& R) const {
  if (R.rows() != dim_ || R.cols() != dim_)
    throw ArgumentError("BoundaryJet::rotated: matrix size mismatch");
  const double defect = (R.transpose() * R - Mat::Identity(dim_, dim_)).cwiseAbs().maxCoeff();
  if (defect > 1e-12) throw ArgumentError("BoundaryJet::rotated: matrix is not orthogonal");
  BoundaryJet out = *this;
  for (auto& t : out.tensors_) t = t.domain_map(R);
  return out;
}

BoundaryJet BoundaryJet::sheared(const Vec& eta) const {
  if (eta.size() != dim_) throw ArgumentError("BoundaryJet::sheared: dimension mismatch");
  const int K = max_order();
  const Poly f = truncation();
  // Ambient (x, z) -> (x + eta z, z) maps the graph z = f(x) to the graph of
  // ftilde over xt = x + eta f(x). Invert x(xt) order by order, then compose.
  std::vector<Poly> x(dim_);
  for (int i = 0; i < dim_; ++i) x[i] = Poly::variable(dim_, i);
  for (int it = 0; it < K; ++it) {
    Poly fx = f.substitute(x, K);
    for (int i = 0; i < dim_; ++i) x[i] = Poly::variable(dim_, i) - fx * eta[i];
  }
  Poly ft = f.substitute(x, K);
  return BoundaryJet::from_poly(ft, dim_, K);
}

}  // namespace umbra
