#include "umbra/poly.hpp"

#include <cmath>
#include <stdexcept>

#include "umbra/errors.hpp"

namespace umbra {

namespace {
constexpr double kDropTol = 0.0;  // keep exact zeros out, nothing else
}

Poly::Poly(int nvars, double constant) : nvars_(nvars) {
  if (constant != 0.0) terms_[Mono{}] = constant;
}

Poly Poly::variable(int nvars, int i) {
  if (i < 0 || i >= nvars || nvars > Mono::kMaxVars)
    throw ArgumentError("Poly::variable: index out of range");
  Poly p(nvars);
  Mono m;
  m.e[i] = 1;
  p.terms_[m] = 1.0;
  return p;
}

Poly Poly::linear(const Vec& v) {
  Poly p(static_cast<int>(v.size()));
  for (int i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) {
      Mono m;
      m.e[i] = 1;
      p.terms_[m] = v[i];
    }
  }
  return p;
}

int Poly::total_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

double Poly::coeff(const Mono& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0.0 : it->second;
}

void Poly::set_coeff(const Mono& m, double c) {
  if (c == 0.0)
    terms_.erase(m);
  else
    terms_[m] = c;
}

void Poly::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= kDropTol)
      it = terms_.erase(it);
    else
      ++it;
  }
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  r += o;
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  Poly r = *this;
  r -= o;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) terms_[m] += c;
  prune();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) terms_[m] -= c;
  prune();
  return *this;
}

Poly Poly::operator*(double s) const {
  Poly r(nvars_);
  if (s == 0.0) return r;
  for (const auto& [m, c] : terms_) r.terms_[m] = c * s;
  return r;
}

Poly Poly::operator*(const Poly& o) const { return mul_trunc(o, INT32_MAX); }

Poly Poly::mul_trunc(const Poly& o, int max_deg) const {
  Poly r(nvars_);
  for (const auto& [ma, ca] : terms_) {
    const int da = ma.degree();
    for (const auto& [mb, cb] : o.terms_) {
      if (da + mb.degree() > max_deg) continue;
      Mono m;
      for (int i = 0; i < Mono::kMaxVars; ++i) m.e[i] = static_cast<uint8_t>(ma.e[i] + mb.e[i]);
      r.terms_[m] += ca * cb;
    }
  }
  r.prune();
  return r;
}

Poly Poly::truncated(int max_deg) const {
  Poly r(nvars_);
  for (const auto& [m, c] : terms_)
    if (m.degree() <= max_deg) r.terms_[m] = c;
  return r;
}

Poly Poly::homogeneous_part(int k) const {
  Poly r(nvars_);
  for (const auto& [m, c] : terms_)
    if (m.degree() == k) r.terms_[m] = c;
  return r;
}

Poly Poly::derivative(int var) const {
  Poly r(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m.e[var] == 0) continue;
    Mono d = m;
    d.e[var] -= 1;
    r.terms_[d] += c * m.e[var];
  }
  r.prune();
  return r;
}

double Poly::eval(const Vec& x) const {
  double s = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = c;
    for (int i = 0; i < nvars_; ++i)
      for (int k = 0; k < m.e[i]; ++k) t *= x[i];
    s += t;
  }
  return s;
}

double Poly::partial_at_zero(const std::vector<int>& vars) const {
  Mono m;
  for (int v : vars) m.e[v] += 1;
  double fact = 1.0;
  for (int i = 0; i < Mono::kMaxVars; ++i)
    for (int k = 2; k <= m.e[i]; ++k) fact *= k;
  return coeff(m) * fact;
}

Poly Poly::substitute(const std::vector<Poly>& args, int max_deg) const {
  if (static_cast<int>(args.size()) != nvars_)
    throw ArgumentError("Poly::substitute: argument count mismatch");
  const int out_vars = args.empty() ? 0 : args[0].nvars();
  // powers of each argument, computed on demand
  std::vector<std::vector<Poly>> pows(nvars_);
  for (int i = 0; i < nvars_; ++i) pows[i].push_back(Poly(out_vars, 1.0));
  auto power = [&](int i, int k) -> const Poly& {
    while (static_cast<int>(pows[i].size()) <= k)
      pows[i].push_back(pows[i].back().mul_trunc(args[i], max_deg));
    return pows[i][k];
  };
  Poly r(out_vars);
  for (const auto& [m, c] : terms_) {
    Poly t(out_vars, c);
    for (int i = 0; i < nvars_; ++i)
      if (m.e[i] > 0) t = t.mul_trunc(power(i, m.e[i]), max_deg);
    r += t;
  }
  return r;
}

Poly Poly::substitute_affine(const Mat& A, const Vec& b) const {
  const int out_vars = static_cast<int>(A.cols());
  std::vector<Poly> args;
  args.reserve(nvars_);
  for (int i = 0; i < nvars_; ++i) {
    Poly li = Poly::linear(Vec(A.row(i).transpose()));
    li += Poly(out_vars, b[i]);
    args.push_back(li);
  }
  return substitute(args, INT32_MAX);
}

Poly Poly::inverse_series(int max_deg) const {
  const double c0 = coeff(Mono{});
  if (c0 == 0.0) throw ArgumentError("Poly::inverse_series: zero constant term");
  // 1/(c0(1+u)) = (1/c0) sum (-u)^k
  Poly u = (*this * (1.0 / c0)) - Poly(nvars_, 1.0);
  Poly inv(nvars_, 1.0);
  for (int k = 0; k < max_deg; ++k) {
    inv = Poly(nvars_, 1.0) - u.mul_trunc(inv, max_deg);
  }
  return inv * (1.0 / c0);
}

double Poly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [mono, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace umbra
