#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <map>
#include <vector>

namespace umbra {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Exponent vector of a monomial. Fixed capacity keeps the map key cheap;
/// unused slots stay zero.
struct Mono {
  static constexpr int kMaxVars = 8;
  std::array<uint8_t, kMaxVars> e{};

  int degree() const {
    int d = 0;
    for (auto x : e) d += x;
    return d;
  }
  bool operator<(const Mono& o) const { return e < o.e; }
  bool operator==(const Mono& o) const { return e == o.e; }
};

/// Sparse multivariate polynomial with double coefficients.
///
/// Used as the exact-arithmetic series engine behind shear gauges, closed-form
/// body jets and several test oracles. Degrees stay tiny (<= 6) so a sorted
/// map is plenty.
class Poly {
 public:
  Poly() = default;
  explicit Poly(int nvars) : nvars_(nvars) {}
  Poly(int nvars, double constant);

  static Poly variable(int nvars, int i);
  static Poly constant(int nvars, double c) { return Poly(nvars, c); }
  /// <x, v> as a linear polynomial.
  static Poly linear(const Vec& v);

  int nvars() const { return nvars_; }
  bool empty() const { return terms_.empty(); }
  int total_degree() const;

  double coeff(const Mono& m) const;
  void set_coeff(const Mono& m, double c);
  const std::map<Mono, double>& terms() const { return terms_; }

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(double s) const;
  Poly operator-() const { return *this * -1.0; }
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);

  /// Product with all monomials of total degree > max_deg dropped.
  Poly mul_trunc(const Poly& o, int max_deg) const;
  Poly truncated(int max_deg) const;
  /// Sum of the terms of total degree exactly k.
  Poly homogeneous_part(int k) const;

  Poly derivative(int var) const;
  double eval(const Vec& x) const;
  /// Mixed partial at 0: coefficient times the factorials of the exponents.
  double partial_at_zero(const std::vector<int>& vars) const;

  /// Substitute x_i := args[i], truncating at max_deg. All args share nvars.
  Poly substitute(const std::vector<Poly>& args, int max_deg) const;
  /// Substitute x := A y + b (affine change of variables), exact.
  Poly substitute_affine(const Mat& A, const Vec& b) const;

  /// Multiplicative inverse as a series, valid when the constant term is
  /// nonzero; truncated at max_deg.
  Poly inverse_series(int max_deg) const;

  double max_abs_coeff() const;

 private:
  int nvars_ = 0;
  std::map<Mono, double> terms_;  // nonzero coefficients only

  void prune();
};

}  // namespace umbra
