#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

// Shared helpers for the test suites. The MiniPoly type is a deliberately
// independent polynomial implementation used as a differentiation oracle; it
// must not call into umbra::Poly.

namespace testsup {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline std::mt19937_64 rng(uint64_t seed) { return std::mt19937_64(seed); }

inline VectorXd random_vec(std::mt19937_64& g, int d, double scale = 1.0) {
  std::normal_distribution<double> N(0.0, scale);
  VectorXd v(d);
  for (int i = 0; i < d; ++i) v[i] = N(g);
  return v;
}

inline MatrixXd random_orthogonal(std::mt19937_64& g, int d) {
  MatrixXd A(d, d);
  std::normal_distribution<double> N(0.0, 1.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) A(i, j) = N(g);
  Eigen::HouseholderQR<MatrixXd> qr(A);
  MatrixXd Q = qr.householderQ();
  MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i)
    if (R(i, i) < 0) Q.col(i) *= -1.0;
  return Q;
}

inline MatrixXd random_spd(std::mt19937_64& g, int d, double cond_scale = 1.0) {
  MatrixXd Q = random_orthogonal(g, d);
  VectorXd ev(d);
  std::uniform_real_distribution<double> U(0.5, 2.0);
  for (int i = 0; i < d; ++i) ev[i] = U(g) * cond_scale;
  return Q * ev.asDiagonal() * Q.transpose();
}

// rotation by angle t in the (i, j) coordinate plane
inline MatrixXd plane_rotation(int d, int i, int j, double t) {
  MatrixXd R = MatrixXd::Identity(d, d);
  R(i, i) = std::cos(t);
  R(j, j) = std::cos(t);
  R(i, j) = -std::sin(t);
  R(j, i) = std::sin(t);
  return R;
}

// ---------------------------------------------------------------------------
// MiniPoly: independent sparse polynomial oracle (exponent map -> coefficient)
// ---------------------------------------------------------------------------
struct MiniPoly {
  int n = 0;
  std::map<std::array<int, 8>, double> c;

  static MiniPoly var(int n, int i) {
    MiniPoly p;
    p.n = n;
    std::array<int, 8> e{};
    e[i] = 1;
    p.c[e] = 1.0;
    return p;
  }
  static MiniPoly constant(int n, double v) {
    MiniPoly p;
    p.n = n;
    if (v != 0.0) p.c[std::array<int, 8>{}] = v;
    return p;
  }
  MiniPoly operator+(const MiniPoly& o) const {
    MiniPoly r = *this;
    for (auto& [e, v] : o.c) r.c[e] += v;
    return r;
  }
  MiniPoly operator-(const MiniPoly& o) const {
    MiniPoly r = *this;
    for (auto& [e, v] : o.c) r.c[e] -= v;
    return r;
  }
  MiniPoly operator*(const MiniPoly& o) const {
    MiniPoly r;
    r.n = n;
    for (auto& [ea, va] : c)
      for (auto& [eb, vb] : o.c) {
        std::array<int, 8> e{};
        for (int i = 0; i < 8; ++i) e[i] = ea[i] + eb[i];
        r.c[e] += va * vb;
      }
    return r;
  }
  MiniPoly operator*(double s) const {
    MiniPoly r = *this;
    for (auto& [e, v] : r.c) v *= s;
    return r;
  }
  double eval(const VectorXd& x) const {
    double s = 0.0;
    for (auto& [e, v] : c) {
      double t = v;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < e[i]; ++k) t *= x[i];
      s += t;
    }
    return s;
  }
  // substitute x_i := sum_j A(i,j) y_j (linear change of variables)
  MiniPoly subst_linear(const MatrixXd& A) const {
    std::vector<MiniPoly> lin;
    for (int i = 0; i < n; ++i) {
      MiniPoly li = constant(n, 0.0);
      for (int j = 0; j < n; ++j)
        if (A(i, j) != 0.0) li = li + var(n, j) * A(i, j);
      lin.push_back(li);
    }
    MiniPoly r = constant(n, 0.0);
    for (auto& [e, v] : c) {
      MiniPoly t = constant(n, v);
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < e[i]; ++k) t = t * lin[i];
      r = r + t;
    }
    return r;
  }
  // mixed partial derivative at 0
  double partial0(const std::vector<int>& vars) const {
    std::array<int, 8> want{};
    for (int v : vars) want[v] += 1;
    auto it = c.find(want);
    if (it == c.end()) return 0.0;
    double f = 1.0;
    for (int i = 0; i < 8; ++i)
      for (int k = 2; k <= want[i]; ++k) f *= k;
    return it->second * f;
  }
};

}  // namespace testsup
