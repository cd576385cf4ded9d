#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "support.hpp"
#include "umbra/errors.hpp"
#include "umbra/tensor_jets.hpp"

using namespace umbra;
using testsup::MiniPoly;

namespace {

// random jet with canonical low orders and random higher tensors
BoundaryJet random_jet(std::mt19937_64& g, int d, int K, double scale = 0.5) {
  BoundaryJet j(d, K);
  std::normal_distribution<double> N(0.0, scale);
  for (int k = 3; k <= K; ++k)
    for (int r = 0; r < j.tensor(k).entry_count(); ++r) j.tensor(k).coef(r) = N(g);
  return j;
}

double jet_distance(const BoundaryJet& a, const BoundaryJet& b, int up_to) {
  double m = 0.0;
  for (int k = 0; k <= up_to; ++k) m = std::max(m, (a.tensor(k) - b.tensor(k)).max_abs_entry());
  return m;
}

// least-squares fit of c in  T ~= c * shear_cubic(eta), for known eta
double fit_shear_constant(const SymTensor& t, const Vec& eta, double* residual = nullptr) {
  SymTensor s = shear_cubic(eta);
  double num = 0.0, den = 0.0;
  for (int r = 0; r < t.entry_count(); ++r) {
    num += t.coef(r) * s.coef(r);
    den += s.coef(r) * s.coef(r);
  }
  double c = num / den;
  if (residual) *residual = (t - s * c).norm();
  return c;
}

}  // namespace

TEST_CASE("sym_apply: identity form and zero tensor") {
  auto g = testsup::rng(1);
  const int d = 4;
  SymTensor id = SymTensor::identity_form(d);
  SymTensor zero(3, d);
  for (int trial = 0; trial < 10; ++trial) {
    Vec a = testsup::random_vec(g, d), b = testsup::random_vec(g, d);
    CHECK(id.apply(a, b) == doctest::Approx(a.dot(b)).epsilon(1e-14));
    CHECK(zero.apply(a, b, a) == 0.0);
  }
}

TEST_CASE("sym_apply: order-3 tensor of x1^2 x2") {
  // D^3(x^2 y) has the single nonzero mixed partial d_x d_x d_y = 2
  SymTensor t(3, 2);
  const int idx[3] = {0, 0, 1};
  t.at(idx) = 2.0;

  Vec e1 = Vec::Unit(2, 0), e2 = Vec::Unit(2, 1);
  CHECK(t.apply(e1, e1, e2) == doctest::Approx(2.0));

  // full diagonal evaluation equals 3! * p(x) for the homogeneous cubic
  auto g = testsup::rng(2);
  MiniPoly p = MiniPoly::var(2, 0) * MiniPoly::var(2, 0) * MiniPoly::var(2, 1);
  for (int trial = 0; trial < 5; ++trial) {
    Vec x = testsup::random_vec(g, 2);
    CHECK(t.apply(x, x, x) == doctest::Approx(6.0 * p.eval(x)).epsilon(1e-12));
  }
}

TEST_CASE("sym_apply: symmetry under input permutation is exact") {
  auto g = testsup::rng(3);
  const int d = 3;
  BoundaryJet j = random_jet(g, d, 4);
  const SymTensor& t = j.tensor(4);
  std::vector<Vec> vs;
  for (int i = 0; i < 4; ++i) vs.push_back(testsup::random_vec(g, d));
  double ref = t.apply(std::span<const Vec>(vs.data(), 4));
  std::vector<int> perm = {0, 1, 2, 3};
  do {
    std::vector<Vec> pv;
    for (int i : perm) pv.push_back(vs[i]);
    CHECK(t.apply(std::span<const Vec>(pv.data(), 4)) == ref);  // bitwise equal
  } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("sym_apply: arity and dimension errors") {
  SymTensor t(3, 2);
  Vec a = Vec::Zero(2), b3 = Vec::Zero(3);
  CHECK_THROWS_AS((void)t.apply(a, a), ArgumentError);
  CHECK_THROWS_AS((void)t.apply(a, a, b3), ArgumentError);
}

TEST_CASE("contract: identity form gives the covector") {
  auto g = testsup::rng(4);
  const int d = 5;
  SymTensor id = SymTensor::identity_form(d);
  Vec u = testsup::random_vec(g, d);
  SymTensor cu = id.contract(u);
  for (int i = 0; i < d; ++i) {
    CHECK(cu.apply(Vec(Vec::Unit(d, i))) == doctest::Approx(u[i]).epsilon(1e-14));
  }
  SymTensor zero(3, d);
  CHECK(zero.contract(u).norm() == 0.0);
  SymTensor scalar(0, d);
  CHECK_THROWS_AS((void)scalar.contract(u), ArgumentError);
}

TEST_CASE("contract: cubic <x,x><x,w> against polynomial oracle") {
  auto g = testsup::rng(5);
  const int d = 4;
  Vec w = testsup::random_vec(g, d);
  // u orthogonal to w
  Vec u = testsup::random_vec(g, d);
  u -= w * (u.dot(w) / w.squaredNorm());

  // p(x) = <x,x><x,w>; oracle computes D^3 p via MiniPoly partials
  MiniPoly p = MiniPoly::constant(d, 0.0);
  for (int i = 0; i < d; ++i)
    p = p + MiniPoly::var(d, i) * MiniPoly::var(d, i) *
                [&] {
                  MiniPoly lw = MiniPoly::constant(d, 0.0);
                  for (int j = 0; j < d; ++j) lw = lw + MiniPoly::var(d, j) * w[j];
                  return lw;
                }();
  SymTensor t(3, d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j)
      for (int k = j; k < d; ++k) {
        const int idx[3] = {i, j, k};
        t.at(idx) = p.partial0({i, j, k});
      }
  SymTensor s = t.contract(u);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      double oracle = 0.0;
      for (int a = 0; a < d; ++a) oracle += p.partial0({a, i, j}) * u[a];
      const int idx[2] = {i, j};
      CHECK(s.at(idx) == doctest::Approx(oracle).epsilon(1e-12));
    }
  // and the shear_cubic builder reproduces D^3(<x,x><x,w>)/2
  CHECK((t * 0.5 - shear_cubic(w)).max_abs_entry() < 1e-12);
}

TEST_CASE("rotate: identity and inverse") {
  auto g = testsup::rng(6);
  const int d = 3;
  BoundaryJet j = random_jet(g, d, 4);
  BoundaryJet jid = j.rotated(Mat::Identity(d, d));
  CHECK(jet_distance(j, jid, 4) < 1e-15);

  Mat R = testsup::random_orthogonal(g, d);
  BoundaryJet back = j.rotated(R).rotated(R.transpose());
  CHECK(jet_distance(j, back, 4) < 1e-12);

  Mat bad = R;
  bad(0, 0) += 1e-6;
  CHECK_THROWS_AS((void)j.rotated(bad), ArgumentError);
}

TEST_CASE("rotate: plane rotation matches substitution oracle") {
  auto g = testsup::rng(7);
  const int d = 3;
  BoundaryJet j = random_jet(g, d, 3);
  // oracle polynomial for the cubic part
  MiniPoly p = MiniPoly::constant(d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int jj = i; jj < d; ++jj)
      for (int k = jj; k < d; ++k) {
        const int idx[3] = {i, jj, k};
        double fact = 1.0;  // multiplicity-corrected Taylor coefficient
        std::array<int, 8> cnt{};
        cnt[i]++;
        cnt[jj]++;
        cnt[k]++;
        for (int q = 0; q < 8; ++q)
          for (int f = 2; f <= cnt[q]; ++f) fact *= f;
        MiniPoly mono = MiniPoly::constant(d, j.tensor(3).at(idx) / fact);
        mono = mono * MiniPoly::var(d, i) * MiniPoly::var(d, jj) * MiniPoly::var(d, k);
        p = p + mono;
      }
  const double t = 0.7;
  Mat R = testsup::plane_rotation(d, 0, 2, t);
  BoundaryJet jr = j.rotated(R);
  MiniPoly pr = p.subst_linear(R);  // p(Rx)
  for (int i = 0; i < d; ++i)
    for (int jj = i; jj < d; ++jj)
      for (int k = jj; k < d; ++k) {
        const int idx[3] = {i, jj, k};
        CHECK(jr.tensor(3).at(idx) == doctest::Approx(pr.partial0({i, jj, k})).epsilon(1e-12));
      }
}

TEST_CASE("rotate: group action property") {
  auto g = testsup::rng(8);
  const int d = 4;
  for (int trial = 0; trial < 5; ++trial) {
    BoundaryJet j = random_jet(g, d, 4);
    Mat R1 = testsup::random_orthogonal(g, d);
    Mat R2 = testsup::random_orthogonal(g, d);
    BoundaryJet a = j.rotated(R1).rotated(R2);
    BoundaryJet b = j.rotated(Mat(R1 * R2));
    CHECK(jet_distance(a, b, 4) < 1e-12);
  }
}

TEST_CASE("contract commutes with rotation") {
  auto g = testsup::rng(9);
  const int d = 4;
  BoundaryJet j = random_jet(g, d, 4);
  const SymTensor& t = j.tensor(4);
  for (int trial = 0; trial < 5; ++trial) {
    Mat R = testsup::random_orthogonal(g, d);
    Vec u = testsup::random_vec(g, d);
    SymTensor lhs = t.domain_map(R).contract(u);
    SymTensor rhs = t.contract(Vec(R * u)).domain_map(R);
    CHECK((lhs - rhs).max_abs_entry() < 1e-12);
  }
}

TEST_CASE("shear: eta = 0 is the identity") {
  auto g = testsup::rng(10);
  BoundaryJet j = random_jet(g, 3, 4);
  BoundaryJet s = j.sheared(Vec::Zero(3));
  CHECK(jet_distance(j, s, 4) < 1e-15);
}

TEST_CASE("shear then unshear restores orders <= 3") {
  auto g = testsup::rng(11);
  const int d = 3;
  for (int trial = 0; trial < 10; ++trial) {
    BoundaryJet j = random_jet(g, d, 4);
    Vec eta = testsup::random_vec(g, d, 0.4);
    BoundaryJet back = j.sheared(eta).sheared(Vec(-eta));
    // order-4 terms are NOT restored (the gauge is not an involution beyond
    // the cubic level); orders 0..3 are, within 1e-10
    CHECK(jet_distance(j, back, 3) < 1e-10);
  }
}

TEST_CASE("shear of a pure quadric jet: frozen proportionality constant") {
  auto g = testsup::rng(12);
  const int d = 4;
  BoundaryJet quad(d, 4);  // D^3 f = 0
  std::vector<double> constants;
  for (int trial = 0; trial < 10; ++trial) {
    Vec eta = testsup::random_vec(g, d);
    BoundaryJet s = quad.sheared(eta);
    CHECK(s.canonical_defect() < 1e-14);
    double res = 0.0;
    double c = fit_shear_constant(s.tensor(3), eta, &res);
    CHECK(res < 1e-10 * (1.0 + s.tensor(3).norm()));
    constants.push_back(c);
  }
  for (double c : constants) {
    CHECK(c == doctest::Approx(constants[0]).epsilon(1e-10));
    // frozen regression value: the matrix action adds -(1/2)<x,x><x,eta> to
    // the cubic Taylor term, i.e. -3 sym(<a,b><c,eta>) at tensor level
    CHECK(c == doctest::Approx(-1.0).epsilon(1e-10));
  }
}

TEST_CASE("shear residual property on random jets") {
  auto g = testsup::rng(13);
  const int d = 3;
  for (int trial = 0; trial < 100; ++trial) {
    BoundaryJet j = random_jet(g, d, 3);
    Vec eta = testsup::random_vec(g, d);
    BoundaryJet s = j.sheared(eta);
    SymTensor delta = s.tensor(3) - j.tensor(3);
    double res = 0.0;
    fit_shear_constant(delta, eta, &res);
    CHECK(res <= 1e-10 * (1.0 + delta.norm()));
  }
}

TEST_CASE("entry count matches C(d+k-1, k)") {
  auto choose = [](int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return static_cast<int>(r + 0.5);
  };
  for (int d = 1; d <= 6; ++d)
    for (int k = 0; k <= 5; ++k) CHECK(SymTensor(k, d).entry_count() == choose(d + k - 1, k));
}
