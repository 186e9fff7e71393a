#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>

#include "khslice/slice.hpp"

using namespace khs;
using Rational = boost::multiprecision::cpp_rational;

namespace {

// Faddeev-LeVerrier on an exact matrix: coefficients c_0..c_n of det(t - A)
std::vector<Rational> leverrier(const std::vector<std::vector<Rational>>& a) {
  int n = static_cast<int>(a.size());
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
  for (int k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{n-k+1} I, with M_0 = 0
    std::vector<std::vector<Rational>> next(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Rational s = 0;
        for (int l = 0; l < n; ++l) s += a[i][l] * m[l][j];
        next[i][j] = s + (i == j ? c[n - k + 1] : Rational(0));
      }
    m = next;
    Rational tr = 0;
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) tr += a[i][l] * m[l][i];
    c[n - k] = -tr / k;
  }
  return c;
}

}  // namespace

TEST_CASE("assemble and the nilpotent point") {
  CHECK(assemble(SliceMatrix::zero(1)).norm() == 0);
  for (int m = 2; m <= 4; ++m) {
    auto a = assemble(SliceMatrix::zero(m));
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(2 * m, 2 * m);
    for (int i = 0; i < m - 1; ++i) p = p * a;
    CHECK(p.norm() > 0);
    CHECK((p * a).norm() == 0);
  }
  SliceMatrix bad = SliceMatrix::zero(2);
  bad.blocks[0](0, 0) = 1.0;
  CHECK_THROWS(assemble(bad));
}

TEST_CASE("char poly agrees with exact Leverrier") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
  for (int trial = 0; trial < 40; ++trial) {
    int m = 1 + trial % 4;
    SliceMatrix y = SliceMatrix::zero(m);
    std::vector<std::vector<Rational>> exact(2 * m, std::vector<Rational>(2 * m));
    for (int i = 0; i < m; ++i)
      for (int e = 0; e < 4; ++e) {
        Rational v(num(rng), den(rng));
        if (i == 0 && e == 3) v = -exact[0][0];
        exact[2 * i + e / 2][e % 2] = v;
        y.blocks[i](e / 2, e % 2) = static_cast<double>(v);
      }
    for (int i = 0; i + 1 < m; ++i) exact[2 * i][2 * i + 2] = exact[2 * i + 1][2 * i + 3] = 1;
    auto want = leverrier(exact);
    auto got = char_poly(y);
    REQUIRE(got.size() == 2 * m + 1);
    for (int k = 0; k <= 2 * m; ++k) CHECK(std::abs(got(k) - static_cast<double>(want[k])) < 1e-9);
  }
}

TEST_CASE("sl2 slice eigenvalues") {
  double a = 0.3, b = -1.1, c = 0.7;
  SliceMatrix y = SliceMatrix::zero(1);
  y.blocks[0] << cplx(a, 0), cplx(b, c), cplx(b, -c), cplx(-a, 0);
  auto s = adjoint_quotient(y);
  double r = std::sqrt(a * a + b * b + c * c);
  Eigen::VectorXcd want(2);
  want << r, -r;
  CHECK(spectrum_distance(s.values, want) < 1e-12);
  CHECK_FALSE(s.warning());
}

TEST_CASE("eigenspace projection") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    auto y = random_slice(rng, 1 + trial % 4);
    auto s = adjoint_quotient(y);
    for (int k = 0; k < s.values.size(); ++k) {
      auto r = eigenprojection_injective(y, s.values(k));
      CHECK(r.kernel_dim == 1);
      CHECK(r.injective);
    }
    CHECK(eigenprojection_injective(y, 50.0).kernel_dim == 0);
  }
  auto r = eigenprojection_injective(SliceMatrix::zero(3), 0.0);
  CHECK(r.kernel_dim == 2);
  CHECK(r.injective);
}

TEST_CASE("coincident pairs have two-dimensional eigenspaces") {
  std::mt19937_64 rng(23);
  for (int m = 2; m <= 4; ++m) {
    cplx mu(0.4, -0.3);
    auto y = with_coincident_pair(random_slice(rng, m, 0.7), mu);
    CHECK(eigen_block(y, mu).norm() < 1e-12);
    auto r = eigenprojection_injective(y, mu);
    CHECK(r.kernel_dim == 2);
    CHECK(r.injective);
    // mu is a double root: p(mu) = p'(mu) = 0
    auto cp = char_poly(y);
    cplx p = 0, dp = 0;
    for (int k = static_cast<int>(cp.size()) - 1; k >= 0; --k) {
      dp = dp * mu + p;
      p = p * mu + cp(k);
    }
    CHECK(std::abs(p) < 1e-10);
    CHECK(std::abs(dp) < 1e-10);
  }
}

TEST_CASE("embed_lower and C* action") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    auto y = random_slice(rng, 1 + trial % 3);
    auto big = embed_lower(y);
    CHECK(big.m == y.m + 1);
    Eigen::VectorXcd lo = adjoint_quotient(y).values, expect(lo.size() + 2);
    expect << lo, cplx(0), cplx(0);
    CHECK(spectrum_distance(adjoint_quotient(big).values, expect) < 1e-8);
    CHECK(eigenprojection_injective(big, 0.0).kernel_dim == 2);
    auto twice = embed_lower(big);
    CHECK(eigenprojection_injective(twice, 0.0).kernel_dim >= 2);
  }
  auto y = random_slice(rng, 3);
  CHECK(cstar_action(1.0, y).blocks == y.blocks);
  Eigen::VectorXcd four = 4.0 * adjoint_quotient(y).values;
  CHECK(spectrum_distance(adjoint_quotient(cstar_action(2.0, y)).values, four) < 1e-8);
  CHECK_THROWS(cstar_action(0.0, y));
}

TEST_CASE("spectrum distance uses the best pairing") {
  Eigen::VectorXcd a(3), b(3);
  a << 1.0, 2.0, 3.0;
  b << 3.0, 1.0, 2.0 + 1e-3;
  CHECK(spectrum_distance(a, b) == doctest::Approx(1e-3));
}

TEST_CASE("sl3 normal form") {
  auto z = sl3_normal_form(0, 0, 0, 0);
  CHECK(std::abs(z.a) + std::abs(z.b) + std::abs(z.c) + std::abs(z.d) == 0);
  CHECK(sl3_verify(0, 0, 0, 0) == 0);
  // (alpha, 0, 0, delta): char poly t^3 - (3 alpha^2 + delta) t + 2 alpha^3 - 2 alpha delta
  Rational al(3, 7), de(-5, 2);
  auto cp = sl3_char_poly_t<Rational>(al, Rational(0), Rational(0), de);
  CHECK(cp[0] == 0);
  CHECK(cp[1] == -(3 * al * al + de));
  CHECK(cp[2] == 2 * al * al * al - 2 * al * de);
  auto nf = sl3_normal_form_t<Rational>(al, Rational(0), Rational(0), de);
  CHECK(a2_poly_t(nf) == cp);
  CHECK(sl3_verify({0.2, 0.1}, {-0.5, 0.3}, {0.9, -0.2}, {0.1, 0.4}) < 1e-12);
}

TEST_CASE("critical values") {
  auto cv = critical_values(3.0);
  CHECK(std::abs(cv.zeta_plus - 2.0) < 1e-12);
  CHECK(std::abs(cv.zeta_minus + 2.0) < 1e-12);
  auto z = critical_values(0.0);
  CHECK(std::abs(z.zeta_plus) == 0);
  for (int k = -10; k <= 10; ++k) {
    Rational d(k, 3);
    CHECK(27 * critical_value_squared(d) == 4 * d * d * d);
  }
  cplx d(0.3, 1.2);
  auto c = critical_values(d);
  CHECK(std::abs(27.0 * c.zeta_plus * c.zeta_plus - 4.0 * d * d * d) < 1e-12);
  // the gradient (3a^2 - d, c, b) vanishes at the critical points
  CHECK(std::abs(3.0 * c.a_plus * c.a_plus - d) < 1e-12);
}

TEST_CASE("Jacobian rank") {
  std::mt19937_64 rng(31);
  for (int m = 1; m <= 4; ++m) {
    auto j = jacobian_rank(random_slice(rng, m, 0.7));
    CHECK(j.rank == 2 * m - 1);
  }
  for (int m = 2; m <= 4; ++m) {
    auto j = jacobian_rank(with_coincident_pair(random_slice(rng, m, 0.7), cplx(-0.5, 0.2)));
    CHECK(j.rank == 2 * m - 2);
    auto z = jacobian_rank(embed_lower(random_slice(rng, m - 1, 0.7)));
    CHECK(z.rank == 2 * m - 2);
  }
}

TEST_CASE("slice battery") {
  for (const auto& c : slice_battery(1, 400)) {
    CAPTURE(c.name);
    CAPTURE(c.detail);
    CHECK(c.pass);
  }
}
