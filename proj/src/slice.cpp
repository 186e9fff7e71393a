#include "khslice/slice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace khs {

using Eigen::Matrix2cd;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

SliceMatrix SliceMatrix::zero(int m) {
  if (m < 1) throw std::invalid_argument("slice needs m >= 1");
  return {m, std::vector<Matrix2cd>(m, Matrix2cd::Zero())};
}

void SliceMatrix::validate(double tol) const {
  if (m < 1 || static_cast<int>(blocks.size()) != m) throw std::invalid_argument("slice: block count must equal m");
  if (std::abs(blocks[0].trace()) > tol) throw std::invalid_argument("slice: y11 must be trace free");
}

MatrixXcd assemble(const SliceMatrix& y) {
  y.validate();
  int n = 2 * y.m;
  MatrixXcd a = MatrixXcd::Zero(n, n);
  for (int i = 0; i < y.m; ++i) {
    a.block<2, 2>(2 * i, 0) = y.blocks[i];
    if (i + 1 < y.m) a.block<2, 2>(2 * i, 2 * i + 2) += Matrix2cd::Identity();
  }
  return a;
}

Spectrum adjoint_quotient(const SliceMatrix& y) {
  MatrixXcd a = assemble(y);
  Eigen::ComplexEigenSolver<MatrixXcd> es(a, true);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigen solver failed");
  Spectrum s;
  s.values = es.eigenvalues();
  double scale = std::max(1.0, a.norm());
  for (int k = 0; k < a.rows(); ++k) {
    VectorXcd v = es.eigenvectors().col(k);
    s.residual = std::max(s.residual, (a * v - s.values(k) * v).norm() / (scale * v.norm()));
  }
  return s;
}

namespace {

// polynomials as coefficient vectors, lowest degree first
VectorXcd poly_mul(const VectorXcd& p, const VectorXcd& q) {
  VectorXcd r = VectorXcd::Zero(p.size() + q.size() - 1);
  for (int i = 0; i < p.size(); ++i) r.segment(i, q.size()) += p(i) * q;
  return r;
}

}  // namespace

VectorXcd char_poly(const SliceMatrix& y) {
  y.validate();
  int m = y.m;
  VectorXcd e[2][2];
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      e[r][c] = VectorXcd::Zero(m + 1);
      if (r == c) e[r][c](m) = 1.0;
      for (int i = 1; i <= m; ++i) e[r][c](m - i) -= y.blocks[i - 1](r, c);
    }
  return poly_mul(e[0][0], e[1][1]) - poly_mul(e[0][1], e[1][0]);
}

Matrix2cd eigen_block(const SliceMatrix& y, cplx mu) {
  Matrix2cd acc = Matrix2cd::Identity();  // P_1
  for (int i = 1; i < y.m; ++i) acc = mu * acc - y.blocks[i - 1];
  return mu * acc - y.blocks[y.m - 1];
}

InjectivityResult eigenprojection_injective(const SliceMatrix& y, cplx mu) {
  MatrixXcd a = assemble(y);
  int n = static_cast<int>(a.rows());
  MatrixXcd shifted = mu * MatrixXcd::Identity(n, n) - a;
  Eigen::JacobiSVD<MatrixXcd> svd(shifted, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double smax = std::max(sv(0), std::numeric_limits<double>::min());
  InjectivityResult r;
  int k = 0;
  for (int i = n - 1; i >= 0; --i) {
    double rel = sv(i) / smax;
    if (rel <= 1e-8) ++k;
    else {
      if (rel < 1e-5) r.inconclusive = true;
      break;
    }
  }
  r.kernel_dim = k;
  if (k == 0) return r;
  if (k > 2) {
    r.injective = false;
    r.projection_sigma_min = 0;
    return r;
  }
  MatrixXcd proj = svd.matrixV().topRightCorner(2, k);
  Eigen::JacobiSVD<MatrixXcd> ps(proj);
  r.projection_sigma_min = ps.singularValues()(k - 1);
  r.injective = r.projection_sigma_min > 1e-8;
  if (!r.injective && r.projection_sigma_min > 1e-12) r.inconclusive = true;
  return r;
}

SliceMatrix embed_lower(const SliceMatrix& y) {
  y.validate();
  SliceMatrix out = y;
  out.m = y.m + 1;
  out.blocks.push_back(Matrix2cd::Zero());
  return out;
}

SliceMatrix cstar_action(cplx r, const SliceMatrix& y) {
  if (r == cplx(0)) throw std::invalid_argument("cstar_action: r must be nonzero");
  SliceMatrix out = y;
  cplx w = r * r, f = w;
  for (auto& b : out.blocks) {
    b *= f;
    f *= w;
  }
  return out;
}

namespace {

// min-cost perfect assignment, rows to columns (Kuhn-Munkres with potentials)
std::vector<int> assignment(const Eigen::MatrixXd& cost) {
  int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0), v(n + 1, 0), minv;
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    minv.assign(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n);
  for (int j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace

double spectrum_distance(const VectorXcd& a, const VectorXcd& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  int n = static_cast<int>(a.size());
  if (n == 0) return 0;
  Eigen::MatrixXd cost(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cost(i, j) = std::abs(a(i) - b(j));
  auto match = assignment(cost);
  double worst = 0;
  for (int i = 0; i < n; ++i) worst = std::max(worst, cost(i, match[i]));
  return worst;
}

namespace {

// complex coordinates of the slice: 3 for y11, 4 for each later block
int coord_count(int m) { return 4 * m - 1; }

void bump(SliceMatrix& y, int coord, cplx h) {
  if (coord < 3) {
    auto& b = y.blocks[0];
    if (coord == 0) {
      b(0, 0) += h;
      b(1, 1) -= h;
    } else if (coord == 1) {
      b(0, 1) += h;
    } else {
      b(1, 0) += h;
    }
    return;
  }
  int k = coord - 3;
  y.blocks[1 + k / 4](k % 4 / 2, k % 2) += h;
}

VectorXcd quotient_coords(const SliceMatrix& y) { return char_poly(y).head(2 * y.m - 1); }

}  // namespace

JacobianRank jacobian_rank(const SliceMatrix& y, double step, double rel) {
  int rows = 2 * y.m - 1, cols = coord_count(y.m);
  MatrixXcd jac(rows, cols);
  for (int j = 0; j < cols; ++j) {
    SliceMatrix plus = y, minus = y;
    bump(plus, j, step);
    bump(minus, j, -step);
    jac.col(j) = (quotient_coords(plus) - quotient_coords(minus)) / (2 * step);
  }
  JacobianRank r;
  r.expected_full = rows;
  r.singular_values = Eigen::JacobiSVD<MatrixXcd>(jac).singularValues();
  double smax = r.singular_values.size() ? r.singular_values(0) : 0;
  for (int i = 0; i < r.singular_values.size(); ++i)
    if (r.singular_values(i) > rel * smax) ++r.rank;
  return r;
}

SliceMatrix with_coincident_pair(SliceMatrix y, cplx mu) {
  if (y.m < 2 && mu != cplx(0)) throw std::invalid_argument("a nonzero coincident pair needs m >= 2");
  Matrix2cd acc = Matrix2cd::Identity();
  for (int i = 1; i < y.m; ++i) acc = mu * acc - y.blocks[i - 1];
  y.blocks[y.m - 1] = mu * acc;
  return y;
}

SliceMatrix random_slice(std::mt19937_64& rng, int m, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  SliceMatrix y = SliceMatrix::zero(m);
  for (auto& b : y.blocks)
    for (int i = 0; i < 4; ++i) b(i / 2, i % 2) = {g(rng), g(rng)};
  cplx t = y.blocks[0].trace() / 2.0;
  y.blocks[0] -= t * Matrix2cd::Identity();
  return y;
}

A2Coordinates sl3_normal_form(cplx alpha, cplx beta, cplx gamma, cplx delta) {
  auto s = sl3_normal_form_t<cplx>(alpha, beta, gamma, delta);
  return {s.a, s.b, s.c, s.d};
}

double sl3_verify(cplx alpha, cplx beta, cplx gamma, cplx delta) {
  auto lhs = sl3_char_poly_t<cplx>(alpha, beta, gamma, delta);
  auto rhs = a2_poly_t(sl3_normal_form_t<cplx>(alpha, beta, gamma, delta));
  double worst = 0;
  for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
  return worst;
}

CriticalValues critical_values(cplx d) {
  // grad (3a^2 - d, c, b) vanishes at b = c = 0, a^2 = d/3; the value there is -(2d/3) a
  cplx root = std::sqrt(d / 3.0);
  CriticalValues cv;
  cv.a_plus = -root;
  cv.a_minus = root;
  auto value = [&](cplx a) { return a * a * a - a * d; };
  cv.zeta_plus = value(cv.a_plus);
  cv.zeta_minus = value(cv.a_minus);
  return cv;
}

namespace {

using Rational = boost::multiprecision::cpp_rational;

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

cplx unit_polydisc(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> r(0, 1), th(0, 2 * M_PI);
  return std::polar(std::sqrt(r(rng)), th(rng));
}

}  // namespace

double xi_potential(const SliceMatrix& y, double alpha) {
  double sum = 0;
  for (int i = 0; i < y.m; ++i)
    for (int e = 0; e < 4; ++e) sum += std::pow(std::abs(y.blocks[i](e / 2, e % 2)), alpha / (i + 1));
  return sum;
}

double radial_laplacian(double p, cplx z, double step) {
  auto f = [p](cplx w) { return std::pow(std::norm(w), p); };
  return (f(z + step) + f(z - step) + f(z + cplx(0, step)) + f(z - cplx(0, step)) - 4 * f(z)) / (step * step);
}

std::vector<Check> slice_battery(std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_m(1, 4);
  std::vector<Check> out;

  {
    bool ok = true;
    for (int m = 1; m <= 5; ++m) {
      MatrixXcd a = assemble(SliceMatrix::zero(m)), p = MatrixXcd::Identity(2 * m, 2 * m);
      for (int i = 0; i < m; ++i) p = p * a;
      if (p.norm() != 0) ok = false;
      if (m > 1) {
        MatrixXcd before = MatrixXcd::Identity(2 * m, 2 * m);
        for (int i = 0; i + 1 < m; ++i) before = before * a;
        if (before.norm() == 0) ok = false;
      }
    }
    out.push_back({"nilpotent n+ has two Jordan blocks of size m", ok, "m = 1..5"});
  }

  {
    double worst = 0;
    for (int s = 0; s < samples; ++s) {
      auto y = random_slice(rng, pick_m(rng));
      auto cp = char_poly(y);
      worst = std::max(worst, std::abs(cp(2 * y.m - 1)));
      worst = std::max(worst, std::abs(adjoint_quotient(y).values.sum()));
    }
    out.push_back({"trace-free: t^(2m-1) coefficient vanishes", worst < 1e-10, "max " + fmt_double(worst)});
  }

  {
    int fails = 0, inconclusive = 0, checked = 0;
    for (int s = 0; s < samples; ++s) {
      auto y = random_slice(rng, pick_m(rng));
      auto spec = adjoint_quotient(y);
      for (int k = 0; k < spec.values.size(); ++k) {
        auto r = eigenprojection_injective(y, spec.values(k));
        ++checked;
        if (r.inconclusive) ++inconclusive;
        else if (!r.injective || r.kernel_dim == 0) ++fails;
      }
    }
    for (int m = 1; m <= 4; ++m) {
      auto r = eigenprojection_injective(SliceMatrix::zero(m), 0.0);
      ++checked;
      if (!r.injective || r.kernel_dim != std::min(2, 2 * m)) ++fails;
    }
    out.push_back({"eigenspaces project injectively to C^2", fails == 0,
                   std::to_string(checked) + " eigenvalues, " + std::to_string(fails) + " failures, " +
                       std::to_string(inconclusive) + " inconclusive"});
  }

  {
    double worst = 0;
    int half = std::max(1, samples / 2);
    for (int s = 0; s < half; ++s) {
      std::uniform_int_distribution<int> pm(1, 3);
      auto y = random_slice(rng, pm(rng));
      auto lo = adjoint_quotient(y).values;
      VectorXcd expect(lo.size() + 2);
      expect << lo, cplx(0), cplx(0);
      worst = std::max(worst, spectrum_distance(adjoint_quotient(embed_lower(y)).values, expect));
    }
    out.push_back({"embed_lower adds {0,0} to the spectrum", worst < 1e-8, "max " + fmt_double(worst)});
  }

  {
    double worst = 0;
    int half = std::max(1, samples / 2);
    std::uniform_real_distribution<double> mod(0.3, 2.0), ang(0, 2 * M_PI);
    for (int s = 0; s < half; ++s) {
      auto y = random_slice(rng, pick_m(rng), 0.7);
      cplx r = std::polar(mod(rng), ang(rng));
      VectorXcd scaled = (r * r) * adjoint_quotient(y).values;
      double d = spectrum_distance(adjoint_quotient(cstar_action(r, y)).values, scaled);
      worst = std::max(worst, d / std::max(1.0, scaled.cwiseAbs().maxCoeff()));
    }
    out.push_back({"C* action multiplies eigenvalues by r^2", worst < 1e-8, "max rel " + fmt_double(worst)});
  }

  {
    bool ok = true;
    double prev = std::numeric_limits<double>::infinity();
    auto y = random_slice(rng, 3);
    MatrixXcd nplus = assemble(SliceMatrix::zero(3));
    for (double r : {1e-1, 1e-2, 1e-3, 1e-4}) {
      double dist = (assemble(cstar_action(r, y)) - nplus).norm();
      if (!(dist < prev) || dist > 10 * r * r * std::max(1.0, assemble(y).norm())) ok = false;
      prev = dist;
    }
    out.push_back({"C* limit r -> 0 is n+", ok, "last distance " + fmt_double(prev)});
  }

  {
    bool exact = true;
    std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
    auto q = [&] { return Rational(num(rng), den(rng)); };
    for (int s = 0; s < 200; ++s) {
      Rational al = q(), be = q(), ga = q(), de = q();
      if (s == 0) al = be = ga = de = 0;
      if (s == 1) be = ga = 0;
      auto lhs = sl3_char_poly_t<Rational>(al, be, ga, de);
      auto rhs = a2_poly_t(sl3_normal_form_t<Rational>(al, be, ga, de));
      if (lhs != rhs) exact = false;
    }
    double worst = 0;
    for (int s = 0; s < samples; ++s)
      worst = std::max(worst, sl3_verify(unit_polydisc(rng), unit_polydisc(rng), unit_polydisc(rng), unit_polydisc(rng)));
    out.push_back({"sl3 char poly is t^3 - td + (a^3 - ad + bc), exact", exact, "200 rational inputs"});
    out.push_back({"sl3 char poly identity, complex", worst < 1e-10, "max " + fmt_double(worst)});
  }

  {
    int bad_full = 0, bad_drop = 0, n = std::max(1, samples / 20);
    for (int s = 0; s < n; ++s) {
      std::uniform_int_distribution<int> pm(2, 4);
      int m = pm(rng);
      auto y = random_slice(rng, m, 0.7);
      auto j = jacobian_rank(y);
      if (j.rank != j.expected_full) ++bad_full;
      auto c = with_coincident_pair(random_slice(rng, m, 0.7), unit_polydisc(rng));
      auto jc = jacobian_rank(c);
      if (jc.rank != jc.expected_full - 1) ++bad_drop;
    }
    out.push_back({"Jacobian full rank at distinct eigenvalues", bad_full == 0,
                   std::to_string(bad_full) + "/" + std::to_string(n) + " failures"});
    out.push_back({"Jacobian rank drops by one at a coincident pair", bad_drop == 0,
                   std::to_string(bad_drop) + "/" + std::to_string(n) + " failures"});
  }

  {
    bool ok = true;
    std::uniform_int_distribution<int> num(-40, 40), den(1, 9);
    for (int s = 0; s < 200; ++s) {
      Rational d(num(rng), den(rng));
      if (27 * critical_value_squared(d) != 4 * d * d * d) ok = false;
    }
    auto cv = critical_values(3.0);
    bool anchor = std::abs(cv.zeta_plus - 2.0) < 1e-12 && std::abs(cv.zeta_minus + 2.0) < 1e-12;
    auto c0 = critical_values(0.0);
    anchor = anchor && std::abs(c0.zeta_plus) == 0 && std::abs(c0.zeta_minus) == 0;
    out.push_back({"critical values satisfy 27 zeta^2 = 4 d^3", ok && anchor, "d = 3 gives -2, 2"});
  }

  {
    double homog = 0, lap = 0, lowest = std::numeric_limits<double>::infinity();
    std::uniform_real_distribution<double> mod(0.1, 2.0), ang(0, 2 * M_PI), rad(0.2, 3.0);
    for (int s = 0; s < std::max(1, samples / 10); ++s) {
      int m = pick_m(rng);
      double alpha = m + 0.5, r = rad(rng);
      auto y = random_slice(rng, m, 0.7);
      double want = std::pow(r, 2 * alpha) * xi_potential(y, alpha);
      homog = std::max(homog, std::abs(xi_potential(cstar_action(r, y), alpha) - want) / want);
      for (int i = 2; i <= 2 * m; i += 2) {
        double p = alpha / i;
        cplx z = std::polar(mod(rng), ang(rng));
        double exact = 4 * p * p * std::pow(std::abs(z), 2 * p - 2);
        double got = radial_laplacian(p, z);
        lap = std::max(lap, std::abs(got - exact) / exact);
        lowest = std::min(lowest, got);
      }
    }
    out.push_back({"xi is homogeneous of degree 2 alpha under C*", homog < 1e-10, "max rel " + fmt_double(homog)});
    out.push_back({"|z|^(2 alpha / i) is subharmonic", lowest > 0 && lap < 1e-5,
                   "min Laplacian " + fmt_double(lowest) + ", rel error vs 4p^2|z|^(2p-2) " + fmt_double(lap)});
  }
  return out;
}

}  // namespace khs
