#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "khslice/report.hpp"

namespace khs {

using cplx = std::complex<double>;

// y = n+ + (first block column).  blocks[i] is y_{i+1,1}; blocks[0] is trace free.
struct SliceMatrix {
  int m = 1;
  std::vector<Eigen::Matrix2cd> blocks;

  static SliceMatrix zero(int m);
  void validate(double tol = 1e-12) const;
};

Eigen::MatrixXcd assemble(const SliceMatrix& y);

struct Spectrum {
  Eigen::VectorXcd values;
  double residual = 0;  // max ||(y - mu) v|| / ||y|| over computed eigenpairs
  bool warning() const { return residual > 1e-8; }
};

Spectrum adjoint_quotient(const SliceMatrix& y);

// det(t - y) = det(t^m - sum_i t^(m-i) y_{i1}), coefficients c_0..c_{2m}, monic
Eigen::VectorXcd char_poly(const SliceMatrix& y);

// the 2x2 matrix whose kernel is the first two coordinates of ker(mu - y)
Eigen::Matrix2cd eigen_block(const SliceMatrix& y, cplx mu);

struct InjectivityResult {
  bool injective = true;
  bool inconclusive = false;
  int kernel_dim = 0;
  double projection_sigma_min = 1;  // smallest singular value of the projected orthonormal basis
};

InjectivityResult eigenprojection_injective(const SliceMatrix& y, cplx mu);

SliceMatrix embed_lower(const SliceMatrix& y);

SliceMatrix cstar_action(cplx r, const SliceMatrix& y);

// largest distance between paired values under the min-sum assignment
double spectrum_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

struct JacobianRank {
  int rank = 0;
  int expected_full = 0;
  Eigen::VectorXd singular_values;
};

// complex Jacobian of y -> (c_0..c_{2m-2}) by central differences
JacobianRank jacobian_rank(const SliceMatrix& y, double step = 1e-6, double rel = 1e-6);

// y_{m1} chosen so that mu is a double eigenvalue with a 2-dimensional eigenspace
SliceMatrix with_coincident_pair(SliceMatrix y, cplx mu);

SliceMatrix random_slice(std::mt19937_64& rng, int m, double scale = 1.0);

// sl3 slice of the (alpha, beta, gamma, delta) form
struct A2Coordinates {
  cplx a, b, c, d;
};

template <class T>
struct Sl3 {
  T a, b, c, d;
};

template <class T>
Sl3<T> sl3_normal_form_t(const T& alpha, const T& beta, const T& gamma, const T& delta) {
  T a = alpha * T(2);
  return {a, beta, -gamma, delta + a * a * T(3) / T(4)};
}

// coefficients (c2, c1, c0) of det(t - y) = t^3 + c2 t^2 + c1 t + c0 for the sl3 slice matrix
template <class T>
std::array<T, 3> sl3_char_poly_t(const T& alpha, const T& beta, const T& gamma, const T& delta) {
  T y[3][3] = {{alpha, T(0), T(1)}, {beta, alpha * T(-2), T(0)}, {delta, gamma, alpha}};
  T tr = y[0][0] + y[1][1] + y[2][2];
  T minors = y[0][0] * y[1][1] - y[0][1] * y[1][0] + y[0][0] * y[2][2] - y[0][2] * y[2][0] + y[1][1] * y[2][2] -
             y[1][2] * y[2][1];
  T det = y[0][0] * (y[1][1] * y[2][2] - y[1][2] * y[2][1]) - y[0][1] * (y[1][0] * y[2][2] - y[1][2] * y[2][0]) +
          y[0][2] * (y[1][0] * y[2][1] - y[1][1] * y[2][0]);
  return {-tr, minors, -det};
}

// t^3 - t d + (a^3 - a d + b c)
template <class T>
std::array<T, 3> a2_poly_t(const Sl3<T>& x) {
  return {T(0), -x.d, x.a * x.a * x.a - x.a * x.d + x.b * x.c};
}

A2Coordinates sl3_normal_form(cplx alpha, cplx beta, cplx gamma, cplx delta);

// max coefficient difference between the slice char poly and the A2 normal form
double sl3_verify(cplx alpha, cplx beta, cplx gamma, cplx delta);

// critical values of a^3 - a d + b c on a fixed d; for d > 0, zeta_plus > 0
struct CriticalValues {
  cplx zeta_minus, zeta_plus;
  cplx a_minus, a_plus;  // critical points (a, 0, 0) over each value
};

CriticalValues critical_values(cplx d);

// zeta^2 from the critical point a^2 = d/3, in any field
template <class T>
T critical_value_squared(const T& d) {
  T a2 = d / T(3);
  T e = a2 - d;
  return a2 * e * e;
}

// proper exhaustion: sum over entries e of block i of |e|^(alpha/i), each entry having C* weight 2i
double xi_potential(const SliceMatrix& y, double alpha);

// Laplacian of |z|^(2p) on C by central differences
double radial_laplacian(double p, cplx z, double step = 1e-4);

std::vector<Check> slice_battery(std::uint64_t seed, int samples = 1000);

}  // namespace khs
