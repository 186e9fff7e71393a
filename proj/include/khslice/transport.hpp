#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "khslice/curves.hpp"
#include "khslice/report.hpp"

namespace khs {

using cplx = std::complex<double>;
using Point = Eigen::Vector3cd;

// A1: a^2 + b^2 + c^2.  A2: a^3 - a d + b c with d fixed.
struct Model {
  enum class Kind { A1, A2 };
  Kind kind = Kind::A1;
  cplx d = 0;

  static Model a1() { return {}; }
  static Model a2(cplx d);

  cplx value(const Point& p) const;
  Point dpi(const Point& p) const;  // holomorphic partials
  Point gradient(const Point& p) const { return dpi(p).conjugate(); }
};

struct NearCritical : std::runtime_error {
  double grad_norm;
  explicit NearCritical(double g);
};

struct PartialTransport : std::runtime_error {
  int segment;
  double s;
  PartialTransport(int seg, double s, const std::string& why);
};

// the horizontal lift of v at p: D pi(H) = v, H orthogonal to the fibre
Point horizontal(const Model& m, const Point& p, cplx v);

struct Segment {
  enum class Kind { Line, Arc };
  Kind kind = Kind::Line;
  cplx from = 0, to = 0;                          // line
  cplx center = 0;                                // arc
  double radius = 0, theta0 = 0, sweep = 0;       // arc: center + radius e^{i(theta0 + s sweep)}

  cplx at(double s) const;
  cplx velocity(double s) const;
};

struct TransportPath {
  std::vector<Segment> segments;

  static TransportPath line(cplx a, cplx b);
  static TransportPath arc(cplx center, double radius, double theta0, double sweep);
  TransportPath& then(const TransportPath& next);
  TransportPath reversed() const;
  cplx start() const { return segments.front().at(0); }
  cplx end() const { return segments.back().at(1); }
};

// from zeta^- + eps to 0 along the reals, |power| circles around zeta^+
// (positive for power > 0) and back
TransportPath gamma_path(double d, double eps, int power);

// points on one fibre; params holds the sphere coordinates (height, azimuth) each sample came from
struct Cloud {
  cplx fiber = 0;
  std::vector<Point> points;
  std::vector<Eigen::Vector2d> params;
};

struct TransportOptions {
  double abs_tol = 1e-11;
  double rel_tol = 1e-10;
  double fiber_tol = 1e-9;
  double min_step = 1e-13;
  bool rescaled = false;
  double sigma = 0.05;  // weight of the Liouville correction in rescaled mode
  int workers = 0;
};

struct TransportStats {
  double max_fiber_residual = 0;
  double max_path_length = 0;
  long steps = 0;
};

Cloud transport(const Model& m, const TransportPath& path, const Cloud& cloud, const TransportOptions& opt = {},
                TransportStats* stats = nullptr);

// fibre-tangent part of the radial field x/2
Point liouville(const Model& m, const Point& p);

Cloud fibonacci_sphere(int n);
Cloud vanishing_cycle(double t, int n);

// distance from p to the real sphere of radius r in R^3 inside C^3
double distance_to_real_sphere(const Point& p, double r);

struct A1Report {
  double hausdorff = 0;
  double antipodal = 0;
  double fiber_residual = 0;
  bool setwise = false;
  bool antipodal_ok = false;  // observed refinement, reported soft
};

A1Report a1_monodromy_check(double t, int n_samples, double tol = 1e-4, const TransportOptions& opt = {});

// the A2 fibre over zeta^- + eps and its three real roots of a^3 - a d - z
struct A2Setup {
  double d = 1, eps = 1e-3;
  double z0 = 0;
  double roots[3] = {0, 0, 0};
};

A2Setup a2_setup(double d, double eps);

// Lambda over the real segment between the two right roots: the vanishing cycle L_{d,eps}
Cloud lambda_alpha(const A2Setup& s, int n_samples);
// one meridian, poles included, ordered from the middle root to the right root
Cloud lambda_meridian(const A2Setup& s, int k);

struct A2Report {
  A2Setup setup;
  int power = 0;
  Cloud cloud;
  std::vector<cplx> projection;  // a-coordinates along the transported meridian
  Arc arc;                        // its taut class among the three roots
  Arc expected;                   // t_beta^power (alpha) from the curves module
  IntersectionCount pattern;      // of the transported arc with alpha
  IntersectionCount expected_pattern;
  double max_bc_gap = 0;          // max ||b| - |c||
  double fiber_residual = 0;
  bool pass(double tol = 1e-4) const;
};

A2Report a2_monodromy(double d, double eps, int power, int n_samples = 200, int meridian = 400,
                      const TransportOptions& opt = {});

struct GradientEstimate {
  double ratio = 0;          // empirical min of the normalized ||grad||^2 ratio
  double ratio_doubled = 0;  // same with twice the samples
  bool bounded = false;
  bool stable = false;
};

// A1: ||grad||^2 / |pi|.  A2: ||grad||^2 / (|d|^(1/2) min |pi - zeta^pm|).  Ball in C^3.
GradientEstimate gradient_estimate_check(const Model& m, const Point& center, double radius, int n_samples,
                                         std::uint64_t seed);

struct MaslovReport {
  int index = 0;
  Eigen::Vector2d hessian_eigenvalues = Eigen::Vector2d::Zero();
  double asymmetry = 0;  // of the fitted Hessian; zero for a Lagrangian pair
  double departure_angle = 0;  // of the moved arc at the common endpoint
};

// Morse index at the common point of Lambda_alpha and its image under the
// positive (sign > 0) or negative transport loop
MaslovReport maslov_markov(int sign, const TransportOptions& opt = {});

// max deviation of the squared phase from its value at the first sample, over a
// cloud together with two transported tangent neighbours per point
double phase_spread(const Model& m, const std::vector<Point>& pts, const std::vector<Point>& du,
                    const std::vector<Point>& dv);

std::vector<Check> a1_battery(double t, int samples, double tol, const TransportOptions& opt = {});
std::vector<Check> a2_battery(double d, double eps, int power, int samples, const TransportOptions& opt = {});
std::vector<Check> a2_checks(const A2Report& r, double tol = 1e-4);
std::vector<Check> transport_battery(std::uint64_t seed, int samples, const TransportOptions& opt = {});

}  // namespace khs
