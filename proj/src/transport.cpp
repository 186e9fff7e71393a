#include "khslice/transport.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "khslice/braid.hpp"
#include "khslice/parallel.hpp"
#include "khslice/slice.hpp"

namespace khs {

namespace odeint = boost::numeric::odeint;

Model Model::a2(cplx d) {
  Model m;
  m.kind = Kind::A2;
  m.d = d;
  return m;
}

cplx Model::value(const Point& p) const {
  if (kind == Kind::A1) return p(0) * p(0) + p(1) * p(1) + p(2) * p(2);
  return p(0) * p(0) * p(0) - p(0) * d + p(1) * p(2);
}

Point Model::dpi(const Point& p) const {
  if (kind == Kind::A1) return 2.0 * p;
  return Point(3.0 * p(0) * p(0) - d, p(2), p(1));
}

NearCritical::NearCritical(double g)
    : std::runtime_error("point too close to a critical point, |grad| = " + std::to_string(g)), grad_norm(g) {}

PartialTransport::PartialTransport(int seg, double s_, const std::string& why)
    : std::runtime_error("transport stopped in segment " + std::to_string(seg) + " at s = " + std::to_string(s_) +
                         ": " + why),
      segment(seg),
      s(s_) {}

Point horizontal(const Model& m, const Point& p, cplx v) {
  Point g = m.dpi(p);
  double n2 = g.squaredNorm();
  if (std::sqrt(n2) < 1e-10) throw NearCritical(std::sqrt(n2));
  return g.conjugate() * (v / n2);
}

Point liouville(const Model& m, const Point& p) {
  Point g = m.dpi(p);
  Point half = 0.5 * p;
  cplx along = g.transpose() * half;
  return half - g.conjugate() * (along / g.squaredNorm());
}

cplx Segment::at(double s) const {
  if (kind == Kind::Line) return from + s * (to - from);
  return center + std::polar(radius, theta0 + s * sweep);
}

cplx Segment::velocity(double s) const {
  if (kind == Kind::Line) return to - from;
  return cplx(0, sweep) * std::polar(radius, theta0 + s * sweep);
}

TransportPath TransportPath::line(cplx a, cplx b) {
  Segment s;
  s.from = a;
  s.to = b;
  return {{s}};
}

TransportPath TransportPath::arc(cplx center, double radius, double theta0, double sweep) {
  Segment s;
  s.kind = Segment::Kind::Arc;
  s.center = center;
  s.radius = radius;
  s.theta0 = theta0;
  s.sweep = sweep;
  return {{s}};
}

TransportPath& TransportPath::then(const TransportPath& next) {
  segments.insert(segments.end(), next.segments.begin(), next.segments.end());
  return *this;
}

TransportPath TransportPath::reversed() const {
  TransportPath r;
  for (auto it = segments.rbegin(); it != segments.rend(); ++it) {
    Segment s = *it;
    if (s.kind == Segment::Kind::Line) {
      std::swap(s.from, s.to);
    } else {
      s.theta0 += s.sweep;
      s.sweep = -s.sweep;
    }
    r.segments.push_back(s);
  }
  return r;
}

TransportPath gamma_path(double d, double eps, int power) {
  double zp = (2 * d / 3) * std::sqrt(d / 3);
  double z0 = -zp + eps;
  TransportPath p = TransportPath::line(z0, 0.0);
  if (power != 0) p.then(TransportPath::arc(zp, zp, M_PI, 2 * M_PI * power));
  p.then(TransportPath::line(0.0, z0));
  return p;
}

namespace {

// the transport in a chosen floating type; long double is used where the
// monodromy amplifies integration noise
template <class R>
struct Flow {
  using C = std::complex<R>;
  using P = Eigen::Matrix<C, 3, 1>;
  using State = std::array<R, 6>;

  const Model& m;
  C d;
  explicit Flow(const Model& model) : m(model), d(C(model.d.real(), model.d.imag())) {}

  static State to_state(const P& p) {
    return {p(0).real(), p(0).imag(), p(1).real(), p(1).imag(), p(2).real(), p(2).imag()};
  }
  static P from_state(const State& x) { return P(C(x[0], x[1]), C(x[2], x[3]), C(x[4], x[5])); }

  C value(const P& p) const {
    if (m.kind == Model::Kind::A1) return p(0) * p(0) + p(1) * p(1) + p(2) * p(2);
    return p(0) * p(0) * p(0) - p(0) * d + p(1) * p(2);
  }
  P dpi(const P& p) const {
    if (m.kind == Model::Kind::A1) return R(2) * p;
    return P(R(3) * p(0) * p(0) - d, p(2), p(1));
  }
  P horizontal(const P& p, C v) const {
    P g = dpi(p);
    R n2 = g.squaredNorm();
    if (std::sqrt(static_cast<double>(n2)) < 1e-10) throw NearCritical(std::sqrt(static_cast<double>(n2)));
    return g.conjugate() * (v / n2);
  }
  P liouville(const P& p) const {
    P g = dpi(p);
    P half = p / R(2);
    C along = (g.transpose() * half)(0);
    return half - g.conjugate() * (along / g.squaredNorm());
  }
  static C at(const Segment& seg, R s) {
    if (seg.kind == Segment::Kind::Line) {
      C f(seg.from.real(), seg.from.imag()), t(seg.to.real(), seg.to.imag());
      return f + s * (t - f);
    }
    return C(seg.center.real(), seg.center.imag()) + std::polar(R(seg.radius), R(seg.theta0) + s * R(seg.sweep));
  }
  static C velocity(const Segment& seg, R s) {
    if (seg.kind == Segment::Kind::Line)
      return C(seg.to.real(), seg.to.imag()) - C(seg.from.real(), seg.from.imag());
    return C(0, seg.sweep) * std::polar(R(seg.radius), R(seg.theta0) + s * R(seg.sweep));
  }

  // Newton steps along the gradient back onto pi = target
  double project(P& p, C target) const {
    R eps = std::numeric_limits<R>::epsilon() * 8;
    R res = std::abs(value(p) - target);
    for (int it = 0; it < 8 && res > eps * std::max(R(1), std::abs(target)); ++it) {
      P g = dpi(p);
      p -= g.conjugate() * ((value(p) - target) / g.squaredNorm());
      res = std::abs(value(p) - target);
    }
    return static_cast<double>(res);
  }

  struct Result {
    P p;
    double length = 0;
    double residual = 0;
    long steps = 0;
  };

  Result run(const TransportPath& path, P p, const TransportOptions& opt) const {
    Result r;
    auto ctl = odeint::make_controlled(R(opt.abs_tol), R(opt.rel_tol), odeint::runge_kutta_cash_karp54<State, R>());
    for (int si = 0; si < static_cast<int>(path.segments.size()); ++si) {
      const Segment& seg = path.segments[si];
      auto field = [&](const State& x, State& dxdt, R s) {
        P q = from_state(x);
        P v = horizontal(q, velocity(seg, s));
        if (opt.rescaled) v -= R(opt.sigma) * liouville(q);
        dxdt = to_state(v);
      };
      State x = to_state(p);
      R s = 0, dt = R(1e-3);
      try {
        while (s < 1) {
          if (s + dt > 1) dt = 1 - s;
          P before = from_state(x);
          if (ctl.try_step(field, x, s, dt) == odeint::success) {
            P q = from_state(x);
            r.residual = std::max(r.residual, project(q, at(seg, s)));
            x = to_state(q);
            r.length += static_cast<double>((q - before).norm());
            ++r.steps;
          } else if (dt < R(opt.min_step)) {
            throw PartialTransport(si, static_cast<double>(s), "step size underflow");
          }
        }
      } catch (const NearCritical& e) {
        throw PartialTransport(si, static_cast<double>(s), e.what());
      }
      p = from_state(x);
    }
    if (opt.rescaled) {
      // repair the conformal factor with the Liouville flow on the end fibre
      R total = R(opt.sigma) * R(path.segments.size());
      auto flow = [&](const State& x, State& dxdt, R) { dxdt = to_state(liouville(from_state(x))); };
      State x = to_state(p);
      R s = 0, dt = R(1e-3);
      C target = at(path.segments.back(), 1);
      while (s < total) {
        if (s + dt > total) dt = total - s;
        if (ctl.try_step(flow, x, s, dt) == odeint::success) {
          P q = from_state(x);
          r.residual = std::max(r.residual, project(q, target));
          x = to_state(q);
        } else if (dt < R(opt.min_step)) {
          throw PartialTransport(static_cast<int>(path.segments.size()), static_cast<double>(s),
                                 "Liouville flow step underflow");
        }
      }
      p = from_state(x);
    }
    r.p = p;
    return r;
  }
};

using Extended = Flow<long double>;

Point to_double(const Extended::P& p) { return p.cast<cplx>(); }

}  // namespace

Cloud transport(const Model& m, const TransportPath& path, const Cloud& cloud, const TransportOptions& opt,
                TransportStats* stats) {
  if (path.segments.empty()) return cloud;
  if (std::abs(path.start() - cloud.fiber) > 1e-9 * std::max(1.0, std::abs(cloud.fiber)))
    throw std::invalid_argument("cloud does not lie over the start of the path");
  int n = static_cast<int>(cloud.points.size());
  std::vector<Flow<double>::Result> res(n);
  Flow<double> flow(m);
  parallel_for(
      n, [&](int i) { res[i] = flow.run(path, cloud.points[i], opt); }, opt.workers > 0 ? opt.workers : worker_count());
  Cloud out;
  out.fiber = path.end();
  out.params = cloud.params;
  TransportStats st;
  for (auto& r : res) {
    out.points.push_back(r.p);
    st.max_fiber_residual = std::max(st.max_fiber_residual, std::abs(m.value(r.p) - out.fiber));
    st.max_path_length = std::max(st.max_path_length, r.length);
    st.steps += r.steps;
  }
  if (st.max_fiber_residual > opt.fiber_tol)
    throw PartialTransport(static_cast<int>(path.segments.size()) - 1, 1.0, "fibre residual above tolerance");
  if (stats) *stats = st;
  return out;
}

Cloud fibonacci_sphere(int n) {
  if (n < 1) throw std::invalid_argument("need at least one sample");
  Cloud c;
  c.fiber = 1.0;
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    double h = 1.0 - (2.0 * i + 1.0) / n;
    double r = std::sqrt(std::max(0.0, 1.0 - h * h));
    double phi = std::fmod(golden * i, 2 * M_PI);
    c.points.push_back(Point(r * std::cos(phi), r * std::sin(phi), h));
    c.params.emplace_back(h, phi);
  }
  return c;
}

Cloud vanishing_cycle(double t, int n) {
  if (!(t > 0)) throw std::invalid_argument("vanishing cycle needs t > 0");
  Cloud c = fibonacci_sphere(n);
  for (auto& p : c.points) p *= std::sqrt(t);
  c.fiber = t;
  return c;
}

double distance_to_real_sphere(const Point& p, double r) {
  Eigen::Vector3d re = p.real(), im = p.imag();
  return std::hypot(im.norm(), re.norm() - r);
}

A1Report a1_monodromy_check(double t, int n_samples, double tol, const TransportOptions& opt) {
  Cloud start = vanishing_cycle(t, n_samples);
  TransportStats st;
  Cloud end = transport(Model::a1(), TransportPath::arc(0.0, t, 0.0, 2 * M_PI), start, opt, &st);
  A1Report r;
  r.fiber_residual = st.max_fiber_residual;
  for (std::size_t i = 0; i < end.points.size(); ++i) {
    r.hausdorff = std::max(r.hausdorff, distance_to_real_sphere(end.points[i], std::sqrt(t)));
    r.antipodal = std::max(r.antipodal, (end.points[i] + start.points[i]).norm());
  }
  r.setwise = r.hausdorff < tol;
  r.antipodal_ok = r.antipodal < 1e-3;
  return r;
}

A2Setup a2_setup(double d, double eps) {
  if (!(d > 0) || !(eps > 0)) throw std::invalid_argument("a2 needs d > 0 and eps > 0");
  if (!(eps < std::pow(d, 1.5) / 100)) throw std::invalid_argument("a2 needs eps < d^(3/2) / 100");
  A2Setup s;
  s.d = d;
  s.eps = eps;
  s.z0 = -(2 * d / 3) * std::sqrt(d / 3) + eps;
  // a^3 - d a - z0 has three real roots for |z0| < zeta^+
  double amp = 2 * std::sqrt(d / 3);
  double th = std::acos(std::clamp(3 * s.z0 / (2 * d) * std::sqrt(3 / d), -1.0, 1.0));
  for (int k = 0; k < 3; ++k) {
    double a = amp * std::cos(th / 3 - 2 * M_PI * k / 3);
    for (int it = 0; it < 3; ++it) a -= (a * a * a - d * a - s.z0) / (3 * a * a - d);
    s.roots[k] = a;
  }
  std::sort(s.roots, s.roots + 3);
  return s;
}

namespace {

Point lambda_point(const A2Setup& s, double h, double phi) {
  double mid = 0.5 * (s.roots[1] + s.roots[2]), half = 0.5 * (s.roots[2] - s.roots[1]);
  double a = mid + h * half;
  if (h <= -1) a = s.roots[1];
  if (h >= 1) a = s.roots[2];
  double f = a * a * a - s.d * a - s.z0;
  double rho = std::sqrt(std::max(0.0, -f));
  return Point(a, std::polar(rho, phi), std::polar(rho, -phi));
}

}  // namespace

Cloud lambda_alpha(const A2Setup& s, int n_samples) {
  Cloud c = fibonacci_sphere(n_samples);
  c.fiber = s.z0;
  for (std::size_t i = 0; i < c.points.size(); ++i) c.points[i] = lambda_point(s, c.params[i](0), c.params[i](1));
  return c;
}

Cloud lambda_meridian(const A2Setup& s, int k) {
  Cloud c;
  c.fiber = s.z0;
  for (int i = 0; i <= k; ++i) {
    double h = -std::cos(M_PI * i / k);
    c.points.push_back(lambda_point(s, h, 0.0));
    c.params.emplace_back(h, 0.0);
  }
  return c;
}

bool A2Report::pass(double tol) const {
  return max_bc_gap < tol && fiber_residual < 1e-9 && arc == expected && pattern == expected_pattern;
}

namespace {

// distance between S^1 orbits (b, c) -> (e^{it} b, e^{-it} c)
double orbit_distance(const Point& x, const Point& y) {
  double sq = std::norm(x(0) - y(0)) + std::norm(x(1)) + std::norm(x(2)) + std::norm(y(1)) + std::norm(y(2)) -
              2 * std::abs(x(1) * std::conj(y(1)) + std::conj(x(2)) * y(2));
  return std::sqrt(std::max(0.0, sq));
}

// meridian point at polar angle theta (0 at the middle root), in extended precision
Extended::P meridian_point(const A2Setup& s, long double theta) {
  long double mid = 0.5L * (s.roots[1] + s.roots[2]), half = 0.5L * (s.roots[2] - s.roots[1]);
  long double a = mid - std::cos(theta) * half;
  long double f = a * a * a - static_cast<long double>(s.d) * a - static_cast<long double>(s.z0);
  long double rho = std::sqrt(std::max(0.0L, -f));
  using C = Extended::C;
  return Extended::P(C(a), C(rho), C(rho));
}

// insert meridian samples, bisecting in the polar angle, until consecutive images are
// close as orbits and their chords keep clear of the roots.  The monodromy stretches
// the neck between the two right roots by many orders of magnitude, so this runs in
// long double; orbit closeness is given up once the angle interval reaches rounding size.
Cloud transported_meridian(const Model& m, const TransportPath& path, const A2Setup& s, int k,
                           const TransportOptions& base) {
  TransportOptions opt = base;
  opt.abs_tol = std::min(opt.abs_tol, 1e-14);
  opt.rel_tol = std::min(opt.rel_tol, 1e-14);
  opt.min_step = std::min(opt.min_step, 1e-16);
  Extended flow(m);
  auto run = [&](const std::vector<long double>& th) {
    std::vector<Point> out(th.size());
    parallel_for(
        static_cast<int>(th.size()), [&](int i) { out[i] = to_double(flow.run(path, meridian_point(s, th[i]), opt).p); },
        opt.workers > 0 ? opt.workers : worker_count());
    return out;
  };
  auto dist_to_roots = [&](cplx a) {
    double best = std::numeric_limits<double>::infinity();
    for (double r : s.roots) best = std::min(best, std::abs(a - r));
    return best;
  };
  const double gap = s.roots[2] - s.roots[1];
  const double floor = 1e-3 * gap, max_chord = 0.5 * gap;
  const long double pi = std::acos(-1.0L);

  std::vector<long double> th;
  for (int i = 0; i <= k; ++i) th.push_back(pi * i / k);
  std::vector<Point> img = run(th);
  for (int round = 0;; ++round) {
    std::vector<long double> mids;
    for (std::size_t i = 0; i + 1 < img.size(); ++i) {
      cplx u = img[i](0), v = img[i + 1](0);
      // the chord must keep clear of the roots on the scale of its endpoints
      double clear = std::numeric_limits<double>::infinity();
      for (double r : s.roots) {
        double t = std::clamp(std::real((cplx(r) - u) * std::conj(v - u)) / std::max(1e-300, std::norm(v - u)), 0.0, 1.0);
        clear = std::min(clear, std::abs(u + t * (v - u) - r));
      }
      double room = std::max(floor, 0.5 * std::min(dist_to_roots(u), dist_to_roots(v)));
      bool resolvable = th[i + 1] - th[i] > 1e-15L;
      bool far = std::abs(u - v) > room && clear < room;
      if (far && !resolvable)
        throw PartialTransport(static_cast<int>(path.segments.size()) - 1, 1.0,
                               "meridian projection unresolved near a root");
      if (far || (resolvable && orbit_distance(img[i], img[i + 1]) > max_chord))
        mids.push_back(0.5L * (th[i] + th[i + 1]));
    }
    if (mids.empty()) break;
    if (round >= 64 || img.size() + mids.size() > 400000)
      throw PartialTransport(static_cast<int>(path.segments.size()) - 1, 1.0, "meridian refinement did not converge");
    std::vector<Point> extra = run(mids);
    std::vector<std::pair<long double, Point>> all;
    for (std::size_t i = 0; i < img.size(); ++i) all.emplace_back(th[i], img[i]);
    for (std::size_t i = 0; i < mids.size(); ++i) all.emplace_back(mids[i], extra[i]);
    std::sort(all.begin(), all.end(), [](auto& x, auto& y) { return x.first < y.first; });
    th.clear();
    img.clear();
    for (auto& [t, q] : all) {
      th.push_back(t);
      img.push_back(q);
    }
  }
  Cloud c;
  c.fiber = path.end();
  c.points = img;
  for (long double t : th) c.params.emplace_back(static_cast<double>(-std::cos(t)), 0.0);
  return c;
}

}  // namespace

A2Report a2_monodromy(double d, double eps, int power, int n_samples, int meridian, const TransportOptions& opt) {
  A2Report r;
  r.setup = a2_setup(d, eps);
  r.power = power;
  Model m = Model::a2(d);
  TransportPath path = gamma_path(d, eps, power);
  TransportStats st;
  r.cloud = transport(m, path, lambda_alpha(r.setup, n_samples), opt, &st);
  Cloud mer = transported_meridian(m, path, r.setup, meridian, opt);
  r.fiber_residual = st.max_fiber_residual;
  for (const auto* c : {&r.cloud, &mer})
    for (const auto& p : c->points) {
      r.max_bc_gap = std::max(r.max_bc_gap, std::abs(std::abs(p(1)) - std::abs(p(2))));
      r.fiber_residual = std::max(r.fiber_residual, std::abs(m.value(p) - r.setup.z0));
    }
  for (const auto& p : mer.points) r.projection.push_back(p(0));
  std::vector<double> punct(r.setup.roots, r.setup.roots + 3);
  r.arc = arc_from_polyline(r.projection, punct);
  Arc alpha = make_semicircle(2, 3, Half::Upper, 3);
  BraidWord w{3, {}};
  for (int i = 0; i < std::abs(power); ++i) w.letters.push_back({1, power > 0 ? 1 : -1});
  r.expected = act(w, make_system(3, {alpha})).arcs.front();
  r.pattern = intersection(make_system(3, {alpha}), make_system(3, {r.arc}));
  r.expected_pattern = intersection(make_system(3, {alpha}), make_system(3, {r.expected}));
  return r;
}

GradientEstimate gradient_estimate_check(const Model& m, const Point& center, double radius, int n_samples,
                                         std::uint64_t seed) {
  if (radius > 2) throw std::invalid_argument("gradient estimate region must have radius <= 2");
  auto run = [&](int n, std::uint64_t sd) {
    std::mt19937_64 rng(sd);
    std::normal_distribution<double> g(0, 1);
    std::uniform_real_distribution<double> u(0, 1);
    CriticalValues cv;
    if (m.kind == Model::Kind::A2) cv = critical_values(m.d);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      Eigen::Matrix<double, 6, 1> v;
      for (int k = 0; k < 6; ++k) v(k) = g(rng);
      v *= radius * std::pow(u(rng), 1.0 / 6) / v.norm();
      Point p = center + Point(cplx(v(0), v(1)), cplx(v(2), v(3)), cplx(v(4), v(5)));
      double g2 = m.dpi(p).squaredNorm(), denom;
      cplx val = m.value(p);
      if (m.kind == Model::Kind::A1) denom = std::abs(val);
      else denom = std::sqrt(std::abs(m.d)) * std::min(std::abs(val - cv.zeta_plus), std::abs(val - cv.zeta_minus));
      if (denom > 0) best = std::min(best, g2 / denom);
    }
    return best;
  };
  GradientEstimate e;
  e.ratio = run(n_samples, seed);
  e.ratio_doubled = run(2 * n_samples, seed + 1);
  e.bounded = e.ratio > 1e-3 && e.ratio_doubled > 1e-3;
  e.stable = std::abs(e.ratio - e.ratio_doubled) <= 0.2 * std::max(e.ratio, e.ratio_doubled);
  return e;
}

namespace {

using Vec6 = Eigen::Matrix<double, 6, 1>;

Vec6 realify(const Point& p) {
  Vec6 v;
  v << p(0).real(), p(0).imag(), p(1).real(), p(1).imag(), p(2).real(), p(2).imag();
  return v;
}

Vec6 times_i(const Vec6& v) {
  Vec6 w;
  for (int k = 0; k < 3; ++k) {
    w(2 * k) = -v(2 * k + 1);
    w(2 * k + 1) = v(2 * k);
  }
  return w;
}

// best-fit real 2-plane through q for displacement samples
Eigen::Matrix<double, 6, 2> tangent_plane(const std::vector<Point>& ring, const Point& q) {
  Eigen::MatrixXd disp(6, ring.size());
  for (std::size_t i = 0; i < ring.size(); ++i) {
    Vec6 v = realify(ring[i] - q);
    disp.col(i) = v / v.norm();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(disp, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(2);
}

}  // namespace

MaslovReport maslov_markov(int sign, const TransportOptions& opt) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("maslov_markov: sign must be +1 or -1");
  const double d = 1.0, eps = 1e-3, dh = 1e-5;
  A2Setup s = a2_setup(d, eps);
  Point q(s.roots[2], 0.0, 0.0);
  Cloud ring;
  ring.fiber = s.z0;
  const int k = 12;
  for (int i = 0; i < k; ++i) {
    double phi = 2 * M_PI * i / k;
    ring.points.push_back(lambda_point(s, 1.0 - dh, phi));
    ring.params.emplace_back(1.0 - dh, phi);
  }
  Cloud moved = transport(Model::a2(d), gamma_path(d, eps, sign), ring, opt);

  auto t0 = tangent_plane(ring.points, q);   // Lambda_alpha
  auto t1 = tangent_plane(moved.points, q);  // its image
  Eigen::Matrix<double, 6, 4> frame;
  frame << t1.col(0), t1.col(1), times_i(t1.col(0)), times_i(t1.col(1));
  // Lambda_alpha = graph of dh over the image: T0 = {v + i S v : v in T1}
  Eigen::Matrix<double, 4, 2> coef = frame.colPivHouseholderQr().solve(t0);
  Eigen::Matrix2d x = coef.topRows(2), y = coef.bottomRows(2);
  Eigen::Matrix2d hess = y * x.inverse();
  MaslovReport r;
  r.asymmetry = (hess - hess.transpose()).norm() / std::max(1e-300, hess.norm());
  Eigen::Matrix2d sym = 0.5 * (hess + hess.transpose());
  r.hessian_eigenvalues = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(sym).eigenvalues();
  cplx dir = 0;
  for (const auto& p : moved.points) dir += p(0) - q(0);
  r.departure_angle = std::arg(dir);
  for (int i = 0; i < 2; ++i) {
    if (std::abs(r.hessian_eigenvalues(i)) < 1e-6) throw std::runtime_error("degenerate Hessian at the intersection");
    if (r.hessian_eigenvalues(i) < 0) ++r.index;
  }
  return r;
}

double phase_spread(const Model& m, const std::vector<Point>& pts, const std::vector<Point>& du,
                    const std::vector<Point>& dv) {
  double worst = 0;
  cplx ref = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Vec6 a = realify(du[i]), b = realify(dv[i]);
    a.normalize();
    b -= a.dot(b) * a;
    b.normalize();
    Point xi1(cplx(a(0), a(1)), cplx(a(2), a(3)), cplx(a(4), a(5)));
    Point xi2(cplx(b(0), b(1)), cplx(b(2), b(3)), cplx(b(4), b(5)));
    Point g = m.dpi(pts[i]);
    Point u = g.conjugate() / g.squaredNorm();
    Eigen::Matrix3cd mat;
    mat << u, xi1, xi2;
    cplx theta = mat.determinant();
    cplx alpha = theta * theta / std::norm(theta);
    if (i == 0) ref = alpha;
    worst = std::max(worst, std::abs(alpha - ref));
  }
  return worst;
}

namespace {

std::string sci(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

// samples with two neighbours each, displaced by eta along the parameter directions
struct Stencil {
  Cloud all;
  int n = 0;
};

Stencil a1_stencil(double t, int n, double eta) {
  Cloud base = vanishing_cycle(t, n);
  Stencil st;
  st.n = n;
  st.all.fiber = t;
  for (int pass = 0; pass < 3; ++pass)
    for (int i = 0; i < n; ++i) {
      Eigen::Vector3d x = base.points[i].real() / std::sqrt(t);
      Eigen::Vector3d e1 = x.unitOrthogonal(), e2 = x.cross(e1);
      Eigen::Vector3d y = x;
      if (pass == 1) y = std::cos(eta) * x + std::sin(eta) * e1;
      if (pass == 2) y = std::cos(eta) * x + std::sin(eta) * e2;
      st.all.points.push_back(Point(y.cast<cplx>()) * std::sqrt(t));
      st.all.params.push_back(base.params[i]);
    }
  return st;
}

Stencil a2_stencil(const A2Setup& s, int n, double eta) {
  Cloud base = fibonacci_sphere(n);
  Stencil st;
  st.n = 0;
  st.all.fiber = s.z0;
  std::vector<Eigen::Vector2d> keep;
  for (auto& pr : base.params)
    if (std::abs(pr(0)) < 0.9) keep.push_back(pr);  // keep the chart away from the poles
  st.n = static_cast<int>(keep.size());
  for (int pass = 0; pass < 3; ++pass)
    for (auto& pr : keep) {
      double h = pr(0) + (pass == 1 ? eta : 0), phi = pr(1) + (pass == 2 ? eta : 0);
      st.all.points.push_back(lambda_point(s, h, phi));
      st.all.params.emplace_back(h, phi);
    }
  return st;
}

double stencil_phase(const Model& m, const Cloud& c, int n, double eta) {
  std::vector<Point> pts, du, dv;
  for (int i = 0; i < n; ++i) {
    pts.push_back(c.points[i]);
    du.push_back((c.points[n + i] - c.points[i]) / eta);
    dv.push_back((c.points[2 * n + i] - c.points[i]) / eta);
  }
  return phase_spread(m, pts, du, dv);
}

}  // namespace

std::vector<Check> a1_battery(double t, int samples, double tol, const TransportOptions& opt) {
  std::vector<Check> out;
  Model m = Model::a1();
  {
    Cloud c = vanishing_cycle(t, samples);
    Cloud same = transport(m, TransportPath::line(t, t), c, opt);
    double worst = 0;
    for (std::size_t i = 0; i < c.points.size(); ++i) worst = std::max(worst, (same.points[i] - c.points[i]).norm());
    out.push_back({"constant path is the identity", worst < 1e-12, "max " + sci(worst)});
  }
  {
    Cloud c = vanishing_cycle(t, samples);
    TransportStats st;
    Cloud q = transport(m, TransportPath::line(t, t / 4), c, opt, &st);
    double worst = 0;
    for (auto& p : q.points) worst = std::max(worst, distance_to_real_sphere(p, std::sqrt(t / 4)));
    out.push_back({"vanishing cycle shrinks as sqrt(t)", worst < 1e-6 && st.max_fiber_residual < 1e-9,
                   "max distance " + sci(worst) + ", fibre " + sci(st.max_fiber_residual)});
  }
  {
    double tt = 1e-6 * t;
    Cloud c = vanishing_cycle(t, samples);
    TransportStats st;
    Cloud q = transport(m, TransportPath::line(t, tt), c, opt, &st);
    double worst = 0;
    for (auto& p : q.points) worst = std::max(worst, p.norm());
    bool ok = worst < 2 * std::sqrt(tt);
    out.push_back({"transport toward the singular fibre", ok, "max norm " + sci(worst) + " at t' = " + sci(tt)});
    // nu = 1/4 in the flat metric: flow lines into the critical point are no longer than 2 nu^(1/2) t^(1/2)
    double bound = 1.5 * 2 * 0.5 * std::sqrt(t);
    out.push_back({"flow line length bound", st.max_path_length <= bound,
                   "max length " + sci(st.max_path_length) + ", bound " + sci(bound)});
  }
  {
    A1Report r = a1_monodromy_check(t, samples, tol, opt);
    out.push_back({"full loop returns the sphere setwise", r.setwise && r.fiber_residual < 1e-9,
                   "hausdorff " + sci(r.hausdorff)});
    out.push_back({"full loop acts antipodally", r.antipodal_ok, "max |p_end + p_start| " + sci(r.antipodal), true});
  }
  {
    Cloud c = vanishing_cycle(t, samples);
    Cloud half = transport(m, TransportPath::arc(0.0, t, 0.0, M_PI), c, opt);
    double worst = 0;
    for (auto& p : half.points) {
      // over -t the cycle is i sqrt(t) S^2
      Point rot = p * cplx(0, -1);
      worst = std::max(worst, distance_to_real_sphere(rot, std::sqrt(t)));
    }
    out.push_back({"half loop lands on i sqrt(t) S^2", worst < tol, "max " + sci(worst)});
  }
  {
    TransportPath path = TransportPath::line(t, cplx(t, t)).then(TransportPath::line(cplx(t, t), cplx(-t, 0.5 * t)));
    Cloud c = vanishing_cycle(t, samples);
    Cloud back = transport(m, path.reversed(), transport(m, path, c, opt), opt);
    double worst = 0;
    for (std::size_t i = 0; i < c.points.size(); ++i) worst = std::max(worst, (back.points[i] - c.points[i]).norm());
    out.push_back({"transport then reverse is the identity", worst < 1e-6, "max " + sci(worst)});
  }
  {
    TransportOptions ro = opt;
    ro.rescaled = true;
    A1Report r = a1_monodromy_check(t, samples, tol, ro);
    out.push_back({"rescaled loop returns the sphere setwise", r.setwise, "hausdorff " + sci(r.hausdorff)});
  }
  {
    const double eta = 1e-5;
    int n = std::max(8, samples / 4);
    Stencil st = a1_stencil(t, n, eta);
    double at_start = stencil_phase(m, st.all, n, eta);
    Cloud q = transport(m, TransportPath::arc(0.0, t, 0.0, 2.0), st.all, opt);
    double moved = stencil_phase(m, q, n, eta);
    double worst = std::max(at_start, moved);
    out.push_back({"squared phase is constant on vanishing cycles", worst < 1e-3, "spread " + sci(worst)});
  }
  return out;
}

std::vector<Check> a2_battery(double d, double eps, int power, int samples, const TransportOptions& opt) {
  return a2_checks(a2_monodromy(d, eps, power, samples, 400, opt));
}

std::vector<Check> a2_checks(const A2Report& r, double tol) {
  std::vector<Check> out;
  int power = r.power;
  std::ostringstream pat;
  pat << "(" << r.pattern.endpoint_count << "," << r.pattern.interior_count << ")";
  out.push_back({"transported cycle stays in |b| = |c|", r.max_bc_gap < tol && r.fiber_residual < 1e-9,
                 "max ||b|-|c|| " + sci(r.max_bc_gap) + ", fibre " + sci(r.fiber_residual)});
  out.push_back({"a-projection is t_beta^" + std::to_string(power) + "(alpha)", r.arc == r.expected,
                 format_arc(r.arc) + " vs " + format_arc(r.expected)});
  out.push_back({"intersection pattern with alpha " + pat.str(), r.pattern == r.expected_pattern, "curves module agrees"});
  return out;
}

std::vector<Check> transport_battery(std::uint64_t seed, int samples, const TransportOptions& opt) {
  std::vector<Check> out = a1_battery(1.0, samples, 1e-4, opt);
  Model m1 = Model::a1();
  {
    auto g = gradient_estimate_check(m1, Point::Zero(), 1.0, 100000, seed);
    out.push_back({"A1 gradient estimate, nu = 1/4", g.ratio >= 4.0 * (1 - 1e-9) && g.stable,
                   "min ||grad||^2/|pi| " + sci(g.ratio) + ", doubled " + sci(g.ratio_doubled)});
  }
  {
    auto g1 = gradient_estimate_check(Model::a2(1.0), Point::Zero(), 1.0, 100000, seed + 7);
    auto gh = gradient_estimate_check(Model::a2(0.5), Point::Zero(), 1.0, 100000, seed + 13);
    out.push_back({"A2 gradient estimate bounded and stable", g1.bounded && g1.stable,
                   "nu^-1 ~ " + sci(g1.ratio) + ", doubled " + sci(g1.ratio_doubled)});
    double scale = gh.ratio / g1.ratio;
    out.push_back({"A2 estimate scales with |d|^(1/2)", std::abs(scale / std::sqrt(2.0) - 1) < 0.3,
                   "ratio at d/2 over d " + sci(scale)});
  }
  {
    A2Setup s = a2_setup(1.0, 1e-3);
    Model m = Model::a2(1.0);
    const double eta = 1e-6;
    Stencil st = a2_stencil(s, samples, eta);
    double at_start = stencil_phase(m, st.all, st.n, eta);
    Cloud q = transport(m, TransportPath::line(s.z0, 0.0), st.all, opt);
    double moved = stencil_phase(m, q, st.n, eta);
    out.push_back({"squared phase is constant on the A2 vanishing cycle", std::max(at_start, moved) < 1e-3,
                   "spread " + sci(std::max(at_start, moved))});
  }
  for (int p : {0, 1, 3}) {
    auto part = a2_battery(1.0, 1e-3, p, samples, opt);
    out.insert(out.end(), part.begin(), part.end());
  }
  {
    TransportOptions ro = opt;
    ro.rescaled = true;
    A2Report r = a2_monodromy(1.0, 1e-3, 1, samples, 400, ro);
    out.push_back({"rescaled transport gives the same arc", r.arc == r.expected && r.max_bc_gap < 1e-4,
                   format_arc(r.arc)});
  }
  for (int sign : {1, -1}) {
    auto mr = maslov_markov(sign, opt);
    int want = sign > 0 ? 0 : 2;
    out.push_back({std::string("Maslov index for Markov II") + (sign > 0 ? "+" : "-"), mr.index == want,
                   std::to_string(mr.index) + ", Hessian eigenvalues " + sci(mr.hessian_eigenvalues(0)) + ", " +
                       sci(mr.hessian_eigenvalues(1))});
  }
  return out;
}

}  // namespace khs
