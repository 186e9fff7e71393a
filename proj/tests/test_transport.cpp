#include <doctest.h>

#include "khslice/slice.hpp"
#include "khslice/transport.hpp"

using namespace khs;

TEST_CASE("horizontal lift solves D pi (H) = v") {
  Model m = Model::a2(0.7);
  Point p(cplx(0.3, 0.1), cplx(-0.2, 0.5), cplx(0.4, -0.3));
  cplx v(0.8, -1.3);
  Point h = horizontal(m, p, v);
  cplx got = m.dpi(p).transpose() * h;
  CHECK(std::abs(got - v) < 1e-14);
  // orthogonal to the fibre: h is a multiple of the gradient
  Point g = m.gradient(p);
  CHECK((h - g * (g.dot(h) / g.squaredNorm())).norm() < 1e-14);
  CHECK_THROWS_AS(horizontal(Model::a1(), Point::Zero(), 1.0), NearCritical);
  // Liouville correction stays tangent to the fibre
  cplx tang = m.dpi(p).transpose() * liouville(m, p);
  CHECK(std::abs(tang) < 1e-14);
}

TEST_CASE("paths") {
  auto p = gamma_path(1.0, 1e-3, 2);
  CHECK(p.segments.size() == 3);
  CHECK(std::abs(p.start() - p.end()) < 1e-15);
  auto cv = critical_values(1.0);
  CHECK(std::abs(p.start() - (cv.zeta_minus + 1e-3)) < 1e-15);
  // the loop winds twice around zeta^+ and never around zeta^-
  double wind_plus = 0, wind_minus = 0;
  for (const auto& seg : p.segments)
    for (int k = 0; k < 4000; ++k) {
      double s0 = k / 4000.0, s1 = (k + 1) / 4000.0;
      wind_plus += std::arg((seg.at(s1) - cv.zeta_plus) / (seg.at(s0) - cv.zeta_plus));
      wind_minus += std::arg((seg.at(s1) - cv.zeta_minus) / (seg.at(s0) - cv.zeta_minus));
    }
  CHECK(wind_plus / (2 * M_PI) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(std::abs(wind_minus) < 1e-9);
  auto r = p.reversed();
  for (double s : {0.0, 0.3, 1.0}) CHECK(std::abs(r.segments[1].at(s) - p.segments[1].at(1 - s)) < 1e-12);
}

TEST_CASE("A2 setup and the vanishing cycle") {
  auto s = a2_setup(1.0, 1e-3);
  for (double r : s.roots) CHECK(std::abs(r * r * r - r - s.z0) < 1e-14);
  CHECK(s.roots[0] < s.roots[1]);
  CHECK(s.roots[1] < s.roots[2]);
  // the two right roots are close: they collide at zeta^- = -(2/3) sqrt(1/3)
  CHECK(s.roots[2] - s.roots[1] < 0.1);
  auto c = lambda_alpha(s, 300);
  Model m = Model::a2(1.0);
  for (const auto& p : c.points) {
    CHECK(std::abs(m.value(p) - s.z0) < 1e-13);
    CHECK(std::abs(p(0).imag()) == 0);
    CHECK(std::abs(std::abs(p(1)) - std::abs(p(2))) < 1e-15);
  }
  CHECK_THROWS(a2_setup(1.0, 0.1));
  CHECK_THROWS(a2_setup(-1.0, 1e-4));
}

TEST_CASE("A1 transport anchors") {
  for (const auto& c : a1_battery(1.0, 200, 1e-4)) {
    CAPTURE(c.name);
    CAPTURE(c.detail);
    CHECK(c.pass);
  }
}

TEST_CASE("A1 cycle at other radii") {
  for (double t : {0.25, 4.0}) {
    auto r = a1_monodromy_check(t, 100);
    CHECK(r.setwise);
    CHECK(r.antipodal_ok);
  }
}

TEST_CASE("A2 monodromy matches the Dehn twist on arcs") {
  for (int power : {1, 3, -1, 2}) {
    auto r = a2_monodromy(1.0, 1e-3, power, 100, 200);
    CAPTURE(power);
    CAPTURE(format_arc(r.arc));
    CAPTURE(format_arc(r.expected));
    CHECK(r.pass());
    CHECK(r.max_bc_gap < 1e-4);
    CHECK(r.arc.p == (power % 2 == 0 ? 2 : 1));
    if (power == 1) {
      CHECK(r.pattern.endpoint_count == 1);
      CHECK(r.pattern.interior_count == 0);
    }
    if (power == 3) {
      CHECK(r.pattern.endpoint_count == 1);
      CHECK(r.pattern.interior_count == 1);
    }
  }
}

TEST_CASE("gradient estimates") {
  auto a1 = gradient_estimate_check(Model::a1(), Point::Zero(), 1.0, 20000, 5);
  CHECK(a1.ratio >= 4.0 - 1e-9);
  CHECK(a1.ratio < 4.1);
  CHECK(a1.stable);
  auto a2 = gradient_estimate_check(Model::a2(1.0), Point::Zero(), 1.0, 20000, 6);
  CHECK(a2.bounded);
  CHECK(a2.stable);
  CHECK_THROWS(gradient_estimate_check(Model::a1(), Point::Zero(), 3.0, 10, 1));
}

TEST_CASE("Maslov index for Markov II") {
  auto plus = maslov_markov(1);
  auto minus = maslov_markov(-1);
  CHECK(plus.index == 0);
  CHECK(minus.index == 2);
  CHECK(plus.asymmetry < 1e-2);
  CHECK(minus.asymmetry < 1e-2);
  CHECK(std::sin(plus.departure_angle) > 0);
  CHECK(std::sin(minus.departure_angle) < 0);
  CHECK_THROWS(maslov_markov(0));
}

TEST_CASE("transport battery") {
  for (const auto& c : transport_battery(11, 120)) {
    CAPTURE(c.name);
    CAPTURE(c.detail);
    CHECK(c.pass);
  }
}

TEST_CASE("small transport examples") {
  Model a1 = Model::a1();
  Point p(std::sqrt(2.0), 0.0, 0.0);
  CHECK(horizontal(a1, p, 0.0).norm() == 0);
  Point h = horizontal(a1, p, 1.0);
  CHECK(std::abs(h(0) - 1.0 / (2 * std::sqrt(2.0))) < 1e-15);
  Model a2 = Model::a2(1.0);
  for (double a : {-2.0, 0.1, 1.5}) {
    Point q(a, 0.0, 0.0);
    cplx v(0.3, -0.4);
    cplx got = a2.dpi(q).transpose() * horizontal(a2, q, v);
    CHECK(std::abs(got - v) < 1e-12 * std::abs(v));
  }
  auto c = vanishing_cycle(0.01, 50);
  for (const auto& q : c.points) CHECK(std::abs(q.norm() - 0.1) < 1e-15);
  CHECK(std::abs(c.fiber - 0.01) == 0);
  // no circles: out to 0 and straight back
  auto s = a2_setup(1.0, 1e-3);
  auto r = a2_monodromy(1.0, 1e-3, 0, 60, 50);
  auto start = lambda_alpha(s, 60);
  double worst = 0;
  for (std::size_t i = 0; i < start.points.size(); ++i)
    worst = std::max(worst, (r.cloud.points[i] - start.points[i]).norm());
  CHECK(worst < 1e-6);
  CHECK(r.arc == r.expected);
  CHECK(r.pattern.degenerate);
}
