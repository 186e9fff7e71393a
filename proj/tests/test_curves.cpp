#include <doctest.h>

#include <random>

#include "khslice/braid.hpp"
#include "khslice/curves.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace khs;
using namespace gen;

namespace {

ArcSystem one_arc(int n, int p, int q, Half h = Half::Upper) { return make_system(n, {make_semicircle(p, q, h, n)}); }

oracle::Word as_word(const Arc& a) { return {a.p, a.q, a.first == Half::Upper, a.cross}; }

}  // namespace

TEST_CASE("standard matchings") {
  auto up = standard_matching(2, Half::Upper);
  CHECK(format_arc_system(up) == "n=4; (1,4)+ (2,3)+");
  auto lo = standard_matching(3, Half::Lower);
  CHECK(format_arc_system(lo) == "n=6; (1,6)- (2,5)- (3,4)+");
  CHECK(lo.is_matching());
  CHECK(standard_matching(1, Half::Upper).arcs.size() == 1);
}

TEST_CASE("half twist about an arc fixes it") {
  auto a = one_arc(2, 1, 2);
  CHECK(act(parse_braid("2: 1"), a).same_class(a));
  CHECK(act(parse_braid("2: -1"), a).same_class(a));
  auto b = one_arc(5, 2, 3);
  CHECK(act(parse_braid("5: 2 2 -2 2 2"), b).same_class(b));
}

TEST_CASE("hand-computed images") {
  auto alpha = one_arc(3, 2, 3);
  auto img = act(parse_braid("3: 1"), alpha);
  CHECK(format_arc_system(img) == "n=3; (1,3)+");
  auto img3 = act(parse_braid("3: 1 1 1"), alpha);
  CHECK(format_arc_system(img3) == "n=3; (1,3)+[2 0]");
}

TEST_CASE("twist action matches the polyline oracle") {
  std::mt19937 rng(7);
  for (int n = 2; n <= 5; ++n) {
    for (int trial = 0; trial < 60; ++trial) {
      std::uniform_int_distribution<int> pt(1, n), coin(0, 1), len(1, 5);
      int p = pt(rng), q = pt(rng);
      if (p == q) continue;
      bool upper = coin(rng);
      auto w = random_word(rng, n, len(rng));
      CAPTURE(format_braid(w));
      CAPTURE(p);
      CAPTURE(q);
      CAPTURE(upper);
      Arc a = make_semicircle(std::min(p, q), std::max(p, q), upper ? Half::Upper : Half::Lower, n);
      for (auto l : w.letters) a = act_letter(a, l, n);
      auto poly = oracle::semicircle_poly(std::min(p, q), std::max(p, q), upper);
      for (auto l : w.letters) poly = oracle::twist(poly, l.k, l.sign);
      CHECK(as_word(a) == oracle::read_off(poly, n));
    }
  }
}

TEST_CASE("braid relations and invertibility") {
  std::mt19937 rng(11);
  for (int n = 3; n <= 8; ++n) {
    for (int trial = 0; trial < 200; ++trial) {
      auto a = random_system(rng, n);
      std::uniform_int_distribution<int> kk(1, n - 2);
      int k = kk(rng);
      BraidWord l{n, {{k, 1}, {k + 1, 1}, {k, 1}}}, r{n, {{k + 1, 1}, {k, 1}, {k + 1, 1}}};
      CHECK(act(l, a).same_class(act(r, a)));
      if (n >= 4) {
        std::uniform_int_distribution<int> any(1, n - 1);
        int x = any(rng), y = any(rng);
        if (std::abs(x - y) >= 2) {
          BraidWord xy{n, {{x, 1}, {y, -1}}}, yx{n, {{y, -1}, {x, 1}}};
          CHECK(act(xy, a).same_class(act(yx, a)));
        }
      }
      auto w = random_word(rng, n, 6);
      CHECK(act(w, act(inverse(w), a)).same_class(a));
    }
  }
}

TEST_CASE("intersection counts") {
  auto alpha = one_arc(3, 2, 3);
  auto t1 = act(parse_braid("3: 1"), alpha);
  auto t3 = act(parse_braid("3: 1 1 1"), alpha);
  CHECK(intersection(alpha, t1) == IntersectionCount{1, 0, false});
  CHECK(intersection(alpha, t3) == IntersectionCount{1, 1, false});
  CHECK(intersection(t3, alpha) == IntersectionCount{1, 1, false});
  CHECK(intersection(alpha, act(parse_braid("3: -1 -1 -1"), alpha)) == IntersectionCount{1, 1, false});
  for (int m = 1; m <= 4; ++m) {
    auto r = intersection(standard_matching(m, Half::Upper), standard_matching(m, Half::Lower));
    if (m == 1) CHECK(r == IntersectionCount{0, 0, true});
    else CHECK(r == IntersectionCount{2 * m - 2, 0, true});
  }
  auto deg = intersection(alpha, alpha);
  CHECK(deg.degenerate);
  CHECK(deg.endpoint_count == 0);
}

TEST_CASE("intersection is symmetric and braid invariant") {
  std::mt19937 rng(5);
  for (int n = 3; n <= 6; ++n) {
    for (int trial = 0; trial < 100; ++trial) {
      auto a = random_half_plane(rng, n);
      auto b = random_system(rng, n);
      auto ab = intersection(a, b);
      CHECK(ab == intersection(b, a));
      auto w = random_word(rng, n, 4);
      CHECK(intersection(act(w, a), act(w, b)) == ab);
    }
  }
}

TEST_CASE("Markov I shadow") {
  for (int m = 1; m <= 4; ++m) {
    auto p = standard_matching(m, Half::Upper);
    for (int k = 1; k <= m - 1; ++k) {
      CAPTURE(m);
      CAPTURE(k);
      BraidWord w{2 * m, {{2 * m - k, -1}, {k, 1}}};
      auto img = act(w, p);
      // the image is a different matching, one slide away from p
      CHECK_FALSE(img.same_class(p));
      CHECK(slide_equivalent(img, p, 1));
      BraidWord both{2 * m, {{2 * m - k, 1}, {k, 1}}};
      CHECK_FALSE(slide_equivalent(act(both, p), p, 2));
    }
  }
}

TEST_CASE("slides") {
  auto p = standard_matching(2, Half::Upper);
  // (2,3) is arc index 1 after sorting
  auto s = slide(p, 1, 0);
  CHECK(s.is_matching());
  CHECK_FALSE(s.same_class(p));
  CHECK(slide(s, 1, 0, true).same_class(p));
  CHECK(slide_equivalent(p, standard_matching(2, Half::Lower), 1));
  CHECK_THROWS(slide(standard_matching(1, Half::Upper), 0, 0));
  auto q = parse_arc_system("3; (1,2)+ (3,6)+ (4,5)+");
  CHECK_THROWS(slide(q, 0, 2));
  auto blocked = make_system(6, {make_semicircle(1, 2, Half::Upper, 6), make_semicircle(3, 6, Half::Upper, 6),
                                 Arc{4, 5, Half::Lower, {2}}});
  CHECK_THROWS(slide(blocked, 0, 1));
  // pushing an inner endpoint around the enclosing arc
  auto inner = slide(p, 0, 1, false, 2);
  CHECK(inner.is_matching());
  CHECK(slide(inner, 0, 1, true, 2).same_class(p));
}

TEST_CASE("text format round trip") {
  auto s = parse_arc_system("2; (1,4)+ (2,3)+ | 2 -1");
  auto t = parse_arc_system(format_arc_system(act(parse_braid("4: 2 -1"), standard_matching(2, Half::Upper))).substr(0, 4) +
                            " (1,4)+ (2,3)+ | 2 -1");
  CHECK(s.same_class(t));
  CHECK_THROWS_AS(parse_arc_system("2; (1,5)+"), parse_error);
  CHECK_THROWS_AS(parse_arc_system("(1,2)"), parse_error);
}
