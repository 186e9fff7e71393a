// One line per acceptance criterion; exit code 0 iff every line passes.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "generators.hpp"
#include "khslice/braid.hpp"
#include "khslice/curves.hpp"
#include "khslice/diagram.hpp"
#include "khslice/homology.hpp"
#include "khslice/slice.hpp"
#include "khslice/transport.hpp"
#include "oracles.hpp"

using namespace khs;
using Rational = boost::multiprecision::cpp_rational;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget;  // seconds, 0 for none
  std::function<Outcome()> run;
};

std::vector<BraidWord> corpus() { return read_braid_file(std::string(KHS_DATA_DIR) + "/corpus.braid"); }

AbelianGroup Z(long r = 1) { return {r, {}}; }

GradedGroup collapsed_of(const BraidWord& b) { return collapse(khovanov(braid_closure_diagram(b))); }

AbelianGroup direct_sum(AbelianGroup a, const AbelianGroup& b) {
  a.rank += b.rank;
  a.torsion.insert(a.torsion.end(), b.torsion.begin(), b.torsion.end());
  std::sort(a.torsion.begin(), a.torsion.end());
  return a;
}

const Check* find_check(const std::vector<Check>& v, const std::string& prefix) {
  for (const auto& c : v)
    if (c.name.rfind(prefix, 0) == 0) return &c;
  return nullptr;
}

Outcome from_checks(const std::vector<Check>& all, const std::vector<std::string>& names) {
  Outcome o{true, ""};
  for (const auto& n : names) {
    const Check* c = find_check(all, n);
    if (!c) return {false, "missing check: " + n};
    o.pass = o.pass && c->pass;
    if (!c->pass) o.detail += (o.detail.empty() ? "" : "; ") + c->name + ": " + c->detail;
  }
  if (o.pass) o.detail = std::to_string(names.size()) + " checks";
  return o;
}

Outcome unknot() {
  auto kh = khovanov(braid_closure_diagram(parse_braid("1:")));
  bool ok = kh == BigradedGroup{{{0, -1}, Z()}, {{0, 1}, Z()}} && jones(kh, 1).str() == "1";
  return {ok, "Kh = Z(0,-1) + Z(0,1), V = " + jones(kh, 1).str()};
}

Outcome trefoil() {
  auto col = collapsed_of(parse_braid("2: 1 1 1"));
  GradedGroup want{{1, Z()}, {3, Z(2)}, {5, {0, {2}}}, {6, Z()}};
  std::string s;
  for (auto& [k, g] : col) s += (s.empty() ? "" : ", ") + g.str() + " at " + std::to_string(k);
  return {col == want, s};
}

Outcome markov_invariance() {
  std::mt19937_64 rng(20240601);
  int bad = 0, total = 0, longest = 0;
  std::string first;
  for (int i = 0; i < 100; ++i) {
    auto b = random_braid(rng, 4, 8);
    auto steps = random_markov_moves(b, 6, rng);
    for (auto& s : steps) longest = std::max(longest, s.result.length());
    ++total;
    if (khovanov(braid_closure_diagram(b)) != khovanov(braid_closure_diagram(steps.back().result))) {
      ++bad;
      if (first.empty()) first = format_trace(b, steps);
    }
  }
  return {bad == 0, std::to_string(total - bad) + "/" + std::to_string(total) + " equal, seed 20240601, longest word " +
                        std::to_string(longest) + (first.empty() ? "" : "; first failure " + first)};
}

Outcome skein_les() {
  int checked = 0;
  std::string fail;
  for (const char* w : {"2: 1 1 1", "2: -1 -1 -1", "2: 1 1", "2: -1 -1", "3: 1 -2 1 -2"}) {
    auto d = braid_closure_diagram(parse_braid(w));
    for (int c = 0; c < d.size(); ++c) {
      ++checked;
      if (!skein_check(d, c).holds) fail += std::string(w) + " skein at " + std::to_string(c) + "; ";
      if (!les_rank_check(d, c).holds()) fail += std::string(w) + " les at " + std::to_string(c) + "; ";
    }
  }
  return {fail.empty(), fail.empty() ? std::to_string(checked) + " crossings" : fail};
}

Outcome jones_oracle() {
  int n = 0;
  std::string fail;
  for (const auto& b : corpus()) {
    if (b.length() > 7 || b.strands > 4) continue;
    ++n;
    auto d = braid_closure_diagram(b);
    if (jones(khovanov(d), d.components()).c != oracle::jones_by_bracket(b)) fail += format_braid(b) + "; ";
  }
  return {fail.empty() && n > 0, fail.empty() ? std::to_string(n) + " corpus braids" : fail};
}

Outcome unknot_and_reversal() {
  int n = 0;
  std::string fail;
  for (const auto& b : corpus()) {
    ++n;
    auto base = collapsed_of(b);
    GradedGroup want;
    for (auto& [k, g] : base) {
      want[k - 1] = direct_sum(want[k - 1], g);
      want[k + 1] = direct_sum(want[k + 1], g);
    }
    std::erase_if(want, [](auto& e) { return e.second.zero(); });
    if (collapsed_of(add_trivial_strand(b)) != want) fail += "split " + format_braid(b) + "; ";
    if (collapsed_of(reversed(b)) != base) fail += "reverse " + format_braid(b) + "; ";
  }
  return {fail.empty(), fail.empty() ? std::to_string(n) + " corpus braids" : fail};
}

Outcome euler_magnitude() {
  int n = 0;
  std::string fail;
  for (const auto& b : corpus()) {
    ++n;
    int c = closure_permutation(b).components;
    long e = euler_of_collapse(collapsed_of(b));
    if (std::labs(e) != (1L << c)) fail += format_braid(b) + " gives " + std::to_string(e) + "; ";
  }
  return {fail.empty(), fail.empty() ? std::to_string(n) + " corpus braids" : fail};
}

Outcome sl3_identity() {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  int exact = 0;
  for (int i = 0; i < 500; ++i) {
    Rational a(num(rng), den(rng)), b(num(rng), den(rng)), c(num(rng), den(rng)), d(num(rng), den(rng));
    if (a2_poly_t(sl3_normal_form_t<Rational>(a, b, c, d)) == sl3_char_poly_t<Rational>(a, b, c, d)) ++exact;
  }
  std::uniform_real_distribution<double> u(-1, 1);
  double worst = 0;
  int inside = 0;
  while (inside < 1000) {
    cplx z[4];
    bool ok = true;
    for (auto& x : z) {
      x = cplx(u(rng), u(rng));
      ok = ok && std::abs(x) < 1;
    }
    if (!ok) continue;
    ++inside;
    worst = std::max(worst, sl3_verify(z[0], z[1], z[2], z[3]));
  }
  std::ostringstream os;
  os << exact << "/500 exact rational, max complex residual " << worst;
  return {exact == 500 && worst < 1e-10, os.str()};
}

Outcome slice_lemmas() {
  auto all = slice_battery(9, 1000);
  return from_checks(all, {"eigenspaces project injectively", "embed_lower adds {0,0}", "C* action multiplies"});
}

Outcome a1_transport() {
  auto all = a1_battery(1.0, 200, 1e-4);
  auto o = from_checks(all, {"vanishing cycle shrinks as sqrt(t)", "full loop returns the sphere setwise"});
  if (o.pass) o.detail = find_check(all, "full loop returns")->detail + ", " + find_check(all, "vanishing cycle")->detail;
  return o;
}

Outcome a2_transport() {
  std::ostringstream os;
  bool ok = true;
  for (int power : {1, 3}) {
    auto r = a2_monodromy(1.0, 1e-3, power, 200);
    IntersectionCount want{1, power == 1 ? 0 : 1, false};
    bool good = r.max_bc_gap < 1e-4 && r.pattern == want && r.pattern == r.expected_pattern && r.arc == r.expected;
    ok = ok && good;
    os << "power " << power << ": (" << r.pattern.endpoint_count << "," << r.pattern.interior_count << ") gap "
       << r.max_bc_gap << (power == 1 ? "; " : "");
  }
  return {ok, os.str()};
}

Outcome maslov() {
  int plus = maslov_markov(1).index, minus = maslov_markov(-1).index;
  return {plus == 0 && minus == 2, "II+ " + std::to_string(plus) + ", II- " + std::to_string(minus)};
}

Outcome curve_action() {
  std::mt19937 rng(13);
  int bad_rel = 0, bad_inv = 0, systems = 0;
  for (int n = 2; n <= 8; ++n)
    for (int t = 0; t < 200; ++t) {
      auto a = gen::random_system(rng, n);
      ++systems;
      if (n >= 3) {
        int k = std::uniform_int_distribution<int>(1, n - 2)(rng);
        BraidWord l{n, {{k, 1}, {k + 1, 1}, {k, 1}}}, r{n, {{k + 1, 1}, {k, 1}, {k + 1, 1}}};
        if (!act(l, a).same_class(act(r, a))) ++bad_rel;
      }
      if (n >= 4) {
        int x = std::uniform_int_distribution<int>(1, n - 3)(rng);
        int y = std::uniform_int_distribution<int>(x + 2, n - 1)(rng);
        BraidWord xy{n, {{x, 1}, {y, -1}}}, yx{n, {{y, -1}, {x, 1}}};
        if (!act(xy, a).same_class(act(yx, a))) ++bad_rel;
      }
      auto w = gen::random_word(rng, n, 6);
      if (!act(w, act(inverse(w), a)).same_class(a)) ++bad_inv;
    }
  int shadow_equal = 0, shadow_slide = 0, shadow_total = 0;
  for (int m = 2; m <= 4; ++m) {
    auto p = standard_matching(m, Half::Upper);
    for (int k = 1; k <= m - 1; ++k) {
      ++shadow_total;
      auto img = act(BraidWord{2 * m, {{2 * m - k, -1}, {k, 1}}}, p);
      if (img.same_class(p)) ++shadow_equal;
      if (slide_equivalent(img, p, 1)) ++shadow_slide;
    }
  }
  std::ostringstream os;
  os << systems << " systems, " << bad_rel << " relation and " << bad_inv << " inverse failures; shadow equal to P+ in "
     << shadow_equal << "/" << shadow_total << ", one slide from P+ in " << shadow_slide << "/" << shadow_total;
  return {bad_rel == 0 && bad_inv == 0 && shadow_equal == shadow_total, os.str()};
}

}  // namespace

int main() {
  std::vector<Criterion> all = {
      {1, "unknot anchor", 1, unknot},
      {2, "trefoil anchor", 1, trefoil},
      {3, "Markov invariance", 300, markov_invariance},
      {4, "skein and LES", 30, skein_les},
      {5, "Jones oracle equivalence", 0, jones_oracle},
      {6, "disjoint unknot and orientation reversal", 0, unknot_and_reversal},
      {7, "Euler magnitude", 0, euler_magnitude},
      {8, "sl3 identity", 10, sl3_identity},
      {9, "slice lemmas", 60, slice_lemmas},
      {10, "A1 transport", 60, a1_transport},
      {11, "A2 transport", 120, a2_transport},
      {12, "Maslov corrections", 0, maslov},
      {13, "curve action", 0, curve_action},
  };
  int failed = 0;
  for (const auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = c.budget <= 0 || dt <= c.budget;
    bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("%s %2d  %-42s %8.2f s  %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), dt, o.detail.c_str(),
                in_time ? "" : " (over the time budget)");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria pass\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
