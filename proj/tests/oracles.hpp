#pragma once

// Reference computations that share no code with the library.

#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "khslice/braid.hpp"

namespace oracle {

struct DSU {
  std::vector<int> p;
  explicit DSU(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
  int classes() {
    int c = 0;
    for (int i = 0; i < static_cast<int>(p.size()); ++i) c += find(i) == i;
    return c;
  }
};

// circles of the closure of b when letter t is smoothed horizontally iff horiz bit t is set
inline int closure_circles(const khs::BraidWord& b, unsigned long long horiz) {
  int n = b.strands, L = b.length();
  auto id = [&](int level, int pos) { return level * n + pos; };
  DSU u((L + 1) * n);
  for (int t = 0; t < L; ++t) {
    int k = b.letters[t].k - 1;
    for (int p = 0; p < n; ++p)
      if (p != k && p != k + 1) u.unite(id(t, p), id(t + 1, p));
    if ((horiz >> t) & 1ull) {
      u.unite(id(t, k), id(t, k + 1));
      u.unite(id(t + 1, k), id(t + 1, k + 1));
    } else {
      u.unite(id(t, k), id(t + 1, k));
      u.unite(id(t, k + 1), id(t + 1, k + 1));
    }
  }
  for (int p = 0; p < n; ++p) u.unite(id(L, p), id(0, p));
  return u.classes();
}

// Jones polynomial from the Kauffman bracket of the closed braid; keys are
// exponents of t in half units.  s_k has its over strand rising to the left,
// which makes it a negative crossing whose A-smoothing is horizontal.
inline std::map<int, long long> jones_by_bracket(const khs::BraidWord& b) {
  int L = b.length();
  if (L > 20) throw std::invalid_argument("oracle limited to 20 letters");
  std::map<int, long long> bracket;  // powers of A
  for (unsigned long long st = 0; st < (1ull << L); ++st) {
    // st bit t set: B-smoothing at letter t
    int a = 0, bb = 0;
    unsigned long long horiz = 0;
    for (int t = 0; t < L; ++t) {
      bool B = (st >> t) & 1ull;
      B ? ++bb : ++a;
      bool h = (b.letters[t].sign > 0) != B;
      if (h) horiz |= 1ull << t;
    }
    int circles = closure_circles(b, horiz);
    // A^(a-b) * (-A^2 - A^-2)^(circles-1)
    std::map<int, long long> term{{a - bb, 1}};
    for (int i = 1; i < circles; ++i) {
      std::map<int, long long> next;
      for (auto [e, v] : term) {
        next[e + 2] -= v;
        next[e - 2] -= v;
      }
      term = next;
    }
    for (auto [e, v] : term) bracket[e] += v;
  }
  int w = 0;
  for (auto l : b.letters) w -= l.sign;
  // (-A^3)^(-w)
  long long s = (w % 2 == 0) ? 1 : -1;
  std::map<int, long long> out;
  for (auto [e, v] : bracket) {
    if (v == 0) continue;
    int ae = e - 3 * w;
    if (ae % 2 != 0) throw std::logic_error("odd power of A");
    out[-ae / 2] += s * v;  // A = t^(-1/4)
  }
  std::erase_if(out, [](auto& kv) { return kv.second == 0; });
  return out;
}


// invariant factors from determinantal divisors: d_k is the gcd of all k x k minors
using BigInt = boost::multiprecision::cpp_int;
using BigMatrix = std::vector<std::vector<BigInt>>;

inline BigInt det_by_expansion(const BigMatrix& a, std::vector<int>& rows, const std::vector<int>& cols, int depth) {
  int k = static_cast<int>(cols.size());
  if (depth == k) return 1;
  BigInt s = 0;
  int sign = 1;
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
    int r = rows[i];
    if (r < 0) continue;  // removed rows do not flip the sign
    if (a[r][cols[depth]] != 0) {
      rows[i] = -1;
      s += sign * a[r][cols[depth]] * det_by_expansion(a, rows, cols, depth + 1);
      rows[i] = r;
    }
    sign = -sign;
  }
  return s;
}

inline void subsets(int n, int k, int from, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = from; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

// returns the nonzero invariant factors; their count is the rank
inline std::vector<BigInt> invariant_factors(const BigMatrix& a) {
  int R = static_cast<int>(a.size()), C = R ? static_cast<int>(a[0].size()) : 0;
  std::vector<BigInt> out;
  BigInt prev = 1;
  for (int k = 1; k <= std::min(R, C); ++k) {
    std::vector<std::vector<int>> rs, cs;
    std::vector<int> cur;
    subsets(R, k, 0, cur, rs);
    subsets(C, k, 0, cur, cs);
    BigInt g = 0;
    for (auto& r : rs)
      for (auto& c : cs) {
        BigInt d = det_by_expansion(a, r, c, 0);
        g = boost::multiprecision::gcd(g, d);
      }
    if (g == 0) break;
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}
}  // namespace oracle

#include <cmath>
#include <complex>

namespace oracle {

// Arcs as planar polylines; punctures at 1..n on the real axis.
using Poly = std::vector<std::complex<double>>;

inline Poly semicircle_poly(int p, int q, bool upper, int samples = 64) {
  double c = 0.5 * (p + q), r = 0.5 * std::abs(q - p);
  Poly out;
  for (int i = 0; i <= samples; ++i) {
    double th = M_PI * (1.0 - static_cast<double>(i) / samples);
    if (p > q) th = M_PI - th;
    double y = r * std::sin(th);
    out.push_back({c + r * std::cos(th), upper ? y : -y});
  }
  out.front() = {static_cast<double>(p), 0.0};
  out.back() = {static_cast<double>(q), 0.0};
  return out;
}

// rotation by sign*pi on the disc of radius 0.75 about k+1/2, tapering to the identity at 0.95
inline std::complex<double> twist_point(std::complex<double> z, int k, int sign) {
  std::complex<double> c(k + 0.5, 0.0);
  double r = std::abs(z - c);
  const double r1 = 0.75, r2 = 0.95;
  double ang;
  if (r <= r1) ang = M_PI;
  else if (r >= r2) return z;
  else ang = M_PI * (r2 - r) / (r2 - r1);
  return c + (z - c) * std::polar(1.0, sign * ang);
}

inline Poly twist(const Poly& in, int k, int sign) {
  Poly fine;
  for (std::size_t i = 0; i + 1 < in.size(); ++i) {
    auto a = in[i], b = in[i + 1];
    int steps = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / 0.01)));
    for (int s = 0; s < steps; ++s) fine.push_back(a + (b - a) * (static_cast<double>(s) / steps));
  }
  fine.push_back(in.back());
  Poly out;
  for (auto z : fine) out.push_back(twist_point(z, k, sign));
  auto snap = [](std::complex<double>& z) { z = {std::round(z.real()), 0.0}; };
  snap(out.front());
  snap(out.back());
  return out;
}

struct Word {
  int p, q;
  bool first_upper;
  std::vector<int> cross;
  bool operator==(const Word&) const = default;
};

// axis crossings of the polyline, reduced to the canonical sequence
inline Word read_off(const Poly& poly, int n) {
  auto upper = [](std::complex<double> z) { return z.imag() >= 0; };
  Word w;
  w.p = static_cast<int>(std::lround(poly.front().real()));
  w.q = static_cast<int>(std::lround(poly.back().real()));
  w.first_upper = upper(poly[1]);
  for (std::size_t i = 1; i + 2 < poly.size(); ++i) {
    auto a = poly[i], b = poly[i + 1];
    if (upper(a) == upper(b)) continue;
    double t = a.imag() / (a.imag() - b.imag());
    double x = a.real() + t * (b.real() - a.real());
    int seg = x < 1 ? 0 : (x > n ? n : static_cast<int>(std::floor(x)));
    w.cross.push_back(seg);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i + 1 < w.cross.size(); ++i)
      if (w.cross[i] == w.cross[i + 1]) {
        w.cross.erase(w.cross.begin() + i, w.cross.begin() + i + 2);
        changed = true;
        break;
      }
    if (!w.cross.empty() && (w.cross.front() == w.p || w.cross.front() == w.p - 1)) {
      w.cross.erase(w.cross.begin());
      w.first_upper = !w.first_upper;
      changed = true;
    }
    if (!w.cross.empty() && (w.cross.back() == w.q || w.cross.back() == w.q - 1)) {
      w.cross.pop_back();
      changed = true;
    }
  }
  if (w.p > w.q) {
    bool last_upper = (w.cross.size() % 2 == 0) ? w.first_upper : !w.first_upper;
    std::swap(w.p, w.q);
    std::reverse(w.cross.begin(), w.cross.end());
    w.first_upper = last_upper;
  }
  if (w.cross.empty() && w.q == w.p + 1) w.first_upper = true;
  return w;
}

}  // namespace oracle
