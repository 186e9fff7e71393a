#include "khslice/homology.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "khslice/parallel.hpp"

namespace khs {

using boost::multiprecision::cpp_int;

std::string AbelianGroup::str() const {
  if (zero()) return "0";
  std::ostringstream os;
  bool first = true;
  if (rank > 0) {
    os << "Z";
    if (rank > 1) os << "^" << rank;
    first = false;
  }
  for (std::size_t i = 0; i < torsion.size();) {
    std::size_t k = i;
    while (k < torsion.size() && torsion[k] == torsion[i]) ++k;
    if (!first) os << " + ";
    os << "(Z/" << torsion[i] << ")";
    if (k - i > 1) os << "^" << (k - i);
    first = false;
    i = k;
  }
  return os.str();
}

void Laurent::add(int half_exp, long long v) {
  if (v == 0) return;
  auto& x = c[half_exp];
  x += v;
  if (x == 0) c.erase(half_exp);
}

Laurent Laurent::shifted(int half_exp) const {
  Laurent r;
  for (auto [e, v] : c) r.c[e + half_exp] = v;
  return r;
}

Laurent Laurent::operator+(const Laurent& o) const {
  Laurent r = *this;
  for (auto [e, v] : o.c) r.add(e, v);
  return r;
}

Laurent Laurent::operator-(const Laurent& o) const {
  Laurent r = *this;
  for (auto [e, v] : o.c) r.add(e, -v);
  return r;
}

long long Laurent::at_one() const {
  long long s = 0;
  for (auto [e, v] : c) s += v;
  return s;
}

std::string Laurent::str() const {
  if (c.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto [e, v] : c) {
    long long a = v < 0 ? -v : v;
    if (first) {
      if (v < 0) os << "-";
    } else {
      os << (v < 0 ? " - " : " + ");
    }
    first = false;
    if (e == 0) {
      os << a;
      continue;
    }
    if (a != 1) os << a << "*";
    os << "t";
    if (e % 2 != 0) os << "^(" << e << "/2)";
    else if (e != 2) os << "^" << e / 2;
  }
  return os.str();
}

std::vector<long long> prime_powers(long long n) {
  if (n < 0) n = -n;
  std::vector<long long> out;
  for (long long p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    long long q = 1;
    while (n % p == 0) {
      n /= p;
      q *= p;
    }
    out.push_back(q);
  }
  if (n > 1) out.push_back(n);
  return out;
}

namespace {

constexpr long long kSparseLimit = 1LL << 50;

// unit-pivot elimination; leaves the rows and columns it could not clear
struct SparseElim {
  using Row = std::vector<std::pair<int, long long>>;
  std::vector<Row> rows;
  std::vector<std::vector<int>> col_rows;
  std::vector<int> col_count;
  std::vector<char> row_alive, col_alive;
  long rank = 0;
  std::vector<long long> factors;  // non-unit pivots taken so far
  bool overflow = false;

  explicit SparseElim(const SparseMatrix& m)
      : rows(m.rows), col_rows(m.cols), col_count(m.cols, 0), row_alive(m.rows, 1), col_alive(m.cols, 1) {
    for (const auto& t : m.entries) {
      if (t.val == 0) continue;
      rows[t.row].push_back({t.col, t.val});
    }
    for (int r = 0; r < m.rows; ++r) {
      auto& row = rows[r];
      std::sort(row.begin(), row.end());
      Row merged;
      for (auto [c, v] : row) {
        if (!merged.empty() && merged.back().first == c) merged.back().second += v;
        else merged.push_back({c, v});
      }
      std::erase_if(merged, [](auto& e) { return e.second == 0; });
      row = std::move(merged);
      for (auto [c, v] : row) {
        col_rows[c].push_back(r);
        ++col_count[c];
      }
    }
  }

  static const long long* find(const Row& row, int c) {
    auto it = std::lower_bound(row.begin(), row.end(), std::make_pair(c, LLONG_MIN));
    if (it == row.end() || it->first != c) return nullptr;
    return &it->second;
  }

  // row_r -= f * row_p
  void axpy(int r, int p, long long f, std::vector<int>& touched) {
    const Row& a = rows[r];
    const Row& b = rows[p];
    Row out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, k = 0;
    while (i < a.size() || k < b.size()) {
      if (k == b.size() || (i < a.size() && a[i].first < b[k].first)) {
        out.push_back(a[i++]);
        continue;
      }
      int c = b[k].first;
      __int128 v = -static_cast<__int128>(f) * b[k].second;
      bool had = i < a.size() && a[i].first == c;
      if (had) v += a[i++].second;
      ++k;
      touched.push_back(c);
      if (v > kSparseLimit || v < -kSparseLimit) overflow = true;
      if (v != 0) {
        out.push_back({c, static_cast<long long>(v)});
        if (!had) {
          col_rows[c].push_back(r);
          ++col_count[c];
        }
      } else if (had) {
        --col_count[c];
      }
    }
    rows[r] = std::move(out);
  }

  // a pivot must divide its whole row and column; units always qualify
  int pick(int c, long long& piv, bool units_only) const {
    int best = -1;
    std::size_t best_len = 0;
    long long best_abs = 0;
    for (int r : col_rows[c]) {
      if (!row_alive[r]) continue;
      const long long* v = find(rows[r], c);
      if (!v) continue;
      long long a = *v < 0 ? -*v : *v;
      if (units_only && a != 1) continue;
      if (best >= 0 && (a > best_abs || (a == best_abs && rows[r].size() >= best_len))) continue;
      if (a != 1) {
        bool ok = std::all_of(rows[r].begin(), rows[r].end(), [a](auto& e) { return e.second % a == 0; });
        for (int q : col_rows[c]) {
          if (!ok) break;
          if (!row_alive[q]) continue;
          const long long* w = find(rows[q], c);
          if (w && *w % a != 0) ok = false;
        }
        if (!ok) continue;
      }
      best = r;
      best_len = rows[r].size();
      best_abs = a;
      piv = *v;
    }
    return best;
  }

  void eliminate(int c, int best, long long piv, std::vector<int>& touched) {
    ++rank;
    if (piv != 1 && piv != -1) factors.push_back(piv < 0 ? -piv : piv);
    row_alive[best] = 0;
    col_alive[c] = 0;
    std::vector<int> targets(col_rows[c].begin(), col_rows[c].end());
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    for (int r : targets) {
      if (!row_alive[r]) continue;
      const long long* v = find(rows[r], c);
      if (!v) continue;
      axpy(r, best, *v / piv, touched);
    }
    // the rest of the pivot row is a multiple of the pivot and is cleared by column operations
    for (auto [cc, v] : rows[best]) {
      --col_count[cc];
      touched.push_back(cc);
    }
    rows[best].clear();
    col_rows[c].clear();
  }

  bool sweep(bool units_only) {
    using Key = std::pair<int, int>;
    std::priority_queue<Key, std::vector<Key>, std::greater<>> pq;
    for (int c = 0; c < static_cast<int>(col_count.size()); ++c)
      if (col_alive[c]) pq.push({col_count[c], c});
    std::vector<int> touched;
    bool progress = false;
    while (!pq.empty() && !overflow) {
      auto [cnt, c] = pq.top();
      pq.pop();
      if (!col_alive[c] || cnt != col_count[c]) continue;
      if (cnt == 0) {
        col_alive[c] = 0;
        continue;
      }
      long long piv = 0;
      int best = pick(c, piv, units_only);
      if (best < 0) continue;
      progress = true;
      touched.clear();
      eliminate(c, best, piv, touched);
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
      for (int cc : touched)
        if (col_alive[cc]) pq.push({col_count[cc], cc});
    }
    return progress;
  }

  void run() {
    sweep(true);
    while (!overflow && sweep(false)) sweep(true);
  }
};

// diagonalises in place; returns absolute values of the nonzero diagonal
std::vector<cpp_int> dense_diagonal(std::vector<std::vector<cpp_int>>& a) {
  std::vector<cpp_int> diag;
  std::size_t R = a.size();
  std::size_t C = R ? a[0].size() : 0;
  auto abs_less = [](const cpp_int& x, const cpp_int& y) { return abs(x) < abs(y); };
  for (std::size_t t = 0; t < std::min(R, C); ++t) {
    std::size_t br = R, bc = C;
    for (std::size_t r = t; r < R; ++r)
      for (std::size_t c = t; c < C; ++c)
        if (a[r][c] != 0 && (br == R || abs_less(a[r][c], a[br][bc]))) {
          br = r;
          bc = c;
        }
    if (br == R) break;
    std::swap(a[t], a[br]);
    for (auto& row : a) std::swap(row[t], row[bc]);
    for (;;) {
      bool clean = true;
      for (std::size_t r = t + 1; r < R; ++r) {
        if (a[r][t] == 0) continue;
        cpp_int q = a[r][t] / a[t][t];
        for (std::size_t c = t; c < C; ++c) a[r][c] -= q * a[t][c];
        if (a[r][t] != 0) clean = false;
      }
      for (std::size_t c = t + 1; c < C; ++c) {
        if (a[t][c] == 0) continue;
        cpp_int q = a[t][c] / a[t][t];
        for (std::size_t r = t; r < R; ++r) a[r][c] -= q * a[r][t];
        if (a[t][c] != 0) clean = false;
      }
      if (clean) break;
      std::size_t mr = t, mc = t;
      for (std::size_t r = t + 1; r < R; ++r)
        if (a[r][t] != 0 && abs_less(a[r][t], a[mr][mc])) {
          mr = r;
          mc = t;
        }
      for (std::size_t c = t + 1; c < C; ++c)
        if (a[t][c] != 0 && abs_less(a[t][c], a[mr][mc])) {
          mr = t;
          mc = c;
        }
      std::swap(a[t], a[mr]);
      for (auto& row : a) std::swap(row[t], row[mc]);
    }
    diag.push_back(abs(a[t][t]));
  }
  return diag;
}

// same elimination in machine integers; nullopt once anything leaves 62 bits
std::optional<std::vector<long long>> dense_diagonal_small(std::vector<std::vector<long long>> a) {
  constexpr long long lim = 1LL << 62;
  std::vector<long long> diag;
  std::size_t R = a.size();
  std::size_t C = R ? a[0].size() : 0;
  auto mag = [](long long x) { return x < 0 ? -x : x; };
  // x - q y, or false on overflow
  auto sub = [&](long long& x, long long q, long long y) {
    __int128 v = static_cast<__int128>(x) - static_cast<__int128>(q) * y;
    if (v >= lim || v <= -lim) return false;
    x = static_cast<long long>(v);
    return true;
  };
  for (std::size_t t = 0; t < std::min(R, C); ++t) {
    std::size_t br = R, bc = C;
    long long bv = 0;
    for (std::size_t r = t; r < R && bv != 1; ++r)
      for (std::size_t c = t; c < C; ++c)
        if (a[r][c] != 0 && (br == R || mag(a[r][c]) < bv)) {
          br = r;
          bc = c;
          bv = mag(a[r][c]);
          if (bv == 1) break;
        }
    if (br == R) break;
    std::swap(a[t], a[br]);
    for (auto& row : a) std::swap(row[t], row[bc]);
    for (;;) {
      bool clean = true;
      for (std::size_t r = t + 1; r < R; ++r) {
        if (a[r][t] == 0) continue;
        long long q = a[r][t] / a[t][t];
        for (std::size_t c = t; c < C; ++c)
          if (a[t][c] != 0 && !sub(a[r][c], q, a[t][c])) return std::nullopt;
        if (a[r][t] != 0) clean = false;
      }
      for (std::size_t c = t + 1; c < C; ++c) {
        if (a[t][c] == 0) continue;
        long long q = a[t][c] / a[t][t];
        for (std::size_t r = t; r < R; ++r)
          if (a[r][t] != 0 && !sub(a[r][c], q, a[r][t])) return std::nullopt;
        if (a[t][c] != 0) clean = false;
      }
      if (clean) break;
      std::size_t mr = t, mc = t;
      for (std::size_t r = t + 1; r < R; ++r)
        if (a[r][t] != 0 && mag(a[r][t]) < mag(a[mr][mc])) {
          mr = r;
          mc = t;
        }
      for (std::size_t c = t + 1; c < C; ++c)
        if (a[t][c] != 0 && mag(a[t][c]) < mag(a[mr][mc])) {
          mr = t;
          mc = c;
        }
      std::swap(a[t], a[mr]);
      for (auto& row : a) std::swap(row[t], row[mc]);
    }
    diag.push_back(mag(a[t][t]));
  }
  return diag;
}

}  // namespace

SmithResult smith(const SparseMatrix& m) {
  SparseElim el(m);
  el.run();
  SmithResult res;
  res.rank = el.rank;
  for (auto f : el.factors)
    for (auto p : prime_powers(f)) res.factors.push_back(p);

  std::vector<int> rmap(m.rows, -1), cmap(m.cols, -1);
  int nr = 0, nc = 0;
  for (int r = 0; r < m.rows; ++r)
    if (el.row_alive[r] && !el.rows[r].empty()) rmap[r] = nr++;
  for (int r = 0; r < m.rows; ++r)
    if (rmap[r] >= 0)
      for (auto [c, v] : el.rows[r])
        if (cmap[c] < 0) cmap[c] = nc++;
  if (nr > 0 && nc > 0) {
    std::vector<std::vector<long long>> small(nr, std::vector<long long>(nc));
    for (int r = 0; r < m.rows; ++r)
      if (rmap[r] >= 0)
        for (auto [c, v] : el.rows[r]) small[rmap[r]][cmap[c]] = v;
    std::vector<cpp_int> diag;
    if (auto d = dense_diagonal_small(small)) {
      diag.assign(d->begin(), d->end());
    } else {
      std::vector<std::vector<cpp_int>> a(nr, std::vector<cpp_int>(nc));
      for (int r = 0; r < m.rows; ++r)
        if (rmap[r] >= 0)
          for (auto [c, v] : el.rows[r]) a[rmap[r]][cmap[c]] = v;
      diag = dense_diagonal(a);
    }
    for (const auto& x : diag) {
      ++res.rank;
      if (x == 1) continue;
      if (x > cpp_int(LLONG_MAX)) throw std::overflow_error("torsion coefficient exceeds 64 bits");
      for (auto p : prime_powers(static_cast<long long>(x))) res.factors.push_back(p);
    }
  }
  std::sort(res.factors.begin(), res.factors.end());
  return res;
}

long ChainComplex::total_rank() const {
  long s = 0;
  for (const auto& sl : slices)
    for (auto x : sl.dims) s += x;
  return s;
}

namespace {

struct Binomial {
  std::uint64_t t[65][65]{};
  Binomial() {
    for (int n = 0; n <= 64; ++n) {
      t[n][0] = 1;
      for (int k = 1; k <= n; ++k) t[n][k] = t[n - 1][k - 1] + (k <= n - 1 ? t[n - 1][k] : 0);
    }
  }
  std::uint64_t operator()(int n, int k) const { return (k < 0 || k > n) ? 0 : t[n][k]; }
};

const Binomial& binom() {
  static const Binomial b;
  return b;
}

// position of a k-subset among all subsets of the same size in colex order
std::uint64_t colex_rank(std::uint64_t bits) {
  std::uint64_t r = 0;
  int i = 1;
  while (bits) {
    int pos = std::countr_zero(bits);
    r += binom()(pos, i);
    bits &= bits - 1;
    ++i;
  }
  return r;
}

struct CubeData {
  int n = 0;
  int edges = 0;
  int n_plus = 0;
  int n_minus = 0;
  std::vector<int> circles;           // per vertex
  std::vector<std::uint8_t> circ;     // vertex * edges
  std::vector<std::uint8_t> rep;      // vertex * kmax: one edge per circle, 255 for free loops
  int kmax = 0;
  const LinkDiagram* d = nullptr;

  int j_of(std::uint64_t v, int s) const {
    int k = circles[v];
    return 2 * s - k + std::popcount(v) + n_plus - 2 * n_minus;
  }
};

CubeData cube_data(const LinkDiagram& d, int workers) {
  CubeData cd;
  cd.d = &d;
  cd.n = d.size();
  cd.edges = static_cast<int>(d.edges.size());
  cd.n_plus = d.n_plus();
  cd.n_minus = d.n_minus();
  if (cd.n > 26) throw std::invalid_argument("too many crossings for the cube");
  if (cd.edges > 254) throw std::invalid_argument("too many edges for the cube");
  std::size_t V = std::size_t{1} << cd.n;
  cd.circles.assign(V, 0);
  cd.circ.assign(V * cd.edges, 0);
  cd.kmax = cd.edges + d.free_loops + 1;
  if (cd.kmax > 64) cd.kmax = 64;
  cd.rep.assign(V * cd.kmax, 255);
  int chunks = static_cast<int>(std::min<std::size_t>(V, 256));
  parallel_for(chunks, [&](int ch) {
    for (std::size_t v = ch; v < V; v += chunks) {
      auto cs = smooth(d, static_cast<std::uint64_t>(v));
      if (cs.count > 62) throw std::invalid_argument("too many circles in a smoothing");
      cd.circles[v] = cs.count;
      for (int e = 0; e < cd.edges; ++e) {
        int k = cs.edge_circle[e];
        cd.circ[v * cd.edges + e] = static_cast<std::uint8_t>(k);
        if (cd.rep[v * cd.kmax + k] == 255) cd.rep[v * cd.kmax + k] = static_cast<std::uint8_t>(e);
      }
    }
  }, workers);
  return cd;
}

// how the circles of v map into those of v | (1 << c)
struct EdgeMap {
  bool merge = false;
  int x = 0, y = 0;  // merge: the two circles of v; split: the two circles of v'
  int m = 0;         // merge: the circle of v'; split: the circle of v
  std::uint8_t to[64];
};

EdgeMap edge_map(const CubeData& cd, std::uint64_t v, int c) {
  EdgeMap em;
  std::uint64_t w = v | (std::uint64_t{1} << c);
  const auto& x = cd.d->crossings[c];
  const std::uint8_t* cv = &cd.circ[v * cd.edges];
  const std::uint8_t* cw = &cd.circ[w * cd.edges];
  int kv = cd.circles[v];
  int kw = cd.circles[w];
  int free_v = kv - cd.d->free_loops;
  int free_w = kw - cd.d->free_loops;
  for (int a = 0; a < kv; ++a) {
    if (a >= free_v) {
      em.to[a] = static_cast<std::uint8_t>(free_w + (a - free_v));
      continue;
    }
    em.to[a] = cw[cd.rep[v * cd.kmax + a]];
  }
  int A = cv[x.edge[BL]], B = cv[x.edge[TR]];
  if (A != B) {
    em.merge = true;
    em.x = A;
    em.y = B;
    em.m = cw[x.edge[BL]];
  } else {
    em.merge = false;
    em.m = A;
    em.x = cw[x.edge[BL]];
    em.y = cw[x.edge[TR]];
    if (em.x == em.y) throw std::logic_error("split did not separate circles");
  }
  return em;
}

std::uint64_t map_bits(const EdgeMap& em, std::uint64_t L, int k) {
  std::uint64_t out = 0;
  for (int a = 0; a < k; ++a)
    if ((L >> a) & 1u) out |= std::uint64_t{1} << em.to[a];
  return out;
}

ChainComplex::Slice build_slice(const CubeData& cd, int j) {
  ChainComplex::Slice sl;
  sl.j = j;
  sl.imin = -cd.n_minus;
  int len = cd.n + 1;
  sl.dims.assign(len, 0);
  std::size_t V = std::size_t{1} << cd.n;
  std::vector<long> offset(V, -1);
  auto s_of = [&](std::uint64_t v) {
    int k = cd.circles[v];
    int twice = j + k - std::popcount(v) - cd.n_plus + 2 * cd.n_minus;
    if (twice % 2 != 0) return -1;
    int s = twice / 2;
    return (s < 0 || s > k) ? -1 : s;
  };
  for (std::uint64_t v = 0; v < V; ++v) {
    int s = s_of(v);
    if (s < 0) continue;
    int h = std::popcount(v);
    offset[v] = sl.dims[h];
    sl.dims[h] += static_cast<long>(binom()(cd.circles[v], s));
  }
  sl.d.resize(len > 0 ? len - 1 : 0);
  for (int t = 0; t + 1 < len; ++t) {
    sl.d[t].rows = static_cast<int>(sl.dims[t + 1]);
    sl.d[t].cols = static_cast<int>(sl.dims[t]);
  }
  for (std::uint64_t v = 0; v < V; ++v) {
    if (offset[v] < 0) continue;
    int h = std::popcount(v);
    if (h >= cd.n) continue;
    int k = cd.circles[v];
    int s = s_of(v);
    auto& mat = sl.d[h];
    for (int c = 0; c < cd.n; ++c) {
      if ((v >> c) & 1u) continue;
      std::uint64_t w = v | (std::uint64_t{1} << c);
      long long sign = (std::popcount(v & ((std::uint64_t{1} << c) - 1)) % 2) ? -1 : 1;
      EdgeMap em = edge_map(cd, v, c);
      long wbase = offset[w];
      auto emit = [&](std::uint64_t src, std::uint64_t dst) {
        if (wbase < 0) throw std::logic_error("differential leaves its grading");
        mat.entries.push_back({static_cast<int>(wbase + colex_rank(dst)),
                               static_cast<int>(offset[v] + colex_rank(src)), sign});
      };
      // Gosper enumeration of the s-subsets in colex order
      std::uint64_t L = s == 0 ? 0 : (std::uint64_t{1} << s) - 1;
      std::uint64_t limit = std::uint64_t{1} << k;
      while (L < limit) {
        if (em.merge) {
          int la = (L >> em.x) & 1u, lb = (L >> em.y) & 1u;
          if (la | lb) {
            std::uint64_t rest = L & ~(std::uint64_t{1} << em.x) & ~(std::uint64_t{1} << em.y);
            std::uint64_t out = map_bits(em, rest, k);
            if (la & lb) out |= std::uint64_t{1} << em.m;
            emit(L, out);
          }
        } else {
          int la = (L >> em.m) & 1u;
          std::uint64_t rest = L & ~(std::uint64_t{1} << em.m);
          std::uint64_t out = map_bits(em, rest, k);
          if (la) {
            emit(L, out | (std::uint64_t{1} << em.x));
            emit(L, out | (std::uint64_t{1} << em.y));
          } else {
            emit(L, out);
          }
        }
        if (L == 0) break;
        std::uint64_t lo = L & (~L + 1);
        std::uint64_t hi = L + lo;
        L = (((hi ^ L) >> 2) / lo) | hi;
      }
    }
  }
  for (auto& m : sl.d)
    std::sort(m.entries.begin(), m.entries.end(),
              [](const Triplet& a, const Triplet& b) { return a.col != b.col ? a.col < b.col : a.row < b.row; });
  return sl;
}

void check_d_squared(const ChainComplex::Slice& sl) {
  for (std::size_t t = 0; t + 1 < sl.d.size(); ++t) {
    const auto& a = sl.d[t];
    const auto& b = sl.d[t + 1];
    std::vector<std::size_t> start(b.cols + 1, 0);
    for (const auto& e : b.entries) ++start[e.col + 1];
    for (int c = 0; c < b.cols; ++c) start[c + 1] += start[c];
    std::vector<long long> acc(b.rows, 0);
    std::vector<int> hit;
    std::size_t i = 0;
    while (i < a.entries.size()) {
      int col = a.entries[i].col;
      hit.clear();
      for (; i < a.entries.size() && a.entries[i].col == col; ++i) {
        int mid = a.entries[i].row;
        for (std::size_t q = start[mid]; q < start[mid + 1]; ++q) {
          if (acc[b.entries[q].row] == 0) hit.push_back(b.entries[q].row);
          acc[b.entries[q].row] += a.entries[i].val * b.entries[q].val;
        }
      }
      for (int r : hit) {
        if (acc[r] != 0) throw std::logic_error("d^2 != 0 at j=" + std::to_string(sl.j));
      }
      for (int r : hit) acc[r] = 0;
    }
  }
}

}  // namespace

ChainComplex build_cube(const LinkDiagram& d, const CubeOptions& opt) {
  d.check();
  int workers = opt.workers > 0 ? opt.workers : worker_count();
  CubeData cd = cube_data(d, workers);
  ChainComplex cx;
  cx.n_plus = cd.n_plus;
  cx.n_minus = cd.n_minus;
  std::set<int> js;
  std::size_t V = std::size_t{1} << cd.n;
  for (std::uint64_t v = 0; v < V; ++v)
    for (int s = 0; s <= cd.circles[v]; ++s) js.insert(cd.j_of(v, s));
  std::vector<int> jl(js.begin(), js.end());
  cx.slices.resize(jl.size());
  parallel_for(static_cast<int>(jl.size()), [&](int idx) {
    cx.slices[idx] = build_slice(cd, jl[idx]);
    if (opt.check_d_squared) check_d_squared(cx.slices[idx]);
  }, workers);
  return cx;
}

BigradedGroup integral_homology(const ChainComplex& cx, int workers) {
  if (workers <= 0) workers = worker_count();
  std::vector<std::pair<int, int>> jobs;
  for (int s = 0; s < static_cast<int>(cx.slices.size()); ++s)
    for (int t = 0; t < static_cast<int>(cx.slices[s].d.size()); ++t) jobs.push_back({s, t});
  // largest first keeps the pool busy
  std::sort(jobs.begin(), jobs.end(), [&](auto a, auto b) {
    return cx.slices[a.first].d[a.second].entries.size() > cx.slices[b.first].d[b.second].entries.size();
  });
  std::vector<std::vector<SmithResult>> res(cx.slices.size());
  for (std::size_t s = 0; s < cx.slices.size(); ++s) res[s].resize(cx.slices[s].d.size());
  parallel_for(static_cast<int>(jobs.size()), [&](int q) {
    auto [s, t] = jobs[q];
    res[s][t] = smith(cx.slices[s].d[t]);
  }, workers);

  BigradedGroup out;
  for (std::size_t s = 0; s < cx.slices.size(); ++s) {
    const auto& sl = cx.slices[s];
    for (int t = 0; t < static_cast<int>(sl.dims.size()); ++t) {
      AbelianGroup g;
      long in_rank = t < static_cast<int>(res[s].size()) ? res[s][t].rank : 0;
      long out_rank = t > 0 ? res[s][t - 1].rank : 0;
      g.rank = sl.dims[t] - in_rank - out_rank;
      if (g.rank < 0) throw std::logic_error("negative Betti number");
      if (t > 0) g.torsion = res[s][t - 1].factors;
      if (!g.zero()) out[{sl.imin + t, sl.j}] = g;
    }
  }
  return out;
}

BigradedGroup khovanov(const LinkDiagram& d, const CubeOptions& opt) {
  return integral_homology(build_cube(d, opt), opt.workers);
}

Laurent euler_characteristic_q(const BigradedGroup& kh) {
  Laurent chi;
  for (const auto& [ij, g] : kh) chi.add(ij.second, (ij.first % 2 == 0 ? 1 : -1) * g.rank);
  return chi;
}

Laurent jones(const BigradedGroup& kh, int components) {
  Laurent chi = euler_characteristic_q(kh);
  if (chi.is_zero()) throw std::logic_error("vanishing Euler characteristic");
  // q*chi = (1 + q^2) P, solved from the bottom
  Laurent a = chi.shifted(1);
  int lo = a.c.begin()->first;
  int hi = a.c.rbegin()->first;
  std::map<int, long long> p;
  for (int n = lo; n <= hi; ++n) {
    long long an = a.c.count(n) ? a.c.at(n) : 0;
    long long prev = p.count(n - 2) ? p.at(n - 2) : 0;
    long long v = an - prev;
    if (v != 0) p[n] = v;
  }
  for (auto [n, v] : p)
    if (n > hi - 2) throw std::logic_error("Euler characteristic not divisible by q + 1/q");
  Laurent V;
  for (auto [n, v] : p) V.add(n, (n % 2 == 0) ? v : -v);
  long long expect = 1;
  for (int i = 1; i < components; ++i) expect *= -2;
  if (V.at_one() != expect) throw std::logic_error("V(1) does not match the component count");
  return V;
}

GradedGroup collapse(const BigradedGroup& kh) {
  GradedGroup out;
  for (const auto& [ij, g] : kh) {
    auto& x = out[ij.first - ij.second];
    x.rank += g.rank;
    x.torsion.insert(x.torsion.end(), g.torsion.begin(), g.torsion.end());
  }
  for (auto& [k, g] : out) std::sort(g.torsion.begin(), g.torsion.end());
  return out;
}

long euler_of_collapse(const GradedGroup& g) {
  long s = 0;
  for (const auto& [k, x] : g) s += (k % 2 == 0 ? 1 : -1) * x.rank;
  return s;
}

SkeinReport skein_check(const LinkDiagram& d, int crossing) {
  SkeinReport r;
  r.crossing = crossing;
  r.sign = d.sign(crossing);
  r.v = crossing_v(d, crossing);
  int so = oriented_smoothing(d, crossing);
  auto dor = resolve(d, crossing, so);
  auto dun = resolve(d, crossing, 1 - so);
  r.v_diagram = jones(khovanov(d), d.components());
  r.v_oriented = jones(khovanov(dor), dor.components());
  r.v_unoriented = jones(khovanov(dun), dun.components());
  int s = r.sign > 0 ? -1 : 1;
  r.residual = r.v_diagram.shifted(2 * s) + r.v_oriented.shifted(s) + r.v_unoriented.shifted(3 * r.v);
  r.holds = r.residual.is_zero();
  return r;
}

LesReport les_rank_check(const LinkDiagram& d, int crossing) {
  LesReport rep;
  rep.crossing = crossing;
  rep.sign = d.sign(crossing);
  int v = crossing_v(d, crossing);
  rep.v = v;
  auto kd = khovanov(d);
  auto kh0 = khovanov(resolve(d, crossing, 0));
  auto kh1 = khovanov(resolve(d, crossing, 1));
  auto dim = [](const BigradedGroup& g, int i, int j) -> long {
    auto it = g.find({i, j});
    return it == g.end() ? 0 : it->second.rank;
  };
  bool pos = rep.sign > 0;
  auto X = [&](int n, int j) -> long {
    int i = (n >= 0) ? n / 3 : -((-n + 2) / 3);
    int r = n - 3 * i;
    if (r == 0) return dim(kd, i, j);
    if (pos) return r == 1 ? dim(kh0, i, j - 1) : dim(kh1, i - v, j - 3 * v - 2);
    return r == 1 ? dim(kh0, i - v + 1, j - 3 * v + 2) : dim(kh1, i + 1, j + 1);
  };
  int span = d.size() + std::abs(v) + 4;
  int jspan = 3 * d.size() + 3 * std::abs(v) + 2 * d.components() + 8;
  for (int j = -jspan; j <= jspan; ++j) {
    long euler = 0;
    for (int n = -3 * span; n <= 3 * span; ++n) {
      long x = X(n, j);
      euler += (n % 2 == 0 ? 1 : -1) * x;
      if (x > X(n - 1, j) + X(n + 1, j)) {
        rep.inequalities_hold = false;
        rep.failures.push_back("rank inequality at n=" + std::to_string(n) + " j=" + std::to_string(j));
      }
    }
    if (euler != 0) {
      rep.euler_holds = false;
      rep.failures.push_back("alternating sum nonzero at j=" + std::to_string(j));
    }
  }
  return rep;
}

}  // namespace khs
