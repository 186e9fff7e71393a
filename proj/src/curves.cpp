#include "khslice/curves.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace khs {

namespace {

void check_points(const Arc& a, int n) {
  if (a.p < 1 || a.q < 1 || a.p > n || a.q > n || a.p == a.q)
    throw std::invalid_argument("arc endpoints (" + std::to_string(a.p) + "," + std::to_string(a.q) +
                                ") invalid for " + std::to_string(n) + " points");
  for (int s : a.cross)
    if (s < 0 || s > n) throw std::invalid_argument("axis segment out of range");
}

Arc reverse_arc(const Arc& a) {
  Arc r;
  r.p = a.q;
  r.q = a.p;
  r.first = a.last();
  r.cross.assign(a.cross.rbegin(), a.cross.rend());
  return r;
}

// segment crossed next to the moved endpoint; the new first piece is in flip(h)
int endpoint_segment(int k, int sign, Half h) {
  bool low_side = sign > 0 ? h == Half::Upper : h == Half::Lower;
  return low_side ? k - 1 : k + 1;
}

}  // namespace

Arc tighten(Arc a, int n) {
  check_points(a, n);
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<int> st;
    for (int s : a.cross) {
      if (!st.empty() && st.back() == s) {
        st.pop_back();
        changed = true;
      } else {
        st.push_back(s);
      }
    }
    a.cross = std::move(st);
    while (!a.cross.empty() && (a.cross.front() == a.p - 1 || a.cross.front() == a.p)) {
      a.cross.erase(a.cross.begin());
      a.first = flip(a.first);
      changed = true;
    }
    while (!a.cross.empty() && (a.cross.back() == a.q - 1 || a.cross.back() == a.q)) {
      a.cross.pop_back();
      changed = true;
    }
  }
  if (a.p > a.q) a = reverse_arc(a);
  if (a.cross.empty() && a.q == a.p + 1) a.first = Half::Upper;
  return a;
}

Arc make_semicircle(int p, int q, Half h, int n) {
  Arc a;
  a.p = p;
  a.q = q;
  a.first = h;
  return tighten(a, n);
}

bool ArcSystem::is_half_plane() const {
  return std::all_of(arcs.begin(), arcs.end(), [](const Arc& a) { return a.is_semicircle(); });
}

bool ArcSystem::is_matching() const {
  if (n % 2 != 0 || static_cast<int>(arcs.size()) * 2 != n) return false;
  std::vector<int> seen(n + 1, 0);
  for (const auto& a : arcs) {
    if (a.p < 1 || a.q > n) return false;
    if (seen[a.p]++ || seen[a.q]++) return false;
  }
  return true;
}

ArcSystem make_system(int n, std::vector<Arc> arcs) {
  if (n < 2) throw std::invalid_argument("a marked disc needs at least two points");
  ArcSystem s;
  s.n = n;
  for (auto& a : arcs) s.arcs.push_back(tighten(a, n));
  std::sort(s.arcs.begin(), s.arcs.end());
  if (s.is_half_plane()) s.presentation = Presentation{BraidWord{n, {}}, s.arcs};
  return s;
}

ArcSystem standard_matching(int m, Half half) {
  if (m < 1) throw std::invalid_argument("standard matching needs m >= 1");
  std::vector<Arc> arcs;
  for (int i = 1; i <= m; ++i) arcs.push_back(make_semicircle(i, 2 * m + 1 - i, half, 2 * m));
  return make_system(2 * m, arcs);
}

Arc act_letter(const Arc& a, Letter l, int n) {
  const int k = l.k;
  if (k < 1 || k >= n) throw std::invalid_argument("letter index out of range for the disc");
  Arc out;
  std::vector<int> mid;
  for (std::size_t i = 0; i < a.cross.size(); ++i) {
    int s = a.cross[i];
    if (s != k) {
      mid.push_back(s);
      continue;
    }
    Half from = a.half_of_piece(i);
    bool forward = l.sign > 0 ? from == Half::Upper : from == Half::Lower;
    if (forward) mid.insert(mid.end(), {k - 1, k, k + 1});
    else mid.insert(mid.end(), {k + 1, k, k - 1});
  }
  auto moved = [&](int x) { return x == k ? k + 1 : (x == k + 1 ? k : x); };
  out.p = moved(a.p);
  out.q = moved(a.q);
  out.first = a.first;
  if (a.p == k || a.p == k + 1) {
    mid.insert(mid.begin(), endpoint_segment(k, l.sign, a.first));
    out.first = flip(a.first);
  }
  if (a.q == k || a.q == k + 1) mid.push_back(endpoint_segment(k, l.sign, a.last()));
  out.cross = std::move(mid);
  return tighten(out, n);
}

ArcSystem act(const BraidWord& b, const ArcSystem& a) {
  validate(b);
  if (b.strands != a.n)
    throw std::invalid_argument("act: braid on " + std::to_string(b.strands) + " strands, disc has " +
                                std::to_string(a.n) + " points");
  ArcSystem out;
  out.n = a.n;
  for (auto arc : a.arcs) {
    for (auto l : b.letters) arc = act_letter(arc, l, a.n);
    out.arcs.push_back(arc);
  }
  std::sort(out.arcs.begin(), out.arcs.end());
  if (a.presentation) out.presentation = Presentation{concat(a.presentation->word, b), a.presentation->base};
  else if (a.is_half_plane()) out.presentation = Presentation{b, a.arcs};
  return out;
}

namespace {

// minimal interior crossings of taut arcs with semicircles in the same half
int count_against_semicircles(const std::vector<Arc>& arcs, const std::vector<Arc>& semis) {
  int total = 0;
  for (const auto& x : arcs) {
    const std::size_t pieces = x.cross.size() + 1;
    for (std::size_t i = 0; i < pieces; ++i) {
      // positions doubled so punctures are even and segment midpoints odd
      int u = i == 0 ? 2 * x.p : 2 * x.cross[i - 1] + 1;
      int v = i + 1 == pieces ? 2 * x.q : 2 * x.cross[i] + 1;
      Half h = x.half_of_piece(i);
      for (const auto& s : semis) {
        if (s.first != h) continue;
        int lo = 2 * s.p, hi = 2 * s.q;
        auto inside = [&](int t) { return lo < t && t < hi; };
        auto outside = [&](int t) { return t < lo || t > hi; };
        if ((inside(u) && outside(v)) || (outside(u) && inside(v))) ++total;
      }
    }
  }
  return total;
}

}  // namespace

IntersectionCount intersection(const ArcSystem& a, const ArcSystem& b) {
  if (a.n != b.n) throw std::invalid_argument("intersection: systems live on different discs");
  IntersectionCount res;
  std::vector<Arc> ra = a.arcs;
  std::vector<char> b_keep(b.arcs.size(), 1);
  for (std::size_t j = 0; j < b.arcs.size(); ++j) {
    auto it = std::find(ra.begin(), ra.end(), b.arcs[j]);
    if (it != ra.end()) {
      ra.erase(it);
      b_keep[j] = 0;
      res.degenerate = true;
    }
  }
  std::vector<Arc> rb;
  for (std::size_t j = 0; j < b.arcs.size(); ++j)
    if (b_keep[j]) rb.push_back(b.arcs[j]);

  std::vector<char> ea(a.n + 1, 0), eb(a.n + 1, 0);
  for (const auto& x : ra) ea[x.p] = ea[x.q] = 1;
  for (const auto& x : rb) eb[x.p] = eb[x.q] = 1;
  for (int i = 1; i <= a.n; ++i) res.endpoint_count += ea[i] && eb[i];

  auto all_semis = [](const std::vector<Arc>& v) {
    return std::all_of(v.begin(), v.end(), [](const Arc& x) { return x.is_semicircle(); });
  };
  if (all_semis(rb)) {
    res.interior_count = count_against_semicircles(ra, rb);
    return res;
  }
  if (all_semis(ra)) {
    res.interior_count = count_against_semicircles(rb, ra);
    return res;
  }
  // pull one side back to its half-plane base
  auto pull_back = [&](const ArcSystem& s, const std::vector<char>& keep, const std::vector<Arc>& other) {
    const auto& pr = *s.presentation;
    ArcSystem base = make_system(s.n, pr.base);
    std::vector<Arc> kept_base;
    for (const auto& x : pr.base) {
      Arc img = x;
      for (auto l : pr.word.letters) img = act_letter(img, l, s.n);
      for (std::size_t j = 0; j < s.arcs.size(); ++j) {
        if (keep[j] && s.arcs[j] == img) {
          kept_base.push_back(tighten(x, s.n));
          break;
        }
      }
    }
    ArcSystem moved;
    moved.n = s.n;
    auto winv = inverse(pr.word);
    for (auto x : other) {
      for (auto l : winv.letters) x = act_letter(x, l, s.n);
      moved.arcs.push_back(x);
    }
    return count_against_semicircles(moved.arcs, kept_base);
  };
  if (b.presentation) {
    res.interior_count = pull_back(b, b_keep, ra);
    return res;
  }
  if (a.presentation) {
    // identical arcs of a were removed from ra; mark what remains
    std::vector<char> keep(a.arcs.size(), 0);
    std::vector<Arc> left = ra;
    for (std::size_t j = 0; j < a.arcs.size(); ++j) {
      auto it = std::find(left.begin(), left.end(), a.arcs[j]);
      if (it != left.end()) {
        keep[j] = 1;
        left.erase(it);
      }
    }
    res.interior_count = pull_back(a, keep, rb);
    return res;
  }
  throw std::invalid_argument("intersection needs a half-plane system or a presented one");
}

ArcSystem slide(const ArcSystem& p, int over, int moving, bool inverse_sense, int endpoint) {
  if (p.arcs.size() < 2) throw std::invalid_argument("slide needs at least two arcs");
  if (over < 0 || moving < 0 || over >= static_cast<int>(p.arcs.size()) ||
      moving >= static_cast<int>(p.arcs.size()) || over == moving)
    throw std::invalid_argument("slide: bad arc indices");
  const Arc& di = p.arcs[over];
  const Arc& dj = p.arcs[moving];
  if (!di.is_semicircle()) throw std::invalid_argument("slide: the arc slid over must not cross the axis");
  if (endpoint != 0 && endpoint != dj.p && endpoint != dj.q)
    throw std::invalid_argument("slide: " + std::to_string(endpoint) + " is not an endpoint of the moving arc");

  // the pushed endpoint x, the axis segment joining it to di, and the end of di it reaches
  int x = 0, seg = 0;
  for (auto [cand, s] : {std::pair{di.p - 1, di.p - 1}, {di.q + 1, di.q}, {di.p + 1, di.p}, {di.q - 1, di.q - 1}}) {
    if (cand == di.p || cand == di.q) continue;
    if (cand != dj.p && cand != dj.q) continue;
    if (endpoint != 0 && cand != endpoint) continue;
    x = cand;
    seg = s;
    break;
  }
  if (x == 0) throw std::invalid_argument("slide: the moving arc has no endpoint next to the other arc");
  for (const auto& a : p.arcs)
    for (int s : a.cross)
      if (s == seg) throw std::invalid_argument("slide: the connecting path meets another arc");

  // half twist about di, conjugated from the one about (di.p, di.p+1)
  const int n = p.n;
  Arc std_arc = make_semicircle(di.p, di.p + 1, Half::Upper, n);
  BraidWord delta{n, {}};
  bool found = false;
  for (int s : {1, -1}) {
    delta.letters.clear();
    for (int k = di.p + 1; k < di.q; ++k) delta.letters.push_back({k, s});
    Arc img = std_arc;
    for (auto l : delta.letters) img = act_letter(img, l, n);
    if (img == di) {
      found = true;
      break;
    }
  }
  if (!found) throw std::logic_error("slide: no standard position for the arc");

  int sg = inverse_sense ? -1 : 1;
  BraidWord tau_a = concat(concat(inverse(delta), BraidWord{n, {{di.p, sg}}}), delta);
  BraidWord tau_path{n, {{seg, sg}}};
  // pushing x once around di: full twist of the chain (path, di) times the inverse square of tau_a
  BraidWord chain = concat(tau_path, tau_a);
  BraidWord push = concat(concat(chain, chain), chain);
  push = concat(push, inverse(concat(tau_a, tau_a)));
  auto out = act(push, p);
  if (std::find(out.arcs.begin(), out.arcs.end(), di) == out.arcs.end())
    throw std::logic_error("slide moved the arc it slides over");
  return out;
}

namespace {

std::vector<ArcSystem> slide_neighbours(const ArcSystem& s) {
  std::vector<ArcSystem> out;
  int k = static_cast<int>(s.arcs.size());
  for (int o = 0; o < k; ++o) {
    if (!s.arcs[o].is_semicircle()) continue;
    for (int mv = 0; mv < k; ++mv) {
      if (mv == o) continue;
      for (int end : {s.arcs[mv].p, s.arcs[mv].q})
        for (bool inv : {false, true}) {
          try {
            out.push_back(slide(s, o, mv, inv, end));
          } catch (const std::invalid_argument&) {
          }
        }
    }
  }
  return out;
}

}  // namespace

bool slide_equivalent(const ArcSystem& a, const ArcSystem& b, int max_slides) {
  if (a.n != b.n) return false;
  // search from both ends, half the depth each
  std::map<std::string, int> side;
  std::vector<ArcSystem> fa{a}, fb{b};
  side[format_arc_system(a)] = 1;
  if (!side.emplace(format_arc_system(b), 2).second) return true;
  for (int step = 0; step < max_slides; ++step) {
    bool from_a = step % 2 == 0;
    auto& frontier = from_a ? fa : fb;
    int mine = from_a ? 1 : 2;
    std::vector<ArcSystem> next;
    for (const auto& s : frontier)
      for (auto& t : slide_neighbours(s)) {
        auto key = format_arc_system(t);
        auto [it, fresh] = side.emplace(key, mine);
        if (!fresh) {
          if (it->second != mine) return true;
          continue;
        }
        next.push_back(std::move(t));
      }
    frontier = std::move(next);
  }
  return false;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

int to_int(std::string_view s) {
  s = trim(s);
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw parse_error("bad integer '" + std::string(s) + "' in arc system");
  return v;
}

}  // namespace

ArcSystem parse_arc_system(std::string_view text) {
  auto semi = text.find(';');
  if (semi == std::string_view::npos) throw parse_error("arc system needs a 'm;' header");
  auto head = trim(text.substr(0, semi));
  int n = 0;
  if (head.substr(0, 2) == "n=") n = to_int(head.substr(2));
  else n = 2 * to_int(head);
  auto rest = text.substr(semi + 1);
  std::string_view word_text;
  if (auto bar = rest.find('|'); bar != std::string_view::npos) {
    word_text = rest.substr(bar + 1);
    rest = rest.substr(0, bar);
  }
  std::vector<Arc> arcs;
  std::size_t i = 0;
  while (true) {
    auto open = rest.find('(', i);
    if (open == std::string_view::npos) {
      if (!trim(rest.substr(i)).empty()) throw parse_error("stray text in arc system: '" + std::string(rest.substr(i)) + "'");
      break;
    }
    if (!trim(rest.substr(i, open - i)).empty())
      throw parse_error("stray text in arc system: '" + std::string(rest.substr(i, open - i)) + "'");
    auto close = rest.find(')', open);
    if (close == std::string_view::npos) throw parse_error("unclosed '(' in arc system");
    auto inner = rest.substr(open + 1, close - open - 1);
    auto comma = inner.find(',');
    if (comma == std::string_view::npos) throw parse_error("arc '" + std::string(inner) + "' needs a comma");
    Half h = Half::Upper;
    i = close + 1;
    if (i < rest.size() && (rest[i] == '+' || rest[i] == '-')) {
      h = rest[i] == '+' ? Half::Upper : Half::Lower;
      ++i;
    }
    Arc a;
    a.p = to_int(inner.substr(0, comma));
    a.q = to_int(inner.substr(comma + 1));
    a.first = h;
    try {
      check_points(a, n);
    } catch (const std::invalid_argument& e) {
      throw parse_error(e.what());
    }
    arcs.push_back(a);
  }
  auto s = make_system(n, arcs);
  if (!trim(word_text).empty()) {
    auto body = std::string(trim(word_text));
    auto w = parse_braid(std::to_string(n) + ": " + body);
    s = act(w, s);
  }
  return s;
}

std::string format_arc(const Arc& a) {
  std::ostringstream os;
  os << '(' << a.p << ',' << a.q << ')' << (a.first == Half::Upper ? '+' : '-');
  if (!a.cross.empty()) {
    os << '[';
    for (std::size_t i = 0; i < a.cross.size(); ++i) os << (i ? " " : "") << a.cross[i];
    os << ']';
  }
  return os.str();
}

std::string format_arc_system(const ArcSystem& s) {
  std::ostringstream os;
  os << "n=" << s.n << ";";
  for (const auto& a : s.arcs) os << ' ' << format_arc(a);
  return os.str();
}

Arc arc_from_polyline(const std::vector<std::complex<double>>& pts, const std::vector<double>& punctures) {
  int n = static_cast<int>(punctures.size());
  if (pts.size() < 3) throw std::invalid_argument("polyline needs at least three points");
  if (!std::is_sorted(punctures.begin(), punctures.end())) throw std::invalid_argument("punctures must be sorted");
  auto nearest = [&](std::complex<double> z) {
    int best = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(z - punctures[i]) < std::abs(z - punctures[best])) best = i;
    return best + 1;
  };
  // points on the axis count as upper
  auto half = [](std::complex<double> z) { return z.imag() >= 0 ? Half::Upper : Half::Lower; };
  Arc a;
  a.p = nearest(pts.front());
  a.q = nearest(pts.back());
  if (a.p == a.q) throw std::invalid_argument("polyline starts and ends at the same puncture");
  a.first = half(pts[1]);
  for (std::size_t i = 1; i + 2 < pts.size(); ++i) {
    auto u = pts[i], v = pts[i + 1];
    if (half(u) == half(v)) continue;
    double t = u.imag() / (u.imag() - v.imag());
    double x = u.real() + t * (v.real() - u.real());
    a.cross.push_back(static_cast<int>(std::lower_bound(punctures.begin(), punctures.end(), x) - punctures.begin()));
  }
  return tighten(a, n);
}

}  // namespace khs
