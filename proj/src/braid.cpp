#include "khslice/braid.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace khs {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

long parse_int(std::string_view tok, const char* what) {
  long v = 0;
  auto first = tok.data();
  auto last = tok.data() + tok.size();
  if (!tok.empty() && tok.front() == '+') ++first;
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || p != last || first == last)
    throw parse_error(std::string("bad ") + what + " token '" + std::string(tok) + "'");
  return v;
}

}  // namespace

BraidWord parse_braid(std::string_view text) {
  if (auto h = text.find('#'); h != std::string_view::npos) text = text.substr(0, h);
  text = trim(text);
  BraidWord b;
  int header = 0;
  std::string_view body = text;
  if (auto colon = text.find(':'); colon != std::string_view::npos) {
    auto head = trim(text.substr(0, colon));
    long m = parse_int(head, "strand count");
    if (m < 1) throw parse_error("strand count must be positive, got '" + std::string(head) + "'");
    header = static_cast<int>(m);
    body = text.substr(colon + 1);
  }
  std::vector<std::string_view> toks;
  std::size_t i = 0;
  while (i < body.size()) {
    while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
    std::size_t j = i;
    while (j < body.size() && !std::isspace(static_cast<unsigned char>(body[j]))) ++j;
    if (j > i) toks.push_back(body.substr(i, j - i));
    i = j;
  }
  int maxk = 0;
  for (auto tok : toks) {
    long v = parse_int(tok, "letter");
    if (v == 0) throw parse_error("zero letter token '" + std::string(tok) + "'");
    int k = static_cast<int>(v < 0 ? -v : v);
    if (header && k >= header)
      throw parse_error("letter token '" + std::string(tok) + "' needs more than " +
                        std::to_string(header) + " strands");
    b.letters.push_back({k, v < 0 ? -1 : 1});
    maxk = std::max(maxk, k);
  }
  b.strands = header ? header : maxk + 1;
  return b;
}

std::string format_braid(const BraidWord& b) {
  std::ostringstream os;
  os << b.strands << ":";
  for (auto l : b.letters) os << ' ' << l.k * l.sign;
  return os.str();
}

std::string format_move(const MarkovMove& mv) {
  switch (mv.kind) {
    case MarkovMove::Conjugate:
      return "conjugate(" + std::to_string(mv.k) + (mv.sign > 0 ? ",+)" : ",-)");
    case MarkovMove::StabilizePlus: return "stabilize(+)";
    case MarkovMove::StabilizeMinus: return "stabilize(-)";
    case MarkovMove::Destabilize: return "destabilize";
  }
  return "?";
}

std::vector<BraidWord> parse_braid_list(std::string_view text) {
  std::vector<BraidWord> out;
  std::size_t pos = 0;
  int lineno = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++lineno;
    auto body = line.substr(0, line.find('#'));
    if (!trim(body).empty()) {
      try {
        out.push_back(parse_braid(body));
      } catch (const parse_error& e) {
        throw parse_error("line " + std::to_string(lineno) + ": " + e.what());
      }
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

std::vector<BraidWord> read_braid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_braid_list(ss.str());
}

void validate(const BraidWord& b) {
  if (b.strands < 1) throw std::invalid_argument("braid needs at least one strand");
  for (auto l : b.letters) {
    if (l.k < 1 || l.k >= b.strands || (l.sign != 1 && l.sign != -1))
      throw std::invalid_argument("invalid letter " + std::to_string(l.k * l.sign) + " for " +
                                  std::to_string(b.strands) + " strands");
  }
}

int writhe(const BraidWord& b) {
  int w = 0;
  for (auto l : b.letters) w -= l.sign;
  return w;
}

int cycle_count(const std::vector<int>& perm) {
  std::vector<char> seen(perm.size(), 0);
  int cycles = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    ++cycles;
    for (int j = static_cast<int>(i); !seen[j]; j = perm[j]) seen[j] = 1;
  }
  return cycles;
}

ClosurePermutation closure_permutation(const BraidWord& b) {
  // at[p] = starting strand currently at position p
  std::vector<int> at(b.strands);
  for (int p = 0; p < b.strands; ++p) at[p] = p;
  for (auto l : b.letters) std::swap(at[l.k - 1], at[l.k]);
  ClosurePermutation cp;
  cp.perm.assign(b.strands, 0);
  for (int p = 0; p < b.strands; ++p) cp.perm[at[p]] = p;
  cp.components = cycle_count(cp.perm);
  return cp;
}

std::vector<int> compose(const std::vector<int>& first, const std::vector<int>& second) {
  std::vector<int> out(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) out[i] = second[first[i]];
  return out;
}

BraidWord free_reduce(const BraidWord& b) {
  BraidWord out{b.strands, {}};
  for (auto l : b.letters) {
    if (!out.letters.empty() && out.letters.back().k == l.k && out.letters.back().sign == -l.sign)
      out.letters.pop_back();
    else
      out.letters.push_back(l);
  }
  return out;
}

bool can_destabilize(const BraidWord& b) {
  if (b.strands < 2) return false;
  auto r = free_reduce(b);
  if (r.letters.empty() || r.letters.back().k != b.strands - 1) return false;
  return std::count_if(r.letters.begin(), r.letters.end(),
                       [&](Letter l) { return l.k == b.strands - 1; }) == 1;
}

BraidWord markov_move(const BraidWord& b, const MarkovMove& mv) {
  validate(b);
  switch (mv.kind) {
    case MarkovMove::Conjugate: {
      if (mv.k < 1 || mv.k >= b.strands || (mv.sign != 1 && mv.sign != -1))
        throw std::invalid_argument("conjugation index out of range");
      BraidWord out{b.strands, {}};
      out.letters.push_back({mv.k, -mv.sign});
      out.letters.insert(out.letters.end(), b.letters.begin(), b.letters.end());
      out.letters.push_back({mv.k, mv.sign});
      return out;
    }
    case MarkovMove::StabilizePlus:
    case MarkovMove::StabilizeMinus: {
      BraidWord out = b;
      out.strands = b.strands + 1;
      out.letters.push_back({b.strands, mv.kind == MarkovMove::StabilizePlus ? 1 : -1});
      return out;
    }
    case MarkovMove::Destabilize: {
      if (!can_destabilize(b))
        throw std::invalid_argument("destabilize: word does not end in the only s_" +
                                    std::to_string(b.strands - 1) + "^(+-1)");
      auto r = free_reduce(b);
      r.letters.pop_back();
      r.strands = b.strands - 1;
      return r;
    }
  }
  throw std::invalid_argument("unknown move");
}

BraidWord double_braid(const BraidWord& b) { return {2 * b.strands, b.letters}; }

BraidWord inverse(const BraidWord& b) {
  BraidWord out{b.strands, {}};
  for (auto it = b.letters.rbegin(); it != b.letters.rend(); ++it) out.letters.push_back({it->k, -it->sign});
  return out;
}

BraidWord reversed(const BraidWord& b) {
  BraidWord out{b.strands, {b.letters.rbegin(), b.letters.rend()}};
  return out;
}

BraidWord concat(const BraidWord& a, const BraidWord& b) {
  if (a.strands != b.strands) throw std::invalid_argument("concat: strand counts differ");
  BraidWord out = a;
  out.letters.insert(out.letters.end(), b.letters.begin(), b.letters.end());
  return out;
}

BraidWord add_trivial_strand(const BraidWord& b) { return {b.strands + 1, b.letters}; }

BraidWord half_twist(int n) {
  BraidWord d{n, {}};
  for (int top = n - 1; top >= 1; --top)
    for (int k = 1; k <= top; ++k) d.letters.push_back({k, 1});
  return d;
}

BraidWord random_braid(std::mt19937_64& rng, int max_strands, int max_letters) {
  if (max_strands < 1 || max_letters < 0) throw std::invalid_argument("random_braid: bad limits");
  int m = std::uniform_int_distribution<int>(1, max_strands)(rng);
  BraidWord b{m, {}};
  if (m == 1) return b;
  int len = std::uniform_int_distribution<int>(0, max_letters)(rng);
  std::uniform_int_distribution<int> k(1, m - 1), coin(0, 1);
  for (int i = 0; i < len; ++i) b.letters.push_back({k(rng), coin(rng) ? 1 : -1});
  return b;
}

std::vector<MarkovStep> random_markov_moves(const BraidWord& b, int n, std::mt19937_64& rng,
                                            const MarkovLimits& lim) {
  std::vector<MarkovStep> out;
  BraidWord cur = free_reduce(b);
  for (int step = 0; step < n; ++step) {
    std::vector<MarkovStep> conj, stab, destab;
    for (int k = 1; k < cur.strands; ++k)
      for (int sign : {1, -1}) {
        MarkovMove mv{MarkovMove::Conjugate, k, sign};
        auto r = free_reduce(markov_move(cur, mv));
        if (r.length() <= std::max(lim.max_letters, cur.length())) conj.push_back({mv, r});
      }
    if (cur.strands < lim.max_strands && cur.length() < lim.max_letters)
      for (auto kind : {MarkovMove::StabilizePlus, MarkovMove::StabilizeMinus}) {
        MarkovMove mv{kind, cur.strands, kind == MarkovMove::StabilizePlus ? 1 : -1};
        stab.push_back({mv, free_reduce(markov_move(cur, mv))});
      }
    if (can_destabilize(cur)) {
      MarkovMove mv{MarkovMove::Destabilize, cur.strands - 1, 0};
      destab.push_back({mv, free_reduce(markov_move(cur, mv))});
    }
    std::vector<std::vector<MarkovStep>*> kinds;
    for (auto* v : {&conj, &stab, &destab})
      if (!v->empty()) kinds.push_back(v);
    if (kinds.empty()) throw std::invalid_argument("random_markov_moves: no move fits the limits");
    auto& pool = *kinds[std::uniform_int_distribution<std::size_t>(0, kinds.size() - 1)(rng)];
    out.push_back(pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)]);
    cur = out.back().result;
  }
  return out;
}

std::string format_trace(const BraidWord& start, const std::vector<MarkovStep>& steps) {
  std::string s = format_braid(start);
  for (const auto& st : steps) s += "\n  " + format_move(st.move) + " -> " + format_braid(st.result);
  return s;
}

}  // namespace khs
