#pragma once

// random inputs shared by the unit tests and the acceptance run

#include <algorithm>
#include <random>
#include <vector>

#include "khslice/braid.hpp"
#include "khslice/curves.hpp"

namespace gen {

using namespace khs;

inline BraidWord random_word(std::mt19937& rng, int n, int len) {
  BraidWord w{n, {}};
  std::uniform_int_distribution<int> k(1, n - 1), s(0, 1);
  for (int i = 0; i < len; ++i) w.letters.push_back({k(rng), s(rng) ? 1 : -1});
  return w;
}

// disjoint semicircles: same-half arcs nest or sit side by side
inline ArcSystem random_half_plane(std::mt19937& rng, int n) {
  std::uniform_int_distribution<int> pt(1, n), coin(0, 1);
  std::uniform_int_distribution<int> count(1, std::max(1, n / 2));
  for (;;) {
    int want = count(rng);
    std::vector<Arc> arcs;
    std::vector<int> used(n + 1, 0);
    for (int tries = 0; tries < 50 && static_cast<int>(arcs.size()) < want; ++tries) {
      int p = pt(rng), q = pt(rng);
      if (p == q || used[p] || used[q]) continue;
      if (p > q) std::swap(p, q);
      Half h = coin(rng) ? Half::Upper : Half::Lower;
      bool ok = true;
      for (const auto& a : arcs) {
        if (a.first != h && !(a.q == a.p + 1)) continue;
        bool inter = (a.p < p && p < a.q) != (a.p < q && q < a.q);
        if (inter) ok = false;
      }
      // an adjacent pair is isotopic to both halves, so it must avoid every arc
      if (q == p + 1)
        for (const auto& a : arcs)
          if ((a.p < p && p < a.q) != (a.p < q && q < a.q)) ok = false;
      if (!ok) continue;
      used[p] = used[q] = 1;
      arcs.push_back(make_semicircle(p, q, h, n));
    }
    if (!arcs.empty()) return make_system(n, arcs);
  }
}

inline ArcSystem random_system(std::mt19937& rng, int n) {
  std::uniform_int_distribution<int> len(0, 8);
  return act(random_word(rng, n, len(rng)), random_half_plane(rng, n));
}

}  // namespace gen
