#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "khslice/braid.hpp"
#include "khslice/curves.hpp"

namespace khs {

// Crossing ports as drawn with time running upward.  The strand through a
// crossing joins diagonally opposite ports: BL-TR and BR-TL.
enum Port : int { BL = 0, BR = 1, TL = 2, TR = 3 };

inline int through(int port) { return 3 - port; }

struct PortRef {
  int crossing = -1;
  int port = 0;
  bool operator==(const PortRef&) const = default;
};

struct Edge {
  PortRef tail;
  PortRef head;
};

// letter +1: the BR-TL strand is over (a braid letter s_k), letter -1: BL-TR over
struct Crossing {
  int letter = 1;
  std::array<int, 4> edge{-1, -1, -1, -1};
};

struct LinkDiagram {
  std::vector<Crossing> crossings;
  std::vector<Edge> edges;
  int free_loops = 0;
  std::string provenance;

  int size() const { return static_cast<int>(crossings.size()); }
  int sign(int c) const;
  int n_plus() const;
  int n_minus() const;
  int components() const;
  // 0-smoothing joins (BL,BR),(TL,TR) for letter +1 and (BL,TL),(BR,TR) for letter -1
  std::array<std::array<int, 2>, 2> smoothing_pairs(int c, int s) const;
  void check() const;
};

struct CircleSet {
  int count = 0;
  std::vector<int> edge_circle;
};

LinkDiagram braid_closure_diagram(const BraidWord& b);

CircleSet smooth(const LinkDiagram& d, const std::vector<int>& assignment);
CircleSet smooth(const LinkDiagram& d, std::uint64_t mask);

// edges of the complement arc that leaves crossing c at its TL port
std::vector<int> top_left_arc(const LinkDiagram& d, int c);
int crossing_v(const LinkDiagram& d, int c);

// smoothing s of crossing c; the oriented smoothing keeps all orientations,
// the other one reverses the top-left arc
int oriented_smoothing(const LinkDiagram& d, int c);
LinkDiagram resolve(const LinkDiagram& d, int c, int s);

struct MorseEvent {
  enum Kind { Cup, Cap, Cross };
  Kind kind = Cross;
  int k = 1;       // 1-based left position
  int letter = 1;  // Cross only
  int tag = 0;     // Cap only: orientation priority, lowest first
};

// events in time order, starting and ending with no strands; every
// component is oriented to enter its lowest-tag cap through the left leg
LinkDiagram morse_diagram(const std::vector<MorseEvent>& events, const std::string& provenance);

std::vector<MorseEvent> cap_events(const std::vector<Arc>& base, int n);
std::vector<MorseEvent> cup_events(const std::vector<Arc>& base, int n);

LinkDiagram plat_closure(const ArcSystem& top, const BraidWord& b, const ArcSystem& bottom);

}  // namespace khs
