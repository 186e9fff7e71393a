#pragma once

#include <compare>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "khslice/braid.hpp"

namespace khs {

// Arcs in the disc with n marked points 1..n on the real axis.
// An arc is stored in taut form: the ordered list of axis segments it crosses,
// where segment j is the open interval (j, j+1), segment 0 the left ray and
// segment n the right ray, plus the half-plane of the piece leaving p.
// Taut means no bigons with the axis and no half-bigons at the endpoints, which
// makes the encoding canonical for the isotopy class.
enum class Half : int { Upper = 0, Lower = 1 };

inline Half flip(Half h) { return h == Half::Upper ? Half::Lower : Half::Upper; }

struct Arc {
  int p = 1;
  int q = 2;
  Half first = Half::Upper;
  std::vector<int> cross;

  Half half_of_piece(std::size_t i) const { return (i % 2 == 0) ? first : flip(first); }
  Half last() const { return half_of_piece(cross.size()); }
  bool is_semicircle() const { return cross.empty(); }

  auto operator<=>(const Arc&) const = default;
  bool operator==(const Arc&) const = default;
};

// system = act(word, base) with base made of semicircles
struct Presentation {
  BraidWord word;
  std::vector<Arc> base;
};

struct ArcSystem {
  int n = 2;
  std::vector<Arc> arcs;
  std::optional<Presentation> presentation;

  bool is_half_plane() const;
  bool is_matching() const;
  bool same_class(const ArcSystem& o) const { return n == o.n && arcs == o.arcs; }
};

struct IntersectionCount {
  int endpoint_count = 0;
  int interior_count = 0;
  bool degenerate = false;  // identical arcs were present and left out
  bool operator==(const IntersectionCount&) const = default;
};

Arc tighten(Arc a, int n);
Arc make_semicircle(int p, int q, Half h, int n);

ArcSystem make_system(int n, std::vector<Arc> arcs);
ArcSystem standard_matching(int m, Half half);

// half-twist images, letters applied left to right
Arc act_letter(const Arc& a, Letter l, int n);
ArcSystem act(const BraidWord& b, const ArcSystem& a);

IntersectionCount intersection(const ArcSystem& a, const ArcSystem& b);

// Slide the arc with index `moving` over the arc with index `over` (indices
// into p.arcs).  `over` must not cross the axis and `moving` must have an
// endpoint next to one of its endpoints (inside or outside), joined by an axis
// segment no arc crosses.  That endpoint is pushed once around `over`;
// `inverse` reverses the loop and `endpoint` picks which end moves (0: first fit).
ArcSystem slide(const ArcSystem& p, int over, int moving, bool inverse = false, int endpoint = 0);

// reachable from one another by at most max_slides slides
bool slide_equivalent(const ArcSystem& a, const ArcSystem& b, int max_slides);

// Taut arc of a planar polyline whose ends sit on marked points at the given
// sorted real positions.
Arc arc_from_polyline(const std::vector<std::complex<double>>& pts, const std::vector<double>& punctures);

// text form: "m; (1,4)+ (2,3)+" with '+' upper and '-' lower; a trailing
// "| <letters>" acts by that braid.  "n=5; ..." gives the number of points directly.
ArcSystem parse_arc_system(std::string_view text);
std::string format_arc(const Arc& a);
std::string format_arc_system(const ArcSystem& s);

}  // namespace khs
