#include "khslice/diagram.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace khs {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Crossings (4 ports) and joints (2 ports: caps, cups, closure arcs, smoothings)
// wired together; joints are contracted away when the diagram is produced.
struct PortGraph {
  std::vector<int> base;
  std::vector<char> joint;
  std::vector<int> letter;
  std::vector<int> port_node;
  std::vector<int> wire;
  std::vector<int> fixed;  // +1 wire leaves this port, -1 enters, 0 unknown

  int add_node(bool is_joint, int let) {
    int id = static_cast<int>(base.size());
    base.push_back(static_cast<int>(wire.size()));
    joint.push_back(is_joint);
    letter.push_back(let);
    int ports = is_joint ? 2 : 4;
    for (int i = 0; i < ports; ++i) {
      port_node.push_back(id);
      wire.push_back(-1);
      fixed.push_back(0);
    }
    return id;
  }
  int add_crossing(int let) { return add_node(false, let); }
  int add_joint() { return add_node(true, 0); }
  int port(int node, int p) const { return base[node] + p; }
  int local(int pt) const { return pt - base[port_node[pt]]; }
  int pass(int pt) const {
    int n = port_node[pt];
    return joint[n] ? base[n] + (1 - local(pt)) : base[n] + through(local(pt));
  }
  void connect(int a, int b, bool directed) {
    if (wire[a] != -1 || wire[b] != -1) throw std::logic_error("port wired twice");
    wire[a] = b;
    wire[b] = a;
    if (directed) {
      fixed[a] = 1;
      fixed[b] = -1;
    }
  }
};

LinkDiagram finalize(const PortGraph& g, const std::vector<int>& seeds, const std::string& provenance) {
  const int P = static_cast<int>(g.wire.size());
  for (int i = 0; i < P; ++i)
    if (g.wire[i] < 0) throw std::logic_error("open port left in diagram");
  std::vector<int> dir(P, 0);
  LinkDiagram d;
  d.provenance = provenance;

  auto set = [&](int pt, int v) {
    if ((dir[pt] && dir[pt] != v) || (g.fixed[pt] && g.fixed[pt] != v))
      throw std::logic_error("inconsistent orientation in diagram");
    dir[pt] = v;
  };
  // walk a component starting at an incoming port
  auto walk = [&](int start) {
    bool crossing = false;
    int cur = start;
    do {
      set(cur, -1);
      int x = g.pass(cur);
      set(x, 1);
      if (!g.joint[g.port_node[x]]) crossing = true;
      cur = g.wire[x];
    } while (cur != start);
    set(start, -1);
    if (!crossing) ++d.free_loops;
  };

  for (int i = 0; i < P; ++i)
    if (g.fixed[i] == -1 && dir[i] == 0) walk(i);
  for (int s : seeds)
    if (dir[s] == 0) walk(s);
  for (int i = 0; i < P; ++i) {
    if (dir[i] != 0) continue;
    if (!g.joint[g.port_node[i]]) throw std::logic_error("component without orientation");
    // a loop made only of joints is a free circle; anything else is unoriented
    int cur = i;
    bool crossing = false;
    do {
      int x = g.pass(cur);
      if (!g.joint[g.port_node[x]]) crossing = true;
      cur = g.wire[x];
    } while (cur != i);
    if (crossing) throw std::logic_error("component without orientation");
    walk(i);
  }

  std::vector<int> cross_index(g.base.size(), -1);
  for (std::size_t n = 0; n < g.base.size(); ++n) {
    if (g.joint[n]) continue;
    cross_index[n] = static_cast<int>(d.crossings.size());
    d.crossings.push_back({g.letter[n], {-1, -1, -1, -1}});
  }
  for (int pt = 0; pt < P; ++pt) {
    int n = g.port_node[pt];
    if (g.joint[n] || dir[pt] != 1) continue;
    int x = g.wire[pt];
    while (g.joint[g.port_node[x]]) x = g.wire[g.pass(x)];
    Edge e{{cross_index[n], g.local(pt)}, {cross_index[g.port_node[x]], g.local(x)}};
    int id = static_cast<int>(d.edges.size());
    d.edges.push_back(e);
    d.crossings[e.tail.crossing].edge[e.tail.port] = id;
    d.crossings[e.head.crossing].edge[e.head.port] = id;
  }
  d.check();
  return d;
}

}  // namespace

int LinkDiagram::sign(int c) const {
  const auto& x = crossings.at(c);
  auto incoming = [&](int port) { return edges[x.edge[port]].head == PortRef{c, port}; };
  int oa = incoming(BL) ? 1 : -1;
  int ob = incoming(BR) ? 1 : -1;
  return -x.letter * oa * ob;
}

int LinkDiagram::n_plus() const {
  int n = 0;
  for (int c = 0; c < size(); ++c) n += sign(c) > 0;
  return n;
}

int LinkDiagram::n_minus() const { return size() - n_plus(); }

int LinkDiagram::components() const {
  UnionFind uf(static_cast<int>(edges.size()));
  for (const auto& x : crossings) {
    uf.unite(x.edge[BL], x.edge[TR]);
    uf.unite(x.edge[BR], x.edge[TL]);
  }
  int comps = 0;
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) comps += uf.find(e) == e;
  return comps + free_loops;
}

std::array<std::array<int, 2>, 2> LinkDiagram::smoothing_pairs(int c, int s) const {
  bool horizontal = (crossings.at(c).letter > 0) == (s == 0);
  if (horizontal) return {{{BL, BR}, {TL, TR}}};
  return {{{BL, TL}, {BR, TR}}};
}

void LinkDiagram::check() const {
  std::vector<int> uses(edges.size(), 0);
  for (int c = 0; c < size(); ++c) {
    int in = 0;
    for (int p = 0; p < 4; ++p) {
      int e = crossings[c].edge[p];
      if (e < 0 || e >= static_cast<int>(edges.size())) throw std::logic_error("dangling port");
      ++uses[e];
      if (edges[e].head == PortRef{c, p}) ++in;
      else if (!(edges[e].tail == PortRef{c, p})) throw std::logic_error("edge/port mismatch");
    }
    if (in != 2) throw std::logic_error("crossing without two incoming strands");
    for (int p : {BL, BR}) {
      bool a = edges[crossings[c].edge[p]].head == PortRef{c, p};
      bool b = edges[crossings[c].edge[through(p)]].head == PortRef{c, through(p)};
      if (a == b) throw std::logic_error("strand orientation breaks at crossing");
    }
  }
  for (auto u : uses)
    if (u != 2) throw std::logic_error("edge must have one head and one tail");
}

LinkDiagram braid_closure_diagram(const BraidWord& b) {
  validate(b);
  PortGraph g;
  std::vector<int> closure(b.strands), open(b.strands);
  for (int p = 0; p < b.strands; ++p) {
    closure[p] = g.add_joint();
    open[p] = g.port(closure[p], 1);
  }
  for (auto l : b.letters) {
    int c = g.add_crossing(l.sign);
    g.connect(open[l.k - 1], g.port(c, BL), true);
    g.connect(open[l.k], g.port(c, BR), true);
    open[l.k - 1] = g.port(c, TL);
    open[l.k] = g.port(c, TR);
  }
  for (int p = 0; p < b.strands; ++p) g.connect(open[p], g.port(closure[p], 0), true);
  return finalize(g, {}, "braid");
}

CircleSet smooth(const LinkDiagram& d, std::uint64_t mask) {
  UnionFind uf(static_cast<int>(d.edges.size()));
  for (int c = 0; c < d.size(); ++c) {
    auto pairs = d.smoothing_pairs(c, static_cast<int>((mask >> c) & 1u));
    for (auto pr : pairs) uf.unite(d.crossings[c].edge[pr[0]], d.crossings[c].edge[pr[1]]);
  }
  CircleSet cs;
  cs.edge_circle.assign(d.edges.size(), -1);
  std::vector<int> label(d.edges.size(), -1);
  for (int e = 0; e < static_cast<int>(d.edges.size()); ++e) {
    int r = uf.find(e);
    if (label[r] < 0) label[r] = cs.count++;
    cs.edge_circle[e] = label[r];
  }
  cs.count += d.free_loops;
  return cs;
}

CircleSet smooth(const LinkDiagram& d, const std::vector<int>& assignment) {
  if (static_cast<int>(assignment.size()) != d.size())
    throw std::invalid_argument("assignment length must equal the crossing count");
  if (d.size() > 63) throw std::invalid_argument("too many crossings for a mask");
  std::uint64_t mask = 0;
  for (int c = 0; c < d.size(); ++c)
    if (assignment[c]) mask |= std::uint64_t{1} << c;
  return smooth(d, mask);
}

namespace {

PortRef other_end(const Edge& e, PortRef from) { return e.tail == from ? e.head : e.tail; }

void check_crossing(const LinkDiagram& d, int c) {
  if (c < 0 || c >= d.size())
    throw std::out_of_range("crossing index " + std::to_string(c) + " out of range for " +
                            std::to_string(d.size()) + " crossings");
}

// edges of the top-left arc and, per crossing, which strands it runs through (bit 0: BL-TR, bit 1: BR-TL)
std::vector<int> trace_top_left(const LinkDiagram& d, int c, std::vector<int>* strands) {
  check_crossing(d, c);
  std::vector<int> arc;
  if (strands) strands->assign(d.size(), 0);
  PortRef at{c, TL};
  while (true) {
    int e = d.crossings[at.crossing].edge[at.port];
    arc.push_back(e);
    PortRef nxt = other_end(d.edges[e], at);
    if (nxt.crossing == c) break;
    if (strands) (*strands)[nxt.crossing] |= (nxt.port == BL || nxt.port == TR) ? 1 : 2;
    at = {nxt.crossing, through(nxt.port)};
  }
  return arc;
}

}  // namespace

std::vector<int> top_left_arc(const LinkDiagram& d, int c) { return trace_top_left(d, c, nullptr); }

int crossing_v(const LinkDiagram& d, int c) {
  std::vector<int> strands;
  trace_top_left(d, c, &strands);
  int v = 0;
  for (int x = 0; x < d.size(); ++x) {
    if (x == c) continue;
    if (strands[x] == 1 || strands[x] == 2) v += d.sign(x);
  }
  return v;
}

int oriented_smoothing(const LinkDiagram& d, int c) {
  check_crossing(d, c);
  return d.sign(c) > 0 ? 0 : 1;
}

LinkDiagram resolve(const LinkDiagram& d, int c, int s) {
  check_crossing(d, c);
  bool flip_arc = s != oriented_smoothing(d, c);
  std::vector<char> reversed(d.edges.size(), 0);
  if (flip_arc)
    for (int e : top_left_arc(d, c)) reversed[e] = 1;

  PortGraph g;
  std::vector<int> node(d.size(), -1);
  for (int x = 0; x < d.size(); ++x)
    if (x != c) node[x] = g.add_crossing(d.crossings[x].letter);
  auto pairs = d.smoothing_pairs(c, s);
  int j0 = g.add_joint(), j1 = g.add_joint();
  auto image = [&](PortRef r) {
    if (r.crossing != c) return g.port(node[r.crossing], r.port);
    for (int k = 0; k < 2; ++k)
      for (int t = 0; t < 2; ++t)
        if (pairs[k][t] == r.port) return g.port(k == 0 ? j0 : j1, t);
    throw std::logic_error("port missing from smoothing");
  };
  for (std::size_t e = 0; e < d.edges.size(); ++e) {
    auto a = image(d.edges[e].tail), b = image(d.edges[e].head);
    if (reversed[e]) std::swap(a, b);
    g.connect(a, b, true);
  }
  auto out = finalize(g, {}, d.provenance + "/resolved");
  out.free_loops += d.free_loops;
  return out;
}

LinkDiagram morse_diagram(const std::vector<MorseEvent>& events, const std::string& provenance) {
  PortGraph g;
  std::vector<int> open;
  std::vector<std::pair<int, int>> seeds;
  for (const auto& ev : events) {
    int k = ev.k - 1;
    switch (ev.kind) {
      case MorseEvent::Cup: {
        if (k < 0 || k > static_cast<int>(open.size())) throw std::invalid_argument("cup position out of range");
        int j = g.add_joint();
        open.insert(open.begin() + k, {g.port(j, 0), g.port(j, 1)});
        break;
      }
      case MorseEvent::Cap: {
        if (k < 0 || k + 1 >= static_cast<int>(open.size())) throw std::invalid_argument("cap position out of range");
        int j = g.add_joint();
        g.connect(open[k], g.port(j, 0), false);
        g.connect(open[k + 1], g.port(j, 1), false);
        open.erase(open.begin() + k, open.begin() + k + 2);
        seeds.push_back({ev.tag, g.port(j, 0)});
        break;
      }
      case MorseEvent::Cross: {
        if (k < 0 || k + 1 >= static_cast<int>(open.size())) throw std::invalid_argument("crossing position out of range");
        int c = g.add_crossing(ev.letter);
        g.connect(open[k], g.port(c, BL), false);
        g.connect(open[k + 1], g.port(c, BR), false);
        open[k] = g.port(c, TL);
        open[k + 1] = g.port(c, TR);
        break;
      }
    }
  }
  if (!open.empty()) throw std::invalid_argument("Morse events leave open strands");
  std::stable_sort(seeds.begin(), seeds.end(), [](auto a, auto b) { return a.first < b.first; });
  std::vector<int> seed_ports;
  for (auto [tag, pt] : seeds) seed_ports.push_back(pt);
  return finalize(g, seed_ports, provenance);
}

std::vector<MorseEvent> cap_events(const std::vector<Arc>& base, int n) {
  std::vector<Arc> arcs = base;
  for (const auto& a : arcs)
    if (!a.is_semicircle()) throw std::invalid_argument("cap base must consist of semicircles");
  std::stable_sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) { return a.q - a.p < b.q - b.p; });
  std::vector<int> pos(n);
  std::iota(pos.begin(), pos.end(), 1);
  std::vector<MorseEvent> ev;
  for (const auto& a : arcs) {
    auto ia = std::find(pos.begin(), pos.end(), a.p) - pos.begin();
    auto ib = std::find(pos.begin(), pos.end(), a.q) - pos.begin();
    if (ia >= static_cast<long>(pos.size()) || ib >= static_cast<long>(pos.size()))
      throw std::invalid_argument("cap base is not a matching");
    // the right leg moves left, over the legs in between for upper arcs
    for (long t = ib; t > ia + 1; --t) {
      ev.push_back({MorseEvent::Cross, static_cast<int>(t), a.first == Half::Upper ? 1 : -1, 0});
      std::swap(pos[t - 1], pos[t]);
    }
    ev.push_back({MorseEvent::Cap, static_cast<int>(ia) + 1, 0, a.p});
    pos.erase(pos.begin() + ia, pos.begin() + ia + 2);
  }
  if (!pos.empty()) throw std::invalid_argument("cap base leaves unmatched points");
  return ev;
}

std::vector<MorseEvent> cup_events(const std::vector<Arc>& base, int n) {
  auto caps = cap_events(base, n);
  std::vector<MorseEvent> ev;
  for (auto it = caps.rbegin(); it != caps.rend(); ++it) {
    MorseEvent e = *it;
    if (e.kind == MorseEvent::Cap) {
      e.kind = MorseEvent::Cup;
      e.tag = 0;
    } else {
      e.letter = -e.letter;
    }
    ev.push_back(e);
  }
  return ev;
}

namespace {

Presentation presentation_of(const ArcSystem& s) {
  if (s.presentation) return *s.presentation;
  if (s.is_half_plane()) return {BraidWord{s.n, {}}, s.arcs};
  throw std::invalid_argument("matching has no braid presentation over a half-plane base");
}

void push_letters(std::vector<MorseEvent>& ev, const BraidWord& w) {
  for (auto l : w.letters) ev.push_back({MorseEvent::Cross, l.k, l.sign, 0});
}

}  // namespace

LinkDiagram plat_closure(const ArcSystem& top, const BraidWord& b, const ArcSystem& bottom) {
  validate(b);
  if (top.n != b.strands || bottom.n != b.strands)
    throw std::invalid_argument("plat: braid has " + std::to_string(b.strands) + " strands, matchings have " +
                                std::to_string(top.n) + " and " + std::to_string(bottom.n) + " points");
  if (!top.is_matching() || !bottom.is_matching()) throw std::invalid_argument("plat: inputs must be matchings");
  auto pt = presentation_of(top), pb = presentation_of(bottom);
  std::vector<MorseEvent> ev = cup_events(pb.base, b.strands);
  push_letters(ev, pb.word);
  push_letters(ev, b);
  push_letters(ev, inverse(pt.word));
  auto caps = cap_events(pt.base, b.strands);
  ev.insert(ev.end(), caps.begin(), caps.end());
  return morse_diagram(ev, "plat");
}

}  // namespace khs
