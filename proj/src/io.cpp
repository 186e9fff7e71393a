#include "khslice/io.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace khs {

json group_json(const AbelianGroup& g) { return {{"rank", g.rank}, {"torsion", g.torsion}}; }

std::string jones_key(int half_exp) { return "t^(" + std::to_string(half_exp) + "/2)"; }

json kh_json(const BigradedGroup& kh, int components) {
  json out;
  json bi = json::array();
  for (const auto& [ij, g] : kh) bi.push_back({{"i", ij.first}, {"j", ij.second}, {"rank", g.rank}, {"torsion", g.torsion}});
  json col = json::array();
  for (const auto& [k, g] : collapse(kh)) col.push_back({{"k", k}, {"rank", g.rank}, {"torsion", g.torsion}});
  json jo = json::object();
  for (const auto& [e, v] : jones(kh, components).c) jo[jones_key(e)] = v;
  out["bigraded"] = std::move(bi);
  out["collapsed"] = std::move(col);
  out["jones"] = std::move(jo);
  return out;
}

json slice_json(const SliceMatrix& y) {
  json blocks = json::array();
  for (const auto& b : y.blocks) {
    json e = json::array();
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) e.push_back({b(r, c).real(), b(r, c).imag()});
    blocks.push_back(std::move(e));
  }
  return {{"m", y.m}, {"blocks", std::move(blocks)}};
}

SliceMatrix slice_from_json(const json& j) {
  int m = j.at("m").get<int>();
  if (m < 1) throw std::invalid_argument("slice json: m must be positive");
  const auto& blocks = j.at("blocks");
  if (!blocks.is_array() || static_cast<int>(blocks.size()) != m)
    throw std::invalid_argument("slice json: expected " + std::to_string(m) + " blocks");
  SliceMatrix y = SliceMatrix::zero(m);
  for (int i = 0; i < m; ++i) {
    const auto& e = blocks[i];
    if (!e.is_array() || e.size() != 4) throw std::invalid_argument("slice json: block " + std::to_string(i) + " needs 4 entries");
    for (int k = 0; k < 4; ++k) {
      if (!e[k].is_array() || e[k].size() != 2)
        throw std::invalid_argument("slice json: entries are [re, im] pairs");
      y.blocks[i](k / 2, k % 2) = cplx(e[k][0].get<double>(), e[k][1].get<double>());
    }
  }
  y.validate();
  return y;
}

json diagram_json(const LinkDiagram& d) {
  json cr = json::array();
  for (int c = 0; c < d.size(); ++c) {
    const auto& x = d.crossings[c];
    cr.push_back({{"index", c}, {"letter", x.letter}, {"sign", d.sign(c)}, {"edges", x.edge}});
  }
  json ed = json::array();
  for (std::size_t e = 0; e < d.edges.size(); ++e) {
    const auto& x = d.edges[e];
    ed.push_back({{"id", e}, {"tail", {x.tail.crossing, x.tail.port}}, {"head", {x.head.crossing, x.head.port}}});
  }
  return {{"provenance", d.provenance},
          {"components", d.components()},
          {"writhe", d.n_plus() - d.n_minus()},
          {"free_loops", d.free_loops},
          {"crossings", std::move(cr)},
          {"edges", std::move(ed)}};
}

json checks_json(const std::vector<Check>& checks) {
  json a = json::array();
  for (const auto& c : checks) a.push_back({{"name", c.name}, {"pass", c.pass}, {"soft", c.soft}, {"detail", c.detail}});
  return a;
}

std::string kh_table(const BigradedGroup& kh) {
  std::ostringstream os;
  os << std::setw(5) << "i" << std::setw(6) << "j" << "  group\n";
  for (const auto& [ij, g] : kh) os << std::setw(5) << ij.first << std::setw(6) << ij.second << "  " << g.str() << "\n";
  return os.str();
}

std::string collapsed_table(const GradedGroup& g) {
  std::ostringstream os;
  os << std::setw(5) << "k" << "  group\n";
  for (const auto& [k, x] : g) os << std::setw(5) << k << "  " << x.str() << "\n";
  return os.str();
}

std::string checks_table(const std::vector<Check>& checks) {
  std::size_t w = 4;
  for (const auto& c : checks) w = std::max(w, c.name.size());
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.pass ? "PASS  " : c.soft ? "WARN  " : "FAIL  ") << std::left << std::setw(static_cast<int>(w)) << c.name;
    if (!c.detail.empty()) os << "  " << c.detail;
    os << "\n";
  }
  return os.str();
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

}  // namespace

void write_cloud_csv(std::ostream& os, const Cloud& c) {
  os << std::setprecision(17);
  os << "index,u,v,a_re,a_im,b_re,b_im,c_re,c_im\n";
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    os << i << ",";
    if (i < c.params.size()) os << c.params[i](0) << "," << c.params[i](1);
    else os << ",";
    for (int k = 0; k < 3; ++k) os << "," << c.points[i](k).real() << "," << c.points[i](k).imag();
    os << "\n";
  }
}

void write_points_csv(std::ostream& os, const std::vector<cplx>& pts) {
  os << std::setprecision(17);
  os << "index,re,im\n";
  for (std::size_t i = 0; i < pts.size(); ++i) os << i << "," << pts[i].real() << "," << pts[i].imag() << "\n";
}

void write_checks_csv(std::ostream& os, const std::vector<Check>& checks) {
  os << "name,pass,soft,detail\n";
  for (const auto& c : checks) os << csv_field(c.name) << "," << (c.pass ? 1 : 0) << "," << (c.soft ? 1 : 0) << "," << csv_field(c.detail) << "\n";
}

}  // namespace khs
