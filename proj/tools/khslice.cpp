#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "khslice/braid.hpp"
#include "khslice/curves.hpp"
#include "khslice/diagram.hpp"
#include "khslice/homology.hpp"
#include "khslice/io.hpp"
#include "khslice/slice.hpp"
#include "khslice/transport.hpp"

using namespace khs;

namespace {

struct Global {
  std::string format = "text";
  std::string out;
  std::uint64_t seed = 1;
  double tol = 1e-4;
  int samples = 200;
  int max_crossings = 18;
};

struct Output {
  json j;
  std::string text;
  std::string csv;
  bool pass = true;
};

std::string fmt_num(double x) {
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

void guard(const BraidWord& b, const Global& g) {
  if (b.length() > g.max_crossings)
    throw std::runtime_error(format_braid(b) + " has " + std::to_string(b.length()) +
                             " crossings, above the limit of " + std::to_string(g.max_crossings) +
                             " (raise it with --max-crossings)");
}

std::string torsion_str(const std::vector<long long>& t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? ";" : "") + std::to_string(t[i]);
  return s;
}

// ---- kh

struct KhRecord {
  BraidWord b;
  BigradedGroup kh;
  int components = 0;
  bool euler_ok = false;
};

KhRecord compute_kh(const BraidWord& b, const Global& g) {
  guard(b, g);
  KhRecord r{b, {}, 0, false};
  auto d = braid_closure_diagram(b);
  r.kh = khovanov(d);
  r.components = d.components();
  r.euler_ok = std::llabs(euler_of_collapse(collapse(r.kh))) == (1LL << r.components);
  return r;
}

void render_kh(const KhRecord& r, Output& o, bool with_header) {
  int w = writhe(r.b);
  json j;
  j["braid"] = format_braid(r.b);
  j["strands"] = r.b.strands;
  j["crossings"] = r.b.length();
  j["writhe"] = w;
  j["components"] = r.components;
  j["shift"] = r.b.strands + w;
  json groups = kh_json(r.kh, r.components);
  for (auto& [k, v] : groups.items()) j[k] = v;
  j["euler_magnitude_ok"] = r.euler_ok;
  o.j.push_back(j);

  std::ostringstream t;
  t << "braid       " << format_braid(r.b) << "\n"
    << "strands     " << r.b.strands << "\n"
    << "crossings   " << r.b.length() << "\n"
    << "writhe      " << w << "\n"
    << "components  " << r.components << "\n"
    << "shift m+w   " << r.b.strands + w << "\n\n"
    << "Khovanov homology\n"
    << kh_table(r.kh) << "\ncollapsed, k = i - j\n"
    << collapsed_table(collapse(r.kh)) << "\nJones  " << jones(r.kh, r.components).str() << "\n"
    << "|chi| = 2^components  " << (r.euler_ok ? "PASS" : "FAIL") << "\n";
  if (!o.text.empty()) o.text += "\n";
  o.text += t.str();

  std::ostringstream c;
  if (with_header) c << "braid,grading,i,j,rank,torsion\n";
  for (const auto& [ij, x] : r.kh)
    c << format_braid(r.b) << ",ij," << ij.first << "," << ij.second << "," << x.rank << "," << torsion_str(x.torsion)
      << "\n";
  for (const auto& [k, x] : collapse(r.kh))
    c << format_braid(r.b) << ",k," << k << ",," << x.rank << "," << torsion_str(x.torsion) << "\n";
  o.csv += c.str();
  o.pass = o.pass && r.euler_ok;
}

Output cmd_kh(const std::string& text, const std::string& file, const std::string& dump, const Global& g) {
  std::vector<BraidWord> braids;
  if (!file.empty()) braids = read_braid_file(file);
  if (!text.empty()) braids.push_back(parse_braid(text));
  if (braids.empty()) throw std::runtime_error("kh: give a braid or --file");
  if (!dump.empty()) {
    std::ofstream f(dump);
    if (!f) throw std::runtime_error("cannot write " + dump);
    json all = json::array();
    for (const auto& b : braids) all.push_back(diagram_json(braid_closure_diagram(b)));
    f << (all.size() == 1 ? all[0] : all).dump(2) << "\n";
  }
  Output o;
  o.j = json::array();
  bool first = true;
  for (const auto& b : braids) {
    render_kh(compute_kh(b, g), o, first);
    first = false;
  }
  if (o.j.size() == 1) o.j = o.j[0];
  return o;
}

// ---- markov

Output cmd_markov(const std::string& text, int moves, const Global& g) {
  if (moves < 0) throw std::runtime_error("--moves must be nonnegative");
  BraidWord b = parse_braid(text);
  guard(b, g);
  std::mt19937_64 rng(g.seed);
  MarkovLimits lim;
  lim.max_letters = std::min(g.max_crossings, std::max(12, b.length() + 2));
  auto steps = random_markov_moves(b, moves, rng, lim);
  auto ref = compute_kh(b, g).kh;

  Output o;
  json trace = json::array();
  std::ostringstream t, c;
  c << "step,move,braid,equal\n";
  c << "0,," << format_braid(b) << ",1\n";
  int first_bad = -1;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    guard(steps[i].result, g);
    bool eq = khovanov(braid_closure_diagram(steps[i].result)) == ref;
    if (!eq && first_bad < 0) first_bad = static_cast<int>(i) + 1;
    o.pass = o.pass && eq;
    trace.push_back({{"move", format_move(steps[i].move)}, {"braid", format_braid(steps[i].result)}, {"equal", eq}});
    c << i + 1 << "," << format_move(steps[i].move) << "," << format_braid(steps[i].result) << "," << (eq ? 1 : 0)
      << "\n";
  }
  o.j = {{"braid", format_braid(b)}, {"seed", g.seed}, {"moves", moves}, {"trace", trace}, {"pass", o.pass}};
  t << "braid  " << format_braid(b) << "\nseed   " << g.seed << "\nmoves  " << moves << "\n";
  if (o.pass) {
    t << "PASS  bigraded groups unchanged after every move\n";
  } else {
    t << "FAIL  groups differ after move " << first_bad << "\ntrace\n  " << format_trace(b, steps) << "\n";
  }
  o.text = t.str();
  o.csv = c.str();
  return o;
}

// ---- curves

Output cmd_curves(const std::string& text, const std::string& braid, const std::string& other,
                  const std::vector<int>& slide_args) {
  ArcSystem s = parse_arc_system(text);
  json j;
  j["input"] = format_arc_system(s);
  if (!slide_args.empty()) {
    if (slide_args.size() != 2) throw std::runtime_error("--slide takes OVER,MOVING arc indices");
    s = slide(s, slide_args[0], slide_args[1]);
    j["slide"] = slide_args;
  }
  if (!braid.empty()) {
    BraidWord b = parse_braid(braid);
    if (b.strands < s.n) b.strands = s.n;
    s = act(b, s);
    j["braid"] = format_braid(b);
  }
  j["result"] = format_arc_system(s);
  std::ostringstream t;
  t << format_arc_system(s) << "\n";
  std::ostringstream c;
  c << "arc,p,q,half,crossings\n";
  for (std::size_t i = 0; i < s.arcs.size(); ++i) {
    const auto& a = s.arcs[i];
    std::string cr;
    for (std::size_t k = 0; k < a.cross.size(); ++k) cr += (k ? ";" : "") + std::to_string(a.cross[k]);
    c << i << "," << a.p << "," << a.q << "," << (a.first == Half::Upper ? "+" : "-") << "," << cr << "\n";
  }
  if (!other.empty()) {
    auto ic = intersection(s, parse_arc_system(other));
    j["intersection"] = {{"endpoints", ic.endpoint_count}, {"interior", ic.interior_count}, {"degenerate", ic.degenerate}};
    t << "intersection (" << ic.endpoint_count << "," << ic.interior_count << ")" << (ic.degenerate ? " degenerate" : "")
      << "\n";
  }
  Output o;
  o.j = j;
  o.text = t.str();
  o.csv = c.str();
  return o;
}

// ---- batteries

Output from_checks(const std::vector<Check>& checks, json extra = json::object()) {
  Output o;
  o.pass = all_pass(checks);
  o.j = std::move(extra);
  o.j["checks"] = checks_json(checks);
  o.j["pass"] = o.pass;
  o.text = checks_table(checks);
  std::ostringstream c;
  write_checks_csv(c, checks);
  o.csv = c.str();
  return o;
}

Output cmd_slice_verify(const Global& g) {
  return from_checks(slice_battery(g.seed, g.samples), {{"seed", g.seed}, {"samples", g.samples}});
}

Output cmd_slice_spectrum(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  SliceMatrix y = slice_from_json(json::parse(f));
  auto s = adjoint_quotient(y);
  auto cp = char_poly(y);
  Output o;
  json ev = json::array(), poly = json::array();
  std::ostringstream t, c;
  c << "index,re,im\n";
  t << "eigenvalues\n";
  for (int k = 0; k < s.values.size(); ++k) {
    ev.push_back({s.values(k).real(), s.values(k).imag()});
    t << "  " << fmt_num(s.values(k).real()) << (s.values(k).imag() < 0 ? " - " : " + ")
      << fmt_num(std::abs(s.values(k).imag())) << "i\n";
    c << k << "," << fmt_num(s.values(k).real()) << "," << fmt_num(s.values(k).imag()) << "\n";
  }
  for (int k = 0; k < cp.size(); ++k) poly.push_back({cp(k).real(), cp(k).imag()});
  t << "residual " << fmt_num(s.residual) << (s.warning() ? "  (warning: ill-conditioned)" : "") << "\n";
  o.j = {{"m", y.m}, {"eigenvalues", ev}, {"char_poly", poly}, {"residual", s.residual}, {"warning", s.warning()}};
  o.text = t.str();
  o.csv = c.str();
  return o;
}

void dump_csv(const std::string& path, const std::function<void(std::ostream&)>& fn) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  fn(f);
}

Output cmd_a1(double t, const std::string& points, const Global& g) {
  if (!(t > 0)) throw std::runtime_error("--t must be positive");
  auto checks = a1_battery(t, g.samples, g.tol);
  dump_csv(points, [&](std::ostream& os) {
    Cloud c = vanishing_cycle(t, g.samples);
    write_cloud_csv(os, transport(Model::a1(), TransportPath::arc(0.0, t, 0.0, 2 * M_PI), c));
  });
  return from_checks(checks, {{"t", t}, {"samples", g.samples}, {"tol", g.tol}});
}

Output cmd_a2(double d, double eps, int power, const std::string& points, const std::string& proj, const Global& g) {
  A2Report r = a2_monodromy(d, eps, power, g.samples);
  dump_csv(points, [&](std::ostream& os) { write_cloud_csv(os, r.cloud); });
  dump_csv(proj, [&](std::ostream& os) { write_points_csv(os, r.projection); });
  json extra = {{"d", d},
                {"eps", eps},
                {"power", power},
                {"samples", g.samples},
                {"arc", format_arc(r.arc)},
                {"expected", format_arc(r.expected)},
                {"pattern", {r.pattern.endpoint_count, r.pattern.interior_count}},
                {"max_bc_gap", r.max_bc_gap},
                {"fiber_residual", r.fiber_residual}};
  Output o = from_checks(a2_checks(r, g.tol), extra);
  o.text = "arc " + format_arc(r.arc) + ", intersection pattern with alpha (" + std::to_string(r.pattern.endpoint_count) +
           "," + std::to_string(r.pattern.interior_count) + ")\n" + o.text;
  return o;
}

Output cmd_maslov() {
  std::vector<Check> checks;
  json idx = json::object();
  for (int sign : {1, -1}) {
    auto r = maslov_markov(sign);
    int want = sign > 0 ? 0 : 2;
    std::string name = sign > 0 ? "II+" : "II-";
    idx[name] = r.index;
    checks.push_back({"Maslov index for Markov " + name + " is " + std::to_string(want), r.index == want,
                      "got " + std::to_string(r.index) + ", asymmetry " + fmt_num(r.asymmetry)});
  }
  return from_checks(checks, {{"index", idx}});
}

void emit(const Output& o, const Global& g) {
  std::string body;
  if (g.format == "json") body = o.j.dump(2) + "\n";
  else if (g.format == "csv") body = o.csv;
  else body = o.text;
  if (g.out.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw std::runtime_error("cannot write " + g.out);
  f << body;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Khovanov homology of braid closures and numerical checks of the symplectic model"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--format", g.format, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--out", g.out, "write the report here instead of stdout");
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--tol", g.tol, "tolerance for the numerical checks")->check(CLI::PositiveNumber);
  app.add_option("--samples", g.samples, "sample count")->check(CLI::Range(8, 10000000));
  app.add_option("--max-crossings", g.max_crossings, "refuse larger diagrams")->check(CLI::PositiveNumber);

  std::string braid, file, dump;
  auto* kh = app.add_subcommand("kh", "Khovanov homology, collapse and Jones polynomial of a braid closure");
  kh->add_option("braid", braid, "braid word, e.g. \"2: 1 1 1\"");
  kh->add_option("--file", file, "one braid per line");
  kh->add_option("--dump-diagram", dump, "write the crossing data as JSON");

  int moves = 6;
  auto* mk = app.add_subcommand("markov", "apply random Markov moves and compare the homology");
  mk->add_option("braid", braid, "braid word")->required();
  mk->add_option("--moves", moves, "number of moves");

  std::string system, act_braid, other;
  std::vector<int> slide_args;
  auto* cv = app.add_subcommand("curves", "act on arc systems in the punctured disc");
  cv->add_option("system", system, "e.g. \"2; (1,4)+ (2,3)+\"")->required();
  cv->add_option("--braid", act_braid, "braid acting on the system");
  cv->add_option("--intersect", other, "report the intersection pattern with this system");
  cv->add_option("--slide", slide_args, "slide arc MOVING over arc OVER")->delimiter(',')->expected(2);

  std::string json_path;
  auto* sl = app.add_subcommand("slice", "nilpotent slice checks");
  sl->require_subcommand(1);
  auto* slv = sl->add_subcommand("verify", "run the slice property battery");
  auto* sls = sl->add_subcommand("spectrum", "eigenvalues of a slice matrix given as JSON");
  sls->add_option("file", json_path)->required()->check(CLI::ExistingFile);

  double t = 1.0, d = 1.0, eps = 1e-3;
  int power = 1;
  std::string points, proj;
  auto* geom = app.add_subcommand("geom", "numerical geometry batteries");
  geom->require_subcommand(1);
  auto* gslice = geom->add_subcommand("slice", "slice property battery");
  auto* ga1 = geom->add_subcommand("a1", "A1 transport and monodromy");
  ga1->add_option("--t", t, "base point");
  ga1->add_option("--points", points, "CSV dump of the cycle after one loop");
  auto* ga2 = geom->add_subcommand("a2", "A2 monodromy along circles around zeta^+");
  ga2->add_option("--d", d, "parameter d > 0");
  ga2->add_option("--eps", eps, "distance of the base point from zeta^-");
  ga2->add_option("--power", power, "signed number of circles");
  ga2->add_option("--points", points, "CSV dump of the transported cycle");
  ga2->add_option("--projection", proj, "CSV dump of the a-projection of the transported meridian");
  auto* gm = geom->add_subcommand("maslov", "Maslov indices for Markov II");
  auto* gall = geom->add_subcommand("all", "every transport check");

  CLI11_PARSE(app, argc, argv);

  try {
    Output o;
    if (*kh) o = cmd_kh(braid, file, dump, g);
    else if (*mk) o = cmd_markov(braid, moves, g);
    else if (*cv) o = cmd_curves(system, act_braid, other, slide_args);
    else if (*slv || *gslice) o = cmd_slice_verify(g);
    else if (*sls) o = cmd_slice_spectrum(json_path);
    else if (*ga1) o = cmd_a1(t, points, g);
    else if (*ga2) o = cmd_a2(d, eps, power, points, proj, g);
    else if (*gm) o = cmd_maslov();
    else if (*gall) o = from_checks(transport_battery(g.seed, g.samples), {{"seed", g.seed}, {"samples", g.samples}});
    emit(o, g);
    return o.pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
