#include <doctest.h>

#include <random>
#include <sstream>

#include "khslice/io.hpp"

using namespace khs;

TEST_CASE("homology json") {
  auto d = braid_closure_diagram(parse_braid("2: 1 1 1"));
  auto j = kh_json(khovanov(d), 1);
  CHECK(j["bigraded"].size() == 5);
  CHECK(j["collapsed"].dump() ==
        R"j([{"k":1,"rank":1,"torsion":[]},{"k":3,"rank":2,"torsion":[]},{"k":5,"rank":0,"torsion":[2]},{"k":6,"rank":1,"torsion":[]}])j");
  CHECK(j["jones"].dump() == R"j({"t^(-8/2)":-1,"t^(-6/2)":1,"t^(-2/2)":1})j");
  auto u = kh_json(khovanov(braid_closure_diagram(parse_braid("1:"))), 1);
  CHECK(u["jones"].dump() == R"j({"t^(0/2)":1})j");
}

TEST_CASE("slice json round trip") {
  std::mt19937_64 rng(3);
  for (int m = 1; m <= 4; ++m) {
    auto y = random_slice(rng, m);
    auto back = slice_from_json(json::parse(slice_json(y).dump()));
    CHECK(back.m == m);
    CHECK(back.blocks == y.blocks);
  }
  CHECK_THROWS(slice_from_json(json::parse(R"j({"m":2,"blocks":[]})j")));
  // the first block must be trace free
  CHECK_THROWS(slice_from_json(json::parse(R"j({"m":1,"blocks":[[[1,0],[0,0],[0,0],[1,0]]]})j")));
  auto ok = slice_from_json(json::parse(R"j({"m":1,"blocks":[[[1,0],[2,1],[0,0],[-1,0]]]})j"));
  CHECK(ok.blocks[0](0, 1) == cplx(2, 1));
}

TEST_CASE("diagram json") {
  auto d = braid_closure_diagram(parse_braid("3: 1 -2 1 -2"));
  auto j = diagram_json(d);
  CHECK(j["crossings"].size() == 4);
  CHECK(j["edges"].size() == d.edges.size());
  CHECK(j["components"] == 1);
  CHECK(j["writhe"] == 0);
  for (const auto& c : j["crossings"]) CHECK(c["edges"].size() == 4);
}

TEST_CASE("tables and csv") {
  std::vector<Check> checks{{"first", true, "x, y"}, {"second", false, ""}};
  auto t = checks_table(checks);
  CHECK(t.find("PASS  first") == 0);
  CHECK(t.find("FAIL  second") != std::string::npos);
  std::ostringstream os;
  write_checks_csv(os, checks);
  CHECK(os.str() == "name,pass,soft,detail\nfirst,1,0,\"x, y\"\nsecond,0,0,\n");
  std::vector<Check> warned{{"hard", true, ""}, {"loose", false, "", true}};
  CHECK(all_pass(warned));
  CHECK(checks_table(warned).find("WARN  loose") != std::string::npos);
  CHECK(checks_json(warned)[1]["soft"] == true);
  warned.push_back({"broken", false, ""});
  CHECK_FALSE(all_pass(warned));
  Cloud c;
  c.points.push_back(Point(cplx(1, 0), cplx(0, 2), cplx(3, 0)));
  std::ostringstream cs;
  write_cloud_csv(cs, c);
  CHECK(cs.str() == "index,u,v,a_re,a_im,b_re,b_im,c_re,c_im\n0,,,1,0,0,2,3,0\n");
  auto kt = kh_table(khovanov(braid_closure_diagram(parse_braid("1:"))));
  CHECK(kt.find("Z") != std::string::npos);
}
