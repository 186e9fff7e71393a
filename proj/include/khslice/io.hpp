#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "khslice/diagram.hpp"
#include "khslice/homology.hpp"
#include "khslice/report.hpp"
#include "khslice/slice.hpp"
#include "khslice/transport.hpp"

namespace khs {

using json = nlohmann::ordered_json;

json group_json(const AbelianGroup& g);
// {"bigraded": [...], "collapsed": [...], "jones": {"t^(p/2)": coeff}}
json kh_json(const BigradedGroup& kh, int components);
std::string jones_key(int half_exp);

// {"m": m, "blocks": [[[re, im] x 4] x m]}, entries row-major
json slice_json(const SliceMatrix& y);
SliceMatrix slice_from_json(const json& j);

json diagram_json(const LinkDiagram& d);
json checks_json(const std::vector<Check>& checks);

// plain-text tables
std::string kh_table(const BigradedGroup& kh);
std::string collapsed_table(const GradedGroup& g);
std::string checks_table(const std::vector<Check>& checks);

// one row per point: index, the two sphere parameters (blank if absent), then a, b, c as re/im pairs
void write_cloud_csv(std::ostream& os, const Cloud& c);
void write_points_csv(std::ostream& os, const std::vector<cplx>& pts);
void write_checks_csv(std::ostream& os, const std::vector<Check>& checks);

}  // namespace khs
