#pragma once

#include <string>
#include <vector>

namespace khs {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
  bool soft = false;  // a failure only warns
};

inline bool all_pass(const std::vector<Check>& v) {
  for (const auto& c : v)
    if (!c.pass && !c.soft) return false;
  return true;
}

}  // namespace khs
