#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "khslice/diagram.hpp"

namespace khs {

struct AbelianGroup {
  long rank = 0;
  std::vector<long long> torsion;  // sorted prime powers
  bool zero() const { return rank == 0 && torsion.empty(); }
  bool operator==(const AbelianGroup&) const = default;
  std::string str() const;
};

using BigradedGroup = std::map<std::pair<int, int>, AbelianGroup>;  // (i, j)
using GradedGroup = std::map<int, AbelianGroup>;

// Laurent polynomial in t^(1/2); keys are exponents in half units
struct Laurent {
  std::map<int, long long> c;

  void add(int half_exp, long long v);
  Laurent shifted(int half_exp) const;
  Laurent operator+(const Laurent& o) const;
  Laurent operator-(const Laurent& o) const;
  bool is_zero() const { return c.empty(); }
  bool operator==(const Laurent&) const = default;
  long long at_one() const;
  std::string str() const;
};

struct Triplet {
  int row;
  int col;
  long long val;
};

struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Triplet> entries;  // sorted by column, then row
};

struct SmithResult {
  long rank = 0;
  std::vector<long long> factors;  // nonunit diagonal entries split into prime powers, sorted
};

SmithResult smith(const SparseMatrix& m);
std::vector<long long> prime_powers(long long n);

struct ChainComplex {
  int n_plus = 0;
  int n_minus = 0;
  struct Slice {
    int j = 0;
    int imin = 0;
    std::vector<long> dims;          // dims[t] = rank of C^{imin+t, j}
    std::vector<SparseMatrix> d;     // d[t]: C^{imin+t} -> C^{imin+t+1}
  };
  std::vector<Slice> slices;
  long total_rank() const;
};

struct CubeOptions {
  bool check_d_squared = true;
  int workers = 0;  // 0: KHSLICE_THREADS or hardware concurrency
};

ChainComplex build_cube(const LinkDiagram& d, const CubeOptions& opt = {});
BigradedGroup integral_homology(const ChainComplex& c, int workers = 0);
BigradedGroup khovanov(const LinkDiagram& d, const CubeOptions& opt = {});

Laurent euler_characteristic_q(const BigradedGroup& kh);  // exponents are plain powers of q
Laurent jones(const BigradedGroup& kh, int components);
GradedGroup collapse(const BigradedGroup& kh);
long euler_of_collapse(const GradedGroup& g);

struct SkeinReport {
  int crossing = 0;
  int sign = 0;
  int v = 0;
  Laurent v_diagram;
  Laurent v_oriented;
  Laurent v_unoriented;
  Laurent residual;
  bool holds = false;
};

struct LesReport {
  int crossing = 0;
  int sign = 0;
  int v = 0;
  bool inequalities_hold = true;
  bool euler_holds = true;
  std::vector<std::string> failures;
  bool holds() const { return inequalities_hold && euler_holds; }
};

SkeinReport skein_check(const LinkDiagram& d, int crossing);
LesReport les_rank_check(const LinkDiagram& d, int crossing);

}  // namespace khs
