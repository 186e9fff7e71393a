#pragma once

#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace khs {

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// (k, +1) is s_k, (k, -1) its inverse; 1 <= k < strands
struct Letter {
  int k = 1;
  int sign = 1;
  bool operator==(const Letter&) const = default;
};

struct BraidWord {
  int strands = 1;
  std::vector<Letter> letters;
  bool operator==(const BraidWord&) const = default;
  int length() const { return static_cast<int>(letters.size()); }
};

struct ClosurePermutation {
  std::vector<int> perm;  // perm[i]: top position of the strand starting at bottom position i (0-based)
  int components = 0;
};

struct MarkovMove {
  enum Kind { Conjugate, StabilizePlus, StabilizeMinus, Destabilize };
  Kind kind = Conjugate;
  int k = 1;
  int sign = 1;
};

BraidWord parse_braid(std::string_view text);
std::string format_braid(const BraidWord& b);
std::string format_move(const MarkovMove& mv);

// reads one braid per nonblank line, '#' starts a comment
std::vector<BraidWord> read_braid_file(const std::string& path);
std::vector<BraidWord> parse_braid_list(std::string_view text);

void validate(const BraidWord& b);

int writhe(const BraidWord& b);
ClosurePermutation closure_permutation(const BraidWord& b);
std::vector<int> compose(const std::vector<int>& first, const std::vector<int>& second);
int cycle_count(const std::vector<int>& perm);

BraidWord free_reduce(const BraidWord& b);
BraidWord markov_move(const BraidWord& b, const MarkovMove& mv);
BraidWord double_braid(const BraidWord& b);
BraidWord inverse(const BraidWord& b);
BraidWord reversed(const BraidWord& b);
BraidWord concat(const BraidWord& a, const BraidWord& b);
BraidWord add_trivial_strand(const BraidWord& b);

// positive half twist Delta on n strands
BraidWord half_twist(int n);

bool can_destabilize(const BraidWord& b);

// uniform strand count in 1..max_strands, length in 0..max_letters
BraidWord random_braid(std::mt19937_64& rng, int max_strands, int max_letters);

struct MarkovStep {
  MarkovMove move;
  BraidWord result;  // freely reduced
};

struct MarkovLimits {
  int max_letters = 12;
  int max_strands = 6;
};

// n random moves, each followed by free reduction; moves that would leave the
// limits are not drawn (conjugating by the first letter always fits)
std::vector<MarkovStep> random_markov_moves(const BraidWord& b, int n, std::mt19937_64& rng,
                                            const MarkovLimits& lim = {});
std::string format_trace(const BraidWord& start, const std::vector<MarkovStep>& steps);

}  // namespace khs
