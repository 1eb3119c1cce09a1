#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rlab/nat.hpp"
#include "rlab/program.hpp"

namespace rlab::machines {

enum class Move { Left, Right };

struct Action {
  bool stop = true;
  bool write = false;
  Move move = Move::Right;
  std::uint32_t next = 0;
};

struct TmProgram {
  // table[state][bit]
  std::vector<std::array<Action, 2>> table;
  std::uint32_t states() const { return static_cast<std::uint32_t>(table.size()); }
};

// One line per (state, bit): "s b -> W m s'" with W in {0,1}, m in {L,R}, or
// "s b -> STOP". Every pair must be given exactly once. '#' starts a comment.
TmProgram parse_tm(std::string_view text);
std::string print_tm(const TmProgram& p);

struct TmConfiguration {
  std::set<std::int64_t> ones;
  std::int64_t head = 0;
  std::uint32_t state = 0;
  bool halted = false;
};

struct TmOutcome {
  enum class Kind { Converged, OutOfFuel, Malformed };
  Kind kind = Kind::OutOfFuel;
  Nat value;
  std::uint64_t steps = 0;
  TmConfiguration final;
};

// Input n: ones at positions 1..n, head at 0, state 0. A step is one executed
// write-move transition. On STOP the output is the length of the block of ones
// starting right of the head; any other 1 except under the head makes the
// output malformed.
TmOutcome tm_run(const TmProgram& p, std::uint64_t n, std::uint64_t fuel);

class RangeExceeded : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Guarded to m <= 3, n <= 10.
Nat ackermann(std::uint64_t m, std::uint64_t n);

using rlab::is_primitive_recursive;

}  // namespace rlab::machines
