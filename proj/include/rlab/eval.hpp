#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rlab/program.hpp"

namespace rlab {

struct Outcome {
  enum class Kind { Converged, OutOfFuel };
  Kind kind = Kind::OutOfFuel;
  Nat value;
  std::uint64_t steps = 0;
  // 1 + the largest argument sent to the external oracle, 0 without queries.
  Nat use;

  bool converged() const { return kind == Kind::Converged; }
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

// Membership predicate of the oracle set. An empty function is the empty set.
using Oracle = std::function<bool(const Nat&)>;

struct Query {
  Nat x;
  bool answer = false;
  friend bool operator==(const Query&, const Query&) = default;
};

struct EvalOptions {
  Oracle oracle;
  // When set, every external oracle query is appended in order.
  std::vector<Query>* log = nullptr;
};

// phi_{p,fuel}(args). One step per node entry, per oracle query and per Mu
// iteration. Missing arguments read as 0; extra arguments are ignored.
Outcome run(const Program& p, const std::vector<Nat>& args, std::uint64_t fuel, const EvalOptions& opts = {});
Outcome eval(const Nat& e, const std::vector<Nat>& args, std::uint64_t fuel, const EvalOptions& opts = {});

// Cached decode shared by the interpreter.
Program decode_cached(const Nat& e);

}  // namespace rlab
