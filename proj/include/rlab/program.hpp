#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rlab/nat.hpp"

namespace rlab {

// Node kinds. Tags 0..6 are the mu-recursive schemata plus the oracle query;
// Const and Builtin carry primitives the interpreter runs in one step.
enum class Tag : std::uint8_t { Zero = 0, Succ = 1, Proj = 2, Comp = 3, PrimRec = 4, Mu = 5, Oracle = 6, Const = 7, Builtin = 8 };

enum class Op : std::uint8_t {
  Add = 0,
  Monus,
  Mul,
  Div,       // a / b, 0 when b = 0
  Mod,       // a % b, a when b = 0
  Eq,        // 1 if a = b else 0
  Lt,        // 1 if a < b else 0
  Select,    // (c, a, b) -> c != 0 ? a : b  (strict)
  Sg,        // 0 -> 0, else 1
  Pair,      // Cantor pairing
  Left,
  Right,
  Bit,       // (n, i) -> bit i of n
  SetBit,    // (n, i) -> n | 2^i
  Card,      // popcount
  ListGet,   // (L, i) -> i-th element of list code L (0-based), 0 off range or malformed
  ListLen,
  ListCons,  // (x, L) -> <x, L...>
  ListMake,  // param k: (x1..xk) -> <x1..xk>
  Univ,      // param k: (p, x1..xk) -> phi_p(x1..xk)
  StepEval,  // param k: (p, s, x1..xk) -> 0 if phi_{p,s}(x) diverges, else value + 1
  StepRel,   // param k: (p, s, a, x1..xk) -> as StepEval, oracle answered by W_{a,s}
  UnivRel,   // param k: (p, q, x1..xk) -> phi_p(x) with oracle z -> phi_q(z) != 0
  Smn,       // param m: (p, y1..ym) -> index of smn(p, y1..ym)
  SeqAdd,    // (x, S) -> S with x appended (sequence code, see coding.hpp)
  SeqHas,    // (x, S) -> 1 if x occurs in S
  SeqLen,
  SeqGet,    // (S, i) -> i-th element, 0 off range
  IvHas,     // (x, I) -> 1 if x is in the interval set with code I
  IvCard,
  IvGet,     // (I, i) -> i-th member in ascending order, 0 off range
  Count_
};

struct OpInfo {
  Op op;
  std::string_view name;
  bool parametric;
  // argument count: fixed, or param + extra for parametric ops
  std::uint32_t fixed_or_extra;
};

const OpInfo& op_info(Op op);
std::optional<Op> op_by_name(std::string_view name);
std::uint32_t op_arity(Op op, std::uint32_t param);

struct Node;
using Program = std::shared_ptr<const Node>;

struct Node {
  Tag tag = Tag::Zero;
  std::uint32_t k = 0;  // Proj arity, or Builtin parameter
  std::uint32_t i = 0;  // Proj position (1-based)
  Op op = Op::Add;
  Nat value;            // Const
  std::vector<Program> kids;  // Comp: h, g1..gn; PrimRec/Mu: g
  std::uint32_t reads = 0;    // number of leading arguments the node can read
  std::uint64_t size = 1;     // node count
  std::uint32_t depth = 1;
};

// Constructors. Nodes are immutable and shared.
Program zero();
Program succ();
Program proj(std::uint32_t k, std::uint32_t i);
Program comp(Program h, std::vector<Program> gs);
Program primrec(Program g);
Program mu(Program g);
Program oracle();
Program konst(const Nat& c);
Program builtin(Op op, std::uint32_t param = 0);

// Mu(Comp(Succ, [Proj(2,1)])): the denotation of every malformed code.
Program divergent();

bool equal(const Program& a, const Program& b);
bool is_primitive_recursive(const Program& p);

// Arity discipline for hand-built programs: Proj positions within their arity,
// Comp heads reading no more than the supplied arguments. Returns violations.
std::vector<std::string> arity_violations(const Program& p);

// Goedel numbering. Prefix-order token stream [tag, fields..., children...],
// each token t written as the Elias-gamma code of t+1, the bit string read as
// a bijective base-2 numeral. Decoding parses one program from the front and
// ignores trailing bits; anything unparsable denotes divergent().
Nat encode(const Program& p);
Program decode(const Nat& code);
// Decode that reports malformed codes instead of substituting divergent().
std::optional<Program> try_decode(const Nat& code);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// (zero) (succ) (proj k i) (comp h g1 .. gk) (primrec g) (mu g) (oracle)
// (const c) and builtins by name, e.g. (add) (univ 1) (smn 2).
Program parse_program(std::string_view text);
std::string print_program(const Program& p);

}  // namespace rlab

namespace rlab {

// Comp(p, [Const(y1)..Const(ym), Proj(r,1)..Proj(r,r)]) with r = reads(p) - m:
// the s-m-n transformation on program trees.
Program smn_ast(const Program& p, const std::vector<Nat>& ys);

}  // namespace rlab
