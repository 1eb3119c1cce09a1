#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rlab/eval.hpp"
#include "rlab/program.hpp"

namespace rlab {

// Small combinator language for building programs. An expression over n
// arguments is a program reading at most its first n arguments.
namespace dsl {

inline Program x(std::uint32_t i) { return proj(i, i); }
inline Program lit(const Nat& c) { return konst(c); }
inline Program call(Program h, std::vector<Program> args) { return comp(std::move(h), std::move(args)); }
Program op(Op o, std::vector<Program> args, std::uint32_t param = 0);

// The same expression with `by` fresh arguments inserted in front.
Program shift(const Program& e, std::uint32_t by = 1);
// Least z with body(z, x1..xn) = 0; the body sees z as x(1).
Program minimize(Program body);
// Primitive recursion f(n, xs): acc0 = step(0, 0, xs), acc_{i} = step(i, acc_{i-1}, xs).
Program fold(Program step);

Program not_(Program e);                       // 1 - sg(e)
Program eq(Program a, Program b);
Program univ(Program p, std::vector<Program> xs);
Program stepeval(Program p, Program s, std::vector<Program> xs);
Program smn_rt(Program p, std::vector<Program> ys);

}  // namespace dsl

namespace ips {

// Index-level s-m-n: phi_{smn(e, ys)}(xs) = phi_e(ys, xs).
Nat smn(const Nat& e, const std::vector<Nat>& frozen);
// An equivalent index >= lower, obtained by wrapping in identity compositions.
Nat pad(const Nat& e, const Nat& lower);

Nat prog_const(const Nat& c);
// 0 on x when phi_e(x) = target, divergent otherwise.
Nat prog_guard_eq(const Nat& e, const Nat& target);
// On n: the least t = pair(m, s) with phi_{e,s}(m) = n.
Nat prog_dovetail_search(const Nat& e);
// Finite lookup, divergent off the table.
Nat prog_case_table(const std::vector<std::pair<Nat, Nat>>& table);

// Second recursion theorem: phi_{rec_f(e)}(x) = phi_e(rec_f(e), x).
Nat rec_f(const Nat& e);
// phi_{rec_fm(e,ys)}(x1..xn) = phi_e(rec_fm(e,ys), x1..xn, ys).
Nat rec_fm(const Nat& e, const std::vector<Nat>& ys, std::uint32_t n = 1);

struct FixedPoint {
  Nat index;
  // false when the totality probe ran out of fuel
  bool certified = false;
};

// phi_{f(e)} = phi_{phi_e(f(e))} for total phi_e.
FixedPoint kleene_fp(const Nat& e, std::uint64_t fuel_hint);
// Returns F(e): phi_{phi_F(e)(z)} = phi_{phi_e(phi_F(e)(z), z)} for total phi_e.
// The probe evaluates phi_e at (phi_F(e)(probe), probe).
FixedPoint strong_fp(const Nat& e, std::uint32_t n, std::uint64_t fuel_hint, const std::vector<Nat>& probe = {});

// Fixed helper programs the constructions are assembled from.
Nat omega_index();      // phi(x) = phi_x(x)
Nat list_apply_index(std::uint32_t n);  // h1 template: (p, x1..xn) -> phi_p(seq code of x1..xn)

struct CorpusEntry {
  std::string name;
  Program program;
  Nat index;
  bool total = false;
};
// Twenty fixed programs exercising every node kind.
const std::vector<CorpusEntry>& corpus();

// Compares two computations for outcome equality. A one-sided convergence is
// rechecked at 10x + 1000 fuel before it counts as a mismatch.
struct Comparison {
  bool equal = false;
  Outcome left, right;
};
Comparison compare_outcomes(const Nat& e1, const std::vector<Nat>& a1, const Nat& e2, const std::vector<Nat>& a2,
                            std::uint64_t fuel);

}  // namespace ips
}  // namespace rlab
