#include "rlab/ips.hpp"

#include <algorithm>

namespace rlab {

namespace dsl {

Program op(Op o, std::vector<Program> args, std::uint32_t param) { return comp(builtin(o, param), std::move(args)); }

Program shift(const Program& e, std::uint32_t by) {
  if (by == 0 || e->reads == 0) return e;
  const std::uint32_t r = e->reads;
  std::vector<Program> gs;
  gs.reserve(r);
  for (std::uint32_t j = 1; j <= r; ++j) gs.push_back(proj(by + r, by + j));
  return comp(e, std::move(gs));
}

Program minimize(Program body) { return mu(std::move(body)); }
Program fold(Program step) { return primrec(std::move(step)); }

Program not_(Program e) { return op(Op::Monus, {lit(1), op(Op::Sg, {std::move(e)})}); }
Program eq(Program a, Program b) { return op(Op::Eq, {std::move(a), std::move(b)}); }

Program univ(Program p, std::vector<Program> xs) {
  const auto k = static_cast<std::uint32_t>(xs.size());
  xs.insert(xs.begin(), std::move(p));
  return op(Op::Univ, std::move(xs), k);
}

Program stepeval(Program p, Program s, std::vector<Program> xs) {
  const auto k = static_cast<std::uint32_t>(xs.size());
  xs.insert(xs.begin(), std::move(s));
  xs.insert(xs.begin(), std::move(p));
  return op(Op::StepEval, std::move(xs), k);
}

Program smn_rt(Program p, std::vector<Program> ys) {
  const auto m = static_cast<std::uint32_t>(ys.size());
  ys.insert(ys.begin(), std::move(p));
  return op(Op::Smn, std::move(ys), m);
}

}  // namespace dsl

namespace ips {

using namespace dsl;

namespace {

constexpr std::uint64_t kConstructFuel = 1000000;

Nat run_total(const Nat& e, const std::vector<Nat>& args) {
  const Outcome out = eval(e, args, kConstructFuel);
  if (!out.converged()) throw std::logic_error("construction step did not converge");
  return out.value;
}

// G(q, z, x) = phi_q(S(z, z), x)
const Nat& g_template() {
  static const Nat code = encode(univ(x(1), {smn_rt(x(2), {x(2)}), x(3)}));
  return code;
}

// H2(e, y1..ym, p, L) = phi_e(h1(p), L[0..n-1], y1..ym)
Nat h2_template(std::uint32_t n, std::uint32_t m) {
  std::vector<Program> args;
  args.push_back(smn_rt(lit(list_apply_index(n)), {x(m + 2)}));
  for (std::uint32_t j = 0; j < n; ++j) args.push_back(op(Op::SeqGet, {x(m + 3), lit(j)}));
  for (std::uint32_t j = 1; j <= m; ++j) args.push_back(x(1 + j));
  return encode(univ(x(1), std::move(args)));
}

}  // namespace

Nat smn(const Nat& e, const std::vector<Nat>& frozen) { return encode(smn_ast(decode(e), frozen)); }

Nat pad(const Nat& e, const Nat& lower) {
  Program p = decode(e);
  Nat code;
  do {
    p = comp(proj(1, 1), {p});
    code = encode(p);
  } while (code < lower);
  return code;
}

Nat prog_const(const Nat& c) { return encode(konst(c)); }

Nat prog_guard_eq(const Nat& e, const Nat& target) {
  const Program f = decode(e);
  return encode(minimize(not_(eq(shift(call(f, {x(1)})), lit(target)))));
}

Nat prog_dovetail_search(const Nat& e) {
  const Program hit = eq(stepeval(lit(e), op(Op::Right, {x(1)}), {op(Op::Left, {x(1)})}), call(succ(), {x(2)}));
  return encode(minimize(not_(hit)));
}

Nat prog_case_table(const std::vector<std::pair<Nat, Nat>>& table) {
  std::vector<std::pair<Nat, Nat>> rows;
  for (const auto& row : table) {
    if (std::none_of(rows.begin(), rows.end(), [&](const auto& r) { return r.first == row.first; })) rows.push_back(row);
  }
  Program hit = lit(0), value = lit(0);
  for (const auto& [key, val] : rows) {
    hit = op(Op::Add, {hit, eq(x(1), lit(key))});
    value = op(Op::Add, {value, op(Op::Mul, {eq(x(1), lit(key)), lit(val)})});
  }
  // the guard diverges off the table and is 0 on it
  const Program guard = minimize(not_(shift(hit)));
  return encode(op(Op::Add, {guard, value}));
}

Nat omega_index() {
  static const Nat code = encode(univ(x(1), {x(1)}));
  return code;
}

Nat list_apply_index(std::uint32_t n) {
  // the tuple is a sequence code: nested indices stay linear in size
  Program tuple = lit(0);
  for (std::uint32_t j = 2; j <= n + 1; ++j) tuple = op(Op::SeqAdd, {x(j), tuple});
  return encode(univ(x(1), {tuple}));
}

Nat rec_f(const Nat& e) {
  const Nat g = smn(g_template(), {e});
  return smn(g, {g});
}

Nat rec_fm(const Nat& e, const std::vector<Nat>& ys, std::uint32_t n) {
  const auto m = static_cast<std::uint32_t>(ys.size());
  std::vector<Nat> frozen{e};
  frozen.insert(frozen.end(), ys.begin(), ys.end());
  const Nat h2 = smn(h2_template(n, m), frozen);
  return smn(list_apply_index(n), {rec_f(h2)});
}

FixedPoint kleene_fp(const Nat& e, std::uint64_t fuel_hint) {
  // D(x, y, z, w) = phi_{phi_x(phi_y(z))}(w); phi_{C(x,y)}(z) = S(D, x, y, z)
  static const Nat d = encode(univ(univ(x(1), {univ(x(2), {x(3)})}), {x(4)}));
  static const Nat c_prog = encode(smn_rt(lit(d), {x(1), x(2), x(3)}));
  const Nat c = smn(c_prog, {e, omega_index()});
  FixedPoint out;
  out.index = run_total(c, {c});
  out.certified = eval(e, {out.index}, fuel_hint).converged();
  return out;
}

FixedPoint strong_fp(const Nat& e, std::uint32_t n, std::uint64_t fuel_hint, const std::vector<Nat>& probe) {
  // a(p, x, e, z1..zn) = phi_{phi_e(p, z1..zn)}(x)
  std::vector<Program> inner{x(1)};
  for (std::uint32_t j = 1; j <= n; ++j) inner.push_back(x(3 + j));
  const Nat a = encode(univ(univ(x(3), std::move(inner)), {x(2)}));
  // FM(a, e, z1..zn) = f_{n+1}(a, e, z1..zn), computed with runtime s-m-n
  std::vector<Program> frozen{x(1), x(2)};
  for (std::uint32_t j = 1; j <= n; ++j) frozen.push_back(x(2 + j));
  const Program h2 = smn_rt(lit(h2_template(1, n + 1)), std::move(frozen));
  const Program g = smn_rt(lit(g_template()), {h2});
  const Program fixed = smn_rt(g, {g});
  const Program fm = smn_rt(lit(list_apply_index(1)), {fixed});
  FixedPoint out;
  out.index = smn(encode(fm), {a, e});
  std::vector<Nat> z = probe;
  z.resize(n);
  const Nat v = run_total(out.index, z);
  std::vector<Nat> args{v};
  args.insert(args.end(), z.begin(), z.end());
  out.certified = eval(e, args, fuel_hint).converged();
  return out;
}

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> entries = [] {
    std::vector<CorpusEntry> v;
    auto add = [&](std::string name, Program p, bool total) {
      const Nat code = encode(p);
      v.push_back({std::move(name), std::move(p), code, total});
    };
    add("zero", zero(), true);
    add("succ", succ(), true);
    add("identity", proj(1, 1), true);
    add("add-primrec", fold(op(Op::Select, {x(1), call(succ(), {x(2)}), x(3)})), true);
    add("mul", op(Op::Mul, {x(1), x(2)}), true);
    add("pred-primrec", fold(op(Op::Monus, {x(1), lit(1)})), true);
    add("const-7", konst(7), true);
    add("divergent", divergent(), false);
    add("half-up-mu", minimize(op(Op::Lt, {op(Op::Mul, {lit(2), x(1)}), x(2)})), true);
    add("guard-3", decode(prog_guard_eq(encode(proj(1, 1)), 3)), false);
    add("isqrt-mu",
        minimize(not_(op(Op::Lt, {x(2), op(Op::Mul, {call(succ(), {x(1)}), call(succ(), {x(1)})})}))), true);
    add("case-table", decode(prog_case_table({{0, 5}, {2, 9}, {4, 1}})), false);
    add("pair", op(Op::Pair, {x(1), x(2)}), true);
    add("left", op(Op::Left, {x(1)}), true);
    add("even-primrec", fold(op(Op::Select, {x(1), not_(x(2)), lit(1)})), true);
    add("search-succ", decode(prog_dovetail_search(encode(succ()))), false);
    add("factorial-primrec", fold(op(Op::Select, {x(1), op(Op::Mul, {x(1), x(2)}), lit(1)})), true);
    add("omega", decode(omega_index()), false);
    add("oracle-pair", op(Op::Add, {call(oracle(), {x(1)}), call(oracle(), {call(succ(), {x(1)})})}), true);
    add("self-halts-in-x", stepeval(x(1), x(1), {x(1)}), true);
    return v;
  }();
  return entries;
}

Comparison compare_outcomes(const Nat& e1, const std::vector<Nat>& a1, const Nat& e2, const std::vector<Nat>& a2,
                            std::uint64_t fuel) {
  Comparison c;
  c.left = eval(e1, a1, fuel);
  c.right = eval(e2, a2, fuel);
  const std::uint64_t more = fuel * 10 + 1000;
  if (c.left.converged() && !c.right.converged()) c.right = eval(e2, a2, more);
  if (!c.left.converged() && c.right.converged()) c.left = eval(e1, a1, more);
  if (c.left.converged() != c.right.converged()) return c;
  c.equal = !c.left.converged() || c.left.value == c.right.value;
  return c;
}

}  // namespace ips
}  // namespace rlab
