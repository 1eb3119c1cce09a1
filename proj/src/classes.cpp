#include "rlab/classes.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "rlab/ips.hpp"

namespace rlab::cls {

using namespace dsl;
using re::k_mem;
using re::w_mem;

namespace {

constexpr std::uint64_t kWitnessFuel = 2000000;
constexpr std::uint64_t kCandidates = 64;

// 0 when e = 0, divergent otherwise
Program guard_zero(const Program& e) { return minimize(op(Op::Sg, {shift(e)})); }
// 0 when c != 0, divergent otherwise
Program guard_nonzero(const Program& c) { return minimize(not_(shift(c))); }
// evaluates e for its convergence only
Program gate(Program e) { return op(Op::Mul, {lit(0), std::move(e)}); }

Program query(Program x) { return comp(oracle(), {std::move(x)}); }

// Intervals code of the single point v: <v, v>
Program point_code(Program v) { return comp(op(Op::SeqAdd, {x(1), op(Op::SeqAdd, {x(1), lit(0)})}), {std::move(v)}); }

// p(alpha, e): 1 on W_alpha, 0 on W_e
Program combiner(const Nat& alpha, Program e) { return smn_rt(lit(re::post_template()), {lit(alpha), std::move(e)}); }

std::string short_nat(const Nat& n) {
  std::string s = n.to_string();
  if (s.size() <= 24) return s;
  std::ostringstream out;
  out << s.substr(0, 10) << "..(" << n.bit_length() << " bits)";
  return out.str();
}

Check make_check(std::string contract, std::string instance, std::uint64_t s) {
  Check c;
  c.contract = std::move(contract);
  c.instance = std::move(instance);
  c.stage = s;
  return c;
}

Check verdict(Check c, Verdict v, std::string detail) {
  c.verdict = v;
  c.detail = std::move(detail);
  return c;
}

// The first members of S, plus the hints that lie in S.
std::vector<Nat> candidates(const Intervals& s, const std::vector<Nat>& hints, bool& complete) {
  std::vector<Nat> out;
  for (std::uint64_t i = 0; i < kCandidates; ++i) {
    auto z = s.at(Nat(i));
    if (!z) break;
    out.push_back(*z);
  }
  complete = !(Nat(kCandidates) < s.size());
  for (const Nat& h : hints) {
    if (s.contains(h) && std::find(out.begin(), out.end(), h) == out.end()) out.push_back(h);
  }
  return out;
}

Nat template_code(const Program& p) { return encode(p); }

}  // namespace

std::string_view kind_name(WitnessKind k) {
  switch (k) {
    case WitnessKind::Creative: return "creative";
    case WitnessKind::Quasicreative: return "quasicreative";
    case WitnessKind::WeaklyQuasicreative: return "weakly-quasicreative";
    case WitnessKind::Weu: return "weu";
    case WitnessKind::DWeu: return "d-weu";
    case WitnessKind::DSeu: return "d-seu";
    case WitnessKind::MReduction: return "m-reduction";
    case WitnessKind::DReduction: return "d-reduction";
    case WitnessKind::EffSimpleBound: return "eff-simple-bound";
    case WitnessKind::StrongArray: return "strong-array";
    case WitnessKind::Retrace: return "retrace";
  }
  return "?";
}

bool set_valued(WitnessKind k) {
  switch (k) {
    case WitnessKind::Quasicreative:
    case WitnessKind::WeaklyQuasicreative:
    case WitnessKind::DWeu:
    case WitnessKind::DSeu:
    case WitnessKind::DReduction:
    case WitnessKind::StrongArray:
      return true;
    default:
      return false;
  }
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Violated: return "violated";
    case Verdict::Vacuous: return "vacuous";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::optional<Nat> apply(const Witness& w, const Nat& x, std::uint64_t fuel) {
  const Outcome o = eval(w.body, {x}, fuel);
  if (!o.converged()) return std::nullopt;
  return o.value;
}

std::optional<Intervals> apply_set(const Witness& w, const Nat& x, std::uint64_t fuel) {
  auto v = apply(w, x, fuel);
  if (!v) return std::nullopt;
  return Intervals::decode(*v);
}

SetHandle k_handle() {
  return {"K", [](const Nat& x, std::uint64_t s) { return k_mem(x, s); }, std::nullopt, ips::omega_index()};
}

SetHandle w_handle(const Nat& e) {
  return {"W_e", [e](const Nat& x, std::uint64_t s) { return w_mem(e, x, s); }, std::nullopt, e};
}

SetHandle enumerated_handle(std::string name, const Nat& a, std::uint64_t fuel) {
  SetHandle h;
  h.name = std::move(name);
  h.enumeration = a;
  h.member = [a, fuel](const Nat& x, std::uint64_t s) {
    for (std::uint64_t i = 0; i <= s; ++i) {
      const Outcome o = eval(a, {i}, fuel);
      if (o.converged() && o.value == x) return true;
    }
    return false;
  };
  return h;
}

// ---- creative sets -----------------------------------------------------

Witness k_creative_witness() { return {WitnessKind::Creative, encode(proj(1, 1))}; }

FinSet creative_complement_enum(const Witness& w, std::size_t n, std::uint64_t fuel) {
  FinSet b;
  for (std::size_t k = 0; k < n; ++k) {
    auto y = apply(w, re::finset_to_windex(b), fuel);
    if (!y) throw std::runtime_error("creative witness did not converge");
    b = b.with(*y);
  }
  return b;
}

Witness myhill_forward(const Witness& m) {
  // W_h(e) = f^-1(W_e): phi_h(e)(z) = phi_e(f(z))
  const Nat h = template_code(univ(x(1), {univ(lit(m.body), {x(2)})}));
  return {WitnessKind::Creative, encode(univ(lit(m.body), {smn_rt(lit(h), {x(1)})}))};
}

Witness myhill_backward(const Witness& c, std::uint64_t fuel_hint) {
  // Q(p, z, x): halts iff z in K and x = f(p)
  const Nat q = template_code(op(Op::Add, {gate(univ(x(2), {x(2)})), guard_nonzero(eq(x(3), univ(lit(c.body), {x(1)})))}));
  const Nat e = encode(smn_rt(lit(q), {x(1), x(2)}));
  const ips::FixedPoint g = ips::strong_fp(e, 1, fuel_hint, {Nat(0)});
  return {WitnessKind::MReduction, encode(univ(lit(c.body), {univ(lit(g.index), {x(1)})}))};
}

Witness mcomplete_to_weu(const Witness& m) {
  // phi_h(e)(x) = 0 if phi_e(f(x)) = 0, divergent otherwise
  const Nat h = template_code(guard_zero(univ(x(1), {univ(lit(m.body), {x(2)})})));
  return {WitnessKind::Weu, encode(univ(lit(m.body), {smn_rt(lit(h), {x(1)})}))};
}

Witness weu_to_creative(const Witness& w, const Nat& alpha) {
  return {WitnessKind::Creative, encode(univ(lit(w.body), {combiner(alpha, x(1))}))};
}

Check check_creative(const Witness& w, const SetHandle& a, const Nat& e, std::uint64_t s, std::string instance) {
  Check c = make_check("creative", std::move(instance), s);
  auto y = apply(w, e, kWitnessFuel);
  if (!y) return verdict(c, Verdict::Inconclusive, "witness did not converge");
  const bool in_a = a.member(*y, s), in_w = w_mem(e, *y, s);
  const std::string at = "f(e)=" + short_nat(*y);
  if (!in_a && !in_w) return verdict(c, Verdict::Holds, at + " outside A and W_e");
  if (in_a && in_w) return verdict(c, Verdict::Vacuous, at + " in W_e and A");
  return verdict(c, Verdict::Violated, at + (in_a ? " in A" : " in W_e"));
}

Check check_weu(const Witness& w, const SetHandle& a, const Nat& e, std::uint64_t s, std::string instance) {
  Check c = make_check("weu", std::move(instance), s);
  auto z = apply(w, e, kWitnessFuel);
  if (!z) return verdict(c, Verdict::Inconclusive, "witness did not converge");
  const Outcome o = eval(e, {*z}, s);
  if (!o.converged()) return verdict(c, Verdict::Vacuous, "phi_e(f(e)) undefined at this stage");
  const Nat bit(a.member(*z, s) ? 1 : 0);
  const std::string d = "phi_e(f(e))=" + short_nat(o.value) + " A(f(e))=" + bit.to_string();
  return verdict(c, o.value == bit ? Verdict::Violated : Verdict::Holds, d);
}

// ---- simple sets ----------------------------------------------------------

PostSimple post_simple_run(std::uint64_t s) {
  PostSimple out;
  std::set<Nat> served;
  std::vector<Nat> xs;
  for (std::uint64_t t = 0; t < s; ++t) {
    const auto [l, fuel] = coding::pair_decode(Nat(t));
    const auto [e, x] = coding::pair_decode(l);
    if (served.count(e) || !(e * 2 < x)) continue;
    if (!w_mem(e, x, fuel.to_u64().value_or(0))) continue;
    served.insert(e);
    if (out.provenance.emplace(x, e).second) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  out.elements = FinSet(std::move(xs));
  return out;
}

FinSet post_simple(std::uint64_t s) { return post_simple_run(s).elements; }

SetHandle post_simple_handle() {
  auto stages = std::make_shared<re::StageSet>(re::StageSet::construction(post_simple));
  return {"S", [stages](const Nat& x, std::uint64_t s) { return stages->contains(x, s); }, std::nullopt, std::nullopt};
}

Witness eff_simple_bound() {
  return {WitnessKind::EffSimpleBound, encode(op(Op::Add, {op(Op::Mul, {x(1), lit(2)}), lit(1)}))};
}

Check check_eff_simple(const Witness& w, const Nat& e, std::uint64_t s, std::uint64_t window, std::string instance) {
  Check c = make_check("eff-simple", std::move(instance), s);
  auto b = apply(w, e, kWitnessFuel);
  if (!b) return verdict(c, Verdict::Inconclusive, "bound did not converge");
  std::uint64_t count = 0;
  for (std::uint64_t x = 0; x < window; ++x) count += w_mem(e, x, s) ? 1 : 0;
  const std::string d = "|W_e,s|=" + std::to_string(count) + " bound=" + short_nat(*b);
  return verdict(c, Nat(count) <= *b ? Verdict::Holds : Verdict::Violated, d);
}

// ---- deficiency sets and retraceability -----------------------------------

std::vector<Nat> enumeration_prefix(const SetHandle& h, std::uint64_t s, std::uint64_t fuel) {
  if (!h.enumeration) throw BadArguments("set handle carries no enumeration");
  std::vector<Nat> vals;
  std::set<Nat> seen;
  for (std::uint64_t i = 0; i <= s; ++i) {
    const Outcome o = eval(*h.enumeration, {i}, fuel);
    if (!o.converged()) throw BadEnumeration("enumeration undefined at " + std::to_string(i));
    if (!seen.insert(o.value).second) throw BadEnumeration("enumeration repeats at " + std::to_string(i));
    vals.push_back(o.value);
  }
  return vals;
}

FinSet deficiency(const SetHandle& h, std::uint64_t s, std::uint64_t fuel) {
  const std::vector<Nat> a = enumeration_prefix(h, s, fuel);
  std::vector<Nat> out;
  std::optional<Nat> tail_min;
  for (std::size_t i = a.size(); i-- > 0;) {
    if (tail_min && *tail_min < a[i]) out.emplace_back(i);
    if (!tail_min || a[i] < *tail_min) tail_min = a[i];
  }
  std::reverse(out.begin(), out.end());
  return FinSet(std::move(out));
}

std::optional<Nat> retrace_predecessor(const SetHandle& h, std::uint64_t s, std::uint64_t horizon,
                                       std::uint64_t fuel) {
  if (horizon < s) return std::nullopt;
  const std::vector<Nat> a = enumeration_prefix(h, horizon, fuel);
  for (std::uint64_t t = s + 1; t <= horizon; ++t) {
    if (a[t] < a[s]) return std::nullopt;
  }
  const std::set<Nat> upto_s(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(s) + 1);
  for (std::uint64_t t = s; t-- > 0;) {
    // {a(0..s)} n {0..a(t)} = {a(0..t)}; the right side is always included
    const std::size_t below = static_cast<std::size_t>(
        std::distance(upto_s.begin(), upto_s.upper_bound(a[t])));
    if (below == t + 1 && std::all_of(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(t) + 1,
                                      [&](const Nat& v) { return !(a[t] < v); })) {
      return Nat(t);
    }
  }
  return std::nullopt;
}

bool retraceable_decide(const Nat& retrace, const Nat& b, const Nat& x, std::uint64_t fuel) {
  if (!(x < b)) throw BadArguments("retraceable_decide needs x < b");
  Nat cur = b;
  for (Nat i(1); i <= b; ++i) {
    const Outcome o = eval(retrace, {cur}, fuel);
    if (!o.converged()) throw BadArguments("retrace did not converge");
    if (o.value == x) return true;
    if (o.value == cur) break;  // reached a_0
    cur = o.value;
  }
  return false;
}

Witness dweu_deficiency_bound(const Witness& dw, const Nat& alpha, const Nat& enumeration) {
  // seen(n, z) = #{ i <= n : a(i) = z }
  const Program seen = fold(op(Op::Add, {x(2), eq(univ(lit(enumeration), {x(1)}), x(3))}));
  // body over (t, e, z) with t = pair(y, s)
  const Program y = op(Op::Left, {x(1)}), st = op(Op::Right, {x(1)});
  const Program found = op(Op::Mul, {op(Op::Sg, {stepeval(x(2), st, {y})}),
                                     op(Op::Mul, {op(Op::Lt, {x(3), univ(lit(enumeration), {y})}),
                                                  not_(call(seen, {y, x(3)}))})});
  const Nat g = template_code(minimize(not_(found)));
  const Program xi = combiner(alpha, smn_rt(lit(g), {x(1)}));
  const Program max_of = op(Op::IvGet, {x(1), op(Op::Monus, {op(Op::IvCard, {x(1)}), lit(1)})});
  return {WitnessKind::EffSimpleBound, encode(comp(max_of, {univ(lit(dw.body), {xi})}))};
}

// ---- D-w.e.u., D-s.e.u., d-complete, quasicreative ------------------------

Witness singleton_sets(const Witness& m, WitnessKind kind, std::uint32_t n) {
  return {kind, encode(point_code(univ(lit(m.body), {x(1)}))), n};
}

Witness dseu_to_quasicreative(const Witness& w, const Nat& alpha) {
  return {WitnessKind::Quasicreative, encode(univ(lit(w.body), {combiner(alpha, x(1))}))};
}

Witness quasicreative_to_dcomplete(const Witness& w, std::uint64_t fuel_hint) {
  // Q(p, z, x): halts iff z in K and x in f(p)
  const Nat q = template_code(
      op(Op::Add, {gate(univ(x(2), {x(2)})), guard_nonzero(op(Op::IvHas, {x(3), univ(lit(w.body), {x(1)})}))}));
  const Nat e = encode(smn_rt(lit(q), {x(1), x(2)}));
  const ips::FixedPoint g = ips::strong_fp(e, 1, fuel_hint, {Nat(0)});
  return {WitnessKind::DReduction, encode(univ(lit(w.body), {univ(lit(g.index), {x(1)})})), 0};
}

Witness dcomplete_to_dseu(const Witness& w) {
  // nonzero(n, e, S) = #{ i <= n : phi_e(S[i]) != 0 }, with i = |S| running the zero program
  const Program pick = op(Op::Select, {op(Op::Lt, {x(1), op(Op::IvCard, {x(4)})}), x(3), lit(encode(zero()))});
  const Program nonzero = fold(op(Op::Add, {x(2), op(Op::Sg, {univ(pick, {op(Op::IvGet, {x(4), x(1)})})})}));
  // over (e, x, S)
  const Program body = guard_zero(call(nonzero, {op(Op::IvCard, {x(3)}), x(1), x(3)}));
  const Nat h = template_code(comp(body, {x(1), x(2), univ(lit(w.body), {x(2)})}));
  return {WitnessKind::DSeu, encode(univ(lit(w.body), {smn_rt(lit(h), {x(1)})}))};
}

Check check_dweu(const Witness& w, const SetHandle& a, const Nat& e, std::uint64_t s, std::string instance,
                 const std::vector<Nat>& hints) {
  Check c = make_check("d-weu", std::move(instance), s);
  auto set = apply_set(w, e, kWitnessFuel);
  if (!set) return verdict(c, Verdict::Inconclusive, "witness did not converge");
  if (set->empty()) return verdict(c, Verdict::Violated, "f(e) is empty");
  bool complete = false;
  bool undefined = false;
  for (const Nat& z : candidates(*set, hints, complete)) {
    const Outcome o = eval(e, {z}, s);
    if (!o.converged()) {
      undefined = true;
      continue;
    }
    const Nat bit(a.member(z, s) ? 1 : 0);
    if (!(o.value == bit)) {
      return verdict(c, Verdict::Holds, "z=" + short_nat(z) + " phi_e(z)=" + short_nat(o.value) + " A(z)=" + bit.to_string());
    }
  }
  if (undefined) return verdict(c, Verdict::Vacuous, "phi_e undefined on part of f(e) at this stage");
  return verdict(c, complete ? Verdict::Violated : Verdict::Inconclusive, "phi_e agrees with A on the checked part of f(e)");
}

Check check_dseu(const Witness& w, const SetHandle& a, const Nat& e, std::uint64_t s, std::string instance) {
  Check c = check_dweu(w, a, e, s, instance);
  c.contract = "d-seu";
  auto set = apply_set(w, e, kWitnessFuel);
  if (!set) return c;
  bool complete = false;
  for (const Nat& z : candidates(*set, {}, complete)) {
    if (a.member(z, s)) return verdict(c, Verdict::Violated, "f(e) meets A at " + short_nat(z));
  }
  return c;
}

Check check_quasicreative(const Witness& w, const SetHandle& a, const Nat& e, std::uint64_t s, std::string instance) {
  Check c = make_check("quasicreative", std::move(instance), s);
  auto set = apply_set(w, e, kWitnessFuel);
  if (!set) return verdict(c, Verdict::Inconclusive, "witness did not converge");
  bool complete = false;
  std::optional<Nat> escape;
  for (const Nat& z : candidates(*set, {}, complete)) {
    if (a.member(z, s)) return verdict(c, Verdict::Violated, "f(e) meets A at " + short_nat(z));
    if (!escape && !w_mem(e, z, s)) escape = z;
  }
  if (escape) return verdict(c, Verdict::Holds, "z=" + short_nat(*escape) + " outside A and W_e");
  return verdict(c, complete ? Verdict::Violated : Verdict::Inconclusive, "f(e) inside W_e on the checked part");
}

Check check_wqc(const Witness& w, const SetHandle& a, const Nat& e, std::uint64_t s, std::string instance) {
  Check c = make_check("weakly-quasicreative", std::move(instance), s);
  auto set = apply_set(w, e, kWitnessFuel);
  if (!set) return verdict(c, Verdict::Inconclusive, "witness did not converge");
  bool complete = false;
  for (const Nat& z : candidates(*set, {}, complete)) {
    if (!a.member(z, s) && !w_mem(e, z, s)) return verdict(c, Verdict::Holds, "z=" + short_nat(z) + " outside A and W_e");
  }
  return verdict(c, complete ? Verdict::Violated : Verdict::Inconclusive, "no point of f(e) outside A and W_e");
}

Witness block_witness() {
  const Program lo = op(Op::Div, {op(Op::Mul, {x(1), op(Op::Add, {x(1), lit(3)})}), lit(2)});
  const Program hi = op(Op::Add, {lo, op(Op::Add, {x(1), lit(1)})});
  return {WitnessKind::DWeu, encode(op(Op::SeqAdd, {hi, op(Op::SeqAdd, {lo, lit(0)})}))};
}

SimpleDweu simple_dweu(std::uint64_t s) {
  SimpleDweu out;
  out.witness = block_witness();
  std::set<Nat> rule1, rule2;
  std::vector<Nat> xs;
  auto add = [&](const Nat& x, const Nat& e, int rule) {
    if (out.provenance.emplace(x, std::make_pair(e, rule)).second) xs.push_back(x);
  };
  for (std::uint64_t t = 0; t < s; ++t) {
    const auto [l, fuel] = coding::pair_decode(Nat(t));
    const auto [e, x] = coding::pair_decode(l);
    const bool want1 = !rule1.count(e) && !(x < coding::block_start(e + 1));
    const bool want2 = !rule2.count(e) && coding::block_of(x) == e;
    if (!want1 && !want2) continue;
    const Outcome o = eval(e, {x}, fuel.to_u64().value_or(0));
    if (!o.converged()) continue;
    if (want1) {
      rule1.insert(e);
      add(x, e, 1);
    }
    if (want2 && o.value.is_zero()) {
      rule2.insert(e);
      add(x, e, 2);
    }
  }
  std::sort(xs.begin(), xs.end());
  out.elements = FinSet(std::move(xs));
  return out;
}

SetHandle simple_dweu_handle() {
  auto stages = std::make_shared<re::StageSet>(
      re::StageSet::construction([](std::uint64_t s) { return simple_dweu(s).elements; }));
  return {"A", [stages](const Nat& x, std::uint64_t s) { return stages->contains(x, s); }, std::nullopt, std::nullopt};
}

Nat wbar_index(const Intervals& g) { return encode(not_(op(Op::IvHas, {x(1), lit(g.encode())}))); }

StrongArray strong_array_extract(const Witness& w, std::size_t count, std::uint64_t fuel) {
  StrongArray out;
  Intervals g, y;
  std::uint64_t left = fuel;
  while (out.sets.size() < count) {
    if (left == 0) {
      out.exhausted = true;
      break;
    }
    --left;
    const Outcome o = eval(w.body, {wbar_index(g)}, left);
    if (!o.converged()) {
      out.exhausted = true;
      break;
    }
    left -= std::min(left, o.steps);
    const Intervals b = Intervals::decode(o.value);
    if (b.intersects(y)) {
      g = g.minus(b);
    } else {
      out.sets.push_back(b);
      y = y.united(b);
      g = g.united(b);
    }
  }
  return out;
}

// ---- fixed-point-free functions -------------------------------------------

Nat effsimple_to_fpf(const Witness& bound) {
  // count(y) = #{ x <= y : x not in A }
  const Program count = fold(op(Op::Add, {x(2), not_(query(x(1)))}));
  const Program needed = op(Op::Add, {univ(lit(bound.body), {x(1)}), lit(1)});
  const Program upto = minimize(op(Op::Lt, {call(count, {x(1)}), shift(needed)}));
  // Intervals code of { x <= y : x not in A }
  const Program collect =
      fold(op(Op::Select, {not_(query(x(1))), op(Op::SeqAdd, {x(1), op(Op::SeqAdd, {x(1), x(2)})}), x(2)}));
  const Nat has = template_code(guard_nonzero(op(Op::IvHas, {x(2), x(1)})));
  return encode(smn_rt(lit(has), {call(collect, {upto})}));
}

Nat k_fpf_program() {
  // phi_c(e)(y) = phi_e(0), so c(e) in K iff 0 in W_e
  const Nat c = template_code(univ(x(1), {lit(0)}));
  return encode(op(Op::Select, {query(smn_rt(lit(c), {x(1)})), lit(encode(divergent())), lit(encode(zero()))}));
}

Check check_fpf_domain(const Nat& g, const SetHandle& a, const Nat& e, std::uint64_t s, std::uint64_t window,
                       std::string instance) {
  Check c = make_check("fixed-point-free", std::move(instance), s);
  EvalOptions opts;
  opts.oracle = [&](const Nat& z) { return a.member(z, s); };
  const Outcome v = eval(g, {e}, kWitnessFuel, opts);
  if (!v.converged()) return verdict(c, Verdict::Inconclusive, "g(e) did not converge");
  for (std::uint64_t z = 0; z < window; ++z) {
    const bool l = w_mem(e, z, s), r = w_mem(v.value, z, s);
    if (l != r) return verdict(c, Verdict::Holds, "W_e and W_g(e) differ at " + std::to_string(z));
  }
  return verdict(c, Verdict::Inconclusive, "W_e and W_g(e) agree on the window");
}

ArslanovResult arslanov_reduction(const Nat& e_fpf, const SetHandle& a, const Nat& xv, std::uint64_t fuel) {
  if (!a.windex) throw BadArguments("arslanov_reduction needs an r.e. index of A");
  const Nat alpha = *a.windex;
  // Q(p, x, y) = phi_v(y) with v = phi^{A_s}_{e,s}(p), s = s_x; divergent when x is not in K
  const Program sx = minimize(not_(op(Op::Sg, {stepeval(x(3), x(1), {x(3)})})));
  const Program r = op(Op::StepRel, {lit(e_fpf), x(4), lit(alpha), x(1)}, 1);
  const Program target = op(Op::Select, {op(Op::Sg, {x(4)}), op(Op::Monus, {x(4), lit(1)}), lit(encode(divergent()))});
  const Program inner = univ(target, {x(3)});
  const Program q = comp(inner, {x(1), x(2), x(3), comp(r, {x(1), x(2), x(3), sx})});
  const Nat e = encode(smn_rt(lit(encode(q)), {x(1), x(2)}));
  const ips::FixedPoint fp = ips::strong_fp(e, 1, fuel, {xv});

  ArslanovResult out;
  const Outcome gx = eval(fp.index, {xv}, fuel);
  if (!gx.converged()) return out;
  out.g_x = gx.value;
  if (const Outcome self = eval(xv, {xv}, fuel); self.converged()) out.s_x = self.steps;

  std::map<Nat, bool> truth;
  auto in_a = [&](const Nat& z) {
    auto it = truth.find(z);
    if (it == truth.end()) it = truth.emplace(z, a.member(z, fuel)).first;
    return it->second;
  };
  EvalOptions full;
  full.oracle = in_a;
  const Outcome f = eval(e_fpf, {out.g_x}, fuel, full);
  if (!f.converged()) return out;

  // psi_x: the least stage whose approximation reproduces f(g(x)) with correct answers
  std::uint64_t spent = 0;
  for (std::uint64_t s = 1; spent < fuel; ++s) {
    std::vector<Query> log;
    EvalOptions staged;
    staged.oracle = [&](const Nat& z) { return w_mem(alpha, z, s); };
    staged.log = &log;
    const Outcome o = eval(e_fpf, {out.g_x}, s, staged);
    spent += s;
    if (!o.converged() || !(o.value == f.value)) continue;
    if (std::all_of(log.begin(), log.end(), [&](const Query& qr) { return qr.answer == in_a(qr.x); })) {
      out.psi = s;
      out.verdict = k_mem(xv, s);
      break;
    }
  }
  return out;
}

// ---- wtt-completeness -------------------------------------------------------

namespace {

// Intervals code of the members z of S (an interval code) with keep(z) != 0,
// as a program over (S); keep reads the member as x(1).
Program collect_members(const Program& keep) {
  // step over (i, acc, S)
  const Program z = op(Op::IvGet, {x(3), x(1)});
  const Program cond = op(Op::Mul, {op(Op::Lt, {x(1), op(Op::IvCard, {x(3)})}), comp(keep, {z})});
  const Program step = op(Op::Select, {cond, op(Op::SeqAdd, {z, op(Op::SeqAdd, {z, x(2)})}), x(2)});
  return call(fold(step), {op(Op::IvCard, {x(1)}), x(1)});
}

}  // namespace

Nat dweu_to_wtt_fpf(const Witness& w) {
  // T(S, Ac, x) = A(x) on S, divergent elsewhere
  const Nat t = template_code(op(Op::Add, {guard_nonzero(op(Op::IvHas, {x(3), x(1)})), op(Op::IvHas, {x(3), x(2)})}));
  const Program body = smn_rt(lit(t), {x(1), collect_members(query(x(1)))});
  return encode(comp(body, {univ(lit(w.body), {x(1)})}));
}

Nat wqc_to_wtt_fpf(const Witness& w) {
  const Nat has = template_code(guard_nonzero(op(Op::IvHas, {x(2), x(1)})));
  const Program body = smn_rt(lit(has), {collect_members(not_(query(x(1))))});
  return encode(comp(body, {univ(lit(w.body), {x(1)})}));
}

namespace {

// phi_{g(a, e)} = phi_a with oracle W_e-style answers phi_e(z) != 0
const Nat& univrel_template() {
  static const Nat code = encode(op(Op::UnivRel, {x(1), x(2), x(3)}, 1));
  return code;
}
// phi_{k(e)}(x) converges iff phi_e(x) = 0
const Nat& diagonal_template() {
  static const Nat code = encode(guard_zero(univ(x(1), {x(2)})));
  return code;
}

}  // namespace

Witness wtt_to_dweu(const Nat& a, const Nat& usebound) {
  const Program kg = smn_rt(lit(diagonal_template()), {smn_rt(lit(univrel_template()), {lit(a), x(1)})});
  const Program interval = op(Op::SeqAdd, {univ(lit(usebound), {kg}), op(Op::SeqAdd, {lit(0), lit(0)})});
  return {WitnessKind::DWeu, encode(interval)};
}

Nat wtt_hint(const Nat& a, const Nat& e) {
  const Program kg = smn_rt(lit(diagonal_template()), {smn_rt(lit(univrel_template()), {lit(a), x(1)})});
  return eval(encode(kg), {e}, kWitnessFuel).value;
}

Witness wtt_to_wqc(const Witness& dweu, const Nat& alpha) {
  return {WitnessKind::WeaklyQuasicreative, encode(univ(lit(dweu.body), {combiner(alpha, x(1))}))};
}

Check check_wtt_fpf(const Nat& g, const Witness& w, const SetHandle& a, const Nat& e, std::uint64_t s,
                    std::string instance) {
  Check c = make_check("wtt-fixed-point-free", std::move(instance), s);
  auto set = apply_set(w, e, kWitnessFuel);
  if (!set) return verdict(c, Verdict::Inconclusive, "witness did not converge");
  EvalOptions opts;
  opts.oracle = [&](const Nat& z) { return a.member(z, s); };
  const Outcome v = eval(g, {e}, kWitnessFuel, opts);
  if (!v.converged()) return verdict(c, Verdict::Inconclusive, "g(e) did not converge");
  const Nat bound = set->empty() ? Nat(1) : set->max() + 1;
  if (bound < v.use) return verdict(c, Verdict::Violated, "oracle use " + short_nat(v.use) + " above max f(e) + 1");
  bool complete = false;
  for (const Nat& z : candidates(*set, {}, complete)) {
    const Outcome l = eval(e, {z}, s), r = eval(v.value, {z}, s);
    if (l.converged() != r.converged() || (l.converged() && !(l.value == r.value))) {
      return verdict(c, Verdict::Holds, "phi_e and phi_g(e) differ at " + short_nat(z));
    }
  }
  return verdict(c, complete ? Verdict::Violated : Verdict::Inconclusive, "phi_e and phi_g(e) agree on f(e)");
}

// ---- reductions --------------------------------------------------------------

ReductionReport check_m_reduction(const std::function<std::optional<Nat>(const Nat&)>& f, const Membership& a,
                                  const Membership& b, const std::vector<Nat>& samples, std::uint64_t s) {
  ReductionReport rep;
  for (const Nat& x : samples) {
    SampleResult r;
    r.x = x;
    r.lhs = a(x, s);
    if (auto y = f(x)) {
      r.rhs = b(*y, s);
    } else {
      r.defined = false;
    }
    rep.passed = rep.passed && r.defined && r.lhs == r.rhs;
    rep.samples.push_back(r);
  }
  return rep;
}

ReductionReport check_nd_reduction(std::uint32_t n, const std::function<std::optional<Intervals>(const Nat&)>& f,
                                   const Membership& a, const Membership& b, const std::vector<Nat>& samples,
                                   std::uint64_t s) {
  ReductionReport rep;
  for (const Nat& x : samples) {
    SampleResult r;
    r.x = x;
    r.lhs = a(x, s);
    if (auto set = f(x)) {
      r.size_ok = !(Nat(n) < set->size());
      if (r.size_ok) {
        for (const Nat& z : set->members(n)) r.rhs = r.rhs || b(z, s);
      }
    } else {
      r.defined = false;
    }
    rep.passed = rep.passed && r.defined && r.size_ok && r.lhs == r.rhs;
    rep.samples.push_back(r);
  }
  return rep;
}

}  // namespace rlab::cls
