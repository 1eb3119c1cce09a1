#include "rlab/re_sets.hpp"

#include "rlab/ips.hpp"

namespace rlab::re {

using namespace dsl;

bool w_mem(const Nat& e, const Nat& x, std::uint64_t s) { return eval(e, {x}, s).converged(); }

bool k_mem(const Nat& e, std::uint64_t s) { return eval(e, {e}, s).converged(); }

StageSet StageSet::domain(const Nat& e, std::uint64_t window) {
  return StageSet([e, window](std::uint64_t s) {
    std::vector<Nat> xs;
    for (std::uint64_t x = 0; x < window; ++x) {
      if (w_mem(e, x, s)) xs.emplace_back(x);
    }
    return FinSet(std::move(xs));
  });
}

StageSet StageSet::image(const Nat& e, std::uint64_t window) {
  return StageSet([e, window](std::uint64_t s) {
    std::vector<Nat> xs;
    for (std::uint64_t m = 0; m < window; ++m) {
      const Outcome o = eval(e, {m}, s);
      if (o.converged()) xs.push_back(o.value);
    }
    return FinSet(std::move(xs));
  });
}

StageSet StageSet::construction(Generator g) { return StageSet(std::move(g)); }

FinSet StageSet::at(std::uint64_t s) const {
  {
    std::lock_guard<std::mutex> lock(state_->mu);
    if (auto it = state_->cache.find(s); it != state_->cache.end()) return it->second;
  }
  FinSet v = gen_(s);
  std::lock_guard<std::mutex> lock(state_->mu);
  state_->cache.emplace(s, v);
  return v;
}

Nat dom_to_image(const Nat& e) { return encode(call(proj(2, 2), {call(decode(e), {x(1)}), x(1)})); }

std::pair<Nat, Nat> dovetail_position(const Nat& t) {
  auto [l, r] = coding::pair_decode(t);
  return {l + r, r};
}

Nat image_to_enum(const Nat& e) {
  // value seen at dovetail position i, plus one; 0 when nothing converged
  auto val = [&](Program i) {
    return stepeval(lit(e), op(Op::Add, {op(Op::Left, {i}), op(Op::Right, {i})}), {op(Op::Right, {i})});
  };
  // state: sequence code of the distinct values found so far, frozen at n + 1 entries
  // body context: (t, acc, n, v)
  const Program seen = op(Op::SeqHas, {op(Op::Monus, {x(4), lit(1)}), x(2)});
  const Program is_new = op(Op::Mul, {op(Op::Sg, {x(4)}), not_(seen)});
  const Program advanced = op(Op::SeqAdd, {op(Op::Monus, {x(4), lit(1)}), x(2)});
  const Program done = eq(op(Op::SeqLen, {x(2)}), call(succ(), {x(3)}));
  const Program body = op(Op::Select, {done, x(2), op(Op::Select, {is_new, advanced, x(2)})});
  const Program run_to = fold(call(body, {x(1), x(2), x(3), val(x(1))}));
  // least k such that 2^k positions suffice to find n + 1 values
  const Program bound = op(Op::SetBit, {lit(0), x(1)});
  const Program k = minimize(not_(eq(op(Op::SeqLen, {call(run_to, {bound, x(2)})}), call(succ(), {x(2)}))));
  return encode(op(Op::SeqGet, {call(run_to, {op(Op::SetBit, {lit(0), k}), x(1)}), x(1)}));
}

Nat enum_to_dom(const Nat& e) { return encode(minimize(not_(eq(call(decode(e), {x(1)}), x(2))))); }

Nat post_combiner(const Nat& e1, const Nat& e2) {
  auto in = [](const Nat& e, Program s, Program xv) { return op(Op::Sg, {stepeval(lit(e), std::move(s), {std::move(xv)})}); };
  const Program stage = minimize(not_(op(Op::Add, {in(e1, x(1), x(2)), in(e2, x(1), x(2))})));
  return encode(in(e1, stage, x(1)));
}

Nat post_template() {
  static const Nat code = [] {
    auto in = [](Program p, Program st, Program xv) { return op(Op::Sg, {stepeval(std::move(p), std::move(st), {std::move(xv)})}); };
    // body context (t, e1, e2, x)
    const Program stage = minimize(not_(op(Op::Add, {in(x(2), x(1), x(4)), in(x(3), x(1), x(4))})));
    return encode(in(x(1), stage, x(3)));
  }();
  return code;
}

Nat finset_to_windex(const FinSet& d) {
  std::vector<std::pair<Nat, Nat>> rows;
  for (const Nat& v : d) rows.emplace_back(v, 0);
  return ips::prog_case_table(rows);
}

const std::vector<KnownProgram>& test_corpus() {
  static const std::vector<KnownProgram> entries = [] {
    std::vector<KnownProgram> v;
    v.push_back({"zero", encode(zero()), Behavior::HaltsOnSelf, true});
    v.push_back({"succ", encode(succ()), Behavior::HaltsOnSelf, true});
    v.push_back({"identity", encode(proj(1, 1)), Behavior::HaltsOnSelf, true});
    v.push_back({"const-7", ips::prog_const(7), Behavior::HaltsOnSelf, true});
    v.push_back({"const-0", ips::prog_const(0), Behavior::HaltsOnSelf, true});
    v.push_back({"const-1", ips::prog_const(1), Behavior::HaltsOnSelf, true});
    v.push_back({"divergent", encode(divergent()), Behavior::DivergesOnSelf, false});
    // halts only on 5, 9 or 2; none of these is the program's own index
    v.push_back({"guard-5", ips::prog_guard_eq(encode(proj(1, 1)), 5), Behavior::DivergesOnSelf, false});
    v.push_back({"guard-9", ips::prog_guard_eq(encode(proj(1, 1)), 9), Behavior::DivergesOnSelf, false});
    v.push_back({"table-2", ips::prog_case_table({{2, 9}}), Behavior::DivergesOnSelf, false});
    v.push_back({"empty-table", finset_to_windex({}), Behavior::DivergesOnSelf, false});
    return v;
  }();
  return entries;
}

}  // namespace rlab::re
