#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "rlab/coding.hpp"
#include "rlab/eval.hpp"
#include "rlab/ips.hpp"

using namespace rlab;
using namespace rlab::dsl;

TEST_CASE("basic schemata") {
  CHECK(run(succ(), {4}, 100).value == Nat(5));
  CHECK(run(succ(), {4}, 100).converged());
  CHECK(run(proj(3, 2), {7, 8, 9}, 10).value == Nat(8));
  CHECK(run(proj(3, 3), {7}, 10).value == Nat(0));  // missing arguments read as 0
  CHECK(run(zero(), {1, 2, 3}, 10).value == Nat(0));
  const Outcome d = run(divergent(), {}, 1000000);
  CHECK_FALSE(d.converged());
  CHECK(d.steps == 1000000);
}

TEST_CASE("primitive recursion follows f(0,x) = g(0,0,x), f(n+1,x) = g(n+1,f(n,x),x)") {
  const Program add = fold(op(Op::Select, {x(1), call(succ(), {x(2)}), x(3)}));
  CHECK(run(add, {3, 4}, 10000).value == Nat(7));
  // f(n) = sum of i for i <= n
  const Program tri = fold(op(Op::Add, {x(1), x(2)}));
  for (std::uint64_t n = 0; n < 20; ++n) CHECK(run(tri, {n}, 100000).value == Nat(n * (n + 1) / 2));
}

TEST_CASE("step accounting is exact on small programs") {
  // node entry only
  CHECK(run(succ(), {0}, 10).steps == 1);
  // comp + proj + succ
  CHECK(run(comp(succ(), {proj(1, 1)}), {0}, 10).steps == 3);
  // oracle node: entry + query
  CHECK(run(oracle(), {0}, 10).steps == 2);
  // mu over z: iteration + body entry; body = proj(2,1) is zero at z = 0
  CHECK(run(mu(proj(2, 1)), {}, 10).steps == 3);
  CHECK(run(succ(), {0}, 0).kind == Outcome::Kind::OutOfFuel);
}

TEST_CASE("fuel monotonicity over small indices") {
  for (std::uint64_t e = 0; e < 600; ++e) {
    Outcome prev;
    for (std::uint64_t s : {1, 5, 20, 100, 400, 2000}) {
      const Outcome o = eval(e, {e % 7, 3}, s);
      if (prev.converged()) {
        CHECK(o.converged());
        CHECK(o.value == prev.value);
        CHECK(o.steps == prev.steps);
      }
      prev = o;
    }
  }
}

TEST_CASE("eval never crashes on small indices") {
  std::size_t halted = 0;
  for (std::uint64_t e = 0; e < 10000; ++e) halted += eval(e, {e}, 200).converged() ? 1 : 0;
  CHECK(halted > 100);
}

TEST_CASE("oracle: empty by default, use recorded, log kept") {
  const Program q = op(Op::Add, {call(oracle(), {x(1)}), call(oracle(), {lit(10)})});
  const Outcome none = run(q, {3}, 100);
  CHECK(none.value == Nat(0));
  CHECK(none.use == Nat(11));
  std::vector<Query> log;
  EvalOptions opts;
  opts.oracle = [](const Nat& n) { return n.small() % 2 == 1; };
  opts.log = &log;
  const Outcome o = run(q, {3}, 100, opts);
  CHECK(o.value == Nat(1));
  REQUIRE(log.size() == 2);
  CHECK(log[0] == Query{3, true});
  CHECK(log[1] == Query{10, false});
  CHECK(run(succ(), {3}, 100, opts).use == Nat(0));
}

TEST_CASE("builtins") {
  CHECK(run(op(Op::Div, {x(1), x(2)}), {7, 0}, 10).value == Nat(0));
  CHECK(run(op(Op::Mod, {x(1), x(2)}), {7, 0}, 10).value == Nat(7));
  CHECK(run(op(Op::Pair, {x(1), x(2)}), {0, 1}, 10).value == Nat(2));
  const Nat l = coding::list_encode({4, 5, 6});
  CHECK(run(op(Op::ListGet, {x(1), lit(2)}), {l}, 10).value == Nat(6));
  CHECK(run(op(Op::ListLen, {x(1)}), {l}, 10).value == Nat(3));
  CHECK(run(op(Op::ListCons, {lit(3), x(1)}), {l}, 10).value == coding::list_encode({3, 4, 5, 6}));
  CHECK(run(op(Op::ListMake, {lit(4), lit(5), lit(6)}, 3), {}, 10).value == l);
  CHECK(run(op(Op::Card, {x(1)}), {13}, 10).value == Nat(3));
  const Nat sq = coding::seq_encode({4, 9});
  CHECK(run(op(Op::SeqAdd, {lit(2), x(1)}), {sq}, 10).value == coding::seq_encode({4, 9, 2}));
  CHECK(run(op(Op::SeqHas, {lit(9), x(1)}), {sq}, 10).value == Nat(1));
  CHECK(run(op(Op::SeqHas, {lit(2), x(1)}), {sq}, 10).value == Nat(0));
  CHECK(run(op(Op::SeqLen, {x(1)}), {sq}, 10).value == Nat(2));
  CHECK(run(op(Op::SeqGet, {x(1), lit(1)}), {sq}, 10).value == Nat(9));
  CHECK(run(op(Op::SeqGet, {x(1), lit(5)}), {sq}, 10).value == Nat(0));
  // {3..5, 9}
  const Nat iv = Intervals(FinSet({3, 4, 5, 9})).encode();
  CHECK(run(op(Op::IvCard, {x(1)}), {iv}, 10).value == Nat(4));
  const std::vector<std::uint64_t> members = {3, 4, 5, 9};
  for (std::uint64_t v = 0; v < 12; ++v) {
    const bool in = std::find(members.begin(), members.end(), v) != members.end();
    CHECK(run(op(Op::IvHas, {lit(v), x(1)}), {iv}, 10).value == Nat(in ? 1 : 0));
  }
  for (std::uint64_t i = 0; i < 6; ++i) {
    CHECK(run(op(Op::IvGet, {x(1), lit(i)}), {iv}, 10).value == Nat(i < 4 ? members[i] : 0));
  }
  // large codes go through the decode memo; repeat to hit it
  const Nat big = Nat(1).with_bit(700);
  const Nat bigv = Intervals::range(big, big + 2).encode();
  for (int round = 0; round < 2; ++round) {
    CHECK(run(op(Op::IvHas, {x(2), x(1)}), {bigv, big + 1}, 10).value == Nat(1));
    CHECK(run(op(Op::IvHas, {x(2), x(1)}), {bigv, big + 3}, 10).value == Nat(0));
    CHECK(run(op(Op::IvCard, {x(1)}), {bigv}, 10).value == Nat(3));
    CHECK(run(op(Op::IvGet, {x(1), lit(2)}), {bigv}, 10).value == big + 2);
  }
}

TEST_CASE("universal and step-bounded builtins") {
  const Nat s = encode(succ());
  CHECK(run(univ(x(1), {x(2)}), {s, 41}, 100).value == Nat(42));
  CHECK(run(stepeval(x(1), x(2), {x(3)}), {s, 1, 41}, 100).value == Nat(43));
  CHECK(run(stepeval(x(1), x(2), {x(3)}), {s, 0, 41}, 100).value == Nat(0));
  const Nat d = encode(divergent());
  const Outcome bounded = run(stepeval(x(1), x(2), {x(3)}), {d, 500, 0}, 10000);
  CHECK(bounded.value == Nat(0));
  // the outer budget is too small for the inner bound: no answer
  CHECK_FALSE(run(stepeval(x(1), x(2), {x(3)}), {d, 500, 0}, 100).converged());
  const Nat add = encode(op(Op::Add, {x(1), x(2)}));
  const Outcome code = run(smn_rt(x(1), {x(2)}), {add, 3}, 100);
  CHECK(run(univ(x(1), {x(2)}), {code.value, 4}, 100).value == Nat(7));
}

TEST_CASE("relativized builtins") {
  // oracle answered by phi_q(z) != 0, q = "is odd"
  const Nat odd = encode(op(Op::Mod, {x(1), lit(2)}));
  const Nat ask = encode(call(oracle(), {x(1)}));
  CHECK(run(op(Op::UnivRel, {x(1), x(2), x(3)}, 1), {ask, odd, 5}, 100).value == Nat(1));
  CHECK(run(op(Op::UnivRel, {x(1), x(2), x(3)}, 1), {ask, odd, 4}, 100).value == Nat(0));
  // oracle answered by W_{a,s}; a halts exactly on 0 and 2
  const Nat a = ips::prog_case_table({{0, 0}, {2, 0}});
  const Outcome in = run(op(Op::StepRel, {x(1), x(2), x(3), x(4)}, 1), {ask, 1000, a, 2}, 100000);
  CHECK(in.value == Nat(2));
  const Outcome out = run(op(Op::StepRel, {x(1), x(2), x(3), x(4)}, 1), {ask, 1000, a, 3}, 100000);
  CHECK(out.value == Nat(1));
  CHECK(in.use == Nat(0));
}

TEST_CASE("deep recursion through the universal builtin runs on a large stack") {
  // phi_{f}(x) = phi_f(x): unbounded self-call, stopped by fuel
  const Nat self = ips::rec_f(encode(univ(x(1), {x(2)})));
  const Outcome o = eval(self, {0}, 3000000);
  CHECK_FALSE(o.converged());
  CHECK(o.steps == 3000000);
}
