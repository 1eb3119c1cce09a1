#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "rlab/classes.hpp"
#include "rlab/ips.hpp"

using namespace rlab;
using namespace rlab::dsl;
using namespace rlab::cls;

namespace {

const re::KnownProgram& known(const std::string& name) {
  for (const auto& k : re::test_corpus()) {
    if (k.name == name) return k;
  }
  throw std::out_of_range(name);
}

// a(n) = head[n] for n < |head|, n beyond
Nat perm_enum(const std::vector<std::uint64_t>& head) {
  Program v = op(Op::Mul, {not_(op(Op::Lt, {x(1), lit(head.size())})), x(1)});
  for (std::size_t i = 0; i < head.size(); ++i) v = op(Op::Add, {v, op(Op::Mul, {eq(x(1), lit(i)), lit(head[i])})});
  return encode(v);
}

SetHandle enum_handle(const std::vector<std::uint64_t>& head) { return enumerated_handle("a", perm_enum(head), 1000); }

// the same enumeration as plain numbers, for the oracles
std::vector<std::uint64_t> values(const std::vector<std::uint64_t>& head, std::uint64_t s) {
  std::vector<std::uint64_t> a;
  for (std::uint64_t i = 0; i <= s; ++i) a.push_back(i < head.size() ? head[i] : i);
  return a;
}

void expect_ok(const Check& c) {
  INFO(c.contract << " " << c.instance << ": " << verdict_name(c.verdict) << " " << c.detail);
  CHECK(c.ok());
}

void expect_holds(const Check& c) {
  INFO(c.contract << " " << c.instance << ": " << verdict_name(c.verdict) << " " << c.detail);
  CHECK(c.verdict == Verdict::Holds);
}

const std::vector<std::string> kOutsideK = {"divergent", "guard-5", "empty-table"};

}  // namespace

TEST_CASE("creative witnesses for K") {
  const SetHandle K = k_handle();
  const Witness kw = k_creative_witness();
  CHECK(*apply(kw, 12345, 100) == Nat(12345));
  for (const auto& name : kOutsideK) expect_holds(check_creative(kw, K, known(name).index, 100000, name));
  // {d} with d a known non-halting index
  const Nat single = re::finset_to_windex(FinSet({known("divergent").index}));
  expect_holds(check_creative(kw, K, single, 100000, "singleton"));
  // precondition fails for a halts-on-self program: nothing asserted
  CHECK(check_creative(kw, K, known("identity").index, 1000).verdict != Verdict::Holds);

  CHECK(creative_complement_enum(kw, 0, 1000).empty());
  const FinSet b5 = creative_complement_enum(kw, 5, 100000);
  CHECK(b5.size() == 5);
  const FinSet b6 = creative_complement_enum(kw, 6, 100000);
  for (const Nat& z : b5) CHECK(b6.contains(z));
  for (const Nat& z : b6) CHECK_FALSE(re::k_mem(z, 10000));
}

TEST_CASE("myhill arrows") {
  const SetHandle K = k_handle();
  const Witness id{WitnessKind::MReduction, encode(proj(1, 1))};
  const Witness forward = myhill_forward(id);
  for (const auto& name : kOutsideK) expect_holds(check_creative(forward, K, known(name).index, 100000, name));

  const Witness m = myhill_backward(k_creative_witness());
  for (const auto& name : {"identity", "divergent", "guard-5"}) {
    const auto& k = known(name);
    auto y = apply(m, k.index, 2000000);
    REQUIRE(y);
    const bool halts = k.self == re::Behavior::HaltsOnSelf;
    CHECK(re::k_mem(*y, 100000) == halts);
  }
}

TEST_CASE("w.e.u. and the Veldman arrow") {
  const SetHandle K = k_handle();
  const Witness weu = mcomplete_to_weu({WitnessKind::MReduction, encode(proj(1, 1))});
  for (const auto& name : {"const-0", "const-1", "identity"}) expect_holds(check_weu(weu, K, known(name).index, 100000, name));
  const Witness cr = weu_to_creative(weu, ips::omega_index());
  for (const auto& name : kOutsideK) expect_holds(check_creative(cr, K, known(name).index, 100000, name));
}

TEST_CASE("post's simple set") {
  CHECK(post_simple(0).empty());
  const PostSimple ps = post_simple_run(10000);
  std::set<Nat> es;
  for (const auto& [x, e] : ps.provenance) {
    CHECK(e * 2 < x);
    CHECK(es.insert(e).second);
    CHECK(re::w_mem(e, x, 100000));
  }
  CHECK(ps.provenance.size() == ps.elements.size());
  for (std::uint64_t s : {100, 1000, 5000, 10000}) {
    const FinSet now = post_simple(s);
    for (std::uint64_t n = 0; n <= 50; ++n) {
      std::uint64_t count = 0;
      for (const Nat& x : now) count += x <= Nat(2 * n) ? 1 : 0;
      CHECK(count <= n);
    }
  }
  const Witness b = eff_simple_bound();
  CHECK(*apply(b, 0, 100) == Nat(1));
  CHECK(*apply(b, 1, 100) == Nat(3));
  for (const auto& name : {"divergent", "empty-table"}) expect_holds(check_eff_simple(b, known(name).index, 10000, 64, name));
}

TEST_CASE("deficiency sets") {
  const std::vector<std::uint64_t> head = {3, 1, 2, 0};
  CHECK(deficiency(enum_handle({}), 20).empty());
  CHECK(deficiency(enum_handle(head), 4) == FinSet({0, 1, 2}));
  // oracle: direct double loop over the stage-s view
  const std::vector<std::uint64_t> wild = {5, 0, 6, 2, 3, 1, 4};
  FinSet prev;
  for (std::uint64_t s = 0; s < 12; ++s) {
    const auto a = values(wild, s);
    std::vector<Nat> expect;
    for (std::uint64_t i = 0; i <= s; ++i) {
      for (std::uint64_t t = i + 1; t <= s; ++t) {
        if (a[t] < a[i]) {
          expect.emplace_back(i);
          break;
        }
      }
    }
    const FinSet d = deficiency(enum_handle(wild), s);
    CHECK(d == FinSet(expect));
    for (const Nat& i : prev) CHECK(d.contains(i));
    prev = d;
  }
  CHECK_THROWS_AS(deficiency(enumerated_handle("rep", ips::prog_const(0), 100), 3), BadEnumeration);
}

TEST_CASE("retraceability") {
  const std::vector<std::vector<std::uint64_t>> heads = {{3, 1, 2, 0}, {0, 4, 2, 1, 3}, {2, 0, 1, 6, 5, 4, 3}};
  const std::uint64_t horizon = 10;
  for (const auto& head : heads) {
    const auto a = values(head, horizon);
    const SetHandle h = enum_handle(head);
    for (std::uint64_t s = 0; s <= horizon; ++s) {
      const bool true_stage = std::all_of(a.begin() + s + 1, a.end(), [&](std::uint64_t v) { return v > a[s]; });
      std::optional<Nat> expect;
      if (true_stage) {
        for (std::uint64_t t = 0; t < s; ++t) {
          std::set<std::uint64_t> lhs, rhs(a.begin(), a.begin() + t + 1);
          for (std::uint64_t i = 0; i <= s; ++i) {
            if (a[i] <= a[t]) lhs.insert(a[i]);
          }
          if (lhs == rhs) expect = Nat(t);
        }
      }
      CHECK(retrace_predecessor(h, s, horizon) == expect);
    }
  }
  const Nat evens = encode(op(Op::Monus, {x(1), lit(2)}));
  CHECK(retraceable_decide(evens, 10, 4));
  CHECK_FALSE(retraceable_decide(evens, 10, 5));
  CHECK(retraceable_decide(evens, 10, 0));
  CHECK_THROWS_AS(retraceable_decide(evens, 4, 10), BadArguments);
}

TEST_CASE("deficiency bound from a D-w.e.u. witness") {
  const Witness dw = singleton_sets(k_creative_witness(), WitnessKind::DWeu);
  const Nat enumeration = re::image_to_enum(re::dom_to_image(ips::omega_index()));
  const Witness b = dweu_deficiency_bound(dw, ips::omega_index(), enumeration);
  for (const auto& name : {"divergent", "guard-5", "table-2"}) {
    expect_holds(check_eff_simple(b, known(name).index, 2000, 64, name));
  }
}

TEST_CASE("seu triangle") {
  const SetHandle K = k_handle();
  const Witness m = myhill_backward(k_creative_witness());
  const Witness dseu = dcomplete_to_dseu(singleton_sets(m, WitnessKind::DReduction, 1));
  for (const auto& name : {"const-1", "identity"}) expect_holds(check_dseu(dseu, K, known(name).index, 100000, name));
  expect_holds(check_dseu(dseu, K, ips::prog_const(2), 100000, "const-2"));
  // the proof gives only the D-w.e.u. clause: for constant 0, f(h(e)) meets K
  const Check c0 = check_dseu(dseu, K, known("const-0").index, 20000, "const-0");
  CHECK(c0.verdict == Verdict::Violated);
  expect_holds(check_dweu(dseu, K, known("const-0").index, 20000, "const-0"));
  CHECK(check_dseu(dseu, K, known("divergent").index, 20000).verdict == Verdict::Vacuous);

  const Witness qc = dseu_to_quasicreative(dseu, ips::omega_index());
  for (const auto& name : kOutsideK) expect_holds(check_quasicreative(qc, K, known(name).index, 100000, name));
  // back to d-completeness: e in K iff f(e) meets K, on the whole corpus
  const Witness dc = quasicreative_to_dcomplete(qc);
  for (const auto& k : re::test_corpus()) {
    auto set = apply_set(dc, k.index, 2000000);
    REQUIRE(set);
    bool any = false;
    for (const Nat& z : set->members(16)) any = any || re::k_mem(z, 100000);
    CHECK(any == (k.self == re::Behavior::HaltsOnSelf));
  }
}

TEST_CASE("simple D-w.e.u. set") {
  CHECK(simple_dweu(0).elements.empty());
  const SimpleDweu sd = simple_dweu(10000);
  // the zero program has raw index 2; its rule-2 element is the least of X_2
  auto it = sd.provenance.find(Nat(5));
  REQUIRE(it != sd.provenance.end());
  CHECK(it->second == std::pair<Nat, int>(Nat(2), 2));
  for (std::uint64_t e = 0; e <= 30; ++e) {
    const Nat lo = coding::block_start(e), hi = coding::block_start(e + 1);
    std::uint64_t rule2 = 0, total = 0;
    for (const auto& [x, p] : sd.provenance) {
      if (x < lo || !(x < hi)) continue;
      ++total;
      if (p.second == 2) {
        ++rule2;
        CHECK(p.first == Nat(e));
        CHECK(eval(p.first, {x}, 100000).value == Nat());
      } else {
        CHECK(p.first < Nat(e));
      }
    }
    CHECK(rule2 <= 1);
    CHECK(total <= e + 1);
  }
  const Witness w = block_witness();
  for (std::uint64_t e : {0, 3, 7}) {
    auto set = apply_set(w, e, 10000);
    REQUIRE(set);
    CHECK(*set == Intervals(coding::block(e)));
  }
}

TEST_CASE("strong array from the simple D-w.e.u. witness") {
  const StrongArray sa = strong_array_extract(simple_dweu(100).witness, 3, 10000000);
  REQUIRE(sa.sets.size() == 3);
  CHECK_FALSE(sa.exhausted);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK_FALSE(sa.sets[i].empty());
    for (std::size_t j = i + 1; j < 3; ++j) {
      // brute force over the interval endpoints
      for (const auto& [a, b] : sa.sets[i].parts()) {
        for (const auto& [c, d] : sa.sets[j].parts()) CHECK((b < c || d < a));
      }
    }
  }
  CHECK(strong_array_extract(simple_dweu(100).witness, 3, 10).exhausted);
}

TEST_CASE("fixed-point-free functions") {
  const Nat g = effsimple_to_fpf(eff_simple_bound());
  const SetHandle S = post_simple_handle();
  // raw indices: 0 diverges, 2 is zero, 9 is succ
  for (std::uint64_t e : {0, 2, 9}) expect_holds(check_fpf_domain(g, S, e, 10000, 40, std::to_string(e)));

  for (const auto& name : {"identity", "divergent", "guard-5"}) {
    const auto& k = known(name);
    const ArslanovResult r = arslanov_reduction(k_fpf_program(), k_handle(), k.index, 1000000);
    REQUIRE(r.verdict);
    CHECK(*r.verdict == (k.self == re::Behavior::HaltsOnSelf));
  }
  CHECK_THROWS_AS(arslanov_reduction(k_fpf_program(), post_simple_handle(), 0, 100), BadArguments);
}

TEST_CASE("wtt round trip") {
  const SimpleDweu sd = simple_dweu(10000);
  const SetHandle A = simple_dweu_handle();
  const Nat g = dweu_to_wtt_fpf(sd.witness);
  for (const auto& name : {"zero", "succ", "identity", "const-7", "const-1"}) {
    expect_holds(check_wtt_fpf(g, sd.witness, A, known(name).index, 10000, name));
  }
  // A has no point of X_e yet for constant 0: agreement so far, not a violation
  expect_ok(check_wtt_fpf(g, sd.witness, A, known("const-0").index, 10000, "const-0"));
  // K wtt-reduces to itself with use x + 1
  const SetHandle K = k_handle();
  const Nat a = encode(comp(oracle(), {x(1)}));
  const Witness back = wtt_to_dweu(a, encode(op(Op::Add, {x(1), lit(1)})));
  for (const auto& name : {"const-0", "const-1", "identity"}) {
    const Nat e = known(name).index;
    expect_holds(check_dweu(back, K, e, 100000, name, {wtt_hint(a, e)}));
  }
  const Witness wq = wtt_to_wqc(back, ips::omega_index());
  for (const auto& name : kOutsideK) expect_holds(check_wqc(wq, K, known(name).index, 100000, name));
  const Nat g2 = wqc_to_wtt_fpf(singleton_sets(k_creative_witness(), WitnessKind::WeaklyQuasicreative));
  const Witness single = singleton_sets(k_creative_witness(), WitnessKind::WeaklyQuasicreative);
  for (const auto& name : {"identity", "const-7", "divergent"}) {
    expect_holds(check_wtt_fpf(g2, single, K, known(name).index, 100000, name));
  }
}

TEST_CASE("m and n-d reductions") {
  const Membership K = [](const Nat& x, std::uint64_t s) { return re::k_mem(x, s); };
  std::vector<Nat> samples;
  for (const auto& k : re::test_corpus()) samples.push_back(k.index);
  const auto identity = [](const Nat& x) -> std::optional<Nat> { return x; };
  CHECK(check_m_reduction(identity, K, K, samples, 10000).passed);
  const Nat div = encode(divergent());
  const auto broken = [&](const Nat&) -> std::optional<Nat> { return div; };
  CHECK_FALSE(check_m_reduction(broken, K, K, samples, 10000).passed);

  // K is 4-d-reducible to K via f(x) = (x, div, c(x), empty) with phi_c(x)(y) = phi_x(x)
  const Nat c = encode(univ(x(1), {x(1)}));
  const Nat empty = known("empty-table").index;
  auto f = [&](const Nat& xv) { return std::vector<Nat>{xv, div, ips::smn(c, {xv}), empty}; };
  // 2x in B iff f(x)_1 or f(x)_2 in K; 2x+1 in B iff f(x)_3 or f(x)_4 in K
  const Membership B = [&](const Nat& z, std::uint64_t s) {
    const auto fx = f(z / 2);
    const std::size_t o = z.test_bit(0) ? 2 : 0;
    return re::k_mem(fx[o], s) || re::k_mem(fx[o + 1], s);
  };
  const auto k_to_b = [](const Nat& xv) -> std::optional<Intervals> { return Intervals::range(xv * 2, xv * 2 + 1); };
  const auto b_to_a = [&](const Nat& z) -> std::optional<Intervals> {
    const auto fx = f(z / 2);
    const std::size_t o = z.test_bit(0) ? 2 : 0;
    return Intervals(FinSet({fx[o], fx[o + 1]}));
  };
  CHECK(check_nd_reduction(2, k_to_b, K, B, samples, 10000).passed);
  std::vector<Nat> bsamples;
  for (const Nat& xv : samples) {
    bsamples.push_back(xv * 2);
    bsamples.push_back(xv * 2 + 1);
  }
  CHECK(check_nd_reduction(2, b_to_a, B, K, bsamples, 10000).passed);
  // one point is not enough for K <= B
  const auto one = [](const Nat& xv) -> std::optional<Intervals> { return Intervals::range(xv * 2, xv * 2 + 3); };
  const ReductionReport too_big = check_nd_reduction(2, one, K, B, samples, 10000);
  CHECK_FALSE(too_big.passed);
  CHECK(std::none_of(too_big.samples.begin(), too_big.samples.end(), [](const SampleResult& r) { return r.size_ok; }));
}
