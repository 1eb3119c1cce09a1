#include "rlab/suites.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "rlab/classes.hpp"
#include "rlab/ips.hpp"
#include "rlab/lambda.hpp"
#include "rlab/priority.hpp"
#include "rlab/re_sets.hpp"

namespace rlab::suites {

namespace {

using namespace dsl;

Row row(std::string contract, std::string instance, std::uint64_t stage, bool holds, std::string detail = "") {
  return {std::move(contract), std::move(instance), stage, holds ? "holds" : "violated", std::move(detail)};
}

Row from_check(const cls::Check& c) {
  return {c.contract, c.instance, c.stage, std::string(cls::verdict_name(c.verdict)), c.detail};
}

const re::KnownProgram& known(const std::string& name) {
  for (const auto& k : re::test_corpus()) {
    if (k.name == name) return k;
  }
  throw std::out_of_range(name);
}

// ---- lambda ------------------------------------------------------------------

std::vector<Row> lambda_suite(const Options& o) {
  using namespace lambda;
  std::vector<Row> out;
  const std::uint64_t fuel = o.fuel(100000);
  for (const auto& [name, term, fn] :
       std::vector<std::tuple<std::string, TermPtr, std::function<std::uint64_t(std::uint64_t, std::uint64_t)>>>{
           {"church-plus", plus_term(), [](auto n, auto m) { return n + m; }},
           {"church-times", times_term(), [](auto n, auto m) { return n * m; }}}) {
    std::string bad;
    for (std::uint64_t n = 0; n <= 8; ++n) {
      for (std::uint64_t m = 0; m <= 8; ++m) {
        if (beta_eq(app({term, church(n), church(m)}), church(fn(n, m)), fuel) != BetaEq::Equal) {
          bad += " " + std::to_string(n) + "," + std::to_string(m);
        }
      }
    }
    out.push_back(row(name, "n,m<=8", fuel, bad.empty(), bad.empty() ? "" : "fails at" + bad));
  }
  std::string same;
  for (std::uint64_t n = 0; n <= 8; ++n) {
    for (std::uint64_t m = n + 1; m <= 8; ++m) {
      if (beta_eq(church(n), church(m), fuel) != BetaEq::Different) same += " " + std::to_string(n) + "," + std::to_string(m);
    }
  }
  out.push_back(row("numerals-distinct", "n<m<=8", fuel, same.empty(), same));
  for (const char* a : {"\\x.c", "\\x.x c"}) {
    const TermPtr A = parse(a);
    const TermPtr ya = app(y_term(), A);
    out.push_back(row("y-fixed-point", a, 100, beta_eq(ya, app(A, ya), o.fuel(100)) == BetaEq::Equal));
  }
  return out;
}

// ---- ips -----------------------------------------------------------------------

std::vector<Row> ips_suite(const Options& o) {
  std::vector<Row> out;
  const std::uint64_t fuel = o.fuel(10000);
  auto agree = [&](const std::string& contract, const std::string& inst, const std::function<bool(std::uint64_t)>& f) {
    std::string bad;
    for (std::uint64_t v = 0; v <= 5; ++v) {
      if (!f(v)) bad += " x=" + std::to_string(v);
    }
    out.push_back(row(contract, inst, fuel, bad.empty(), bad));
  };
  for (const auto& entry : ips::corpus()) {
    const Nat e = entry.index;
    for (std::uint64_t y = 0; y <= 2; ++y) {
      const Nat s = ips::smn(e, {y});
      agree("smn", entry.name + " y=" + std::to_string(y),
            [&](std::uint64_t v) { return ips::compare_outcomes(s, {v}, e, {y, v}, fuel).equal; });
    }
    const Nat f = ips::rec_f(e);
    agree("rec_f", entry.name, [&](std::uint64_t v) { return ips::compare_outcomes(f, {v}, e, {f, v}, fuel).equal; });
    const Nat fm = ips::rec_fm(e, {2, 3});
    agree("rec_fm", entry.name,
          [&](std::uint64_t v) { return ips::compare_outcomes(fm, {v}, e, {fm, v, 2, 3}, fuel).equal; });

    // the fixed-point theorems take total transformations: z -> smn(c, z) and
    // (p, z) -> smn(c, p, z), one for each corpus program c
    const Nat t1 = encode(smn_rt(lit(e), {x(1)}));
    const auto kf = ips::kleene_fp(t1, fuel);
    const Outcome kt = eval(t1, {kf.index}, fuel);
    if (!kf.certified || !kt.converged()) {
      out.push_back({"kleene_fp", entry.name, fuel, "inconclusive", "transformation did not converge"});
    } else {
      agree("kleene_fp", entry.name,
            [&](std::uint64_t v) { return ips::compare_outcomes(kf.index, {v}, kt.value, {v}, fuel).equal; });
    }

    const Nat t2 = encode(smn_rt(lit(e), {x(1), x(2)}));
    const auto sf = ips::strong_fp(t2, 1, fuel, {1});
    for (std::uint64_t z = 0; z <= 2; ++z) {
      const Outcome vz = eval(sf.index, {z}, fuel);
      const Outcome target = vz.converged() ? eval(t2, {vz.value, z}, fuel) : Outcome{};
      if (!vz.converged() || !target.converged()) {
        out.push_back({"strong_fp", entry.name, fuel, "inconclusive", "fixed point not reached within fuel"});
        continue;
      }
      agree("strong_fp", entry.name + " z=" + std::to_string(z),
            [&](std::uint64_t v) { return ips::compare_outcomes(vz.value, {v}, target.value, {v}, fuel).equal; });
    }
  }
  return out;
}

// ---- re ----------------------------------------------------------------------------

Nat parity_domain(std::uint64_t r) { return encode(minimize(not_(eq(op(Op::Mod, {x(2), lit(2)}), lit(r))))); }

std::vector<Row> re_suite(const Options& o) {
  std::vector<Row> out;
  const std::uint64_t fuel = o.fuel(100000);
  const Nat below3 = encode(minimize(not_(op(Op::Lt, {x(2), lit(3)}))));
  const Nat from3 = encode(minimize(op(Op::Lt, {x(2), lit(3)})));
  const std::vector<std::tuple<std::string, Nat, Nat>> pairs = {
      {"even/odd", parity_domain(0), parity_domain(1)},
      {"x<3/x>=3", below3, from3},
      {"{1,2}/{5}", re::finset_to_windex({1, 2}), re::finset_to_windex({5})},
  };
  for (const auto& [name, e1, e2] : pairs) {
    const Nat p = re::post_combiner(e1, e2);
    std::string bad;
    for (std::uint64_t v = 0; v <= 100; ++v) {
      const bool in1 = re::w_mem(e1, v, fuel), in2 = re::w_mem(e2, v, fuel);
      if (!in1 && !in2) continue;
      const Outcome r = eval(p, {v}, fuel);
      if (!r.converged() || r.value != Nat(in1 ? 1 : 0)) bad += " " + std::to_string(v);
    }
    out.push_back(row("post-combiner", name, fuel, bad.empty(), bad));
  }
  for (const auto& k : re::test_corpus()) {
    const bool halts = re::k_mem(k.index, o.fuel(100000));
    out.push_back(row("k-membership", k.name, o.fuel(100000), halts == (k.self == re::Behavior::HaltsOnSelf)));
  }
  const Nat w = re::finset_to_windex({1, 5});
  bool exact = true;
  for (std::uint64_t v = 0; v < 20; ++v) exact = exact && re::w_mem(w, v, o.fuel(10000)) == (v == 1 || v == 5);
  out.push_back(row("finset-windex", "{1,5}", o.fuel(10000), exact));
  const auto dom = re::StageSet::domain(parity_domain(0), 40);
  bool monotone = true;
  FinSet prev;
  for (std::uint64_t s : {10, 50, 200, 1000}) {
    const FinSet now = dom.at(o.fuel(s));
    monotone = monotone && prev.subset_of(now);
    prev = now;
  }
  out.push_back(row("stage-monotone", "even domain", 1000, monotone));
  return out;
}

// ---- classes -----------------------------------------------------------------------

std::vector<Row> classes_suite(const Options& o) {
  using namespace cls;
  std::vector<Row> out;
  const std::vector<std::string> outside = {"divergent", "guard-5", "empty-table"};
  const SetHandle K = k_handle();
  const std::uint64_t s = o.fuel(100000);

  const PostSimple ps = post_simple_run(o.stages);
  bool sparse = true, provenance = true;
  for (std::uint64_t n = 0; n <= 50; ++n) {
    std::uint64_t count = 0;
    for (const Nat& v : ps.elements) count += v <= Nat(2 * n) ? 1 : 0;
    sparse = sparse && count <= n;
  }
  for (const auto& [v, e] : ps.provenance) provenance = provenance && e * 2 < v;
  out.push_back(row("post-simple-sparse", "n<=50", o.stages, sparse));
  out.push_back(row("post-simple-provenance", "x>2e", o.stages, provenance));

  const Witness kw = k_creative_witness();
  for (const auto& name : outside) out.push_back(from_check(check_creative(kw, K, known(name).index, s, name)));

  const Witness m = myhill_backward(kw);
  for (const auto& name : {"identity", "divergent", "guard-5"}) {
    const auto& k = known(name);
    const auto y = apply(m, k.index, o.fuel(2000000));
    const bool ok = y && re::k_mem(*y, s) == (k.self == re::Behavior::HaltsOnSelf);
    out.push_back(row("myhill-backward", name, s, ok));
  }

  const Witness dseu = dcomplete_to_dseu(singleton_sets(m, WitnessKind::DReduction, 1));
  for (const auto& name : {"const-1", "identity", "const-7"}) out.push_back(from_check(check_dseu(dseu, K, known(name).index, s, name)));
  const Witness qc = dseu_to_quasicreative(dseu, ips::omega_index());
  for (const auto& name : outside) out.push_back(from_check(check_quasicreative(qc, K, known(name).index, s, name)));
  const Witness dc = quasicreative_to_dcomplete(qc);
  for (const auto& name : {"identity", "divergent", "const-0"}) {
    const auto& k = known(name);
    const auto set = apply_set(dc, k.index, o.fuel(2000000));
    bool any = false;
    if (set) {
      for (const Nat& z : set->members(16)) any = any || re::k_mem(z, s);
    }
    out.push_back(row("d-complete", name, s, set && any == (k.self == re::Behavior::HaltsOnSelf)));
  }

  const SimpleDweu sd = simple_dweu(o.stages);
  const SetHandle A = simple_dweu_handle();
  const Nat g = dweu_to_wtt_fpf(sd.witness);
  for (const auto& name : {"succ", "identity", "const-7"}) {
    out.push_back(from_check(check_wtt_fpf(g, sd.witness, A, known(name).index, o.fuel(10000), name)));
  }
  const Nat a = encode(comp(oracle(), {x(1)}));
  const Witness back = wtt_to_dweu(a, encode(op(Op::Add, {x(1), lit(1)})));
  for (const auto& name : {"const-0", "const-1", "identity"}) {
    const Nat e = known(name).index;
    out.push_back(from_check(check_dweu(back, K, e, s, name, {wtt_hint(a, e)})));
  }
  const Witness single = singleton_sets(kw, WitnessKind::WeaklyQuasicreative);
  const Nat g2 = wqc_to_wtt_fpf(single);
  for (const auto& name : {"identity", "const-7", "divergent"}) {
    out.push_back(from_check(check_wtt_fpf(g2, single, K, known(name).index, s, name)));
  }

  const StrongArray sa = strong_array_extract(simple_dweu(100).witness, 3, o.fuel(10000000));
  bool disjoint = sa.sets.size() == 3 && !sa.exhausted;
  for (std::size_t i = 0; disjoint && i < sa.sets.size(); ++i) {
    disjoint = !sa.sets[i].empty();
    for (std::size_t j = i + 1; j < sa.sets.size(); ++j) {
      for (const auto& [lo1, hi1] : sa.sets[i].parts()) {
        for (const auto& [lo2, hi2] : sa.sets[j].parts()) disjoint = disjoint && (hi1 < lo2 || hi2 < lo1);
      }
    }
  }
  out.push_back(row("strong-array", "simple D-w.e.u.", 100, disjoint));
  return out;
}

// ---- priority ----------------------------------------------------------------------

std::vector<Row> priority_suite(const Options& o) {
  using namespace prio;
  std::vector<Row> out;
  std::vector<std::uint64_t> fib = {0, 1};
  while (fib.size() < 24) fib.push_back(fib[fib.size() - 1] + fib[fib.size() - 2]);

  const auto g = injury_game(8);
  bool fibo = true;
  for (std::size_t n = 0; n <= 8; ++n) {
    fibo = fibo && g.a[n] == Nat(fib[2 * (n + 1)] - 1) && g.b[n] == Nat(fib[2 * (n + 1) + 1] - 1);
  }
  out.push_back(row("injury-fibonacci", "n<=8", 0, fibo));

  const auto sq = find_schedule([](std::uint64_t n) { return Nat(n) * Nat(n); }, 5);
  const auto gs = injury_game(4, sq);
  bool rec = gs.a[0] == Nat(0) && gs.b[0] == Nat(sq[0]), covered = true;
  std::uint64_t sum = 0;
  for (std::size_t n = 0; n < 5; ++n) {
    if (n > 0) rec = rec && gs.a[n] == gs.a[n - 1] + gs.b[n - 1] + 1 && gs.b[n] == gs.b[n - 1] + Nat(sq[n]) * (gs.a[n] + 1);
    covered = covered && Nat(sum) * Nat(sum) >= gs.a[n];
    sum += sq[n];
  }
  out.push_back(row("injury-alpha-beta", "n^2 schedule", 0, rec));
  out.push_back(row("schedule-covers-alpha", "n^2, 5 levels", 0, covered));

  auto fm_rows = [&](const PriorityState& st, const std::string& inst, const std::function<bool(const PriorityState&)>& bound) {
    out.push_back(row("injury-bound", inst, st.stage, st.bound_violations.empty() && bound(st),
                      st.bound_violations.empty() ? "" : st.bound_violations.front()));
    const auto d = fm_disagreement(st);
    out.push_back(row("fm-disagreement", inst, st.stage, d.ok, d.ok ? "" : d.problems.front()));
    const auto u = fm_use_soundness(st);
    out.push_back(row("use-soundness", inst, st.stage, u.ok, u.ok ? "" : u.problems.front()));
  };
  const auto fm = fm_run(6, o.stages);
  fm_rows(fm, "fm max-req 6", [&](const PriorityState& st) {
    bool ok = st.injuries.at("a0") == 0 && st.injuries.at("b0") <= 1;
    for (std::uint64_t e = 0; e <= 6; ++e) {
      ok = ok && st.injuries.at("a" + std::to_string(e)) <= fib[2 * (e + 1)] - 1 &&
           st.injuries.at("b" + std::to_string(e)) <= fib[2 * (e + 1) + 1] - 1;
    }
    return ok;
  });
  std::string t1, t2;
  for (const auto& ev : fm.log) t1 += to_json_line(ev) + "\n";
  for (const auto& ev : fm_run(6, o.stages).log) t2 += to_json_line(ev) + "\n";
  out.push_back(row("deterministic-trace", "fm max-req 6", o.stages, t1 == t2));

  for (const Schedule& s : {Schedule{1}, Schedule{2, 3}, Schedule(sq.begin(), sq.begin() + 3)}) {
    std::string inst = "fm-reordered (";
    for (std::size_t k = 0; k < s.size(); ++k) inst += (k ? "," : "") + std::to_string(s[k]);
    inst += ")";
    const auto gr = injury_game(s.size() - 1, s);
    fm_rows(fm_reordered_run(s, o.stages), inst, [&](const PriorityState& st) {
      bool ok = true;
      std::uint64_t next = 0;
      for (std::size_t level = 0; level < s.size(); ++level) {
        for (std::uint64_t t = 0; t < s[level]; ++t) ok = ok && Nat(st.injuries.at("a" + std::to_string(next++))) <= gr.a[level];
        ok = ok && Nat(st.injuries.at("b" + std::to_string(level))) <= gr.b[level];
      }
      return ok;
    });
  }

  WatchOptions wo;
  const auto ijd = ijd_run(1, 2, o.stages, wo);
  bool placed = true;
  for (std::uint64_t e = 0; e < wo.k_watch; ++e) {
    placed = placed && (ijd.A.contains(2 * e) || ijd.A.contains(2 * e + 1)) == re::k_mem(e, o.stages);
  }
  out.push_back(row("p-placement", "ijd(1,2)", o.stages, placed));
  const auto ci = watch_log_check(ijd);
  out.push_back(row("watch-log", "ijd(1,2)", o.stages, ci.ok, ci.ok ? "" : ci.problems.front()));

  wo.requirements = 24;
  const auto dn = dnotnd_run(o.stages, wo);
  placed = true;
  for (std::uint64_t e = 0; e < wo.k_watch; ++e) {
    bool hit = false;
    for (std::uint64_t n = 0; n <= e; ++n) hit = hit || dn.A.contains(coding::pair_encode(e, n));
    placed = placed && hit == re::k_mem(e, o.stages);
  }
  out.push_back(row("p-placement", "dnotnd", o.stages, placed));
  const auto cd = watch_log_check(dn);
  out.push_back(row("watch-log", "dnotnd", o.stages, cd.ok, cd.ok ? "" : cd.problems.front()));
  return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"lambda", "ips", "re", "classes", "priority"};
  return names;
}

std::vector<Row> run_suite(std::string_view name, const Options& opts) {
  if (name == "all") {
    std::vector<Row> out;
    for (const auto& n : suite_names()) {
      auto rows = run_suite(n, opts);
      out.insert(out.end(), rows.begin(), rows.end());
    }
    return out;
  }
  if (name == "lambda") return lambda_suite(opts);
  if (name == "ips") return ips_suite(opts);
  if (name == "re") return re_suite(opts);
  if (name == "classes") return classes_suite(opts);
  if (name == "priority") return priority_suite(opts);
  throw std::invalid_argument("unknown suite: " + std::string(name));
}

nlohmann::json row_json(const Row& r) {
  return {{"contract", r.contract}, {"instance", r.instance}, {"stage", r.stage}, {"verdict", r.verdict}, {"detail", r.detail}};
}

}  // namespace rlab::suites
