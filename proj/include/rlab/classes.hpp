#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rlab/coding.hpp"
#include "rlab/eval.hpp"
#include "rlab/re_sets.hpp"

// Effective-undecidability notions as executable witnesses. A witness is the
// index of a total transformation; the constructive proofs become maps from
// witnesses to witnesses. Finite-set-valued witnesses return Intervals codes.
namespace rlab::cls {

enum class WitnessKind {
  Creative,
  Quasicreative,
  WeaklyQuasicreative,
  Weu,
  DWeu,
  DSeu,
  MReduction,
  DReduction,  // n = size bound, 0 for none (plain d-completeness)
  EffSimpleBound,
  StrongArray,
  Retrace,
};
std::string_view kind_name(WitnessKind k);
bool set_valued(WitnessKind k);

struct Witness {
  WitnessKind kind;
  Nat body;
  std::uint32_t n = 0;
};

std::optional<Nat> apply(const Witness& w, const Nat& x, std::uint64_t fuel);
std::optional<Intervals> apply_set(const Witness& w, const Nat& x, std::uint64_t fuel);

using Membership = std::function<bool(const Nat&, std::uint64_t)>;

struct SetHandle {
  std::string name;
  Membership member;
  // index of an enumeration without repetition, when known
  std::optional<Nat> enumeration;
  // alpha with W_alpha = the set, when known
  std::optional<Nat> windex;
};
SetHandle k_handle();
SetHandle w_handle(const Nat& e);
// member(x, s): x among a(0..s)
SetHandle enumerated_handle(std::string name, const Nat& a, std::uint64_t fuel);

class BadEnumeration : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class BadArguments : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Stage-bounded contract verdicts. Vacuous: the hypothesis visibly fails at the
// stage. Inconclusive: nothing can be concluded at this stage.
enum class Verdict { Holds, Violated, Vacuous, Inconclusive };
std::string_view verdict_name(Verdict v);

struct Check {
  std::string contract;
  std::string instance;
  std::uint64_t stage = 0;
  Verdict verdict = Verdict::Inconclusive;
  std::string detail;
  bool ok() const { return verdict != Verdict::Violated; }
};

// ---- creative sets -----------------------------------------------------

// For K the witness is e itself.
Witness k_creative_witness();
// B_n of the creative-not-simple argument: B_{k+1} = B_k + {f(w(B_k))}.
FinSet creative_complement_enum(const Witness& w, std::size_t n, std::uint64_t fuel);
// m-reduction K -> A via f  ==>  A creative via f o h.
Witness myhill_forward(const Witness& m);
// creative via f  ==>  K m-reduces to A via f o g, with W_g(z) = {f(g(z))} iff z in K.
Witness myhill_backward(const Witness& c, std::uint64_t fuel_hint = 100000);
Witness mcomplete_to_weu(const Witness& m);
// Needs A = W_alpha.
Witness weu_to_creative(const Witness& w, const Nat& alpha);

// Contract checks; e is assumed to satisfy the hypothesis by construction.
Check check_creative(const Witness& w, const SetHandle& a, const Nat& e, std::uint64_t s, std::string instance = "");
Check check_weu(const Witness& w, const SetHandle& a, const Nat& e, std::uint64_t s, std::string instance = "");

// ---- simple sets ----------------------------------------------------------

struct PostSimple {
  FinSet elements;
  std::map<Nat, Nat> provenance;  // x -> the e it was entered for
};
// Stage s runs the dovetail positions t < s: (pair(e, x), fuel) = unpair(t).
PostSimple post_simple_run(std::uint64_t s);
FinSet post_simple(std::uint64_t s);
SetHandle post_simple_handle();
Witness eff_simple_bound();
// |W_{e,s}| restricted to the window stays within the bound.
Check check_eff_simple(const Witness& w, const Nat& e, std::uint64_t s, std::uint64_t window, std::string instance = "");

// ---- deficiency sets and retraceability -----------------------------------

// a(0..s); throws BadEnumeration on a repeat or a divergent value.
std::vector<Nat> enumeration_prefix(const SetHandle& h, std::uint64_t s, std::uint64_t fuel);
// { i <= s : exists t in (i, s], a(t) < a(i) }
FinSet deficiency(const SetHandle& h, std::uint64_t s, std::uint64_t fuel = 100000);
// Largest t < s with {a(0..s)} n {0..a(t)} = {a(0..t)}. Empty when there is
// none or when s is not a true stage of the view a(0..horizon).
std::optional<Nat> retrace_predecessor(const SetHandle& h, std::uint64_t s, std::uint64_t horizon,
                                       std::uint64_t fuel = 100000);
// x in A, given a retrace f of A and a member b > x: x is among f^1(b)..f^b(b).
bool retraceable_decide(const Nat& retrace, const Nat& b, const Nat& x, std::uint64_t fuel = 100000);
// e -> max f(p(alpha, g(e))): an effective-simplicity bound for D_a.
Witness dweu_deficiency_bound(const Witness& dw, const Nat& alpha, const Nat& enumeration);

// ---- D-w.e.u., D-s.e.u., d-complete, quasicreative ------------------------

// x -> {m(x)}
Witness singleton_sets(const Witness& m, WitnessKind kind, std::uint32_t n = 1);
Witness dseu_to_quasicreative(const Witness& w, const Nat& alpha);
Witness quasicreative_to_dcomplete(const Witness& w, std::uint64_t fuel_hint = 100000);
Witness dcomplete_to_dseu(const Witness& w);

// Candidate points beyond the first members of f(e) may be supplied as hints.
Check check_dweu(const Witness& w, const SetHandle& a, const Nat& e, std::uint64_t s, std::string instance = "",
                 const std::vector<Nat>& hints = {});
Check check_dseu(const Witness& w, const SetHandle& a, const Nat& e, std::uint64_t s, std::string instance = "");
Check check_quasicreative(const Witness& w, const SetHandle& a, const Nat& e, std::uint64_t s,
                          std::string instance = "");

struct SimpleDweu {
  FinSet elements;
  // x -> (e, rule)
  std::map<Nat, std::pair<Nat, int>> provenance;
  Witness witness;
};
// Two rules per e, over the same dovetail as post_simple: (1) the first x in W_e
// beyond X_0..X_e, (2) the first x in X_e with phi_e(x) = 0.
SimpleDweu simple_dweu(std::uint64_t s);
SetHandle simple_dweu_handle();
Witness block_witness();

struct StrongArray {
  std::vector<Intervals> sets;
  bool exhausted = false;
};
// The G/Y loop with w-bar(G) the total program 1 - [x in G].
StrongArray strong_array_extract(const Witness& w, std::size_t count, std::uint64_t fuel);
Nat wbar_index(const Intervals& g);

// ---- fixed-point-free functions -------------------------------------------

// Oracle program: e -> an index of the first f(e)+1 elements of the complement.
Nat effsimple_to_fpf(const Witness& bound);
// Oracle program computing, with oracle K, e -> (0 in W_e ? empty : everything).
Nat k_fpf_program();
// W_{g(e)} vs W_e on a window, with oracle answers taken from a at stage s.
Check check_fpf_domain(const Nat& g, const SetHandle& a, const Nat& e, std::uint64_t s, std::uint64_t window,
                       std::string instance = "");

struct ArslanovResult {
  std::optional<bool> verdict;  // x in K_psi
  Nat g_x;
  std::optional<std::uint64_t> s_x;
  std::optional<std::uint64_t> psi;
};
// A needs windex; the proof's g is built with strong_fp.
ArslanovResult arslanov_reduction(const Nat& e_fpf, const SetHandle& a, const Nat& x, std::uint64_t fuel);

// ---- wtt-completeness -------------------------------------------------------

// Oracle program: e -> index of (A restricted to f(e)), divergent off f(e).
Nat dweu_to_wtt_fpf(const Witness& w);
// x -> {0, ..., u(k(g(x)))} where K = phi_a^A with use bounded by u.
Witness wtt_to_dweu(const Nat& a, const Nat& usebound);
// Oracle program: e -> index of f(e) minus A.
Nat wqc_to_wtt_fpf(const Witness& w);
Witness wtt_to_wqc(const Witness& dweu, const Nat& alpha);
// phi_{g(e)} != phi_e on f(e); the use of g(e) stays within max f(e) + 1.
Check check_wtt_fpf(const Nat& g, const Witness& w, const SetHandle& a, const Nat& e, std::uint64_t s,
                    std::string instance = "");
// The point k(g(e)) where the proof locates the disagreement.
Nat wtt_hint(const Nat& a, const Nat& e);
Check check_wqc(const Witness& w, const SetHandle& a, const Nat& e, std::uint64_t s, std::string instance = "");

// ---- reductions --------------------------------------------------------------

struct SampleResult {
  Nat x;
  bool lhs = false;
  bool rhs = false;
  bool size_ok = true;
  bool defined = true;
};
struct ReductionReport {
  std::vector<SampleResult> samples;
  bool passed = true;
};
ReductionReport check_m_reduction(const std::function<std::optional<Nat>(const Nat&)>& f, const Membership& a,
                                  const Membership& b, const std::vector<Nat>& samples, std::uint64_t s);
ReductionReport check_nd_reduction(std::uint32_t n, const std::function<std::optional<Intervals>(const Nat&)>& f,
                                   const Membership& a, const Membership& b, const std::vector<Nat>& samples,
                                   std::uint64_t s);

}  // namespace rlab::cls
