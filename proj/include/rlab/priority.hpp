#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rlab/coding.hpp"
#include "rlab/eval.hpp"

// Finite-injury constructions driven by a watchlist: conditions are checked
// round-robin, each one getting one more unit of fuel per sweep, and the
// first condition found to hold runs its action.
namespace rlab::prio {

// ---- worst-case injury recurrences ----------------------------------------

// Priority order, highest first: a requirement is (letter, index).
struct Req {
  char letter;  // 'a' or 'b'
  std::uint64_t index;
  friend bool operator==(const Req&, const Req&) = default;
};
std::string req_name(const Req& r);

using Schedule = std::vector<std::uint64_t>;

// a_0 > b_0 > a_1 > b_1 > ... for e <= n
std::vector<Req> interleaved_order(std::uint64_t n);
// a_0..a_{A_0-1} > b_0 > a_{A_0}.. > b_1 > ... over the whole schedule
std::vector<Req> scheduled_order(const Schedule& schedule);
// M_x = sum over higher-priority y of the other letter of (M_y + 1)
std::vector<Nat> worst_case_moves(const std::vector<Req>& order);

struct GameResult {
  std::vector<Nat> a;  // M_{a_0..n} or alpha_0..n
  std::vector<Nat> b;  // M_{b_0..n} or beta_0..n
};
// Interleaved without a schedule; otherwise alpha/beta over schedule levels 0..n
// (the schedule needs n + 1 entries).
GameResult injury_game(std::uint64_t n, const std::optional<Schedule>& schedule = std::nullopt);

class NoSchedule : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
using GrowthFn = std::function<Nat(std::uint64_t)>;
// Level n takes the least N >= 1 with f(S + N) >= (S + N + 1)(f(S) + 1), S the
// sum so far; throws NoSchedule when no N <= cutoff works.
Schedule find_schedule(const GrowthFn& f, std::size_t levels, std::uint64_t cutoff = 1 << 24);

// ---- construction state ---------------------------------------------------

enum class EventKind { Fired, Placed, Injured, Moved, Watched };
std::string_view event_name(EventKind k);

struct Event {
  std::uint64_t stage = 0;
  EventKind kind = EventKind::Watched;
  std::string requirement;
  nlohmann::json data;
};
std::string to_json_line(const Event& ev);

// A fired computation, kept for replay.
struct Computation {
  Nat program;
  Nat arg;
  char oracle = 0;  // 'A', 'B' or 0 for none
  std::uint64_t fuel = 0;
  std::uint64_t stage = 0;
  Nat value;
  Nat use;
};

struct PriorityState {
  std::string construction;
  nlohmann::json params;
  std::uint64_t stage = 0;
  FinSet A, B;
  std::vector<std::string> priority;            // requirement ids, highest first
  std::map<std::string, Nat> witness;           // a_e, b_e, p_e or p^i_e
  std::map<std::string, bool> handled;          // C^a_e / C^b_e, or "has fired"
  std::map<std::string, Nat> use;               // U-bounds of fired computations
  std::map<Nat, std::vector<std::string>> c_lists;
  std::map<Nat, std::vector<std::string>> c_prime;
  std::map<std::string, std::uint64_t> injuries;
  std::map<std::string, std::uint64_t> last_injured;
  std::map<std::string, Computation> computations;
  std::map<std::string, FinSet> dsets;          // D-set of the current N computation
  std::vector<std::string> watchlist;           // pending conditions, insertion order
  std::vector<Event> log;
  // tallies above the closed-form worst case, checked every 100 stages
  std::vector<std::string> bound_violations;
};

// ---- requirement programs ---------------------------------------------------

// Oracle program for FM requirement e (one argument, the witness).
Nat fm_program(std::uint64_t e);
// Candidate reduction for N requirements: input <e, p>, or <e, <i, p>> when
// `triple`; output a canonical finite-set code.
Nat reduction_program(std::uint64_t e, bool triple);

// ---- constructions ------------------------------------------------------------

struct FmOptions {
  std::function<Nat(std::uint64_t)> program = fm_program;
  // re-evaluate every entry at its current fuel each sweep instead of using
  // the cached full-budget run; slow, kept as a reference for tests
  bool naive = false;
};
PriorityState fm_run(std::uint64_t max_requirement, std::uint64_t stages, const FmOptions& opts = {});
PriorityState fm_reordered_run(const Schedule& schedule, std::uint64_t stages, const FmOptions& opts = {});

struct WatchOptions {
  std::uint64_t requirements = 8;  // N_0..N_{r-1}; for dnotnd, pi(i, e) < r
  std::uint64_t k_watch = 160;     // e in K watched for e < k_watch (raw indices)
  std::function<Nat(std::uint64_t, bool)> program = reduction_program;
  bool naive = false;
};
PriorityState ijd_run(std::uint64_t i, std::uint64_t j, std::uint64_t stages, const WatchOptions& opts = {});
PriorityState dnotnd_run(std::uint64_t stages, const WatchOptions& opts = {});

// ---- analysis -------------------------------------------------------------------

struct RequirementStatus {
  std::string requirement;
  std::optional<Nat> witness;
  std::uint64_t injuries = 0;
  std::optional<std::uint64_t> last_injured;
  std::uint64_t settled_since = 0;
  bool met = false;
  std::string detail;
};
std::vector<RequirementStatus> requirement_report(const PriorityState& st);
nlohmann::json report_json(const std::vector<RequirementStatus>& report);
nlohmann::json state_json(const PriorityState& st);

struct LogCheck {
  bool ok = true;
  std::vector<std::string> problems;
};
// FM: every fired requirement never injured afterwards replays to its recorded
// value at the final sets and disagrees with its own set at the witness.
LogCheck fm_disagreement(const PriorityState& st);
// FM: each recorded computation is unchanged when the oracle is altered at and
// above its use.
LogCheck fm_use_soundness(const PriorityState& st);
// ijd/dnotnd: every K-event put a block element into A, every B insertion had
// its D-set outside A at that moment, and every injury favours a strictly
// higher-priority requirement (or, in dnotnd, a covered K-block).
LogCheck watch_log_check(const PriorityState& st);

}  // namespace rlab::prio
