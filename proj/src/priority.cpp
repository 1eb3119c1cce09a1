#include "rlab/priority.hpp"

#include <algorithm>
#include <memory>

#include "rlab/ips.hpp"

namespace rlab::prio {

using nlohmann::json;
using namespace coding;

namespace {

json nj(const Nat& n) {
  if (auto v = n.to_u64()) return *v;
  return n.to_string();
}

json set_json(const FinSet& s) {
  json out = json::array();
  for (const Nat& x : s) out.push_back(nj(x));
  return out;
}

Nat nat_of(const json& j) {
  if (j.is_number_unsigned()) return Nat(j.get<std::uint64_t>());
  return Nat::from_string(j.get<std::string>());
}

}  // namespace

// ---- recurrences ------------------------------------------------------------

std::string req_name(const Req& r) { return std::string(1, r.letter) + std::to_string(r.index); }

std::vector<Req> interleaved_order(std::uint64_t n) {
  std::vector<Req> out;
  for (std::uint64_t e = 0; e <= n; ++e) {
    out.push_back({'a', e});
    out.push_back({'b', e});
  }
  return out;
}

std::vector<Req> scheduled_order(const Schedule& schedule) {
  std::vector<Req> out;
  std::uint64_t next_a = 0;
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    for (std::uint64_t t = 0; t < schedule[k]; ++t) out.push_back({'a', next_a++});
    out.push_back({'b', k});
  }
  return out;
}

std::vector<Nat> worst_case_moves(const std::vector<Req>& order) {
  std::vector<Nat> m(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (order[j].letter != order[i].letter) m[i] += m[j] + 1;
    }
  }
  return m;
}

GameResult injury_game(std::uint64_t n, const std::optional<Schedule>& schedule) {
  GameResult out;
  if (!schedule) {
    const auto m = worst_case_moves(interleaved_order(n));
    for (std::uint64_t e = 0; e <= n; ++e) {
      out.a.push_back(m[2 * e]);
      out.b.push_back(m[2 * e + 1]);
    }
    return out;
  }
  if (schedule->size() < n + 1) throw std::invalid_argument("schedule shorter than n + 1 levels");
  for (std::uint64_t v : *schedule) {
    if (v == 0) throw std::invalid_argument("schedule entries must be positive");
  }
  for (std::uint64_t k = 0; k <= n; ++k) {
    if (k == 0) {
      out.a.push_back(0);
      out.b.push_back((*schedule)[0]);
    } else {
      out.a.push_back(out.a[k - 1] + out.b[k - 1] + 1);
      out.b.push_back(out.b[k - 1] + Nat((*schedule)[k]) * (out.a[k] + 1));
    }
  }
  return out;
}

Schedule find_schedule(const GrowthFn& f, std::size_t levels, std::uint64_t cutoff) {
  Schedule out;
  std::uint64_t sum = 0;
  for (std::size_t level = 0; level < levels; ++level) {
    const Nat need = f(sum) + 1;
    std::uint64_t n = 1;
    while (n <= cutoff && f(sum + n) < Nat(sum + n + 1) * need) ++n;
    if (n > cutoff) {
      throw NoSchedule("no N <= " + std::to_string(cutoff) + " at level " + std::to_string(level));
    }
    out.push_back(n);
    sum += n;
  }
  return out;
}

// ---- events -------------------------------------------------------------------

std::string_view event_name(EventKind k) {
  switch (k) {
    case EventKind::Fired: return "fired";
    case EventKind::Placed: return "placed";
    case EventKind::Injured: return "injured";
    case EventKind::Moved: return "moved";
    case EventKind::Watched: return "watched";
  }
  return "?";
}

std::string to_json_line(const Event& ev) {
  json j{{"stage", ev.stage}, {"event", event_name(ev.kind)}, {"requirement", ev.requirement}, {"data", ev.data}};
  return j.dump();
}

// ---- programs -------------------------------------------------------------------

namespace {

using namespace dsl;

Program query(Program at) { return call(oracle(), {std::move(at)}); }
Program gate(Program p) { return op(Op::Mul, {lit(0), std::move(p)}); }
// about 2n steps of busy work, value 0
Program delay(std::uint64_t n) { return gate(call(fold(x(2)), {lit(n)})); }
Program singleton(Program z) { return op(Op::SetBit, {lit(0), std::move(z)}); }

}  // namespace

Nat fm_program(std::uint64_t e) {
  const std::uint64_t k = e % 6, q = e / 6 + 1;
  Program p;
  switch (k) {
    case 0:  // X(x)
      p = query(x(1));
      break;
    case 1:  // 0, after reading X below x + 4q + 1
      p = op(Op::Add, {gate(call(fold(op(Op::Add, {x(2), query(x(1))})), {op(Op::Add, {x(1), lit(4 * q)})})),
                       delay(30 * q)});
      break;
    case 2:  // 1 - X(0)
      p = not_(query(lit(0)));
      break;
    case 3:  // X(x + 1), slowly
      p = op(Op::Add, {delay(60 * q), query(op(Op::Add, {x(1), lit(1)}))});
      break;
    case 4:  // 0 once X is nonempty
      p = gate(minimize(not_(query(x(1)))));
      break;
    default:  // 0, no queries
      p = delay(5 * q);
      break;
  }
  return encode(p);
}

Nat reduction_program(std::uint64_t e, bool triple) {
  // Targets sit in the blocks of the raw indices 74, 149 and 150, which halt
  // on themselves only after about 76 and 151 steps, so their K-events come
  // after these sets are committed.
  const Program pv = triple ? op(Op::Right, {op(Op::Right, {x(1)})}) : op(Op::Right, {x(1)});
  auto plus = [&](std::uint64_t c) { return op(Op::Add, {pv, lit(c)}); };
  Program d;
  switch (e % 8) {
    case 0: d = singleton(op(Op::Add, {op(Op::Mul, {lit(2), op(Op::Mod, {pv, lit(4)})}), lit(4)})); break;
    case 1: d = singleton(plus(148)); break;
    // {<1,0>, <1,1>, <74,p>}: covers the K-block of 1
    case 2: d = op(Op::SetBit, {op(Op::SetBit, {singleton(lit(1)), lit(4)}), op(Op::Pair, {lit(74), pv})}); break;
    case 3: d = lit(0); break;
    case 4: d = minimize(lit(1)); break;
    case 5: d = singleton(op(Op::Add, {op(Op::Mul, {lit(2), pv}), lit(149)})); break;
    case 6: d = op(Op::Add, {delay(40), singleton(plus(298))}); break;
    default: d = singleton(plus(299)); break;
  }
  return encode(d);
}

// ---- watchlist engine -------------------------------------------------------------

namespace {

struct Entry {
  std::string req;
  Nat program, arg;
  char oracle = 0;
  std::uint64_t added = 0;
  std::uint64_t fuel = 0;
  bool alive = true;
  bool cached = false;
  Outcome out;
  std::vector<Query> log;
  std::uint64_t seen_version = 0;
};

// Every sweep gives each entry present at its start one more unit of fuel, in
// insertion order. Instead of re-running an entry at each fuel, it is run once
// at the largest fuel it can reach; it fires at the first sweep whose fuel
// covers the recorded step count, provided the oracle still answers its
// logged queries the same way. Otherwise it is run again.
class Engine {
 public:
  using Handler = std::function<void(Entry&, const Outcome&)>;

  Engine(PriorityState& st, std::uint64_t stages, bool naive) : st_(st), stages_(stages), naive_(naive) {}

  bool member(char set, const Nat& x) const { return (set == 'A' ? st_.A : st_.B).contains(x); }

  void put(char set, const Nat& x, const std::string& req, json data) {
    FinSet& s = set == 'A' ? st_.A : st_.B;
    s = s.with(x);
    ++(set == 'A' ? version_a_ : version_b_);
    data["set"] = std::string(1, set);
    data["x"] = nj(x);
    log(EventKind::Placed, req, std::move(data));
  }

  void log(EventKind kind, const std::string& req, json data) {
    st_.log.push_back({st_.stage, kind, req, std::move(data)});
  }

  void watch(const std::string& req, const Nat& program, const Nat& arg, char oracle) {
    auto en = std::make_unique<Entry>();
    en->req = req;
    en->program = program;
    en->arg = arg;
    en->oracle = oracle;
    en->added = st_.stage;
    by_req_[req] = en.get();
    entries_.push_back(std::move(en));
    json data{{"arg", nj(arg)}};
    if (oracle) data["oracle"] = std::string(1, oracle);
    log(EventKind::Watched, req, std::move(data));
    sync_watchlist();
  }

  void drop(const std::string& req) {
    auto it = by_req_.find(req);
    if (it == by_req_.end()) return;
    it->second->alive = false;
    by_req_.erase(it);
    sync_watchlist();
  }

  void run(const Handler& on_fire, const std::function<void()>& checkpoint) {
    while (st_.stage < stages_) {
      ++st_.stage;
      const std::size_t n = entries_.size();
      for (std::size_t i = 0; i < n; ++i) {
        Entry& en = *entries_[i];
        if (!en.alive) continue;
        ++en.fuel;
        if (auto out = ready(en)) {
          en.alive = false;
          by_req_.erase(en.req);
          sync_watchlist();
          on_fire(en, *out);
        }
      }
      std::erase_if(entries_, [](const auto& e) { return !e->alive; });
      if (st_.stage % 100 == 0) checkpoint();
    }
    checkpoint();
  }

 private:
  std::uint64_t version(char set) const { return set == 'A' ? version_a_ : version_b_; }

  Oracle oracle_of(char set) const {
    if (!set) return {};
    const FinSet* s = set == 'A' ? &st_.A : &st_.B;
    return [s](const Nat& z) { return s->contains(z); };
  }

  std::optional<Outcome> ready(Entry& en) {
    if (naive_) {
      Outcome out = eval(en.program, {en.arg}, en.fuel, {oracle_of(en.oracle), nullptr});
      if (out.converged()) return out;
      return std::nullopt;
    }
    bool fresh = en.cached;
    if (fresh && en.oracle && en.seen_version != version(en.oracle)) {
      fresh = std::all_of(en.log.begin(), en.log.end(), [&](const Query& q) { return member(en.oracle, q.x) == q.answer; });
      if (fresh) en.seen_version = version(en.oracle);
    }
    if (!fresh) {
      en.log.clear();
      en.out = eval(en.program, {en.arg}, stages_ - en.added, {oracle_of(en.oracle), en.oracle ? &en.log : nullptr});
      en.cached = true;
      en.seen_version = en.oracle ? version(en.oracle) : 0;
    }
    if (en.out.converged() && en.out.steps <= en.fuel) return en.out;
    return std::nullopt;
  }

  void sync_watchlist() {
    st_.watchlist.clear();
    for (const auto& en : entries_) {
      if (en->alive) st_.watchlist.push_back(en->req);
    }
  }

  PriorityState& st_;
  std::uint64_t stages_;
  bool naive_;
  std::vector<std::unique_ptr<Entry>> entries_;
  std::map<std::string, Entry*> by_req_;
  std::uint64_t version_a_ = 0, version_b_ = 0;
};

// ---- Friedberg-Muchnik ---------------------------------------------------------------

class FmConstruction {
 public:
  FmConstruction(std::vector<Req> order, std::uint64_t stages, const FmOptions& opts, std::string name)
      : order_(std::move(order)), opts_(opts), eng_(st_, stages, opts.naive) {
    st_.construction = std::move(name);
    bound_ = worst_case_moves(order_);
    for (std::size_t r = 0; r < order_.size(); ++r) {
      const std::string id = req_name(order_[r]);
      rank_[id] = r;
      st_.priority.push_back(id);
      st_.witness[id] = order_[r].index;
      st_.handled[id] = false;
      st_.injuries[id] = 0;
    }
    for (std::size_t r = 0; r < order_.size(); ++r) watch(r);
  }

  PriorityState run() {
    eng_.run([this](Entry& en, const Outcome& out) { fire(en, out); }, [this] { check_bounds(); });
    return std::move(st_);
  }

 private:
  static char set_of(char letter) { return letter == 'a' ? 'A' : 'B'; }
  static char other(char letter) { return letter == 'a' ? 'b' : 'a'; }

  void watch(std::size_t r) {
    const Req& q = order_[r];
    const std::string id = req_name(q);
    eng_.watch(id, opts_.program(q.index), st_.witness[id], set_of(other(q.letter)));
  }

  // mu x [x not in X, x >= every recorded use of the other letter, x no current witness]
  Nat fresh(char letter) const {
    Nat x;
    for (const auto& [id, u] : st_.use) {
      if (id[0] != letter && u > x) x = u;
    }
    auto taken = [&](const Nat& z) {
      if (eng_.member(set_of(letter), z)) return true;
      for (const Req& q : order_) {
        if (q.letter == letter && st_.witness.at(req_name(q)) == z) return true;
      }
      return false;
    };
    while (taken(x)) ++x;
    return x;
  }

  void injure(std::size_t r, const std::string& favor, const std::string& reason) {
    const std::string id = req_name(order_[r]);
    ++st_.injuries[id];
    st_.last_injured[id] = st_.stage;
    eng_.log(EventKind::Injured, id, {{"favor", favor}, {"reason", reason}});
    const Nat from = st_.witness[id];
    const Nat to = fresh(order_[r].letter);
    st_.witness[id] = to;
    eng_.log(EventKind::Moved, id, {{"from", nj(from)}, {"to", nj(to)}});
    eng_.drop(id);
    watch(r);
  }

  void fire(Entry& en, const Outcome& out) {
    const std::size_t r = rank_.at(en.req);
    const char letter = order_[r].letter;
    const Nat x = st_.witness[en.req];
    st_.handled[en.req] = true;
    st_.use[en.req] = out.use;
    st_.computations[en.req] = {en.program, en.arg, en.oracle, en.fuel, st_.stage, out.value, out.use};
    eng_.log(EventKind::Fired, en.req,
             {{"value", nj(out.value)}, {"use", nj(out.use)}, {"fuel", en.fuel}, {"witness", nj(x)}});
    for (std::size_t s = r + 1; s < order_.size(); ++s) {
      const std::string id = req_name(order_[s]);
      if (order_[s].letter != letter && !st_.handled[id] && st_.witness[id] < out.use) {
        injure(s, en.req, "witness-below-use");
      }
    }
    if (!out.value.is_zero()) return;
    eng_.put(set_of(letter), x, en.req, json::object());
    for (std::size_t s = r + 1; s < order_.size(); ++s) {
      const std::string id = req_name(order_[s]);
      if (order_[s].letter == letter || !st_.handled[id] || st_.use[id] <= x) continue;
      st_.handled[id] = false;
      st_.use.erase(id);
      st_.computations.erase(id);
      injure(s, en.req, "computation-destroyed");
    }
  }

  void check_bounds() {
    for (std::size_t r = 0; r < order_.size(); ++r) {
      const std::string id = req_name(order_[r]);
      if (Nat(st_.injuries[id]) > bound_[r]) {
        st_.bound_violations.push_back("stage " + std::to_string(st_.stage) + ": " + id + " injured " +
                                       std::to_string(st_.injuries[id]) + " > " + bound_[r].to_string());
      }
    }
  }

  std::vector<Req> order_;
  FmOptions opts_;
  PriorityState st_;
  Engine eng_;
  std::map<std::string, std::size_t> rank_;
  std::vector<Nat> bound_;
};

// ---- d-completeness constructions ------------------------------------------------------

// Shared by ijd (fixed-size blocks, one C list) and dnotnd (K-blocks <e,0..e>,
// lists C and C').
class WatchConstruction {
 public:
  WatchConstruction(bool dnotnd, std::uint64_t i, std::uint64_t j, std::uint64_t stages, const WatchOptions& opts)
      : dnotnd_(dnotnd), i_(i), j_(j), opts_(opts), eng_(st_, stages, opts.naive) {
    st_.construction = dnotnd ? "dnotnd" : "ijd";
    st_.params = dnotnd ? json{{"requirements", opts.requirements}, {"k_watch", opts.k_watch}}
                        : json{{"i", i}, {"j", j}, {"requirements", opts.requirements}, {"k_watch", opts.k_watch}};
    for (std::uint64_t e = 0; e < opts.k_watch; ++e) {
      const std::string id = "P" + std::to_string(e);
      st_.priority.push_back(id);
      st_.handled[id] = false;
    }
    for (std::uint64_t r = 0; r < opts.requirements; ++r) {
      NReq n;
      if (dnotnd) {
        const auto [ii, e] = pair_decode(r);
        n.e = *e.to_u64();
        n.i = *ii.to_u64();
      } else {
        n.e = r;
        n.i = i;
      }
      n.id = dnotnd ? "N" + std::to_string(n.e) + "^" + std::to_string(n.i) : "N" + std::to_string(n.e);
      st_.priority.push_back(n.id);
      st_.witness[n.id] = 0;
      st_.handled[n.id] = false;
      st_.injuries[n.id] = 0;
      nreq_[n.id] = n;
    }
    for (std::size_t r = 0; r < st_.priority.size(); ++r) rank_[st_.priority[r]] = r;
    for (std::uint64_t e = 0; e < opts.k_watch; ++e) eng_.watch("P" + std::to_string(e), e, e, 0);
    for (std::uint64_t r = 0; r < opts.requirements; ++r) watch_n(st_.priority[opts.k_watch + r]);
  }

  PriorityState run() {
    eng_.run(
        [this](Entry& en, const Outcome& out) {
          if (en.req[0] == 'P') fire_p(en);
          else fire_n(en, out);
        },
        [] {});
    return std::move(st_);
  }

 private:
  struct NReq {
    std::uint64_t e = 0, i = 0;
    std::string id;
  };

  Nat code(const NReq& n) const {
    const Nat& p = st_.witness.at(n.id);
    return dnotnd_ ? pair_encode(n.e, pair_encode(n.i, p)) : pair_encode(n.e, p);
  }

  void watch_n(const std::string& id) {
    const NReq& n = nreq_.at(id);
    eng_.watch(id, opts_.program(n.e, dnotnd_), code(n), 0);
  }

  std::vector<Nat> block_of_p(std::uint64_t e) const {
    std::vector<Nat> out;
    if (dnotnd_) {
      for (std::uint64_t n = 0; n <= e; ++n) out.push_back(pair_encode(e, n));
    } else {
      for (std::uint64_t n = 0; n < j_; ++n) out.emplace_back(j_ * e + n);
    }
    return out;
  }

  // highest-priority entry of a nonempty C list
  std::size_t min_rank(const std::vector<std::string>& c) const {
    std::size_t m = SIZE_MAX;
    for (const auto& id : c) m = std::min(m, rank_.at(id));
    return m;
  }

  static void remove_everywhere(std::map<Nat, std::vector<std::string>>& lists, const std::string& id) {
    for (auto it = lists.begin(); it != lists.end();) {
      std::erase(it->second, id);
      it = it->second.empty() ? lists.erase(it) : std::next(it);
    }
  }

  void fire_p(Entry& en) {
    const std::uint64_t e = *en.arg.to_u64();
    st_.handled[en.req] = true;
    eng_.log(EventKind::Fired, en.req, {{"fuel", en.fuel}});
    const auto blk = block_of_p(e);
    auto c_at = [&](const Nat& z) -> const std::vector<std::string>* {
      auto it = st_.c_lists.find(z);
      return it == st_.c_lists.end() || it->second.empty() ? nullptr : &it->second;
    };
    std::optional<std::size_t> pick;
    for (std::size_t n = 0; n < blk.size() && !pick; ++n) {
      if (!c_at(blk[n])) pick = n;
    }
    std::string favor;
    if (!pick) {
      std::size_t best = 0, global = SIZE_MAX;
      for (std::size_t n = 0; n < blk.size(); ++n) {
        const std::size_t m = min_rank(*c_at(blk[n]));
        global = std::min(global, m);
        if (m > min_rank(*c_at(blk[best]))) best = n;
      }
      pick = best;
      favor = st_.priority[global];
    }
    const Nat z = blk[*pick];
    eng_.put('A', z, en.req, {{"block", e}});
    std::vector<std::string> victims;
    std::vector<std::string> guarded;
    if (auto c = c_at(z)) guarded = *c;
    if (dnotnd_) {
      // C' holds every dependent of z; the ones missing from C cover a K-block
      auto it = st_.c_prime.find(z);
      if (it != st_.c_prime.end()) victims = it->second;
    } else if (!favor.empty()) {
      victims = guarded;
    }
    for (const auto& id : victims) {
      const bool in_c = std::find(guarded.begin(), guarded.end(), id) != guarded.end();
      injure(id, in_c ? favor : en.req, in_c ? "block-placement" : "block-cover");
    }
  }

  void injure(const std::string& id, const std::string& favor, const std::string& reason) {
    ++st_.injuries[id];
    st_.last_injured[id] = st_.stage;
    eng_.log(EventKind::Injured, id, {{"favor", favor}, {"reason", reason}});
    const Nat from = st_.witness[id];
    st_.witness[id] = from + 1;
    eng_.log(EventKind::Moved, id, {{"from", nj(from)}, {"to", nj(from + 1)}});
    st_.handled[id] = false;
    st_.dsets.erase(id);
    st_.computations.erase(id);
    remove_everywhere(st_.c_lists, id);
    remove_everywhere(st_.c_prime, id);
    eng_.drop(id);
    watch_n(id);
  }

  // least e' whose whole K-block lies in d
  std::optional<std::uint64_t> covered_block(const FinSet& d) const {
    for (std::uint64_t e = 0; e < d.size(); ++e) {
      bool all = true;
      for (std::uint64_t n = 0; n <= e && all; ++n) all = d.contains(pair_encode(e, n));
      if (all) return e;
    }
    return std::nullopt;
  }

  void fire_n(Entry& en, const Outcome& out) {
    const NReq& n = nreq_.at(en.req);
    st_.handled[en.req] = true;
    st_.computations[en.req] = {en.program, en.arg, 0, en.fuel, st_.stage, out.value, out.use};
    json data{{"size", out.value.popcount()}, {"fuel", en.fuel}, {"arg", nj(en.arg)}};
    if (out.value.popcount() > n.i) {
      data["outcome"] = "too-large";
      eng_.log(EventKind::Fired, en.req, std::move(data));
      return;
    }
    const FinSet d = finset_decode(out.value);
    st_.dsets[en.req] = d;
    data["dset"] = set_json(d);
    if (d.intersects(st_.A)) {
      data["outcome"] = "meets-A";
      eng_.log(EventKind::Fired, en.req, std::move(data));
      return;
    }
    data["outcome"] = "diagonalize";
    eng_.log(EventKind::Fired, en.req, std::move(data));
    json placed{{"dset", set_json(d)}};
    const auto cover = dnotnd_ ? covered_block(d) : std::nullopt;
    if (cover) placed["covers"] = *cover;
    eng_.put('B', en.arg, en.req, std::move(placed));
    for (const Nat& z : d) {
      if (dnotnd_) st_.c_prime[z].push_back(en.req);
      if (!cover) st_.c_lists[z].push_back(en.req);
    }
  }

  bool dnotnd_;
  std::uint64_t i_, j_;
  WatchOptions opts_;
  PriorityState st_;
  Engine eng_;
  std::map<std::string, NReq> nreq_;
  std::map<std::string, std::size_t> rank_;
};

}  // namespace

PriorityState fm_run(std::uint64_t max_requirement, std::uint64_t stages, const FmOptions& opts) {
  return FmConstruction(interleaved_order(max_requirement), stages, opts, "fm").run();
}

PriorityState fm_reordered_run(const Schedule& schedule, std::uint64_t stages, const FmOptions& opts) {
  if (schedule.empty()) throw std::invalid_argument("schedule must be nonempty");
  if (std::find(schedule.begin(), schedule.end(), 0) != schedule.end()) {
    throw std::invalid_argument("schedule entries must be positive");
  }
  return FmConstruction(scheduled_order(schedule), stages, opts, "fm-reordered").run();
}

PriorityState ijd_run(std::uint64_t i, std::uint64_t j, std::uint64_t stages, const WatchOptions& opts) {
  if (i >= j) throw std::invalid_argument("ijd needs i < j");
  return WatchConstruction(false, i, j, stages, opts).run();
}

PriorityState dnotnd_run(std::uint64_t stages, const WatchOptions& opts) {
  return WatchConstruction(true, 0, 0, stages, opts).run();
}

// ---- analysis ----------------------------------------------------------------------------

namespace {

Outcome replay(const Computation& c, const FinSet& oracle_set, std::optional<Nat> flip_from = std::nullopt) {
  Oracle o;
  if (c.oracle) {
    o = [&](const Nat& z) {
      const bool in = oracle_set.contains(z);
      return flip_from && z >= *flip_from ? !in : in;
    };
  }
  return eval(c.program, {c.arg}, c.fuel, {o, nullptr});
}

const FinSet& set_named(const PriorityState& st, char set) { return set == 'A' ? st.A : st.B; }

bool is_fm(const PriorityState& st) { return st.construction.rfind("fm", 0) == 0; }

std::vector<Nat> p_block(const PriorityState& st, std::uint64_t e) {
  std::vector<Nat> out;
  if (st.construction == "dnotnd") {
    for (std::uint64_t n = 0; n <= e; ++n) out.push_back(pair_encode(e, n));
  } else {
    const std::uint64_t j = st.params.at("j");
    for (std::uint64_t n = 0; n < j; ++n) out.emplace_back(j * e + n);
  }
  return out;
}

}  // namespace

std::vector<RequirementStatus> requirement_report(const PriorityState& st) {
  std::vector<RequirementStatus> out;
  for (const auto& id : st.priority) {
    RequirementStatus r;
    r.requirement = id;
    if (auto it = st.witness.find(id); it != st.witness.end()) r.witness = it->second;
    if (auto it = st.injuries.find(id); it != st.injuries.end()) r.injuries = it->second;
    if (auto it = st.last_injured.find(id); it != st.last_injured.end()) {
      r.last_injured = it->second;
      r.settled_since = it->second;
    }
    const bool fired = st.handled.count(id) && st.handled.at(id);
    if (!fired) {
      r.detail = "pending";
    } else if (is_fm(st)) {
      const Computation& c = st.computations.at(id);
      const Outcome o = replay(c, set_named(st, c.oracle));
      const bool own = set_named(st, id[0] == 'a' ? 'A' : 'B').contains(*r.witness);
      r.met = o.converged() && o.value == c.value && o.value != Nat(own ? 1 : 0);
      r.detail = "value " + c.value.to_string() + (r.met ? ", disagrees" : ", replay differs");
    } else if (id[0] == 'P') {
      const auto blk = p_block(st, std::stoull(id.substr(1)));
      r.met = std::any_of(blk.begin(), blk.end(), [&](const Nat& z) { return st.A.contains(z); });
      r.detail = r.met ? "block meets A" : "block misses A";
    } else {
      const Computation& c = st.computations.at(id);
      auto d = st.dsets.find(id);
      if (d == st.dsets.end()) {
        r.met = true;
        r.detail = "D too large";
      } else {
        const bool in_b = st.B.contains(c.arg);
        const bool hit = d->second.intersects(st.A);
        r.met = in_b != hit;
        r.detail = in_b ? (hit ? "in B, D meets A" : "in B, D outside A") : (hit ? "D meets A" : "outside B, D misses A");
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

json report_json(const std::vector<RequirementStatus>& report) {
  json out = json::array();
  for (const auto& r : report) {
    json j{{"requirement", r.requirement},
           {"injuries", r.injuries},
           {"settled_since", r.settled_since},
           {"status", r.met ? "met" : "pending"},
           {"detail", r.detail}};
    j["witness"] = r.witness ? nj(*r.witness) : json(nullptr);
    j["last_injured"] = r.last_injured ? json(*r.last_injured) : json(nullptr);
    out.push_back(std::move(j));
  }
  return out;
}

json state_json(const PriorityState& st) {
  json j{{"construction", st.construction}, {"stage", st.stage}, {"A", set_json(st.A)}, {"B", set_json(st.B)}};
  j["params"] = st.params;
  json w = json::object(), inj = json::object(), c = json::object(), cp = json::object();
  for (const auto& [id, x] : st.witness) w[id] = nj(x);
  for (const auto& [id, n] : st.injuries) inj[id] = n;
  for (const auto& [z, ids] : st.c_lists) c[z.to_string()] = ids;
  for (const auto& [z, ids] : st.c_prime) cp[z.to_string()] = ids;
  j["witness"] = w;
  j["injuries"] = inj;
  j["C"] = c;
  if (st.construction == "dnotnd") j["C'"] = cp;
  j["watchlist"] = st.watchlist;
  j["bound_violations"] = st.bound_violations;
  return j;
}

LogCheck fm_disagreement(const PriorityState& st) {
  LogCheck out;
  for (const auto& [id, c] : st.computations) {
    if (!st.handled.at(id)) continue;
    const Outcome o = replay(c, set_named(st, c.oracle));
    const bool own = set_named(st, id[0] == 'a' ? 'A' : 'B').contains(st.witness.at(id));
    if (!o.converged() || o.value != c.value) {
      out.problems.push_back(id + ": replay gives a different outcome");
    } else if (o.value == Nat(own ? 1 : 0)) {
      out.problems.push_back(id + ": value agrees with its own set at the witness");
    }
  }
  out.ok = out.problems.empty();
  return out;
}

LogCheck fm_use_soundness(const PriorityState& st) {
  LogCheck out;
  for (const auto& [id, c] : st.computations) {
    const Outcome o = replay(c, set_named(st, c.oracle), c.use);
    if (!o.converged() || o.value != c.value || o.use != c.use) {
      out.problems.push_back(id + ": computation changes when the oracle changes at or above its use");
    }
  }
  out.ok = out.problems.empty();
  return out;
}

LogCheck watch_log_check(const PriorityState& st) {
  LogCheck out;
  std::map<std::string, std::size_t> rank;
  for (std::size_t r = 0; r < st.priority.size(); ++r) rank[st.priority[r]] = r;
  FinSet a;
  std::map<std::string, FinSet> dset;  // D-set of each requirement's latest B insertion
  std::optional<std::uint64_t> open_p;
  for (const Event& ev : st.log) {
    if (open_p && !(ev.kind == EventKind::Placed && ev.requirement == st.priority[*open_p])) {
      out.problems.push_back(st.priority[*open_p] + ": K-event without a placement");
    }
    open_p.reset();
    if (ev.kind == EventKind::Fired && ev.requirement[0] == 'P') {
      open_p = rank.at(ev.requirement);
    } else if (ev.kind == EventKind::Placed && ev.data.at("set") == "A") {
      const Nat x = nat_of(ev.data.at("x"));
      const auto blk = p_block(st, std::stoull(ev.requirement.substr(1)));
      if (std::find(blk.begin(), blk.end(), x) == blk.end()) {
        out.problems.push_back(ev.requirement + ": placed " + x.to_string() + " outside its block");
      }
      a = a.with(x);
    } else if (ev.kind == EventKind::Placed) {
      std::vector<Nat> xs;
      for (const auto& v : ev.data.at("dset")) xs.push_back(nat_of(v));
      const FinSet d(std::move(xs));
      if (d.intersects(a)) out.problems.push_back(ev.requirement + ": B insertion with D meeting A");
      dset[ev.requirement] = d;
    } else if (ev.kind == EventKind::Injured) {
      const std::string favor = ev.data.at("favor");
      if (!rank.count(favor) || rank.at(favor) >= rank.at(ev.requirement)) {
        out.problems.push_back(ev.requirement + " injured in favour of " + favor);
      }
      if (ev.data.at("reason") == "block-cover") {
        // only a D-set that contains a whole K-block escapes the C lists
        const FinSet& d = dset[ev.requirement];
        bool covers = false;
        for (std::uint64_t e = 0; e < d.size() && !covers; ++e) {
          bool all = true;
          for (std::uint64_t n = 0; n <= e && all; ++n) all = d.contains(pair_encode(e, n));
          covers = all;
        }
        if (!covers) out.problems.push_back(ev.requirement + ": block-cover injury without a covered block");
      }
    }
  }
  if (open_p) out.problems.push_back(st.priority[*open_p] + ": K-event without a placement");
  if (st.construction == "dnotnd") {
    for (const auto& [z, ids] : st.c_lists) {
      auto it = st.c_prime.find(z);
      for (const auto& id : ids) {
        if (it == st.c_prime.end() || std::find(it->second.begin(), it->second.end(), id) == it->second.end()) {
          out.problems.push_back(id + " in C_" + z.to_string() + " but not in C'");
        }
      }
    }
  }
  out.ok = out.problems.empty();
  return out;
}

}  // namespace rlab::prio
