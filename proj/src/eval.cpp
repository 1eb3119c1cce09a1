#include "rlab/eval.hpp"

#include <pthread.h>

#include <algorithm>
#include <boost/container/small_vector.hpp>
#include <exception>
#include <unordered_map>

#include "rlab/coding.hpp"

namespace rlab {

namespace {

using Args = boost::container::small_vector<Nat, 6>;

struct OutOfFuel {};

const Nat kZero;

// Builtins on large codes tend to see the same argument over and over (a loop
// reading one interval set), so decoded forms of big codes are memoized.
template <class T, class F>
const T& memo_big(const Nat& code, F&& decode_fn) {
  thread_local std::unordered_map<Nat, T> cache;
  thread_local T scratch;
  if (code.bit_length() < 512) {
    scratch = decode_fn(code);
    return scratch;
  }
  if (auto it = cache.find(code); it != cache.end()) return it->second;
  if (cache.size() >= 64) cache.clear();
  return cache.emplace(code, decode_fn(code)).first->second;
}

const std::vector<Nat>& seq_of(const Nat& c) {
  return memo_big<std::vector<Nat>>(c, [](const Nat& v) { return coding::seq_decode(v); });
}
const Intervals& iv_of(const Nat& c) {
  return memo_big<Intervals>(c, [](const Nat& v) { return Intervals::decode(v); });
}
// list_decode throws on malformed codes; the memo keeps nullopt for those
const std::optional<std::vector<Nat>>& list_of(const Nat& c) {
  return memo_big<std::optional<std::vector<Nat>>>(c, [](const Nat& v) -> std::optional<std::vector<Nat>> {
    try {
      return coding::list_decode(v);
    } catch (const MalformedCode&) {
      return std::nullopt;
    }
  });
}


constexpr std::size_t kCacheLimit = 4096;

std::uint64_t clamp_u64(const Nat& n) {
  auto v = n.to_u64();
  return v ? *v : UINT64_MAX;
}

struct VecHash {
  std::size_t operator()(const std::vector<Nat>& v) const {
    std::size_t h = v.size();
    for (const Nat& x : v) h = h * 1000003U ^ x.hash();
    return h;
  }
};

Nat smn_code(const Nat& p, const std::vector<Nat>& ys) {
  thread_local std::unordered_map<std::vector<Nat>, Nat, VecHash> cache;
  std::vector<Nat> key;
  key.reserve(ys.size() + 1);
  key.push_back(p);
  key.insert(key.end(), ys.begin(), ys.end());
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  if (cache.size() > kCacheLimit) cache.clear();
  Nat code = encode(smn_ast(decode_cached(p), ys));
  cache.emplace(std::move(key), code);
  return code;
}

enum class OracleMode { External, Empty, StageW, Phi };

struct OracleFrame {
  OracleMode mode = OracleMode::External;
  Nat index;
  std::uint64_t stage = 0;
};

class Machine {
 public:
  Machine(std::uint64_t fuel, const EvalOptions* opts, OracleMode base) : left_(fuel), opts_(opts) {
    frames_.push_back({base, Nat(), 0});
  }

  Nat run(const Node& n, const Nat* args, std::size_t argc) {
    charge();
    auto arg = [&](std::size_t j) -> const Nat& { return j < argc ? args[j] : kZero; };
    switch (n.tag) {
      case Tag::Zero:
        return Nat();
      case Tag::Succ:
        return arg(0) + 1;
      case Tag::Proj:
        return arg(n.i - 1);
      case Tag::Const:
        return n.value;
      case Tag::Comp: {
        Args vals;
        vals.reserve(n.kids.size() - 1);
        for (std::size_t j = 1; j < n.kids.size(); ++j) vals.push_back(run(*n.kids[j], args, argc));
        return run(*n.kids[0], vals.data(), vals.size());
      }
      case Tag::PrimRec: {
        const Node& g = *n.kids[0];
        Args buf;
        buf.reserve(argc + 1);
        buf.push_back(Nat());
        buf.push_back(Nat());
        for (std::size_t j = 1; j < argc; ++j) buf.push_back(args[j]);
        Nat acc = run(g, buf.data(), buf.size());
        const Nat bound = arg(0);
        for (Nat i = 1; i <= bound; ++i) {
          buf[0] = i;
          buf[1] = acc;
          acc = run(g, buf.data(), buf.size());
        }
        return acc;
      }
      case Tag::Mu: {
        const Node& g = *n.kids[0];
        Args buf;
        buf.reserve(argc + 1);
        buf.push_back(Nat());
        for (std::size_t j = 0; j < argc; ++j) buf.push_back(args[j]);
        for (;;) {
          charge();
          if (run(g, buf.data(), buf.size()).is_zero()) return buf[0];
          ++buf[0];
        }
      }
      case Tag::Oracle:
        charge();
        return query(arg(0)) ? Nat(1) : Nat();
      case Tag::Builtin:
        return builtin(n, args, argc);
    }
    return Nat();
  }

  std::uint64_t left() const { return left_; }
  const Nat& use() const { return use_; }

 private:
  void charge() {
    if (left_ == 0) throw OutOfFuel{};
    --left_;
  }

  struct FrameGuard {
    Machine& m;
    FrameGuard(Machine& machine, OracleFrame f) : m(machine) { m.frames_.push_back(std::move(f)); }
    ~FrameGuard() { m.frames_.pop_back(); }
  };

  bool query(const Nat& x) {
    const OracleFrame& top = frames_.back();
    switch (top.mode) {
      case OracleMode::External: {
        const bool answer = opts_ && opts_->oracle ? opts_->oracle(x) : false;
        if (x + 1 > use_) use_ = x + 1;
        if (opts_ && opts_->log) opts_->log->push_back({x, answer});
        return answer;
      }
      case OracleMode::Empty:
        return false;
      case OracleMode::StageW: {
        // x in W_{a,s}: a separate, fully bounded computation
        Machine sub(top.stage, nullptr, OracleMode::Empty);
        try {
          sub.run(*decode_cached(top.index), &x, 1);
          return true;
        } catch (const OutOfFuel&) {
          return false;
        }
      }
      case OracleMode::Phi: {
        const Program q = decode_cached(top.index);
        FrameGuard g(*this, {OracleMode::Empty, Nat(), 0});
        return !run(*q, &x, 1).is_zero();
      }
    }
    return false;
  }

  // Runs p for at most s steps out of the remaining pool. Returns the value + 1,
  // or 0 when p needs more than s steps.
  Nat bounded(const Nat& p, std::uint64_t s, const Nat* args, std::size_t argc) {
    const Program prog = decode_cached(p);
    const std::uint64_t saved = left_;
    const std::uint64_t cap = std::min(s, saved);
    left_ = cap;
    try {
      Nat v = run(*prog, args, argc);
      left_ = saved - (cap - left_);
      return v + 1;
    } catch (const OutOfFuel&) {
      if (s <= saved) {
        left_ = saved - s;
        return Nat();
      }
      left_ = 0;
      throw;
    }
  }

  Nat builtin(const Node& n, const Nat* args, std::size_t argc) {
    auto arg = [&](std::size_t j) -> const Nat& { return j < argc ? args[j] : kZero; };
    auto tail = [&](std::size_t from, std::size_t k) -> std::pair<const Nat*, std::size_t> {
      if (argc <= from) return {nullptr, 0};
      return {args + from, std::min(k, argc - from)};
    };
    switch (n.op) {
      case Op::Add:
        return arg(0) + arg(1);
      case Op::Monus:
        return monus(arg(0), arg(1));
      case Op::Mul:
        return arg(0) * arg(1);
      case Op::Div:
        return arg(1).is_zero() ? Nat() : arg(0) / arg(1);
      case Op::Mod:
        return arg(1).is_zero() ? arg(0) : arg(0) % arg(1);
      case Op::Eq:
        return arg(0) == arg(1) ? Nat(1) : Nat();
      case Op::Lt:
        return arg(0) < arg(1) ? Nat(1) : Nat();
      case Op::Select:
        return arg(0).is_zero() ? arg(2) : arg(1);
      case Op::Sg:
        return arg(0).is_zero() ? Nat() : Nat(1);
      case Op::Pair:
        return coding::pair_encode(arg(0), arg(1));
      case Op::Left:
        return coding::pair_left(arg(0));
      case Op::Right:
        return coding::pair_right(arg(0));
      case Op::Bit:
        return arg(0).test_bit(clamp_u64(arg(1))) ? Nat(1) : Nat();
      case Op::SetBit: {
        auto i = arg(1).to_u64();
        if (!i || *i > (std::uint64_t{1} << 32)) return arg(0);
        return arg(0).with_bit(*i);
      }
      case Op::Card:
        return Nat(arg(0).popcount());
      case Op::ListGet:
      case Op::ListLen: {
        const auto& ys = list_of(arg(0));
        if (!ys) return Nat();
        const std::vector<Nat>& xs = *ys;
        if (n.op == Op::ListLen) return Nat(xs.size());
        auto i = arg(1).to_u64();
        return i && *i < xs.size() ? xs[*i] : Nat();
      }
      case Op::ListCons: {
        const auto& ys = list_of(arg(1));
        std::vector<Nat> xs = ys ? *ys : std::vector<Nat>{};
        xs.insert(xs.begin(), arg(0));
        return coding::list_encode(xs);
      }
      case Op::ListMake: {
        std::vector<Nat> xs;
        for (std::uint32_t j = 0; j < n.k; ++j) xs.push_back(arg(j));
        return coding::list_encode(xs);
      }
      case Op::SeqAdd: {
        std::vector<Nat> xs = seq_of(arg(1));
        xs.push_back(arg(0));
        return coding::seq_encode(xs);
      }
      case Op::SeqHas: {
        const std::vector<Nat>& xs = seq_of(arg(1));
        return std::find(xs.begin(), xs.end(), arg(0)) != xs.end() ? Nat(1) : Nat();
      }
      case Op::SeqLen:
        return Nat(seq_of(arg(0)).size());
      case Op::SeqGet: {
        const std::vector<Nat>& xs = seq_of(arg(0));
        auto i = arg(1).to_u64();
        return i && *i < xs.size() ? xs[*i] : Nat();
      }
      case Op::IvHas:
        return iv_of(arg(1)).contains(arg(0)) ? Nat(1) : Nat();
      case Op::IvCard:
        return iv_of(arg(0)).size();
      case Op::IvGet:
        return iv_of(arg(0)).at(arg(1)).value_or(Nat());
      case Op::Univ: {
        const Program prog = decode_cached(arg(0));
        auto [xs, k] = tail(1, n.k);
        return run(*prog, xs, k);
      }
      case Op::StepEval: {
        auto [xs, k] = tail(2, n.k);
        return bounded(arg(0), clamp_u64(arg(1)), xs, k);
      }
      case Op::StepRel: {
        auto [xs, k] = tail(3, n.k);
        const std::uint64_t s = clamp_u64(arg(1));
        FrameGuard g(*this, {OracleMode::StageW, arg(2), s});
        return bounded(arg(0), s, xs, k);
      }
      case Op::UnivRel: {
        const Program prog = decode_cached(arg(0));
        auto [xs, k] = tail(2, n.k);
        FrameGuard g(*this, {OracleMode::Phi, arg(1), 0});
        return run(*prog, xs, k);
      }
      case Op::Smn: {
        std::vector<Nat> ys;
        for (std::uint32_t j = 1; j <= n.k; ++j) ys.push_back(arg(j));
        return smn_code(arg(0), ys);
      }
      case Op::Count_:
        break;
    }
    return Nat();
  }

  std::uint64_t left_;
  const EvalOptions* opts_;
  Nat use_;
  std::vector<OracleFrame> frames_;
};

// Every interpreter frame is charged at least one step, so the native stack
// depth is bounded by the fuel. Large budgets run on a thread whose stack is
// sized accordingly.
constexpr std::uint64_t kInlineFuel = 12000;
constexpr std::uint64_t kBytesPerStep = 640;
thread_local bool on_big_stack = false;

template <class F>
void run_with_stack(std::uint64_t fuel, F&& body) {
  if (fuel <= kInlineFuel || on_big_stack) {
    body();
    return;
  }
  struct Task {
    F* body;
    std::exception_ptr error;
  } task{&body, nullptr};
  auto entry = [](void* raw) -> void* {
    auto* t = static_cast<Task*>(raw);
    on_big_stack = true;
    try {
      (*t->body)();
    } catch (...) {
      t->error = std::current_exception();
    }
    return nullptr;
  };
  const std::uint64_t want = std::min<std::uint64_t>(fuel, std::uint64_t{1} << 26) * kBytesPerStep + (8U << 20);
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, want);
  pthread_t th;
  if (pthread_create(&th, &attr, entry, &task) != 0) {
    pthread_attr_destroy(&attr);
    body();
    return;
  }
  pthread_attr_destroy(&attr);
  pthread_join(th, nullptr);
  if (task.error) std::rethrow_exception(task.error);
}

}  // namespace

Program decode_cached(const Nat& e) {
  thread_local std::unordered_map<Nat, Program> cache;
  if (auto it = cache.find(e); it != cache.end()) return it->second;
  if (cache.size() > kCacheLimit) cache.clear();
  Program p = decode(e);
  cache.emplace(e, p);
  return p;
}

Outcome run(const Program& p, const std::vector<Nat>& args, std::uint64_t fuel, const EvalOptions& opts) {
  Outcome out;
  run_with_stack(fuel, [&] {
    Machine m(fuel, &opts, OracleMode::External);
    try {
      out.value = m.run(*p, args.data(), args.size());
      out.kind = Outcome::Kind::Converged;
    } catch (const OutOfFuel&) {
      out.kind = Outcome::Kind::OutOfFuel;
    }
    out.steps = fuel - m.left();
    out.use = m.use();
  });
  return out;
}

Outcome eval(const Nat& e, const std::vector<Nat>& args, std::uint64_t fuel, const EvalOptions& opts) {
  return run(decode_cached(e), args, fuel, opts);
}

}  // namespace rlab
