#include "rlab/lambda.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "rlab/program.hpp"

namespace rlab::lambda {

TermPtr var(std::string name) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Var;
  t->name = std::move(name);
  return t;
}

TermPtr app(TermPtr f, TermPtr a) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::App;
  t->left = std::move(f);
  t->right = std::move(a);
  return t;
}

TermPtr app(std::initializer_list<TermPtr> terms) {
  auto it = terms.begin();
  TermPtr out = *it++;
  for (; it != terms.end(); ++it) out = app(out, *it);
  return out;
}

TermPtr lam(std::string binder, TermPtr body) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Abs;
  t->name = std::move(binder);
  t->left = std::move(body);
  return t;
}

TermPtr lam(std::initializer_list<std::string> binders, TermPtr body) {
  for (auto it = std::rbegin(binders); it != std::rend(binders); ++it) body = lam(*it, body);
  return body;
}

namespace {

class TermParser {
 public:
  explicit TermParser(std::string_view s) : s_(s) {}

  TermPtr parse_all() {
    TermPtr t = term();
    skip();
    if (pos_ != s_.size()) throw ParseError("unexpected character", pos_);
    return t;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool at_lambda() {
    skip();
    if (pos_ < s_.size() && s_[pos_] == '\\') return true;
    return s_.substr(pos_, 2) == "\xCE\xBB";
  }

  bool at_var() {
    skip();
    return pos_ < s_.size() && s_[pos_] >= 'a' && s_[pos_] <= 'z';
  }

  std::string name() {
    skip();
    if (!at_var()) throw ParseError("expected a variable", pos_);
    std::size_t start = pos_++;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  TermPtr abstraction() {
    pos_ += s_[pos_] == '\\' ? 1 : 2;
    std::vector<std::string> binders;
    while (at_var()) binders.push_back(name());
    if (binders.empty()) throw ParseError("expected a binder", pos_);
    skip();
    if (pos_ >= s_.size() || s_[pos_] != '.') throw ParseError("expected '.'", pos_);
    ++pos_;
    TermPtr body = term();
    for (auto it = binders.rbegin(); it != binders.rend(); ++it) body = lam(*it, body);
    return body;
  }

  TermPtr term() {
    TermPtr out;
    for (;;) {
      skip();
      TermPtr next;
      if (at_lambda()) {
        next = abstraction();
      } else if (at_var()) {
        next = var(name());
      } else if (pos_ < s_.size() && s_[pos_] == '(') {
        ++pos_;
        next = term();
        skip();
        if (pos_ >= s_.size() || s_[pos_] != ')') throw ParseError("expected ')'", pos_);
        ++pos_;
      } else {
        break;
      }
      out = out ? app(out, next) : next;
    }
    if (!out) throw ParseError("expected a term", pos_);
    return out;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

void print_to(const TermPtr& t, std::string& out) {
  switch (t->kind) {
    case Term::Kind::Var:
      out += t->name;
      return;
    case Term::Kind::Abs: {
      out += '\\';
      const Term* cur = t.get();
      bool first = true;
      while (cur->kind == Term::Kind::Abs) {
        if (!first) out += ' ';
        out += cur->name;
        first = false;
        cur = cur->left.get();
      }
      out += ". ";
      TermPtr body = t;
      while (body->kind == Term::Kind::Abs) body = body->left;
      print_to(body, out);
      return;
    }
    case Term::Kind::App: {
      const bool paren_f = t->left->kind == Term::Kind::Abs;
      const bool paren_a = t->right->kind != Term::Kind::Var;
      if (paren_f) out += '(';
      print_to(t->left, out);
      if (paren_f) out += ')';
      out += ' ';
      if (paren_a) out += '(';
      print_to(t->right, out);
      if (paren_a) out += ')';
      return;
    }
  }
}

void collect_free(const TermPtr& t, std::vector<std::string>& bound, std::set<std::string>& out) {
  switch (t->kind) {
    case Term::Kind::Var:
      if (std::find(bound.begin(), bound.end(), t->name) == bound.end()) out.insert(t->name);
      return;
    case Term::Kind::App:
      collect_free(t->left, bound, out);
      collect_free(t->right, bound, out);
      return;
    case Term::Kind::Abs:
      bound.push_back(t->name);
      collect_free(t->left, bound, out);
      bound.pop_back();
      return;
  }
}

bool occurs_free(const TermPtr& t, const std::string& v) {
  switch (t->kind) {
    case Term::Kind::Var:
      return t->name == v;
    case Term::Kind::App:
      return occurs_free(t->left, v) || occurs_free(t->right, v);
    case Term::Kind::Abs:
      return t->name != v && occurs_free(t->left, v);
  }
  return false;
}

void collect_names(const TermPtr& t, std::set<std::string>& out) {
  out.insert(t->name);
  if (t->left) collect_names(t->left, out);
  if (t->right) collect_names(t->right, out);
}

std::string fresh(const std::string& base, const std::set<std::string>& avoid) {
  std::string stem = base.substr(0, 1);
  for (std::uint64_t i = 1;; ++i) {
    std::string candidate = stem + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

void canon_to(const TermPtr& t, std::vector<std::string>& bound, std::string& out) {
  switch (t->kind) {
    case Term::Kind::Var: {
      for (std::size_t j = bound.size(); j-- > 0;) {
        if (bound[j] == t->name) {
          out += '#';
          out += std::to_string(bound.size() - 1 - j);
          return;
        }
      }
      out += t->name;
      return;
    }
    case Term::Kind::App:
      out += '(';
      canon_to(t->left, bound, out);
      out += ' ';
      canon_to(t->right, bound, out);
      out += ')';
      return;
    case Term::Kind::Abs:
      bound.push_back(t->name);
      out += "\\.";
      canon_to(t->left, bound, out);
      bound.pop_back();
      return;
  }
}

TermPtr subst(const TermPtr& m, const std::string& v, const TermPtr& n, const std::set<std::string>& fv_n) {
  switch (m->kind) {
    case Term::Kind::Var:
      return m->name == v ? n : m;
    case Term::Kind::App: {
      TermPtr l = subst(m->left, v, n, fv_n);
      TermPtr r = subst(m->right, v, n, fv_n);
      if (l == m->left && r == m->right) return m;
      return app(std::move(l), std::move(r));
    }
    case Term::Kind::Abs: {
      if (m->name == v || !occurs_free(m->left, v)) return m;
      if (!fv_n.count(m->name)) {
        TermPtr body = subst(m->left, v, n, fv_n);
        return lam(m->name, std::move(body));
      }
      std::set<std::string> avoid = fv_n;
      collect_names(m->left, avoid);
      avoid.insert(v);
      const std::string b = fresh(m->name, avoid);
      TermPtr renamed = subst(m->left, m->name, var(b), {b});
      return lam(b, subst(renamed, v, n, fv_n));
    }
  }
  return m;
}

}  // namespace

TermPtr parse(std::string_view text) { return TermParser(text).parse_all(); }

std::string print(const TermPtr& t) {
  std::string out;
  print_to(t, out);
  return out;
}

std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_free(t, bound, out);
  return out;
}

std::string canonical(const TermPtr& t) {
  std::string out;
  std::vector<std::string> bound;
  canon_to(t, bound, out);
  return out;
}

bool alpha_eq(const TermPtr& a, const TermPtr& b) { return canonical(a) == canonical(b); }

TermPtr substitute(const TermPtr& m, const std::string& v, const TermPtr& n) { return subst(m, v, n, free_vars(n)); }

std::optional<TermPtr> beta_step(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var:
      return std::nullopt;
    case Term::Kind::Abs:
      if (auto b = beta_step(t->left)) return lam(t->name, *b);
      return std::nullopt;
    case Term::Kind::App:
      if (t->left->kind == Term::Kind::Abs) return substitute(t->left->left, t->left->name, t->right);
      if (auto f = beta_step(t->left)) return app(*f, t->right);
      if (auto a = beta_step(t->right)) return app(t->left, *a);
      return std::nullopt;
  }
  return std::nullopt;
}

bool is_normal(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var:
      return true;
    case Term::Kind::Abs:
      return is_normal(t->left);
    case Term::Kind::App:
      return t->left->kind != Term::Kind::Abs && is_normal(t->left) && is_normal(t->right);
  }
  return true;
}

ReductionTrace normalize(const TermPtr& t, std::uint64_t fuel) {
  ReductionTrace trace;
  trace.steps.push_back(t);
  for (std::uint64_t i = 0; i < fuel; ++i) {
    auto next = beta_step(trace.steps.back());
    if (!next) return trace;
    trace.steps.push_back(*next);
  }
  trace.exhausted = !is_normal(trace.steps.back());
  return trace;
}

std::optional<TermPtr> normal_form(const TermPtr& t, std::uint64_t fuel) {
  TermPtr cur = t;
  for (std::uint64_t i = 0; i < fuel; ++i) {
    auto next = beta_step(cur);
    if (!next) return cur;
    cur = *next;
  }
  if (is_normal(cur)) return cur;
  return std::nullopt;
}

BetaEq beta_eq(const TermPtr& a, const TermPtr& b, std::uint64_t fuel) {
  // Walk both normal-order reduction sequences in lockstep and look for a
  // term that occurs on both.
  struct Side {
    TermPtr cur;
    std::unordered_set<std::string> seen;
    bool normal = false;
  };
  Side sides[2] = {{a, {canonical(a)}, false}, {b, {canonical(b)}, false}};
  if (sides[0].seen.count(canonical(b))) return BetaEq::Equal;
  std::uint64_t used = 0;
  while (used < fuel) {
    bool moved = false;
    for (int k = 0; k < 2 && used < fuel; ++k) {
      Side& s = sides[k];
      if (s.normal) continue;
      auto next = beta_step(s.cur);
      if (!next) {
        s.normal = true;
        continue;
      }
      ++used;
      moved = true;
      s.cur = *next;
      std::string key = canonical(s.cur);
      if (sides[1 - k].seen.count(key)) return BetaEq::Equal;
      s.seen.insert(std::move(key));
    }
    if (!moved) break;
  }
  if (sides[0].normal && sides[1].normal) return BetaEq::Different;
  // a side may have reached its normal form on the last unit of fuel
  if (is_normal(sides[0].cur) && is_normal(sides[1].cur)) return BetaEq::Different;
  return BetaEq::Unknown;
}

TermPtr church(std::uint64_t n) {
  TermPtr t = lam({"s", "o"}, var("o"));
  for (std::uint64_t i = 0; i < n; ++i) t = lam({"s", "o"}, app({t, var("s"), app(var("s"), var("o"))}));
  return t;
}

std::optional<Nat> unchurch(const TermPtr& t) {
  if (t->kind != Term::Kind::Abs || t->left->kind != Term::Kind::Abs) return std::nullopt;
  const std::string& s = t->name;
  const std::string& o = t->left->name;
  if (s == o) return std::nullopt;
  const Term* cur = t->left->left.get();
  std::uint64_t n = 0;
  while (cur->kind == Term::Kind::App) {
    if (cur->left->kind != Term::Kind::Var || cur->left->name != s) return std::nullopt;
    ++n;
    cur = cur->right.get();
  }
  if (cur->kind != Term::Kind::Var || cur->name != o) return std::nullopt;
  return Nat(n);
}

TermPtr plus_term() { return parse("\\n m s o. n s (m s o)"); }
TermPtr times_term() { return parse("\\n m s o. n (\\c. m s c) o"); }
TermPtr omega_term() { return parse("\\x. x x"); }
TermPtr compose_term() { return parse("\\x y z. x (y z)"); }

TermPtr y_term() {
  const TermPtr cxw = app({compose_term(), var("x"), omega_term()});
  return lam("x", app(cxw, cxw));
}

}  // namespace rlab::lambda
