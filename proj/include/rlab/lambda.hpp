#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rlab/nat.hpp"

namespace rlab::lambda {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Var, App, Abs };
  Kind kind = Kind::Var;
  std::string name;  // variable name, or the binder of an abstraction
  TermPtr left;      // App: function; Abs: body
  TermPtr right;     // App: argument
};

TermPtr var(std::string name);
TermPtr app(TermPtr f, TermPtr a);
TermPtr app(std::initializer_list<TermPtr> terms);  // left-associated
TermPtr lam(std::string binder, TermPtr body);
TermPtr lam(std::initializer_list<std::string> binders, TermPtr body);

// Variables are [a-z][0-9]*, so "xy" is the application x y. Abstraction is
// written "\x y. body" (or with a literal lambda) and extends to the right.
TermPtr parse(std::string_view text);
std::string print(const TermPtr& t);

std::set<std::string> free_vars(const TermPtr& t);
bool alpha_eq(const TermPtr& a, const TermPtr& b);
// Nameless form: equal strings iff alpha-equivalent.
std::string canonical(const TermPtr& t);

// Capture-avoiding m[v := n]; clashing binders are renamed to fresh names.
TermPtr substitute(const TermPtr& m, const std::string& v, const TermPtr& n);

// Contracts the leftmost-outermost redex; nullopt in normal form.
std::optional<TermPtr> beta_step(const TermPtr& t);
bool is_normal(const TermPtr& t);

struct ReductionTrace {
  std::vector<TermPtr> steps;
  bool exhausted = false;  // the last entry is not in normal form
};
ReductionTrace normalize(const TermPtr& t, std::uint64_t fuel);
// Normal-order reduction without keeping the trace.
std::optional<TermPtr> normal_form(const TermPtr& t, std::uint64_t fuel);

// Equal: a common reduct was found. Different: both sides reached distinct
// normal forms. Unknown: fuel ran out.
enum class BetaEq { Equal, Different, Unknown };
BetaEq beta_eq(const TermPtr& a, const TermPtr& b, std::uint64_t fuel);

TermPtr church(std::uint64_t n);
std::optional<Nat> unchurch(const TermPtr& t);

TermPtr plus_term();   // \n m s o. n s (m s o)
TermPtr times_term();  // \n m s o. n (\c. m s c) o
TermPtr omega_term();  // \x. x x
TermPtr compose_term();  // C = \x y z. x (y z)
TermPtr y_term();      // \x. (C x omega) (C x omega)

}  // namespace rlab::lambda
