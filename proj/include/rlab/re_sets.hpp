#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "rlab/coding.hpp"
#include "rlab/eval.hpp"

namespace rlab::re {

// x in W_{e,s}: phi_{e,s}(x) converges. The stage is the per-element fuel.
bool w_mem(const Nat& e, const Nat& x, std::uint64_t s);
// e in K_s
bool k_mem(const Nat& e, std::uint64_t s);

// Monotone stage-indexed finite approximation. Domain and image generators
// look at arguments below a fixed window, so every stage is finite.
class StageSet {
 public:
  using Generator = std::function<FinSet(std::uint64_t)>;

  static StageSet domain(const Nat& e, std::uint64_t window);
  static StageSet image(const Nat& e, std::uint64_t window);
  static StageSet construction(Generator g);

  FinSet at(std::uint64_t s) const;
  bool contains(const Nat& x, std::uint64_t s) const { return at(s).contains(x); }

 private:
  explicit StageSet(Generator g) : gen_(std::move(g)), state_(std::make_shared<State>()) {}

  struct State {
    std::mutex mu;
    std::map<std::uint64_t, FinSet> cache;
  };
  Generator gen_;
  std::shared_ptr<State> state_;
};

// phi_{result}(x) = x when phi_e(x) converges, divergent otherwise.
Nat dom_to_image(const Nat& e);
// Injective enumeration of Im phi_e by the stage-wise dovetail: stage s looks
// at m = 0..s with s steps and appends unseen values.
Nat image_to_enum(const Nat& e);
// phi_{result}(n) = mu t [phi_e(t) = n]
Nat enum_to_dom(const Nat& e);
// Alternating search: 1 once x shows up in W_{e1,s}, 0 once in W_{e2,s}.
Nat post_combiner(const Nat& e1, const Nat& e2);
// The same loop with both indices as arguments: (e1, e2, x).
Nat post_template();
// W_result = d exactly.
Nat finset_to_windex(const FinSet& d);

// Position t of the dovetail visits stage s = l(t) + r(t), argument m = r(t).
std::pair<Nat, Nat> dovetail_position(const Nat& t);

enum class Behavior { HaltsOnSelf, DivergesOnSelf };

// Programs whose behaviour on their own index is forced by construction.
struct KnownProgram {
  std::string name;
  Nat index;
  Behavior self;
  bool total = false;
};
const std::vector<KnownProgram>& test_corpus();

}  // namespace rlab::re
