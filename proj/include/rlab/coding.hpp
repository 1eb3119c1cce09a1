#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rlab/nat.hpp"

namespace rlab {

class MalformedCode : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Finite set of naturals in canonical form: strictly ascending, no duplicates.
class FinSet {
 public:
  FinSet() = default;
  FinSet(std::initializer_list<Nat> xs);
  explicit FinSet(std::vector<Nat> xs);

  const std::vector<Nat>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  bool contains(const Nat& x) const;
  // Largest element; the set must be nonempty.
  const Nat& max() const;

  FinSet with(const Nat& x) const;
  FinSet united(const FinSet& other) const;
  FinSet minus(const FinSet& other) const;
  bool intersects(const FinSet& other) const;
  bool subset_of(const FinSet& other) const;

  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }

  friend bool operator==(const FinSet&, const FinSet&) = default;

 private:
  std::vector<Nat> elements_;
};

// Finite set as a union of closed intervals, so that large blocks stay small.
// Its code is the sequence code of lo1, hi1, lo2, hi2, ... Decoding is total:
// a pair with lo > hi is empty, an odd trailing element is ignored, and
// overlapping or adjacent intervals merge.
class Intervals {
 public:
  Intervals() = default;
  explicit Intervals(const FinSet& s);
  static Intervals range(const Nat& lo, const Nat& hi);
  static Intervals decode(const Nat& code);
  Nat encode() const;

  const std::vector<std::pair<Nat, Nat>>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  Nat size() const;
  bool contains(const Nat& x) const;
  const Nat& max() const { return parts_.back().second; }
  // i-th member in ascending order, if any
  std::optional<Nat> at(const Nat& i) const;

  Intervals united(const Intervals& other) const;
  Intervals minus(const Intervals& other) const;
  bool intersects(const Intervals& other) const;
  // Throws std::length_error above `limit` members.
  FinSet members(std::uint64_t limit = 1U << 20) const;

  friend bool operator==(const Intervals&, const Intervals&) = default;

 private:
  void normalize();
  std::vector<std::pair<Nat, Nat>> parts_;
};

namespace coding {

// Cantor pairing (x+y)(x+y+1)/2 + y.
Nat pair_encode(const Nat& x, const Nat& y);
std::pair<Nat, Nat> pair_decode(const Nat& n);
inline Nat pair_left(const Nat& n) { return pair_decode(n).first; }
inline Nat pair_right(const Nat& n) { return pair_decode(n).second; }

// <x1..xm> = pair(m, pair(x1, pair(x2, ... pair(xm, 0)))), <> = 0.
// Injective, not surjective: list_decode throws MalformedCode off the image.
Nat list_encode(const std::vector<Nat>& xs);
std::vector<Nat> list_decode(const Nat& n);

// D_n: n = sum over members i of 2^i. Members must fit a bit index.
Nat finset_encode(const FinSet& s);
FinSet finset_decode(const Nat& n);

// Sequence code with size linear in the total bit length: each x is written
// as the Elias-gamma word of x+1 and the concatenation is read as a bijective
// base-2 numeral. Total: an incomplete final word is ignored.
Nat seq_encode(const std::vector<Nat>& xs);
std::vector<Nat> seq_decode(const Nat& n);

// X_e = { e(e+3)/2, ..., e(e+3)/2 + e + 1 }: consecutive blocks of size e+2.
Nat block_start(const Nat& e);
FinSet block(const Nat& e);
// The unique e with n in block(e).
Nat block_of(const Nat& n);

}  // namespace coding
}  // namespace rlab
