#include "rlab/coding.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace rlab {

FinSet::FinSet(std::initializer_list<Nat> xs) : FinSet(std::vector<Nat>(xs)) {}

FinSet::FinSet(std::vector<Nat> xs) : elements_(std::move(xs)) {
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
}

bool FinSet::contains(const Nat& x) const { return std::binary_search(elements_.begin(), elements_.end(), x); }

const Nat& FinSet::max() const {
  if (elements_.empty()) throw std::out_of_range("max of empty FinSet");
  return elements_.back();
}

FinSet FinSet::with(const Nat& x) const {
  if (contains(x)) return *this;
  FinSet out = *this;
  out.elements_.insert(std::upper_bound(out.elements_.begin(), out.elements_.end(), x), x);
  return out;
}

FinSet FinSet::united(const FinSet& other) const {
  FinSet out;
  std::set_union(begin(), end(), other.begin(), other.end(), std::back_inserter(out.elements_));
  return out;
}

FinSet FinSet::minus(const FinSet& other) const {
  FinSet out;
  std::set_difference(begin(), end(), other.begin(), other.end(), std::back_inserter(out.elements_));
  return out;
}

bool FinSet::intersects(const FinSet& other) const {
  auto a = begin();
  auto b = other.begin();
  while (a != end() && b != other.end()) {
    if (*a == *b) return true;
    if (*a < *b) {
      ++a;
    } else {
      ++b;
    }
  }
  return false;
}

bool FinSet::subset_of(const FinSet& other) const {
  return std::includes(other.begin(), other.end(), begin(), end());
}

Intervals::Intervals(const FinSet& s) {
  for (const Nat& x : s) {
    if (!parts_.empty() && parts_.back().second + 1 == x) {
      parts_.back().second = x;
    } else {
      parts_.emplace_back(x, x);
    }
  }
}

Intervals Intervals::range(const Nat& lo, const Nat& hi) {
  Intervals r;
  if (!(hi < lo)) r.parts_.emplace_back(lo, hi);
  return r;
}

Intervals Intervals::decode(const Nat& code) {
  const std::vector<Nat> xs = coding::seq_decode(code);
  Intervals r;
  for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
    if (!(xs[i + 1] < xs[i])) r.parts_.emplace_back(xs[i], xs[i + 1]);
  }
  r.normalize();
  return r;
}

Nat Intervals::encode() const {
  std::vector<Nat> xs;
  for (const auto& [lo, hi] : parts_) {
    xs.push_back(lo);
    xs.push_back(hi);
  }
  return coding::seq_encode(xs);
}

void Intervals::normalize() {
  std::sort(parts_.begin(), parts_.end());
  std::vector<std::pair<Nat, Nat>> merged;
  for (auto& p : parts_) {
    if (!merged.empty() && !(merged.back().second + 1 < p.first)) {
      if (merged.back().second < p.second) merged.back().second = p.second;
    } else {
      merged.push_back(std::move(p));
    }
  }
  parts_ = std::move(merged);
}

Nat Intervals::size() const {
  Nat n;
  for (const auto& [lo, hi] : parts_) n += hi - lo + 1;
  return n;
}

bool Intervals::contains(const Nat& x) const {
  auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                             [](const Nat& v, const std::pair<Nat, Nat>& p) { return v < p.first; });
  return it != parts_.begin() && !(std::prev(it)->second < x);
}

std::optional<Nat> Intervals::at(const Nat& i) const {
  Nat rest = i;
  for (const auto& [lo, hi] : parts_) {
    const Nat len = hi - lo + 1;
    if (rest < len) return lo + rest;
    rest -= len;
  }
  return std::nullopt;
}

Intervals Intervals::united(const Intervals& other) const {
  Intervals r = *this;
  r.parts_.insert(r.parts_.end(), other.parts_.begin(), other.parts_.end());
  r.normalize();
  return r;
}

Intervals Intervals::minus(const Intervals& other) const {
  Intervals r;
  for (const auto& [lo, hi] : parts_) {
    Nat cur = lo;
    bool open = true;
    for (const auto& [olo, ohi] : other.parts_) {
      if (ohi < cur || hi < olo) continue;
      if (cur < olo) r.parts_.emplace_back(cur, olo - 1);
      if (!(ohi < hi)) {
        open = false;
        break;
      }
      cur = ohi + 1;
    }
    if (open) r.parts_.emplace_back(cur, hi);
  }
  return r;
}

bool Intervals::intersects(const Intervals& other) const {
  for (const auto& [lo, hi] : parts_) {
    for (const auto& [olo, ohi] : other.parts_) {
      if (!(ohi < lo) && !(hi < olo)) return true;
    }
  }
  return false;
}

FinSet Intervals::members(std::uint64_t limit) const {
  if (Nat(limit) < size()) throw std::length_error("interval set too large to list");
  std::vector<Nat> xs;
  for (const auto& [lo, hi] : parts_) {
    for (Nat x = lo; !(hi < x); ++x) xs.push_back(x);
  }
  return FinSet(std::move(xs));
}

namespace coding {

Nat pair_encode(const Nat& x, const Nat& y) {
  const Nat w = x + y;
  return w * (w + 1) / 2 + y;
}

std::pair<Nat, Nat> pair_decode(const Nat& n) {
  // w = floor((sqrt(8n+1) - 1) / 2), t = w(w+1)/2, y = n - t, x = w - y
  Nat w = (isqrt(n * 8 + 1) - 1) / 2;
  const Nat t = w * (w + 1) / 2;
  const Nat y = n - t;
  return {w - y, y};
}

Nat list_encode(const std::vector<Nat>& xs) {
  Nat tail;
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) tail = pair_encode(*it, tail);
  return pair_encode(Nat(xs.size()), tail);
}

std::vector<Nat> list_decode(const Nat& n) {
  auto [len, rest] = pair_decode(n);
  const auto m = len.to_u64();
  // each element consumes at least one pairing level, so a length larger than
  // the code's bit length cannot be on the image
  if (!m || *m > n.bit_length() + 1) throw MalformedCode("list code length out of range");
  std::vector<Nat> out;
  out.reserve(*m);
  for (std::uint64_t i = 0; i < *m; ++i) {
    auto [head, tail] = pair_decode(rest);
    out.push_back(std::move(head));
    rest = std::move(tail);
  }
  if (!rest.is_zero()) throw MalformedCode("list code has a nonzero terminator");
  return out;
}

Nat finset_encode(const FinSet& s) {
  Nat out;
  for (const Nat& x : s) {
    const auto bit = x.to_u64();
    if (!bit || *bit > (std::uint64_t{1} << 32)) throw std::out_of_range("FinSet member too large for canonical index");
    out = out.with_bit(*bit);
  }
  return out;
}

FinSet finset_decode(const Nat& n) {
  std::vector<Nat> xs;
  const std::uint64_t len = n.bit_length();
  for (std::uint64_t i = 0; i < len; ++i) {
    if (n.test_bit(i)) xs.emplace_back(i);
  }
  return FinSet(std::move(xs));
}

Nat seq_encode(const std::vector<Nat>& xs) {
  std::string bits;
  for (const Nat& x : xs) {
    const Nat v = x + 1;
    const std::uint64_t len = v.bit_length();
    bits.append(len - 1, '0');
    if (v.is_small()) {
      for (std::uint64_t b = len; b-- > 0;) bits.push_back(v.test_bit(b) ? '1' : '0');
    } else {
      bits += v.to_mpz().get_str(2);
    }
  }
  // bijective base 2: the string w denotes (1w)_2 - 1
  if (bits.size() < 63) {
    std::uint64_t v = 1;
    for (char c : bits) v = (v << 1) | (c == '1' ? 1U : 0U);
    return Nat(v - 1);
  }
  return Nat(mpz_class("1" + bits, 2)) - 1;
}

std::vector<Nat> seq_decode(const Nat& n) {
  const Nat v = n + 1;
  std::string bits;
  if (v.is_small()) {
    for (std::uint64_t b = v.bit_length() - 1; b-- > 0;) bits.push_back(v.test_bit(b) ? '1' : '0');
  } else {
    bits = v.to_mpz().get_str(2).substr(1);
  }
  std::vector<Nat> out;
  std::size_t pos = 0;
  while (pos < bits.size()) {
    std::size_t zeros = 0;
    while (pos + zeros < bits.size() && bits[pos + zeros] == '0') ++zeros;
    if (pos + 2 * zeros + 1 > bits.size()) break;  // incomplete final word
    pos += zeros;
    Nat w;
    if (zeros < 63) {
      std::uint64_t x = 0;
      for (std::size_t j = 0; j <= zeros; ++j) x = (x << 1) | (bits[pos + j] == '1' ? 1U : 0U);
      w = Nat(x);
    } else {
      w = Nat(mpz_class(bits.substr(pos, zeros + 1), 2));
    }
    pos += zeros + 1;
    out.push_back(w - 1);
  }
  return out;
}

Nat block_start(const Nat& e) { return e * (e + 3) / 2; }

FinSet block(const Nat& e) {
  const auto size = (e + 2).to_u64();
  if (!size || *size > (std::uint64_t{1} << 24)) throw std::out_of_range("block too large to materialize");
  const Nat start = block_start(e);
  std::vector<Nat> xs;
  xs.reserve(*size);
  for (std::uint64_t i = 0; i < *size; ++i) xs.push_back(start + i);
  return FinSet(std::move(xs));
}

Nat block_of(const Nat& n) {
  // largest e with e(e+3)/2 <= n; start from the real root of e^2 + 3e - 2n = 0
  Nat e = monus(isqrt(n * 8 + 9), 3) / 2;
  while (block_start(e + 1) <= n) ++e;
  while (block_start(e) > n) e = e - 1;
  return e;
}

}  // namespace coding
}  // namespace rlab
