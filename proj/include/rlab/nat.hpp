#pragma once

#include <compare>
#include <concepts>
#include <type_traits>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace rlab {

class NegativeResult : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Unbounded non-negative integer. Values below 2^64 live inline; larger
// values are held in a shared immutable GMP integer so copies stay cheap
// even for program codes with many thousands of bits.
class Nat {
 public:
  Nat() = default;
  template <std::integral T>
  Nat(T v) {  // NOLINT: implicit by intent
    if constexpr (std::is_signed_v<T>) {
      if (v < 0) throw NegativeResult("Nat from negative integer");
    }
    small_ = static_cast<std::uint64_t>(v);
  }
  explicit Nat(const mpz_class& v);

  static Nat from_string(std::string_view decimal);
  static Nat pow2(std::uint64_t exponent);

  bool is_small() const { return !big_; }
  std::uint64_t small() const { return small_; }
  std::optional<std::uint64_t> to_u64() const;
  mpz_class to_mpz() const;
  std::string to_string() const;

  bool is_zero() const { return !big_ && small_ == 0; }
  std::uint64_t bit_length() const;
  bool test_bit(std::uint64_t i) const;
  Nat with_bit(std::uint64_t i) const;
  std::uint64_t popcount() const;
  std::size_t hash() const;

  friend Nat operator+(const Nat& a, const Nat& b);
  // Throws NegativeResult when b > a.
  friend Nat operator-(const Nat& a, const Nat& b);
  friend Nat operator*(const Nat& a, const Nat& b);
  // Division by zero throws std::domain_error.
  friend Nat operator/(const Nat& a, const Nat& b);
  friend Nat operator%(const Nat& a, const Nat& b);
  friend Nat operator<<(const Nat& a, std::uint64_t k);
  friend Nat operator>>(const Nat& a, std::uint64_t k);

  Nat& operator+=(const Nat& b) { return *this = *this + b; }
  Nat& operator-=(const Nat& b) { return *this = *this - b; }
  Nat& operator*=(const Nat& b) { return *this = *this * b; }
  Nat& operator++() { return *this = *this + Nat(1); }

  friend bool operator==(const Nat& a, const Nat& b);
  friend std::strong_ordering operator<=>(const Nat& a, const Nat& b);

 private:
  static Nat normalize(mpz_class v);

  std::uint64_t small_ = 0;
  std::shared_ptr<const mpz_class> big_;
};

// max(a - b, 0)
Nat monus(const Nat& a, const Nat& b);
Nat isqrt(const Nat& a);

std::ostream& operator<<(std::ostream& os, const Nat& n);

}  // namespace rlab

template <>
struct std::hash<rlab::Nat> {
  std::size_t operator()(const rlab::Nat& n) const noexcept { return n.hash(); }
};
