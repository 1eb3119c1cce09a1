#include "rlab/nat.hpp"

#include <bit>
#include <ostream>

namespace rlab {

namespace {

bool fits_u64(const mpz_class& v) { return mpz_sizeinbase(v.get_mpz_t(), 2) <= 64; }

std::uint64_t get_u64(const mpz_class& v) {
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, v.get_mpz_t());
  return out;
}

mpz_class from_u64(std::uint64_t v) {
  mpz_class out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return out;
}

}  // namespace

Nat::Nat(const mpz_class& v) { *this = normalize(v); }

Nat Nat::normalize(mpz_class v) {
  if (sgn(v) < 0) throw NegativeResult("Nat from negative integer");
  Nat out;
  if (fits_u64(v)) {
    out.small_ = get_u64(v);
  } else {
    out.big_ = std::make_shared<const mpz_class>(std::move(v));
  }
  return out;
}

Nat Nat::from_string(std::string_view decimal) {
  if (decimal.empty()) throw std::invalid_argument("empty number");
  for (char c : decimal) {
    if (c < '0' || c > '9') throw std::invalid_argument("not a decimal natural: " + std::string(decimal));
  }
  return normalize(mpz_class(std::string(decimal), 10));
}

Nat Nat::pow2(std::uint64_t exponent) {
  if (exponent < 64) return Nat(std::uint64_t{1} << exponent);
  mpz_class v;
  mpz_setbit(v.get_mpz_t(), exponent);
  return normalize(std::move(v));
}

std::optional<std::uint64_t> Nat::to_u64() const {
  if (big_) return std::nullopt;
  return small_;
}

mpz_class Nat::to_mpz() const { return big_ ? *big_ : from_u64(small_); }

std::string Nat::to_string() const { return big_ ? big_->get_str() : std::to_string(small_); }

std::uint64_t Nat::bit_length() const {
  if (big_) return mpz_sizeinbase(big_->get_mpz_t(), 2);
  return small_ == 0 ? 0 : 64 - std::countl_zero(small_);
}

bool Nat::test_bit(std::uint64_t i) const {
  if (big_) return mpz_tstbit(big_->get_mpz_t(), i) != 0;
  return i < 64 && ((small_ >> i) & 1U);
}

Nat Nat::with_bit(std::uint64_t i) const {
  if (!big_ && i < 64) return Nat(small_ | (std::uint64_t{1} << i));
  mpz_class v = to_mpz();
  mpz_setbit(v.get_mpz_t(), i);
  return normalize(std::move(v));
}

std::uint64_t Nat::popcount() const {
  if (big_) return mpz_popcount(big_->get_mpz_t());
  return static_cast<std::uint64_t>(std::popcount(small_));
}

std::size_t Nat::hash() const {
  if (!big_) return std::hash<std::uint64_t>{}(small_);
  const mpz_srcptr p = big_->get_mpz_t();
  std::size_t h = 1469598103934665603ULL;
  for (int i = 0; i < p->_mp_size; ++i) {
    h ^= static_cast<std::size_t>(p->_mp_d[i]);
    h *= 1099511628211ULL;
  }
  return h;
}

Nat operator+(const Nat& a, const Nat& b) {
  if (!a.big_ && !b.big_) {
    std::uint64_t r = 0;
    if (!__builtin_add_overflow(a.small_, b.small_, &r)) return Nat(r);
  }
  return Nat::normalize(a.to_mpz() + b.to_mpz());
}

Nat operator-(const Nat& a, const Nat& b) {
  if (!a.big_ && !b.big_) {
    if (b.small_ > a.small_) throw NegativeResult("Nat subtraction below zero");
    return Nat(a.small_ - b.small_);
  }
  return Nat::normalize(a.to_mpz() - b.to_mpz());
}

Nat operator*(const Nat& a, const Nat& b) {
  if (!a.big_ && !b.big_) {
    std::uint64_t r = 0;
    if (!__builtin_mul_overflow(a.small_, b.small_, &r)) return Nat(r);
  }
  return Nat::normalize(a.to_mpz() * b.to_mpz());
}

Nat operator/(const Nat& a, const Nat& b) {
  if (b.is_zero()) throw std::domain_error("Nat division by zero");
  if (!a.big_ && !b.big_) return Nat(a.small_ / b.small_);
  return Nat::normalize(a.to_mpz() / b.to_mpz());
}

Nat operator%(const Nat& a, const Nat& b) {
  if (b.is_zero()) throw std::domain_error("Nat modulo by zero");
  if (!a.big_ && !b.big_) return Nat(a.small_ % b.small_);
  return Nat::normalize(a.to_mpz() % b.to_mpz());
}

Nat operator<<(const Nat& a, std::uint64_t k) {
  if (!a.big_ && (a.small_ == 0 || (k < 64 && a.bit_length() + k <= 64))) return Nat(a.small_ << k);
  mpz_class v;
  mpz_mul_2exp(v.get_mpz_t(), a.to_mpz().get_mpz_t(), k);
  return Nat::normalize(std::move(v));
}

Nat operator>>(const Nat& a, std::uint64_t k) {
  if (!a.big_) return Nat(k >= 64 ? 0 : a.small_ >> k);
  mpz_class v;
  mpz_fdiv_q_2exp(v.get_mpz_t(), a.big_->get_mpz_t(), k);
  return Nat::normalize(std::move(v));
}

bool operator==(const Nat& a, const Nat& b) {
  if (!a.big_ && !b.big_) return a.small_ == b.small_;
  if (!a.big_ || !b.big_) return false;  // normalized: big values exceed 2^64
  return *a.big_ == *b.big_;
}

std::strong_ordering operator<=>(const Nat& a, const Nat& b) {
  if (!a.big_ && !b.big_) return a.small_ <=> b.small_;
  if (!a.big_) return std::strong_ordering::less;
  if (!b.big_) return std::strong_ordering::greater;
  const int c = cmp(*a.big_, *b.big_);
  return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

Nat monus(const Nat& a, const Nat& b) { return a <= b ? Nat() : a - b; }

Nat isqrt(const Nat& a) {
  if (a.is_small()) {
    mpz_class v = a.to_mpz();
    mpz_sqrt(v.get_mpz_t(), v.get_mpz_t());
    return Nat(v);
  }
  mpz_class v;
  mpz_sqrt(v.get_mpz_t(), a.to_mpz().get_mpz_t());
  return Nat(v);
}

std::ostream& operator<<(std::ostream& os, const Nat& n) { return os << n.to_string(); }

}  // namespace rlab
