#pragma once

// Arithmetic kernel: 64-bit modular arithmetic, exact rationals, factoring.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bernpairs {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// p^k, throwing ResourceLimit if it does not fit in 63 bits.
std::uint64_t checked_pow(std::uint64_t p, unsigned k);

/// An element of Z/mZ. Values from different moduli never mix.
class Residue {
 public:
  Residue(std::uint64_t value, std::uint64_t modulus);
  static Residue from_signed(std::int64_t value, std::uint64_t modulus);
  static Residue from_mpz(const mpz_class& value, std::uint64_t modulus);

  std::uint64_t value() const noexcept { return value_; }
  std::uint64_t modulus() const noexcept { return modulus_; }
  bool is_zero() const noexcept { return value_ == 0; }

  Residue operator+(const Residue& o) const;
  Residue operator-(const Residue& o) const;
  Residue operator*(const Residue& o) const;
  Residue operator-() const;
  Residue pow(std::uint64_t e) const;
  /// Throws NotInvertible when gcd(value, modulus) > 1.
  Residue inverse() const;

  friend bool operator==(const Residue&, const Residue&) = default;

 private:
  void check_same(const Residue& o) const;

  std::uint64_t value_;
  std::uint64_t modulus_;
};

std::ostream& operator<<(std::ostream& os, const Residue& r);

/// a^{-1} mod m. Throws NotInvertible when gcd(a, m) > 1.
Residue mod_inverse(std::int64_t a, std::uint64_t m);
mpz_class mod_inverse(const mpz_class& a, const mpz_class& m);

struct GcdLcm {
  std::uint64_t gcd;
  std::uint64_t lcm;
  friend bool operator==(const GcdLcm&, const GcdLcm&) = default;
};

/// Throws std::overflow_error when the lcm exceeds 64 bits.
GcdLcm gcd_lcm(std::uint64_t a, std::uint64_t b);

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Trial division over a cached prime table. Primes strictly increasing.
std::vector<PrimePower> factorize(std::uint64_t n);

/// "19*257", "3*7*101", "2^3*5"; "1" for the empty product.
std::string format_factorization(const std::vector<PrimePower>& factors);

/// Deterministic for the full 64-bit range.
bool is_prime(std::uint64_t n);

/// All primes p with lo <= p < hi, ascending.
std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi);

/// 2-adic style valuation: largest e with p^e | n (n > 0).
unsigned valuation(std::uint64_t n, std::uint64_t p);

/// Exact fraction, always in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : q_(value) {}  // NOLINT(google-explicit-constructor)
  /// Throws std::domain_error on a zero denominator.
  Rational(const mpz_class& numerator, const mpz_class& denominator);
  explicit Rational(mpq_class q);

  const mpz_class& numerator() const { return q_.get_num(); }
  const mpz_class& denominator() const { return q_.get_den(); }
  const mpq_class& get() const { return q_; }
  int sign() const { return sgn(q_); }
  bool is_zero() const { return sgn(q_) == 0; }

  Rational operator+(const Rational& o) const { return Rational(mpq_class(q_ + o.q_)); }
  Rational operator-(const Rational& o) const { return Rational(mpq_class(q_ - o.q_)); }
  Rational operator*(const Rational& o) const { return Rational(mpq_class(q_ * o.q_)); }
  /// Throws std::domain_error on division by zero.
  Rational operator/(const Rational& o) const;
  Rational operator-() const { return Rational(mpq_class(-q_)); }

  /// Reduction into Z/mZ; NotInvertible if the denominator shares a factor with m.
  Residue mod(std::uint64_t m) const;

  std::string str() const { return q_.get_str(); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }

 private:
  mpq_class q_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace bernpairs
