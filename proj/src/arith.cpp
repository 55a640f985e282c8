#include "bernpairs/arith.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "bernpairs/errors.hpp"

namespace bernpairs {

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::uint64_t checked_pow(std::uint64_t p, unsigned k) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (r > (std::uint64_t{1} << 63) / p)
      throw ResourceLimit(std::to_string(p) + "^" + std::to_string(k) + " exceeds 63 bits");
    r *= p;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Residue

Residue::Residue(std::uint64_t value, std::uint64_t modulus) : value_(0), modulus_(modulus) {
  if (modulus == 0) throw std::invalid_argument("Residue: zero modulus");
  value_ = value % modulus;
}

Residue Residue::from_signed(std::int64_t value, std::uint64_t modulus) {
  if (value >= 0) return {static_cast<std::uint64_t>(value), modulus};
  // -(value) can overflow for INT64_MIN; go through unsigned arithmetic.
  const std::uint64_t mag = static_cast<std::uint64_t>(-(value + 1)) + 1;
  const std::uint64_t r = mag % modulus;
  return {r == 0 ? 0 : modulus - r, modulus};
}

Residue Residue::from_mpz(const mpz_class& value, std::uint64_t modulus) {
  mpz_class m;
  mpz_import(m.get_mpz_t(), 1, 1, sizeof(modulus), 0, 0, &modulus);
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), value.get_mpz_t(), m.get_mpz_t());
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, r.get_mpz_t());
  return {out, modulus};
}

void Residue::check_same(const Residue& o) const {
  if (modulus_ != o.modulus_)
    throw ModulusMismatch("residues mod " + std::to_string(modulus_) + " and mod " +
                          std::to_string(o.modulus_));
}

Residue Residue::operator+(const Residue& o) const {
  check_same(o);
  std::uint64_t s = value_ + o.value_;
  if (s >= modulus_ || s < value_) s -= modulus_;
  return {s, modulus_};
}

Residue Residue::operator-(const Residue& o) const {
  check_same(o);
  return {value_ >= o.value_ ? value_ - o.value_ : modulus_ - (o.value_ - value_), modulus_};
}

Residue Residue::operator*(const Residue& o) const {
  check_same(o);
  return {mulmod(value_, o.value_, modulus_), modulus_};
}

Residue Residue::operator-() const { return {value_ == 0 ? 0 : modulus_ - value_, modulus_}; }

Residue Residue::pow(std::uint64_t e) const { return {powmod(value_, e, modulus_), modulus_}; }

Residue Residue::inverse() const {
  // Extended Euclid on signed 128-bit to stay clear of overflow.
  __int128 old_r = value_, r = modulus_;
  __int128 old_s = 1, s = 0;
  while (r != 0) {
    const __int128 q = old_r / r;
    std::tie(old_r, r) = std::pair<__int128, __int128>{r, old_r - q * r};
    std::tie(old_s, s) = std::pair<__int128, __int128>{s, old_s - q * s};
  }
  if (old_r != 1 && modulus_ != 1)
    throw NotInvertible(std::to_string(value_) + " is not invertible mod " +
                        std::to_string(modulus_));
  __int128 m = modulus_;
  __int128 inv = ((old_s % m) + m) % m;
  return {static_cast<std::uint64_t>(inv), modulus_};
}

std::ostream& operator<<(std::ostream& os, const Residue& r) {
  return os << r.value() << " (mod " << r.modulus() << ")";
}

Residue mod_inverse(std::int64_t a, std::uint64_t m) { return Residue::from_signed(a, m).inverse(); }

mpz_class mod_inverse(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  if (m <= 0 || mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
    if (m == 1) return 0;
    throw NotInvertible(a.get_str() + " is not invertible mod " + m.get_str());
  }
  return r;
}

GcdLcm gcd_lcm(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) throw std::invalid_argument("gcd_lcm: arguments must be positive");
  const std::uint64_t g = std::gcd(a, b);
  const std::uint64_t q = a / g;
  if (q > std::numeric_limits<std::uint64_t>::max() / b)
    throw std::overflow_error("gcd_lcm: lcm exceeds 64 bits");
  return {g, q * b};
}

// ---------------------------------------------------------------------------
// Primes and factoring

namespace {

constexpr std::uint64_t kTableLimit = 1u << 16;  // exact trial division below 2^32

const std::vector<std::uint64_t>& small_primes() {
  static const std::vector<std::uint64_t> table = primes_in_range(2, kTableLimit);
  return table;
}

bool miller_rabin(std::uint64_t n, std::uint64_t a) {
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  std::uint64_t x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned i = 1; i < s; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  // These bases are a proven deterministic set for n < 2^64.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (!miller_rabin(n, a)) return false;
  }
  return true;
}

std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  if (hi <= 2 || lo >= hi) return out;
  lo = std::max<std::uint64_t>(lo, 2);
  std::uint64_t root = 1;
  while ((root + 1) * (root + 1) < hi) ++root;
  std::vector<bool> base(root + 1, true);
  std::vector<std::uint64_t> base_primes;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (!base[i]) continue;
    base_primes.push_back(i);
    for (std::uint64_t j = i * i; j <= root; j += i) base[j] = false;
  }
  std::vector<bool> seg(hi - lo, true);
  for (std::uint64_t p : base_primes) {
    std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
    for (std::uint64_t j = start; j < hi; j += p) seg[j - lo] = false;
  }
  for (std::uint64_t i = lo; i < hi; ++i)
    if (seg[i - lo]) out.push_back(i);
  return out;
}

unsigned valuation(std::uint64_t n, std::uint64_t p) {
  unsigned v = 0;
  while (n != 0 && n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

std::vector<PrimePower> factorize(std::uint64_t n) {
  std::vector<PrimePower> out;
  if (n == 0) throw std::invalid_argument("factorize: n must be positive");
  auto take = [&](std::uint64_t p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.push_back({p, e});
  };
  for (std::uint64_t p : small_primes()) {
    if (p * p > n) break;
    take(p);
  }
  if (n > 1 && n >= kTableLimit * kTableLimit) {
    for (std::uint64_t d = kTableLimit + 1; d <= n / d; d += 2) take(d);
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

std::string format_factorization(const std::vector<PrimePower>& factors) {
  if (factors.empty()) return "1";
  std::ostringstream os;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i) os << '*';
    os << factors[i].prime;
    if (factors[i].exponent > 1) os << '^' << factors[i].exponent;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Rational

Rational::Rational(const mpz_class& numerator, const mpz_class& denominator) {
  if (denominator == 0) throw std::domain_error("Rational: zero denominator");
  q_ = mpq_class(numerator, denominator);
  q_.canonicalize();
}

Rational::Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

Rational Rational::operator/(const Rational& o) const {
  if (o.is_zero()) throw std::domain_error("Rational: division by zero");
  return Rational(mpq_class(q_ / o.q_));
}

Residue Rational::mod(std::uint64_t m) const {
  const Residue num = Residue::from_mpz(numerator(), m);
  const Residue den = Residue::from_mpz(denominator(), m);
  return num * den.inverse();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace bernpairs
