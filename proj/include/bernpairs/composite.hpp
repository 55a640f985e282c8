#pragma once

// Composite moduli: for c = p_1 ... p_n, the smallest m with c dividing
// num(B_m/m) / num(B_m/(m(m-1))), and the minimum of that over all c with n
// irregular prime factors.

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "bernpairs/pairs.hpp"

namespace bernpairs {

struct Congruence {
  mpz_class residue;
  mpz_class modulus;  // >= 1
};

struct CrtSolution {
  mpz_class value;    // 0 <= value < modulus
  mpz_class modulus;  // lcm of the input moduli
  friend bool operator==(const CrtSolution&, const CrtSolution&) = default;
};

/// Solves x == a_v (mod w_v) for arbitrary moduli by pairwise merging.
/// nullopt exactly when some a_i != a_j (mod gcd(w_i, w_j)).
std::optional<CrtSolution> crt_solve(std::span<const Congruence> system);

/// Classical form for pairwise coprime moduli: x = sum a_v b_v W/w_v with
/// b_v W/w_v == 1 (mod w_v). Throws std::invalid_argument otherwise.
struct CoprimeCrt {
  CrtSolution solution;
  std::vector<mpz_class> coefficients;  // b_v
};
CoprimeCrt crt_coprime(std::span<const Congruence> system);

/// l_i == l_j (mod gcd(p_i - 1, p_j - 1)) for all i != j.
bool is_friendly(std::span<const IrregularPair> pairs);
/// p_i != 1 (mod p_j), or p_i == 1 and l_i == 1 (mod p_j), for all i != j.
bool strong_condition_holds(std::span<const IrregularPair> pairs);
/// Friendly and the strong condition.
bool is_strong_friendly(std::span<const IrregularPair> pairs);

/// Smallest m with m - 1 in [1, W] solving m - 1 == p_v (l_v - 1) (mod p_v (p_v - 1)),
/// W the lcm of the moduli. Throws NotStrongFriendly.
mpz_class m_s(std::span<const IrregularPair> pairs);

/// min over the pairs of p of (l-1)p + 1. Throws NotIrregular / DatabaseTooSmall.
mpz_class lambda_prime(std::uint64_t p, const PairDatabase& db);

struct LambdaResult {
  mpz_class c;
  std::optional<mpz_class> value;  // nullopt is infinity
  std::vector<IrregularPair> achieving_set;
  /// Set for c with both repeated and distinct prime factors when no
  /// prime-power part is already infinite; `value` is then empty and
  /// `lower_bound` holds max Lambda(p^e).
  bool unsupported_mixed_exponents = false;
  std::optional<mpz_class> lower_bound;

  bool infinite() const { return !value && !unsupported_mixed_exponents; }
};

/// c a squarefree product of irregular primes.
LambdaResult lambda_composite(std::uint64_t c, const PairDatabase& db);
/// Lambda(p^r) for r >= 1; infinite when no lift has digits (l, l-1, ..., l-1).
LambdaResult lambda_prime_power(std::uint64_t p, unsigned r, const PairDatabase& db);
/// Any c >= 2 built from irregular primes.
LambdaResult lambda(std::uint64_t c, const PairDatabase& db);

struct SearchLogEntry {
  unsigned n = 0;
  std::vector<IrregularPair> set;
  mpz_class bound;  // U after the update
  mpz_class root;   // u = floor(U^{1/n})
};

struct SearchOptions {
  std::optional<mpz_class> initial_bound;  // U_0; nullopt is infinity
  std::uint64_t sieve_cap = 20000;         // never sieve at or beyond this
  unsigned jobs = 1;                       // threads for sieve extension
  std::function<void(const SearchLogEntry&)> on_update;
};

struct MinimalComposite {
  unsigned n = 0;
  mpz_class value;
  /// Empty when nothing beat the initial bound, i.e. value == U_0.
  std::vector<IrregularPair> set;
  std::vector<SearchLogEntry> log;

  mpz_class c() const;
};

/// Minimum of Lambda(p_1 ... p_n) over distinct irregular primes. Extends
/// `db` on demand up to `sieve_cap`; beyond that throws DatabaseTooSmall
/// carrying the prime bound the search still needs.
MinimalComposite minimal_composite(unsigned n, const SearchOptions& options, PairDatabase& db);

/// Columns n | S | U | u.
void print_search_table(std::ostream& os, const std::vector<SearchLogEntry>& log);
/// n,set,U,u
void write_search_csv(std::ostream& os, const std::vector<SearchLogEntry>& log);
/// "{(103,24),(149,130)}"
std::string format_set(std::span<const IrregularPair> set);

}  // namespace bernpairs
