#pragma once

// The numerator ratio num(B_m/m) / num(B_m/(m(m-1))) and its minimal indices
// A(p) = (l-1)p + 1, A(p^r) = (l-1)p^r + 1.

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <variant>
#include <vector>

#include "bernpairs/arith.hpp"
#include "bernpairs/pairs.hpp"

namespace bernpairs {

struct AValueResult {
  IrregularPair pair;
  unsigned r = 1;
  mpz_class m;  // (l-1) p^r + 1
  bool valid = true;
  /// Pairs (q, l') with q | l-1 and (l-1) p^r == l'-1 (mod q-1); empty iff valid.
  std::vector<IrregularPair> witnesses;
};

/// A(p) for one irregular pair with its validity condition. Throws
/// DatabaseTooSmall when a prime factor of l-1 is not covered by `db`.
AValueResult a_value(const IrregularPair& pair, const PairDatabase& db);

/// A(p^r) has no solution: the order-r digits leave (l, l-1, ..., l-1).
struct NoSolution {
  IrregularPair pair;
  unsigned r = 0;
  /// First order at which the digits deviate; every order >= this has no solution.
  unsigned deviation_order = 0;
  OrderedPair digits;  // lift up to deviation_order
  std::uint64_t digit_gap = 0;  // |s_1 - s_deviation|
};

using PrimePowerAValue = std::variant<AValueResult, NoSolution>;

/// r >= 1. Lifts order by order and stops at the first deviating digit.
PrimePowerAValue a_value_prime_power(const IrregularPair& pair, unsigned r, const PairDatabase& db);

struct ExceptionRecord {
  IrregularPair pair;
  mpz_class m;
  std::vector<PrimePower> factors_of_l_minus_1;
  std::vector<IrregularPair> witnesses;  // ascending, at least one

  const IrregularPair& witness() const { return witnesses.front(); }
};

/// Every pair in `db` whose A(p) candidate is invalidated by an irregular
/// factor of l-1, ascending by (p, l).
std::vector<ExceptionRecord> find_exceptions(const PairDatabase& db, unsigned jobs = 1);

/// Exceptions summary for reporting alongside the records.
struct ExceptionCensus {
  std::size_t pairs = 0;
  std::size_t with_irregular_factor = 0;
  std::size_t exceptions = 0;
};
ExceptionCensus exception_census(const PairDatabase& db, const std::vector<ExceptionRecord>& records);

/// num(B_m/m) / num(B_m/(m(m-1))) from exact arithmetic; m even >= 2.
mpz_class verify_ratio(std::uint64_t m);

/// Table with columns (p,l) | m=(l-1)p+1 | l-1 | (q,l').
void print_exception_table(std::ostream& os, const std::vector<ExceptionRecord>& records);
/// p,l,m,l_minus_1,q,l_prime (one row per witness).
void write_exception_csv(std::ostream& os, const std::vector<ExceptionRecord>& records);

}  // namespace bernpairs
