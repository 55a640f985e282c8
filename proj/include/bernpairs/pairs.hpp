#pragma once

// Irregular pairs (p, l): p | B_l with l even, 2 <= l <= p-3.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bernpairs {

struct IrregularPair {
  std::uint64_t p = 0;
  std::uint64_t l = 0;
  friend auto operator<=>(const IrregularPair&, const IrregularPair&) = default;
};

std::ostream& operator<<(std::ostream& os, const IrregularPair& pair);
/// "(p,l)"
std::string to_string(const IrregularPair& pair);

/// Checks the definition directly; throws NotIrregularPair otherwise.
IrregularPair make_irregular_pair(std::uint64_t p, std::uint64_t l);

/// An irregular pair of order n in p-adic digit notation (p; s_1, ..., s_n).
struct OrderedPair {
  std::uint64_t p = 0;
  std::vector<std::uint64_t> digits;

  std::size_t order() const noexcept { return digits.size(); }
  /// l_n = sum_{v=1}^{n} s_v phi(p^{v-1}).
  mpz_class index() const;
  OrderedPair truncated(std::size_t order) const;

  friend bool operator==(const OrderedPair&, const OrderedPair&) = default;
};

std::ostream& operator<<(std::ostream& os, const OrderedPair& pair);
/// "(p;s1,s2,...)"
std::string to_string(const OrderedPair& pair);

/// sum_{v=1}^{n} s_v phi(p^{v-1}) for arbitrary digits.
mpz_class digit_index(std::uint64_t p, const std::vector<std::uint64_t>& digits);

/// All l in [2, p-3] with p | B_l, ascending. p >= 5 prime.
std::vector<IrregularPair> sieve_prime(std::uint64_t p);

struct DeltaValue {
  IrregularPair pair;
  std::uint64_t delta = 0;
};

/// Delta_(p,l) = p^{-1} (B_{l+p-1}/(l+p-1) - B_l/l) mod p, in [0, p).
DeltaValue delta(const IrregularPair& pair);

/// The unique order-n pair above `pair`. Throws DeltaZero when Delta vanishes
/// and ResourceLimit when the residues mod p^n are out of reach.
OrderedPair lift(const IrregularPair& pair, unsigned order);

struct PairEntry {
  std::uint64_t l = 0;
  std::optional<std::uint64_t> delta;
  friend bool operator==(const PairEntry&, const PairEntry&) = default;
};

/// Irregular pairs for every prime p < max_p. Primes absent from `entries`
/// are regular.
class PairDatabase {
 public:
  PairDatabase() = default;
  explicit PairDatabase(std::uint64_t max_p) : max_p_(max_p) {}

  std::uint64_t max_p() const noexcept { return max_p_; }
  const std::map<std::uint64_t, std::vector<PairEntry>>& entries() const noexcept { return entries_; }

  bool covers(std::uint64_t p) const noexcept { return p < max_p_; }
  /// Throws DatabaseTooSmall when p >= max_p.
  bool is_irregular(std::uint64_t p) const;
  /// i(p). Throws DatabaseTooSmall when p >= max_p.
  std::size_t index_of_irregularity(std::uint64_t p) const;
  /// Pairs of p ascending by l (empty for regular p).
  std::vector<IrregularPair> pairs_of(std::uint64_t p) const;
  std::vector<IrregularPair> all_pairs() const;
  std::vector<std::uint64_t> irregular_primes() const;
  std::size_t pair_count() const;

  /// Sieves every prime in [max_p, new_max_p) and appends the results.
  void extend(std::uint64_t new_max_p, unsigned jobs);
  /// Fills the delta field of every pair; ResourceLimit propagates.
  void compute_deltas(unsigned jobs);

  /// Appends pairs for one prime; primes must arrive ascending and below max_p.
  void insert(std::uint64_t p, std::vector<PairEntry> pairs);

  friend bool operator==(const PairDatabase&, const PairDatabase&) = default;

 private:
  std::uint64_t max_p_ = 0;
  std::map<std::uint64_t, std::vector<PairEntry>> entries_;
};

/// Sieve of every prime p < max_p, distributed over `jobs` threads. The
/// result does not depend on `jobs`.
PairDatabase build_database(std::uint64_t max_p, unsigned jobs, bool with_delta = false);

/// File format:
///   # bernpairs-db v1 max_p=<N>
///   p,l,[delta]
/// ascending in (p, l), delta empty when unknown.
void write_database(std::ostream& os, const PairDatabase& db);
PairDatabase read_database(std::istream& is);
void save_database(const PairDatabase& db, const std::filesystem::path& path);
PairDatabase load_database(const std::filesystem::path& path);

struct PairFailure {
  IrregularPair pair;
  std::string error;  // error name
  std::string message;
};

struct SpecialOrder2Scan {
  std::vector<OrderedPair> special;      // s_2 = s_1 - 1
  std::vector<OrderedPair> lifts;        // every successful order-2 lift
  std::optional<std::uint64_t> min_gap;  // min |s_1 - s_2| over `lifts`
  std::vector<OrderedPair> min_gap_lifts;
  std::vector<PairFailure> failures;
};

/// Order-2 lifts of every pair in `db`, looking for s_2 = s_1 - 1. Per-pair
/// errors are collected rather than aborting the scan.
SpecialOrder2Scan scan_special_order2(const PairDatabase& db, unsigned jobs = 1);

}  // namespace bernpairs
