#include "bernpairs/conjecture.hpp"

#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "bernpairs/bernoulli.hpp"
#include "bernpairs/errors.hpp"
#include "bernpairs/parallel.hpp"

namespace bernpairs {

namespace {

mpz_class to_mpz(std::uint64_t v) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return z;
}

// Pairs (q, l') with q an irregular prime factor of l-1 and shift == l'-1 (mod q-1).
std::vector<IrregularPair> invalidating_pairs(const std::vector<PrimePower>& factors, const mpz_class& shift,
                                              const PairDatabase& db) {
  std::vector<IrregularPair> out;
  for (const PrimePower& f : factors) {
    if (!db.covers(f.prime))
      throw DatabaseTooSmall("factor " + std::to_string(f.prime) + " of l-1 is not below max_p=" +
                                 std::to_string(db.max_p()),
                             f.prime + 1);
    for (const IrregularPair& other : db.pairs_of(f.prime)) {
      const mpz_class residue = shift % to_mpz(f.prime - 1);
      if (residue == to_mpz(other.l - 1)) out.push_back(other);
    }
  }
  return out;
}

AValueResult evaluate(const IrregularPair& pair, unsigned r, const PairDatabase& db) {
  mpz_class pr;
  mpz_pow_ui(pr.get_mpz_t(), to_mpz(pair.p).get_mpz_t(), r);
  const mpz_class shift = to_mpz(pair.l - 1) * pr;
  AValueResult out{pair, r, shift + 1, true, {}};
  out.witnesses = invalidating_pairs(factorize(pair.l - 1), shift, db);
  out.valid = out.witnesses.empty();
  return out;
}

}  // namespace

AValueResult a_value(const IrregularPair& pair, const PairDatabase& db) { return evaluate(pair, 1, db); }

PrimePowerAValue a_value_prime_power(const IrregularPair& pair, unsigned r, const PairDatabase& db) {
  if (r == 0) throw std::invalid_argument("prime power exponent must be >= 1");
  for (unsigned j = 2; j <= r; ++j) {
    OrderedPair lifted = lift(pair, j);
    const std::uint64_t s = lifted.digits.back();
    if (s + 1 != pair.l) {
      const std::uint64_t gap = pair.l > s ? pair.l - s : s - pair.l;
      return NoSolution{pair, r, j, std::move(lifted), gap};
    }
  }
  return evaluate(pair, r, db);
}

std::vector<ExceptionRecord> find_exceptions(const PairDatabase& db, unsigned jobs) {
  const std::vector<IrregularPair> pairs = db.all_pairs();
  std::vector<std::optional<ExceptionRecord>> slots(pairs.size());
  parallel_for(pairs.size(), jobs, false, [&](std::size_t i) {
    AValueResult a = a_value(pairs[i], db);
    if (!a.valid)
      slots[i] = ExceptionRecord{pairs[i], std::move(a.m), factorize(pairs[i].l - 1), std::move(a.witnesses)};
  });
  std::vector<ExceptionRecord> out;
  for (auto& s : slots)
    if (s) out.push_back(std::move(*s));
  return out;
}

ExceptionCensus exception_census(const PairDatabase& db, const std::vector<ExceptionRecord>& records) {
  ExceptionCensus census;
  for (const IrregularPair& pair : db.all_pairs()) {
    ++census.pairs;
    for (const PrimePower& f : factorize(pair.l - 1)) {
      if (db.is_irregular(f.prime)) {
        ++census.with_irregular_factor;
        break;
      }
    }
  }
  census.exceptions = records.size();
  return census;
}

mpz_class verify_ratio(std::uint64_t m) {
  const NumeratorPair num = numerator_pair(m);
  if (!mpz_divisible_p(num.divided.get_mpz_t(), num.doubly_divided.get_mpz_t()))
    throw std::logic_error("numerator ratio is not an integer");
  return num.divided / num.doubly_divided;
}

void print_exception_table(std::ostream& os, const std::vector<ExceptionRecord>& records) {
  os << std::left << std::setw(18) << "(p,l)" << std::right << std::setw(16) << "m=(l-1)p+1" << "  "
     << std::left << std::setw(20) << "l-1" << "(q,l')\n";
  for (const ExceptionRecord& r : records) {
    std::ostringstream witnesses;
    for (std::size_t i = 0; i < r.witnesses.size(); ++i) witnesses << (i ? " " : "") << r.witnesses[i];
    os << std::left << std::setw(18) << to_string(r.pair) << std::right << std::setw(16) << r.m.get_str()
       << "  " << std::left << std::setw(20) << format_factorization(r.factors_of_l_minus_1)
       << witnesses.str() << '\n';
  }
  os << std::right;
}

void write_exception_csv(std::ostream& os, const std::vector<ExceptionRecord>& records) {
  os << "p,l,m,l_minus_1,q,l_prime\n";
  for (const ExceptionRecord& r : records) {
    for (const IrregularPair& w : r.witnesses) {
      os << r.pair.p << ',' << r.pair.l << ',' << r.m.get_str() << ','
         << format_factorization(r.factors_of_l_minus_1) << ',' << w.p << ',' << w.l << '\n';
    }
  }
}

}  // namespace bernpairs
