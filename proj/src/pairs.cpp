#include "bernpairs/pairs.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "bernpairs/arith.hpp"
#include "bernpairs/bernoulli.hpp"
#include "bernpairs/errors.hpp"
#include "bernpairs/parallel.hpp"

namespace bernpairs {

std::ostream& operator<<(std::ostream& os, const IrregularPair& pair) {
  return os << '(' << pair.p << ',' << pair.l << ')';
}

std::string to_string(const IrregularPair& pair) {
  std::ostringstream os;
  os << pair;
  return os.str();
}

IrregularPair make_irregular_pair(std::uint64_t p, std::uint64_t l) {
  const IrregularPair pair{p, l};
  if (p < 5 || !is_prime(p)) throw NotIrregularPair(to_string(pair) + ": p is not a prime >= 5");
  if (l % 2 != 0 || l < 2 || l + 3 > p)
    throw NotIrregularPair(to_string(pair) + ": l must be even with 2 <= l <= p-3");
  if (!bernoulli_mod_p_all(p).at(l).is_zero())
    throw NotIrregularPair(to_string(pair) + ": p does not divide B_l");
  return pair;
}

mpz_class digit_index(std::uint64_t p, const std::vector<std::uint64_t>& digits) {
  // phi(p^0) = 1, phi(p^v) = p^{v-1}(p-1)
  mpz_class index = 0;
  mpz_class phi = 1;
  for (std::size_t v = 0; v < digits.size(); ++v) {
    index += phi * static_cast<unsigned long>(digits[v]);
    phi = (v == 0) ? mpz_class(static_cast<unsigned long>(p - 1)) : mpz_class(phi * static_cast<unsigned long>(p));
  }
  return index;
}

mpz_class OrderedPair::index() const { return digit_index(p, digits); }

OrderedPair OrderedPair::truncated(std::size_t n) const {
  if (n > digits.size()) throw std::out_of_range("cannot truncate to a higher order");
  return {p, std::vector<std::uint64_t>(digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(n))};
}

std::ostream& operator<<(std::ostream& os, const OrderedPair& pair) {
  os << '(' << pair.p << ';';
  for (std::size_t i = 0; i < pair.digits.size(); ++i) {
    if (i) os << ',';
    os << pair.digits[i];
  }
  return os << ')';
}

std::string to_string(const OrderedPair& pair) {
  std::ostringstream os;
  os << pair;
  return os.str();
}

std::vector<IrregularPair> sieve_prime(std::uint64_t p) {
  std::vector<IrregularPair> out;
  for (std::uint64_t l : bernoulli_mod_p_all(p).zeros()) out.push_back({p, l});
  return out;
}

DeltaValue delta(const IrregularPair& pair) {
  const auto [p, l] = pair;
  const Residue lo = divided_bernoulli_mod_pk(l, p, 2);
  const Residue hi = divided_bernoulli_mod_pk(l + p - 1, p, 2);
  const std::uint64_t diff = (hi - lo).value();
  if (lo.value() % p != 0 || diff % p != 0)
    throw NotIrregularPair(to_string(pair) + ": p does not divide B_l/l");
  return {pair, diff / p};
}

OrderedPair lift(const IrregularPair& pair, unsigned order) {
  if (order == 0) throw std::invalid_argument("lift order must be >= 1");
  OrderedPair out{pair.p, {pair.l}};
  if (order == 1) return out;

  const std::uint64_t p = pair.p;
  checked_pow(p, order);
  const std::uint64_t d = delta(pair).delta;
  if (d == 0) throw DeltaZero("Delta" + to_string(pair) + " = 0; the lift is not unique");
  const Residue inv_delta = Residue(d, p).inverse();

  // l_j is an irregular index of order j: p^j | B_{l_j}/l_j. Modulo p^{j+1},
  // B/n along l_j + s phi(p^j) is affine in s with slope p^j Delta.
  std::uint64_t index = pair.l;
  std::uint64_t phi = p - 1;  // phi(p^j)
  for (unsigned j = 1; j < order; ++j) {
    const std::uint64_t modulus = checked_pow(p, j + 1);
    const std::uint64_t pj = modulus / p;
    const Residue here = divided_bernoulli_mod_pk(index, p, j + 1);
    if (here.value() % pj != 0)
      throw std::logic_error(to_string(out) + " is not an irregular pair of its order");
    const Residue digit = -(Residue(here.value() / pj, p) * inv_delta);
    index += digit.value() * phi;
    if (!divided_bernoulli_mod_pk(index, p, j + 1).is_zero())
      throw std::logic_error("lift digit for " + to_string(out) + " failed verification");
    out.digits.push_back(digit.value());
    phi *= p;
  }
  return out;
}

// ---------------------------------------------------------------------------
// PairDatabase

bool PairDatabase::is_irregular(std::uint64_t p) const { return index_of_irregularity(p) > 0; }

std::size_t PairDatabase::index_of_irregularity(std::uint64_t p) const {
  if (!covers(p))
    throw DatabaseTooSmall("prime " + std::to_string(p) + " is not below max_p=" + std::to_string(max_p_),
                           p + 1);
  const auto it = entries_.find(p);
  return it == entries_.end() ? 0 : it->second.size();
}

std::vector<IrregularPair> PairDatabase::pairs_of(std::uint64_t p) const {
  std::vector<IrregularPair> out;
  if (index_of_irregularity(p) == 0) return out;
  for (const PairEntry& e : entries_.at(p)) out.push_back({p, e.l});
  return out;
}

std::vector<IrregularPair> PairDatabase::all_pairs() const {
  std::vector<IrregularPair> out;
  for (const auto& [p, list] : entries_)
    for (const PairEntry& e : list) out.push_back({p, e.l});
  return out;
}

std::vector<std::uint64_t> PairDatabase::irregular_primes() const {
  std::vector<std::uint64_t> out;
  out.reserve(entries_.size());
  for (const auto& [p, list] : entries_) out.push_back(p);
  return out;
}

std::size_t PairDatabase::pair_count() const {
  std::size_t n = 0;
  for (const auto& [p, list] : entries_) n += list.size();
  return n;
}

void PairDatabase::insert(std::uint64_t p, std::vector<PairEntry> pairs) {
  if (p >= max_p_) throw std::invalid_argument("insert: prime beyond max_p");
  if (!entries_.empty() && entries_.rbegin()->first >= p)
    throw std::invalid_argument("insert: primes must be ascending");
  if (!pairs.empty()) entries_.emplace(p, std::move(pairs));
}

void PairDatabase::extend(std::uint64_t new_max_p, unsigned jobs) {
  if (new_max_p <= max_p_) return;
  const std::vector<std::uint64_t> primes = primes_in_range(std::max<std::uint64_t>(max_p_, 5), new_max_p);
  std::vector<std::vector<PairEntry>> found(primes.size());
  // Cost grows like p^2, so hand out the large primes first.
  parallel_for(primes.size(), jobs, true, [&](std::size_t i) {
    for (const IrregularPair& pair : sieve_prime(primes[i])) found[i].push_back({pair.l, std::nullopt});
  });
  max_p_ = new_max_p;
  for (std::size_t i = 0; i < primes.size(); ++i) insert(primes[i], std::move(found[i]));
}

void PairDatabase::compute_deltas(unsigned jobs) {
  std::vector<PairEntry*> slots;
  std::vector<IrregularPair> pairs;
  for (auto& [p, list] : entries_) {
    for (PairEntry& e : list) {
      slots.push_back(&e);
      pairs.push_back({p, e.l});
    }
  }
  parallel_for(slots.size(), jobs, true, [&](std::size_t i) { slots[i]->delta = delta(pairs[i]).delta; });
}

PairDatabase build_database(std::uint64_t max_p, unsigned jobs, bool with_delta) {
  PairDatabase db(0);
  db.extend(max_p, jobs);
  if (with_delta) db.compute_deltas(jobs);
  return db;
}

// ---------------------------------------------------------------------------
// Order-2 scan

SpecialOrder2Scan scan_special_order2(const PairDatabase& db, unsigned jobs) {
  const std::vector<IrregularPair> pairs = db.all_pairs();
  std::vector<std::optional<OrderedPair>> lifted(pairs.size());
  std::vector<std::optional<PairFailure>> failed(pairs.size());
  parallel_for(pairs.size(), jobs, true, [&](std::size_t i) {
    try {
      lifted[i] = lift(pairs[i], 2);
    } catch (const Error& e) {
      failed[i] = PairFailure{pairs[i], e.name(), e.what()};
    }
  });

  SpecialOrder2Scan scan;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (failed[i]) {
      scan.failures.push_back(*failed[i]);
      continue;
    }
    const OrderedPair& op = *lifted[i];
    const std::uint64_t s1 = op.digits[0], s2 = op.digits[1];
    const std::uint64_t gap = s1 > s2 ? s1 - s2 : s2 - s1;
    if (s2 + 1 == s1) scan.special.push_back(op);
    if (!scan.min_gap || gap < *scan.min_gap) {
      scan.min_gap = gap;
      scan.min_gap_lifts.clear();
    }
    if (gap == *scan.min_gap) scan.min_gap_lifts.push_back(op);
    scan.lifts.push_back(op);
  }
  return scan;
}

}  // namespace bernpairs
