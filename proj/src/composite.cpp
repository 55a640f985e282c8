#include "bernpairs/composite.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "bernpairs/arith.hpp"
#include "bernpairs/conjecture.hpp"
#include "bernpairs/errors.hpp"

namespace bernpairs {

namespace {

mpz_class to_mpz(std::uint64_t v) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return z;
}

mpz_class floor_root(const mpz_class& x, unsigned n) {
  mpz_class r;
  mpz_root(r.get_mpz_t(), x.get_mpz_t(), n);
  return r;
}

void require_distinct_primes(std::span<const IrregularPair> pairs) {
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t j = i + 1; j < pairs.size(); ++j)
      if (pairs[i].p == pairs[j].p) throw std::invalid_argument("pairs must have distinct primes");
}

// Calls f on every choice of one pair per prime, lexicographic in l.
template <typename F>
void for_each_choice(const std::vector<std::vector<IrregularPair>>& lists, F&& f) {
  if (lists.empty()) return;
  for (const auto& list : lists)
    if (list.empty()) return;
  std::vector<std::size_t> at(lists.size(), 0);
  std::vector<IrregularPair> choice(lists.size());
  for (;;) {
    for (std::size_t i = 0; i < lists.size(); ++i) choice[i] = lists[i][at[i]];
    f(std::span<const IrregularPair>(choice));
    std::size_t k = lists.size();
    while (k > 0) {
      --k;
      if (++at[k] < lists[k].size()) break;
      at[k] = 0;
      if (k == 0) return;
    }
  }
}

struct BestSet {
  std::optional<mpz_class> m;
  std::vector<IrregularPair> set;
};

BestSet best_strong_friendly(const std::vector<std::vector<IrregularPair>>& lists) {
  BestSet best;
  for_each_choice(lists, [&](std::span<const IrregularPair> choice) {
    if (!is_strong_friendly(choice)) return;
    mpz_class m = m_s(choice);
    if (!best.m || m < *best.m) {
      best.m = std::move(m);
      best.set.assign(choice.begin(), choice.end());
    }
  });
  return best;
}

std::vector<IrregularPair> irregular_pairs_of(std::uint64_t p, const PairDatabase& db) {
  std::vector<IrregularPair> pairs = db.pairs_of(p);  // DatabaseTooSmall
  if (pairs.empty()) throw NotIrregular(std::to_string(p) + " is a regular prime");
  return pairs;
}

}  // namespace

std::optional<CrtSolution> crt_solve(std::span<const Congruence> system) {
  mpz_class x = 0, w = 1;
  for (const Congruence& c : system) {
    if (c.modulus < 1) throw std::invalid_argument("crt_solve: moduli must be positive");
    mpz_class a;
    mpz_fdiv_r(a.get_mpz_t(), c.residue.get_mpz_t(), c.modulus.get_mpz_t());
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), w.get_mpz_t(), c.modulus.get_mpz_t());
    const mpz_class diff = a - x;
    if (!mpz_divisible_p(diff.get_mpz_t(), g.get_mpz_t())) return std::nullopt;
    const mpz_class w_g = w / g;
    const mpz_class m_g = c.modulus / g;
    // x + w t == a (mod m)  <=>  (w/g) t == (a - x)/g (mod m/g)
    mpz_class t = mod_inverse(mpz_class(w_g % m_g), m_g) * (diff / g);
    mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), m_g.get_mpz_t());
    x += w * t;
    w *= m_g;
    mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), w.get_mpz_t());
  }
  return CrtSolution{x, w};
}

CoprimeCrt crt_coprime(std::span<const Congruence> system) {
  mpz_class big_w = 1;
  for (std::size_t i = 0; i < system.size(); ++i) {
    if (system[i].modulus < 1) throw std::invalid_argument("crt_coprime: moduli must be positive");
    for (std::size_t j = i + 1; j < system.size(); ++j) {
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), system[i].modulus.get_mpz_t(), system[j].modulus.get_mpz_t());
      if (g != 1) throw std::invalid_argument("crt_coprime: moduli are not pairwise coprime");
    }
    big_w *= system[i].modulus;
  }
  CoprimeCrt out{{0, big_w}, {}};
  for (const Congruence& c : system) {
    const mpz_class cofactor = big_w / c.modulus;
    mpz_class b = mod_inverse(mpz_class(cofactor % c.modulus), c.modulus);
    out.solution.value += c.residue * b * cofactor;
    out.coefficients.push_back(std::move(b));
  }
  mpz_fdiv_r(out.solution.value.get_mpz_t(), out.solution.value.get_mpz_t(), big_w.get_mpz_t());
  return out;
}

bool is_friendly(std::span<const IrregularPair> pairs) {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (std::size_t j = i + 1; j < pairs.size(); ++j) {
      const std::uint64_t g = std::gcd(pairs[i].p - 1, pairs[j].p - 1);
      if (pairs[i].l % g != pairs[j].l % g) return false;
    }
  }
  return true;
}

bool strong_condition_holds(std::span<const IrregularPair> pairs) {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      if (i == j) continue;
      const std::uint64_t pj = pairs[j].p;
      if (pairs[i].p % pj == 1 && pairs[i].l % pj != 1) return false;
    }
  }
  return true;
}

bool is_strong_friendly(std::span<const IrregularPair> pairs) {
  return is_friendly(pairs) && strong_condition_holds(pairs);
}

mpz_class m_s(std::span<const IrregularPair> pairs) {
  require_distinct_primes(pairs);
  if (!is_strong_friendly(pairs)) throw NotStrongFriendly(format_set(pairs) + " is not strong friendly");
  std::vector<Congruence> system;
  for (const IrregularPair& pr : pairs) {
    const mpz_class p = to_mpz(pr.p);
    system.push_back({p * to_mpz(pr.l - 1), p * (p - 1)});
  }
  const std::optional<CrtSolution> sol = crt_solve(system);
  if (!sol) throw NotStrongFriendly(format_set(pairs) + " has no simultaneous solution");
  return (sol->value == 0 ? sol->modulus : sol->value) + 1;
}

mpz_class lambda_prime(std::uint64_t p, const PairDatabase& db) {
  const std::vector<IrregularPair> pairs = irregular_pairs_of(p, db);
  // Pairs are ascending in l, so the first gives the minimum.
  return to_mpz(pairs.front().l - 1) * to_mpz(p) + 1;
}

LambdaResult lambda_composite(std::uint64_t c, const PairDatabase& db) {
  const std::vector<PrimePower> factors = factorize(c);
  if (factors.empty()) throw std::invalid_argument("lambda_composite: c must be > 1");
  std::vector<std::vector<IrregularPair>> lists;
  for (const PrimePower& f : factors) {
    if (f.exponent != 1) throw std::invalid_argument("lambda_composite: c must be squarefree");
    lists.push_back(irregular_pairs_of(f.prime, db));
  }
  LambdaResult out{to_mpz(c), std::nullopt, {}, false, std::nullopt};
  if (lists.size() == 1) {
    out.value = lambda_prime(factors[0].prime, db);
    out.achieving_set = {lists[0].front()};
    return out;
  }
  BestSet best = best_strong_friendly(lists);
  out.value = std::move(best.m);
  out.achieving_set = std::move(best.set);
  return out;
}

LambdaResult lambda_prime_power(std::uint64_t p, unsigned r, const PairDatabase& db) {
  if (r == 0) throw std::invalid_argument("lambda_prime_power: r must be >= 1");
  mpz_class c;
  mpz_pow_ui(c.get_mpz_t(), to_mpz(p).get_mpz_t(), r);
  if (r == 1) return lambda_composite(p, db);
  LambdaResult out{c, std::nullopt, {}, false, std::nullopt};
  for (const IrregularPair& pair : irregular_pairs_of(p, db)) {
    const PrimePowerAValue a = a_value_prime_power(pair, r, db);
    if (const auto* found = std::get_if<AValueResult>(&a)) {
      if (!out.value || found->m < *out.value) {
        out.value = found->m;
        out.achieving_set = {pair};
      }
    }
  }
  return out;
}

LambdaResult lambda(std::uint64_t c, const PairDatabase& db) {
  const std::vector<PrimePower> factors = factorize(c);
  if (factors.empty()) throw std::invalid_argument("lambda: c must be > 1");
  const bool squarefree = std::all_of(factors.begin(), factors.end(), [](const PrimePower& f) { return f.exponent == 1; });
  if (squarefree) return lambda_composite(c, db);
  if (factors.size() == 1) return lambda_prime_power(factors[0].prime, factors[0].exponent, db);

  // Mixed exponents: every prime-power part bounds Lambda(c) from below.
  LambdaResult out{to_mpz(c), std::nullopt, {}, false, std::nullopt};
  mpz_class bound = 0;
  for (const PrimePower& f : factors) {
    const LambdaResult part = lambda_prime_power(f.prime, f.exponent, db);
    if (part.infinite()) return out;
    bound = std::max(bound, *part.value);
  }
  out.unsupported_mixed_exponents = true;
  out.lower_bound = bound;
  return out;
}

mpz_class MinimalComposite::c() const {
  mpz_class product = 1;
  for (const IrregularPair& pr : set) product *= to_mpz(pr.p);
  return product;
}

namespace {

class CompositeSearch {
 public:
  CompositeSearch(unsigned n, const SearchOptions& options, PairDatabase& db)
      : n_(n), options_(options), db_(db), bound_(options.initial_bound) {}

  MinimalComposite run() {
    std::vector<std::uint64_t> primes;
    descend(0, 1, primes);
    MinimalComposite out;
    out.n = n_;
    if (!best_set_.empty()) {
      out.value = *bound_;
      out.set = best_set_;
    } else if (bound_) {
      out.value = *bound_;
    } else {
      throw std::logic_error("composite search ended without a bound");
    }
    out.log = std::move(log_);
    return out;
  }

 private:
  // Largest admissible next prime q satisfies prefix * q^remaining < U.
  std::optional<mpz_class> prime_limit(const mpz_class& prefix, unsigned remaining) const {
    if (!bound_) return std::nullopt;
    mpz_class top = (*bound_ - 1) / prefix;
    return floor_root(top, remaining);
  }

  // Smallest irregular prime > after admissible under the current bound,
  // extending the database as needed.
  std::optional<std::uint64_t> next_prime(std::uint64_t after, const mpz_class& prefix, unsigned remaining) {
    for (;;) {
      const std::optional<mpz_class> limit = prime_limit(prefix, remaining);
      const auto& entries = db_.entries();
      auto it = entries.upper_bound(after);
      if (it != entries.end()) {
        if (limit && to_mpz(it->first) > *limit) return std::nullopt;
        return it->first;
      }
      // Every prime below max_p is exhausted.
      if (limit && to_mpz(db_.max_p()) > *limit) return std::nullopt;
      std::uint64_t needed = 0;
      if (limit) needed = mpz_fits_ulong_p(limit->get_mpz_t()) ? limit->get_ui() + 1 : UINT64_MAX;
      if (db_.max_p() >= options_.sieve_cap) {
        throw DatabaseTooSmall("composite search needs irregular pairs beyond the sieve cap " +
                                   std::to_string(options_.sieve_cap) +
                                   (limit ? "; primes up to " + limit->get_str() + " are required"
                                          : "; no finite bound yet"),
                               needed);
      }
      std::uint64_t target = std::max<std::uint64_t>(db_.max_p() * 2, db_.max_p() + 1024);
      if (needed != 0) target = std::min(target, std::max(needed, db_.max_p() + 1));
      target = std::min(target, options_.sieve_cap);
      db_.extend(target, options_.jobs);
    }
  }

  void descend(unsigned level, const mpz_class& prefix, std::vector<std::uint64_t>& primes) {
    const unsigned remaining = n_ - level;
    std::uint64_t after = primes.empty() ? 0 : primes.back();
    while (const std::optional<std::uint64_t> q = next_prime(after, prefix, remaining)) {
      primes.push_back(*q);
      if (remaining == 1) {
        evaluate(primes);
      } else {
        descend(level + 1, prefix * to_mpz(*q), primes);
      }
      primes.pop_back();
      after = *q;
    }
  }

  void evaluate(const std::vector<std::uint64_t>& primes) {
    std::vector<std::vector<IrregularPair>> lists;
    for (std::uint64_t p : primes) lists.push_back(db_.pairs_of(p));
    BestSet best = best_strong_friendly(lists);
    if (!best.m || (bound_ && *best.m >= *bound_)) return;
    bound_ = *best.m;
    best_set_ = best.set;
    SearchLogEntry entry{n_, std::move(best.set), *best.m, floor_root(*best.m, n_)};
    if (options_.on_update) options_.on_update(entry);
    log_.push_back(std::move(entry));
  }

  unsigned n_;
  const SearchOptions& options_;
  PairDatabase& db_;
  std::optional<mpz_class> bound_;
  std::vector<IrregularPair> best_set_;
  std::vector<SearchLogEntry> log_;
};

}  // namespace

MinimalComposite minimal_composite(unsigned n, const SearchOptions& options, PairDatabase& db) {
  if (n < 2) throw std::invalid_argument("minimal_composite: n must be >= 2");
  return CompositeSearch(n, options, db).run();
}

std::string format_set(std::span<const IrregularPair> set) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < set.size(); ++i) os << (i ? "," : "") << set[i];
  os << '}';
  return os.str();
}

void print_search_table(std::ostream& os, const std::vector<SearchLogEntry>& log) {
  os << std::left << std::setw(3) << "n" << std::setw(44) << "S" << std::right << std::setw(16) << "U"
     << std::setw(10) << "u" << '\n';
  for (const SearchLogEntry& e : log) {
    os << std::left << std::setw(3) << e.n << std::setw(44) << format_set(e.set) << std::right << std::setw(16)
       << e.bound.get_str() << std::setw(10) << e.root.get_str() << '\n';
  }
}

void write_search_csv(std::ostream& os, const std::vector<SearchLogEntry>& log) {
  os << "n,set,U,u\n";
  for (const SearchLogEntry& e : log) {
    os << e.n << ",\"" << format_set(e.set) << "\"," << e.bound.get_str() << ',' << e.root.get_str() << '\n';
  }
}

}  // namespace bernpairs
