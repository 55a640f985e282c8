#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "bernpairs/bernoulli.hpp"
#include "bernpairs/composite.hpp"
#include "bernpairs/errors.hpp"
#include "oracles.hpp"

using namespace bernpairs;

namespace {

using Pairs = std::vector<IrregularPair>;

const PairDatabase& db3000() {
  static const PairDatabase db = build_database(3000, 2);
  return db;
}

mpz_class u64(std::uint64_t v) { return mpz_class(static_cast<unsigned long>(v)); }

}  // namespace

TEST_SUITE("composite") {

TEST_CASE("CRT examples") {
  const Congruence a[] = {{2, 4}, {4, 6}};
  CHECK(crt_solve(a) == CrtSolution{10, 12});
  const Congruence b[] = {{1147, 1332}, {2537, 3422}};
  CHECK(crt_solve(b) == CrtSolution{272875, 2279052});
  const Congruence c[] = {{1, 4}, {2, 6}};
  CHECK_FALSE(crt_solve(c).has_value());
  CHECK(crt_solve(std::span<const Congruence>{}) == CrtSolution{0, 1});
}

TEST_CASE("CRT agrees with a scan on 500 small systems") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 500; ++i) {
    const std::size_t size = 2 + rng() % 2;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
    std::vector<Congruence> system;
    std::uint64_t lcm = 1;
    for (std::size_t j = 0; j < size; ++j) {
      const std::uint64_t w = rng() % 60 + 1;
      const std::uint64_t a = rng() % 200;
      raw.emplace_back(a, w);
      system.push_back({u64(a), u64(w)});
      lcm = std::lcm(lcm, w);
    }
    const auto expected = oracle::crt_scan(raw, lcm);
    const auto got = crt_solve(system);
    REQUIRE(got.has_value() == expected.has_value());
    if (got) {
      CHECK(got->value == u64(*expected));
      CHECK(got->modulus == u64(lcm));
    }
  }
}

TEST_CASE("coprime CRT coefficients") {
  std::mt19937_64 rng(23);
  const std::uint64_t primes[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31};
  for (int i = 0; i < 100; ++i) {
    std::vector<Congruence> system;
    std::vector<std::uint64_t> used;
    while (used.size() < 3) {
      const std::uint64_t q = primes[rng() % 10];
      if (std::find(used.begin(), used.end(), q) == used.end()) used.push_back(q);
    }
    mpz_class big_w = 1;
    for (const std::uint64_t q : used) {
      const std::uint64_t w = q * q;
      system.push_back({u64(rng() % w), u64(w)});
      big_w *= u64(w);
    }
    const CoprimeCrt out = crt_coprime(system);
    REQUIRE(out.coefficients.size() == 3);
    for (std::size_t v = 0; v < 3; ++v) {
      const mpz_class w = system[v].modulus;
      CHECK(mpz_class(out.coefficients[v] * (big_w / w) % w) == 1);
    }
    CHECK(out.solution == *crt_solve(system));
  }
  const Congruence bad[] = {{1, 4}, {1, 6}};
  CHECK_THROWS_AS(crt_coprime(bad), std::invalid_argument);
}

TEST_CASE("friendly and strong friendly sets") {
  const Pairs three{{37, 32}, {59, 44}, {101, 68}};
  CHECK(is_friendly(three));
  CHECK(is_strong_friendly(three));
  for (const Pairs& s : {Pairs{{101, 68}, {607, 592}}, Pairs{{131, 22}, {263, 100}}}) {
    CHECK(is_friendly(s));
    CHECK_FALSE(strong_condition_holds(s));
    CHECK_FALSE(is_strong_friendly(s));
  }
  // Synthetic indices: 11 == 1 (mod 5), so the index at 11 must be 1 mod 5.
  CHECK(is_strong_friendly(Pairs{{11, 6}, {5, 2}}));
  CHECK_FALSE(is_strong_friendly(Pairs{{11, 4}, {5, 2}}));
  CHECK_FALSE(is_friendly(Pairs{{37, 32}, {41, 30}}));  // gcd 4: 32 and 30 differ mod 4
  CHECK(is_friendly(Pairs{{37, 32}}));
}

TEST_CASE("m_S examples") {
  CHECK(m_s(Pairs{{37, 32}, {59, 44}}) == 272876);
  CHECK(m_s(Pairs{{103, 24}, {149, 130}}) == 107430);
  CHECK(m_s(Pairs{{37, 32}, {59, 44}, {101, 68}}) == mpz_class("3979497668"));
  CHECK(m_s(Pairs{{157, 62}, {401, 382}, {1217, 1118}}) == mpz_class("3754314782"));
  CHECK(m_s(Pairs{{37, 32}}) == 1148);
  CHECK_THROWS_AS(m_s(Pairs{{131, 22}, {263, 100}}), NotStrongFriendly);
  CHECK_THROWS_AS(m_s(Pairs{{37, 32}, {37, 32}}), std::invalid_argument);
}

TEST_CASE("m_S solves its congruences within range") {
  std::mt19937_64 rng(31);
  const Pairs all = db3000().all_pairs();
  int checked = 0;
  while (checked < 300) {
    const IrregularPair a = all[rng() % all.size()], b = all[rng() % all.size()], c = all[rng() % all.size()];
    if (a.p == b.p || a.p == c.p || b.p == c.p) continue;
    const Pairs s{a, b, c};
    if (!is_strong_friendly(s)) continue;
    const mpz_class m = m_s(s);
    mpz_class big_w = 1;
    for (const IrregularPair& pr : s) big_w = lcm(big_w, u64(pr.p * (pr.p - 1)));
    CHECK(m - 1 >= 1);
    CHECK(m - 1 <= big_w);
    for (const IrregularPair& pr : s) {
      const mpz_class w = u64(pr.p * (pr.p - 1));
      CHECK(mpz_class((m - 1) % w) == mpz_class(u64(pr.p * (pr.l - 1)) % w));
    }
    ++checked;
  }
}

TEST_CASE("m_S agrees with a scan for small sets") {
  const PairDatabase& db = db3000();
  int checked = 0;
  for (const IrregularPair& a : db.all_pairs()) {
    for (const IrregularPair& b : db.all_pairs()) {
      if (a.p >= b.p || a.p * b.p > 20000) continue;
      const Pairs s{a, b};
      if (!is_strong_friendly(s)) continue;
      const std::vector<std::pair<std::uint64_t, std::uint64_t>> sys{{a.p * (a.l - 1), a.p * (a.p - 1)},
                                                                     {b.p * (b.l - 1), b.p * (b.p - 1)}};
      const std::uint64_t w = std::lcm(a.p * (a.p - 1), b.p * (b.p - 1));
      auto x = oracle::crt_scan(sys, w);
      REQUIRE(x.has_value());
      if (*x == 0) x = w;
      CHECK(m_s(s) == u64(*x + 1));
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("semantic check of m_S = 272876") {
  const std::uint64_t m = 272876;
  CHECK((m - 1) % 2183 == 0);
  for (const IrregularPair pr : {IrregularPair{37, 32}, IrregularPair{59, 44}}) {
    CHECK(m % (pr.p - 1) == pr.l);
    CHECK(divided_bernoulli_mod_pk(m, pr.p, 1).is_zero());
    CHECK(*oracle::reduce(oracle::bernoulli()[pr.l], pr.p) == 0);
  }
}

TEST_CASE("Lambda for primes") {
  CHECK(lambda_prime(37, db3000()) == 1148);
  CHECK(lambda_prime(157, db3000()) == 9578);
  CHECK_THROWS_AS(lambda_prime(7, db3000()), NotIrregular);
  CHECK_THROWS_AS(lambda_prime(3001, db3000()), DatabaseTooSmall);
}

TEST_CASE("Lambda for composites") {
  const LambdaResult a = lambda(103 * 149, db3000());
  REQUIRE(a.value);
  CHECK(*a.value == 107430);
  CHECK(a.achieving_set == Pairs{{103, 24}, {149, 130}});
  CHECK(*lambda(37 * 59, db3000()).value == 272876);
  const LambdaResult inf = lambda(131 * 263, db3000());
  CHECK(inf.infinite());
  CHECK(lambda(37 * 37 * 59, db3000()).infinite());
  CHECK_THROWS_AS(lambda(37 * 41, db3000()), NotIrregular);
}

TEST_CASE("Lambda of a product bounds its factors") {
  const std::vector<std::uint64_t> primes = db3000().irregular_primes();
  int finite = 0;
  for (std::size_t i = 0; i < primes.size() && primes[i] < 400; ++i) {
    for (std::size_t j = i + 1; j < primes.size() && primes[j] < 400; ++j) {
      const LambdaResult r = lambda_composite(primes[i] * primes[j], db3000());
      if (!r.value) continue;
      ++finite;
      CHECK(*r.value >= lambda_prime(primes[i], db3000()));
      CHECK(*r.value >= lambda_prime(primes[j], db3000()));
      CHECK(*r.value >= u64(primes[i] * primes[j] + 1));
    }
  }
  CHECK(finite > 0);
}

TEST_CASE("Lambda of prime powers below 1000 is infinite") {
  for (const std::uint64_t p : db3000().irregular_primes()) {
    if (p >= 1000) break;
    INFO("p = " << p);
    CHECK(lambda_prime_power(p, 2, db3000()).infinite());
  }
  CHECK(lambda(37 * 37, db3000()).infinite());
}

TEST_CASE("M_2 search from the published bound") {
  PairDatabase db;
  SearchOptions options;
  options.initial_bound = mpz_class(7610864);
  std::vector<SearchLogEntry> streamed;
  options.on_update = [&](const SearchLogEntry& e) { streamed.push_back(e); };
  const MinimalComposite r = minimal_composite(2, options, db);
  CHECK(r.value == 107430);
  CHECK(r.c() == 103 * 149);
  CHECK(r.set == Pairs{{103, 24}, {149, 130}});
  REQUIRE(r.log.size() == 2);
  CHECK(r.log[0].set == Pairs{{37, 32}, {59, 44}});
  CHECK(r.log[0].bound == 272876);
  CHECK(r.log[0].root == 522);
  CHECK(r.log[1].root == 327);
  CHECK(streamed.size() == r.log.size());
  for (std::size_t i = 0; i < r.log.size(); ++i) {
    CHECK(m_s(r.log[i].set) == r.log[i].bound);
    if (i) CHECK(r.log[i].bound < r.log[i - 1].bound);
  }
  CHECK(db.max_p() <= 7700);

  std::ostringstream csv;
  write_search_csv(csv, r.log);
  CHECK(csv.str() == "n,set,U,u\n2,\"{(37,32),(59,44)}\",272876,522\n2,\"{(103,24),(149,130)}\",107430,327\n");
}

TEST_CASE("M_2 agrees with a shuffled brute force") {
  // m_S - 1 is a multiple of c, so only products below 107430 can compete.
  const std::vector<std::uint64_t> primes = db3000().irregular_primes();
  std::vector<std::pair<std::uint64_t, std::uint64_t>> candidates;
  for (const std::uint64_t p : primes)
    for (const std::uint64_t q : primes)
      if (p < q && p * q < 107430) candidates.emplace_back(p, q);
  std::shuffle(candidates.begin(), candidates.end(), std::mt19937_64(41));
  std::optional<mpz_class> best;
  for (const auto& [p, q] : candidates) {
    for (const IrregularPair& a : db3000().pairs_of(p))
      for (const IrregularPair& b : db3000().pairs_of(q)) {
        const Pairs s{a, b};
        if (!is_strong_friendly(s)) continue;
        const mpz_class m = m_s(s);
        if (!best || m < *best) best = m;
      }
  }
  REQUIRE(best);
  CHECK(*best == 107430);

  PairDatabase db;
  const MinimalComposite r = minimal_composite(2, SearchOptions{}, db);
  CHECK(r.value == *best);
}

TEST_CASE("search bound handling") {
  PairDatabase db = build_database(200, 1);
  SearchOptions exact;
  exact.initial_bound = mpz_class(107430);
  const MinimalComposite same = minimal_composite(2, exact, db);
  CHECK(same.value == 107430);
  CHECK(same.set.empty());
  CHECK(same.log.empty());

  SearchOptions capped;
  capped.sieve_cap = 1500;
  PairDatabase small;
  try {
    minimal_composite(3, capped, small);
    FAIL("expected DatabaseTooSmall");
  } catch (const DatabaseTooSmall& e) {
    CHECK(small.max_p() == 1500);
  }
  CHECK_THROWS_AS(minimal_composite(1, SearchOptions{}, small), std::invalid_argument);
}

TEST_CASE("M_2 does not exceed the three-prime candidates") {
  const mpz_class m2 = 107430;
  for (const Pairs& s : {Pairs{{37, 32}, {59, 44}, {101, 68}}, Pairs{{157, 62}, {401, 382}, {1217, 1118}}}) {
    const mpz_class m3 = m_s(s);
    CHECK(m2 <= m3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j) {
        const Pairs sub{s[i], s[j]};
        if (is_strong_friendly(sub)) CHECK(m_s(sub) <= m3);
      }
  }
}

}  // TEST_SUITE
