#include "bernpairs/verify.hpp"

#include <algorithm>
#include <exception>
#include <random>
#include <sstream>

#include "bernpairs/arith.hpp"
#include "bernpairs/bernoulli.hpp"
#include "bernpairs/composite.hpp"
#include "bernpairs/conjecture.hpp"
#include "bernpairs/errors.hpp"
#include "bernpairs/pairs.hpp"

namespace bernpairs {

namespace {

class Runner {
 public:
  explicit Runner(const CheckSink& sink) : sink_(sink) {}

  // `body` returns true on success and may fill `detail`.
  template <class F>
  void check(std::string name, F&& body) {
    CheckResult r{std::move(name), false, {}};
    try {
      r.passed = body(r.detail);
    } catch (const Error& e) {
      r.detail = std::string(e.name()) + ": " + e.what();
    } catch (const std::exception& e) {
      r.detail = e.what();
    }
    if (sink_) sink_(r);
    results_.push_back(std::move(r));
  }

  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  const CheckSink& sink_;
  std::vector<CheckResult> results_;
};

template <class T>
std::string join(const std::vector<T>& items) {
  std::ostringstream os;
  for (std::size_t i = 0; i < items.size(); ++i) os << (i ? " " : "") << items[i];
  return os.str();
}

struct ExpectedRow {
  IrregularPair pair;
  unsigned long m;
  const char* factors;
  IrregularPair witness;
};

constexpr ExpectedRow kExceptionRows[] = {
    {{6449, 4884}, 31490468, "19*257", {257, 164}},
    {{8677, 2658}, 23054790, "2657", {2657, 710}},
    {{11351, 1044}, 11839094, "7*149", {149, 130}},
    {{12527, 2122}, 26569768, "3*7*101", {101, 68}},
    {{15823, 482}, 7610864, "13*37", {37, 32}},
};

bool rows_match(const std::vector<ExceptionRecord>& got, std::size_t count, std::string& detail) {
  std::ostringstream os;
  bool ok = got.size() == count;
  for (std::size_t i = 0; i < got.size(); ++i) {
    const ExceptionRecord& r = got[i];
    os << (i ? "; " : "") << r.pair << ' ' << r.m.get_str() << ' ' << format_factorization(r.factors_of_l_minus_1)
       << ' ' << r.witness();
    if (i >= count) continue;
    const ExpectedRow& e = kExceptionRows[i];
    ok = ok && r.pair == e.pair && r.m == e.m && format_factorization(r.factors_of_l_minus_1) == e.factors &&
         r.witnesses.size() == 1 && r.witness() == e.witness;
  }
  detail = os.str();
  return ok;
}

std::vector<IrregularPair> pairs_list(std::initializer_list<IrregularPair> list) { return list; }

}  // namespace

std::vector<CheckResult> verify_published_tables(unsigned jobs, const CheckSink& sink) {
  Runner run(sink);

  run.check("factorize 4883 = 19*257", [](std::string& d) {
    d = format_factorization(factorize(4883));
    return d == "19*257";
  });
  run.check("factorize 2121 = 3*7*101", [](std::string& d) {
    d = format_factorization(factorize(2121));
    return d == "3*7*101";
  });
  run.check("B_3 = 0", [](std::string& d) {
    d = bernoulli_exact(3).str();
    return bernoulli_exact(3).is_zero();
  });
  run.check("numerator ratio at 1148 is 37", [](std::string& d) {
    const NumeratorPair n = numerator_pair(1148);
    d = "ratio=" + mpz_class(n.divided / n.doubly_divided).get_str();
    return n.divided % 37 == 0 && n.divided == 37 * n.doubly_divided;
  });
  run.check("B_k mod 37 vanishes only at k=32", [](std::string& d) {
    const auto z = bernoulli_mod_p_all(37).zeros();
    d = join(z);
    return z == std::vector<std::uint64_t>{32};
  });
  run.check("B_k mod 157 vanishes only at k=62,110", [](std::string& d) {
    const auto z = bernoulli_mod_p_all(157).zeros();
    d = join(z);
    return z == std::vector<std::uint64_t>{62, 110};
  });
  run.check("B_32/32 = 0 mod 37", [](std::string& d) {
    const Residue r = divided_bernoulli_mod_pk(32, 37, 1);
    d = std::to_string(r.value());
    return r.is_zero();
  });
  run.check("sieve 37 = (37,32)", [](std::string& d) {
    const auto s = sieve_prime(37);
    d = join(s);
    return s == pairs_list({{37, 32}});
  });
  run.check("sieve 157 = (157,62),(157,110)", [](std::string& d) {
    const auto s = sieve_prime(157);
    d = join(s);
    return s == pairs_list({{157, 62}, {157, 110}});
  });
  run.check("db(40) = {37: [32]}", [jobs](std::string& d) {
    const PairDatabase db = build_database(40, jobs);
    d = join(db.all_pairs());
    return db.all_pairs() == pairs_list({{37, 32}});
  });
  run.check("db(160) irregular pairs", [jobs](std::string& d) {
    const PairDatabase db = build_database(160, jobs);
    d = join(db.all_pairs());
    return db.all_pairs() == pairs_list({{37, 32},
                                         {59, 44},
                                         {67, 58},
                                         {101, 68},
                                         {103, 24},
                                         {131, 22},
                                         {149, 130},
                                         {157, 62},
                                         {157, 110}});
  });
  for (const IrregularPair pair : {IrregularPair{37, 32}, IrregularPair{59, 44}, IrregularPair{103, 24}}) {
    run.check("delta" + to_string(pair) + " nonzero", [pair](std::string& d) {
      const DeltaValue v = delta(pair);
      d = "delta=" + std::to_string(v.delta);
      return v.delta != 0;
    });
  }
  run.check("lift (353,186) to order 2 = (353;186,190)", [](std::string& d) {
    const OrderedPair o = lift({353, 186}, 2);
    d = to_string(o);
    return o.digits == std::vector<std::uint64_t>{186, 190};
  });
  run.check("lift (647,554) to order 2 = (647;554,558)", [](std::string& d) {
    const OrderedPair o = lift({647, 554}, 2);
    d = to_string(o);
    return o.digits == std::vector<std::uint64_t>{554, 558};
  });

  const PairDatabase db1000 = build_database(1000, jobs);
  run.check("no order-2 pair (p;l,l-1) for p < 1000", [&](std::string& d) {
    const SpecialOrder2Scan scan = scan_special_order2(db1000, jobs);
    d = std::to_string(scan.lifts.size()) + " lifts, " + std::to_string(scan.failures.size()) + " failures";
    return scan.special.empty() && scan.failures.empty();
  });
  run.check("min |s1-s2| over p < 700 is 4", [&](std::string& d) {
    const SpecialOrder2Scan scan = scan_special_order2(build_database(700, jobs), jobs);
    d = scan.min_gap ? "min_gap=" + std::to_string(*scan.min_gap) : "no lifts";
    return scan.min_gap == 4u && scan.failures.empty();
  });

  const PairDatabase db16000 = build_database(16000, jobs);
  auto a_check = [&](IrregularPair pair, unsigned long m, bool valid, std::optional<IrregularPair> witness) {
    run.check("A" + to_string(pair) + " = " + std::to_string(m) + (valid ? " valid" : " invalid"),
              [&, pair, m, valid, witness](std::string& d) {
                const AValueResult a = a_value(pair, db16000);
                d = "m=" + a.m.get_str() + (a.valid ? " VALID" : " INVALID");
                if (!a.valid) d += " witness=" + to_string(a.witnesses.front());
                return a.m == m && a.valid == valid && (!witness || (!a.witnesses.empty() && a.witnesses.front() == *witness));
              });
  };
  a_check({37, 32}, 1148, true, std::nullopt);
  a_check({149, 130}, 19222, true, std::nullopt);
  a_check({6449, 4884}, 31490468, false, IrregularPair{257, 164});

  run.check("A(37^2) has no solution", [&](std::string& d) {
    const auto r = a_value_prime_power({37, 32}, 2, db16000);
    d = std::holds_alternative<NoSolution>(r) ? to_string(std::get<NoSolution>(r).digits) : "solution";
    return std::holds_alternative<NoSolution>(r);
  });
  run.check("A(353^2) has no solution, gap 4", [&](std::string& d) {
    const auto r = a_value_prime_power({353, 186}, 2, db16000);
    const auto* ns = std::get_if<NoSolution>(&r);
    if (ns) d = "gap=" + std::to_string(ns->digit_gap);
    return ns && ns->digit_gap == 4;
  });
  run.check("A(647^3) stops at order 2", [&](std::string& d) {
    const auto r = a_value_prime_power({647, 554}, 3, db16000);
    const auto* ns = std::get_if<NoSolution>(&r);
    if (ns) d = "deviation_order=" + std::to_string(ns->deviation_order) + " " + to_string(ns->digits);
    return ns && ns->deviation_order == 2 && ns->digits.digits == std::vector<std::uint64_t>{554, 558};
  });

  run.check("exceptions below 6500: first table row", [&](std::string& d) {
    return rows_match(find_exceptions(build_database(6500, jobs), jobs), 1, d);
  });
  run.check("exceptions below 16000: five table rows", [&](std::string& d) {
    return rows_match(find_exceptions(db16000, jobs), 5, d);
  });

  for (const auto& [m, ratio] : {std::pair{1148ul, 37ul}, std::pair{12ul, 1ul}, std::pair{2538ul, 59ul}}) {
    run.check("ratio(" + std::to_string(m) + ") = " + std::to_string(ratio), [m, ratio](std::string& d) {
      const mpz_class r = verify_ratio(m);
      d = r.get_str();
      return r == ratio;
    });
  }

  run.check("x=1147 (1332), x=2537 (3422) gives 272875 mod 2279052", [](std::string& d) {
    const Congruence sys[] = {{1147, 1332}, {2537, 3422}};
    const auto s = crt_solve(sys);
    if (s) d = s->value.get_str() + " mod " + s->modulus.get_str();
    return s && s->value == 272875 && s->modulus == 2279052;
  });
  run.check("{(37,32),(59,44),(101,68)} strong friendly", [](std::string& d) {
    const auto s = pairs_list({{37, 32}, {59, 44}, {101, 68}});
    d = is_strong_friendly(s) ? "strong" : "not strong";
    return is_strong_friendly(s);
  });
  for (const auto& s : {pairs_list({{101, 68}, {607, 592}}), pairs_list({{131, 22}, {263, 100}})}) {
    run.check(format_set(s) + " friendly, not strong", [s](std::string& d) {
      d = std::string(is_friendly(s) ? "friendly" : "not friendly") + (is_strong_friendly(s) ? " strong" : "");
      return is_friendly(s) && !is_strong_friendly(s);
    });
  }
  for (const auto& [set, expected] :
       {std::pair{pairs_list({{37, 32}, {59, 44}}), mpz_class(272876)},
        std::pair{pairs_list({{103, 24}, {149, 130}}), mpz_class(107430)},
        std::pair{pairs_list({{37, 32}, {59, 44}, {101, 68}}), mpz_class("3979497668")}}) {
    run.check("m_S" + format_set(set) + " = " + expected.get_str(), [set, expected](std::string& d) {
      const mpz_class m = m_s(set);
      d = m.get_str();
      return m == expected;
    });
  }
  run.check("Lambda(37) = 1148", [&](std::string& d) {
    const mpz_class v = lambda_prime(37, db16000);
    d = v.get_str();
    return v == 1148;
  });
  for (const auto& [c, expected] : {std::pair{103ul * 149, 107430ul}, std::pair{37ul * 59, 272876ul}}) {
    run.check("Lambda(" + std::to_string(c) + ") = " + std::to_string(expected), [&, c, expected](std::string& d) {
      const LambdaResult r = lambda(c, db16000);
      d = r.value ? r.value->get_str() : "inf";
      return r.value && *r.value == expected;
    });
  }
  run.check("Lambda(131*263) = inf", [&](std::string& d) {
    const LambdaResult r = lambda(131 * 263, db16000);
    d = r.value ? r.value->get_str() : "inf";
    return r.infinite() && db16000.pairs_of(131).size() == 1 && db16000.pairs_of(263).size() == 1;
  });
  run.check("M_2 from U=7610864 is 107430, c=103*149", [jobs](std::string& d) {
    PairDatabase db;
    SearchOptions options;
    options.initial_bound = mpz_class(7610864);
    options.jobs = jobs;
    const MinimalComposite r = minimal_composite(2, options, db);
    bool logged = false;
    for (const SearchLogEntry& e : r.log)
      logged = logged || (e.bound == 272876 && e.set == pairs_list({{37, 32}, {59, 44}}));
    d = r.value.get_str() + " " + format_set(r.set);
    return r.value == 107430 && r.c() == 103 * 149 && logged;
  });
  run.check("M_3 candidate {(157,62),(401,382),(1217,1118)} = 3754314782", [](std::string& d) {
    const auto contains = [](std::uint64_t p, std::uint64_t l) {
      const auto s = sieve_prime(p);
      return std::find(s.begin(), s.end(), IrregularPair{p, l}) != s.end();
    };
    const bool sieved = contains(401, 382) && contains(1217, 1118);
    const mpz_class m = m_s(pairs_list({{157, 62}, {401, 382}, {1217, 1118}}));
    d = m.get_str() + (sieved ? "" : " (not irregular pairs)");
    return sieved && m == mpz_class("3754314782");
  });
  run.check("A(p)/2 for the first seven irregular primes", [&](std::string& d) {
    std::vector<std::string> got;
    const auto primes = db16000.irregular_primes();
    for (std::size_t i = 0; i < 7; ++i) got.push_back(mpz_class(lambda_prime(primes[i], db16000) / 2).get_str());
    d = join(got);
    return d == "574 1269 1910 3384 1185 1376 9611";
  });

  return run.take();
}

std::vector<CheckResult> verify_properties(unsigned jobs, const CheckSink& sink) {
  Runner run(sink);
  std::mt19937_64 rng(20240601);
  const PairDatabase db = build_database(400, jobs);
  const auto primes = primes_in_range(5, 200);

  run.check("Kummer r=1 on 100 random instances", [&](std::string& d) {
    std::uniform_int_distribution<std::size_t> pick(0, primes.size() - 1);
    for (int i = 0; i < 100; ++i) {
      const std::uint64_t p = primes[pick(rng)];
      std::uint64_t n = 2 * std::uniform_int_distribution<std::uint64_t>(1, 300)(rng);
      if (n % (p - 1) == 0) n += 2;
      if (n % (p - 1) == 0) continue;
      const std::uint64_t n2 = n + (p - 1) * std::uniform_int_distribution<std::uint64_t>(1, 5)(rng);
      if (divided_bernoulli_exact(n).mod(p) != divided_bernoulli_exact(n2).mod(p)) {
        d = "n=" + std::to_string(n) + " p=" + std::to_string(p);
        return false;
      }
    }
    return true;
  });
  run.check("Kummer r=2 on 20 random instances", [&](std::string& d) {
    const std::uint64_t small[] = {5, 7, 11, 13};
    for (int i = 0; i < 20; ++i) {
      const std::uint64_t p = small[rng() % 4];
      std::uint64_t n = 2 * std::uniform_int_distribution<std::uint64_t>(1, 40)(rng);
      if (n % (p - 1) == 0) n += 2;
      const std::uint64_t n2 = n + p * (p - 1);
      // (1 - p^{n-1}) B_n / n is the Kummer-invariant quantity.
      const auto factor = [p](std::uint64_t k) {
        mpz_class pk;
        mpz_ui_pow_ui(pk.get_mpz_t(), p, k - 1);
        return Rational(mpz_class(1 - pk), mpz_class(1));
      };
      const std::uint64_t m = p * p;
      if ((factor(n) * divided_bernoulli_exact(n)).mod(m) != (factor(n2) * divided_bernoulli_exact(n2)).mod(m)) {
        d = "n=" + std::to_string(n) + " p=" + std::to_string(p);
        return false;
      }
    }
    return true;
  });
  run.check("p | B_{l+k(p-1)} along every pair below 400", [&](std::string& d) {
    for (const IrregularPair& pr : db.all_pairs())
      for (std::uint64_t k = 0; k < 3; ++k)
        if (!divided_bernoulli_mod_pk(pr.l + k * (pr.p - 1), pr.p, 1).is_zero()) {
          d = to_string(pr) + " k=" + std::to_string(k);
          return false;
        }
    return true;
  });
  run.check("CRT agrees with brute force on 500 systems", [&](std::string& d) {
    std::uniform_int_distribution<std::uint64_t> mod(1, 60);
    for (int i = 0; i < 500; ++i) {
      const std::uint64_t w1 = mod(rng), w2 = mod(rng);
      const std::uint64_t a1 = rng() % w1, a2 = rng() % w2;
      const Congruence sys[] = {{a1, w1}, {a2, w2}};
      const auto s = crt_solve(sys);
      const std::uint64_t l = gcd_lcm(w1, w2).lcm;
      std::optional<std::uint64_t> brute;
      for (std::uint64_t x = 0; x < l && !brute; ++x)
        if (x % w1 == a1 && x % w2 == a2) brute = x;
      if (s.has_value() != brute.has_value() || (s && s->value != *brute)) {
        d = std::to_string(a1) + " mod " + std::to_string(w1) + ", " + std::to_string(a2) + " mod " + std::to_string(w2);
        return false;
      }
    }
    return true;
  });
  run.check("numerator ratio = gcd(N1, m-1) for even m <= 300", [](std::string& d) {
    for (std::uint64_t m = 2; m <= 300; m += 2) {
      const NumeratorPair n = numerator_pair(m);
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), n.divided.get_mpz_t(), mpz_class(m - 1).get_mpz_t());
      if (verify_ratio(m) != g) {
        d = "m=" + std::to_string(m);
        return false;
      }
    }
    return true;
  });
  run.check("database identical for jobs=1 and jobs=3", [](std::string& d) {
    const bool same = build_database(1200, 1) == build_database(1200, 3);
    d = same ? "" : "mismatch";
    return same;
  });

  return run.take();
}

}  // namespace bernpairs
