// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <tuple>

#include "bernpairs/bernoulli.hpp"
#include "bernpairs/composite.hpp"
#include "bernpairs/conjecture.hpp"
#include "bernpairs/errors.hpp"
#include "bernpairs/pairs.hpp"
#include "bernpairs/parallel.hpp"
#include "bernpairs/verify.hpp"
#include "oracles.hpp"

using namespace bernpairs;

namespace {

using Pairs = std::vector<IrregularPair>;

struct Failure {
  std::string what;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

int failures = 0;

void criterion(int number, const std::string& title, double budget_seconds, const std::function<void()>& body) {
  const auto start = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = true;
  try {
    body();
  } catch (const Failure& f) {
    ok = false;
    detail = f.what;
  } catch (const Error& e) {
    ok = false;
    detail = std::string(e.name()) + ": " + e.what();
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (ok && seconds > budget_seconds) {
    ok = false;
    detail = "over the time budget";
  }
  if (!ok) ++failures;
  std::printf("%s %d %s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", number, title.c_str(), seconds, detail.empty() ? "" : ": ",
              detail.c_str());
  std::fflush(stdout);
}

struct Row {
  IrregularPair pair;
  unsigned long m;
  const char* factors;
  IrregularPair witness;
};

void expect_rows(const std::vector<ExceptionRecord>& got, std::span<const Row> rows) {
  expect(got.size() == rows.size(), std::to_string(got.size()) + " records, expected " + std::to_string(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ExceptionRecord& r = got[i];
    const std::string at = "row " + std::to_string(i + 1) + " " + to_string(r.pair);
    expect(r.pair == rows[i].pair, at + ": pair");
    expect(r.m == rows[i].m, at + ": m=" + r.m.get_str());
    expect(format_factorization(r.factors_of_l_minus_1) == rows[i].factors, at + ": factorization");
    expect(r.witnesses == Pairs{rows[i].witness}, at + ": witness");
    expect((r.pair.l - 1) * r.pair.p % (r.witness().p - 1) == r.witness().l - 1, at + ": witness congruence");
  }
}

}  // namespace

int main() {
  const unsigned jobs = default_jobs();

  criterion(1, "A(p)/2 for the first seven irregular primes", 5, [&] {
    const PairDatabase db = build_database(160, jobs);
    const std::vector<std::uint64_t> primes = db.irregular_primes();
    expect(primes.size() >= 7, "fewer than seven irregular primes below 160");
    std::vector<std::string> got;
    for (std::size_t i = 0; i < 7; ++i) {
      const IrregularPair pair = db.pairs_of(primes[i]).front();
      const AValueResult a = a_value(pair, db);
      expect(a.valid, to_string(pair) + " is invalid");
      got.push_back(mpz_class(a.m / 2).get_str());
    }
    std::ostringstream os;
    for (const auto& g : got) os << g << ' ';
    expect(os.str() == "574 1269 1910 3384 1185 1376 9611 ", os.str());
  });

  criterion(2, "exact ratio at A(37) and A(59), minimal on the progression", 600, [&] {
    for (const auto& [p, l, m] : {std::tuple{37ul, 32ul, 1148ul}, std::tuple{59ul, 44ul, 2538ul}}) {
      const mpz_class r = verify_ratio(m);
      expect(r == p, "ratio(" + std::to_string(m) + ") = " + r.get_str());
      for (std::uint64_t k = l; k < m; k += p - 1)
        expect(verify_ratio(k) != p, "ratio(" + std::to_string(k) + ") = " + std::to_string(p));
    }
  });

  criterion(3, "first exception below 6500", 900, [&] {
    expect(4883ull * 6449 % 256 == 163, "witness congruence");
    const Row rows[] = {{{6449, 4884}, 31490468, "19*257", {257, 164}}};
    expect_rows(find_exceptions(build_database(6500, jobs), jobs), rows);
  });

  criterion(4, "five exceptions below 16000", 7200, [&] {
    const Row rows[] = {
        {{6449, 4884}, 31490468, "19*257", {257, 164}},
        {{8677, 2658}, 23054790, "2657", {2657, 710}},
        {{11351, 1044}, 11839094, "7*149", {149, 130}},
        {{12527, 2122}, 26569768, "3*7*101", {101, 68}},
        {{15823, 482}, 7610864, "13*37", {37, 32}},
    };
    expect_rows(find_exceptions(build_database(16000, jobs), jobs), rows);
  });

  criterion(5, "M_2 = 107430 from U = 7610864", 1800, [&] {
    PairDatabase db;
    SearchOptions options;
    options.initial_bound = mpz_class(7610864);
    options.jobs = jobs;
    const MinimalComposite r = minimal_composite(2, options, db);
    expect(r.value == 107430, "M_2 = " + r.value.get_str());
    expect(r.c() == 103 * 149, "c = " + r.c().get_str());
    const bool logged = std::any_of(r.log.begin(), r.log.end(), [](const SearchLogEntry& e) {
      return e.set == Pairs{{37, 32}, {59, 44}} && e.bound == 272876;
    });
    expect(logged, "{(37,32),(59,44)} -> 272876 missing from the search log");
  });

  criterion(6, "three-prime candidates", 60, [&] {
    for (const IrregularPair pair : {IrregularPair{401, 382}, IrregularPair{1217, 1118}}) {
      const Pairs sieved = sieve_prime(pair.p);
      expect(std::find(sieved.begin(), sieved.end(), pair) != sieved.end(), to_string(pair) + " not found by sieve");
    }
    const mpz_class a = m_s(Pairs{{37, 32}, {59, 44}, {101, 68}});
    const mpz_class b = m_s(Pairs{{157, 62}, {401, 382}, {1217, 1118}});
    expect(a == mpz_class("3979497668"), "first m_S = " + a.get_str());
    expect(b == mpz_class("3754314782"), "second m_S = " + b.get_str());
  });

  criterion(7, "order-2 lifts and the scan below 1000", 1200, [&] {
    expect(lift({353, 186}, 2) == OrderedPair{353, {186, 190}}, "lift of (353,186)");
    expect(lift({647, 554}, 2) == OrderedPair{647, {554, 558}}, "lift of (647,554)");
    const SpecialOrder2Scan scan = scan_special_order2(build_database(1000, jobs), jobs);
    expect(scan.failures.empty(), std::to_string(scan.failures.size()) + " pairs failed to lift");
    if (!scan.special.empty()) expect(false, to_string(scan.special.front()) + " has s_2 = s_1 - 1");
    expect(scan.min_gap == 4u, "min gap " + (scan.min_gap ? std::to_string(*scan.min_gap) : std::string("none")));
  });

  criterion(8, "property suites", 120, [&] {
    for (const CheckResult& r : verify_properties(jobs)) expect(r.passed, r.name + " " + r.detail);

    for (std::uint64_t n = 2; n <= 200; n += 2) {
      mpz_class product = 1;
      for (std::uint64_t p = 2; p <= n + 1; ++p)
        if (oracle::is_prime(p) && n % (p - 1) == 0) product *= static_cast<unsigned long>(p);
      expect(bernoulli_exact(n).denominator() == product, "denominator of B_" + std::to_string(n));
      expect(bernoulli_exact(n).numerator() == oracle::bernoulli()[n].get_num(), "numerator of B_" + std::to_string(n));
    }

    const PairDatabase db = build_database(400, jobs);
    for (const IrregularPair& pair : db.all_pairs()) {
      const std::uint64_t l2 = lift(pair, 2).index().get_ui();
      for (std::uint64_t k = 0; k <= 1; ++k)
        expect(divided_bernoulli_mod_pk(l2 + k * pair.p * (pair.p - 1), pair.p, 2).is_zero(),
               "p^2 divisibility at " + to_string(pair));
    }

    std::mt19937_64 rng(8);
    const Pairs all = db.all_pairs();
    for (int checked = 0; checked < 200;) {
      const IrregularPair a = all[rng() % all.size()], b = all[rng() % all.size()];
      if (a.p == b.p || !is_strong_friendly(Pairs{a, b})) continue;
      const mpz_class m = m_s(Pairs{a, b});
      const mpz_class w = lcm(mpz_class(a.p * (a.p - 1)), mpz_class(b.p * (b.p - 1)));
      expect(m - 1 >= 1 && m - 1 <= w, "m_S range for " + to_string(a) + to_string(b));
      const LambdaResult lam = lambda_composite(a.p * b.p, db);
      expect(lam.value && *lam.value <= m, "Lambda above m_S");
      expect(*lam.value >= std::max(lambda_prime(a.p, db), lambda_prime(b.p, db)), "Lambda below a factor");
      ++checked;
    }

    std::ostringstream text;
    const PairDatabase with_delta = build_database(800, 1, true);
    write_database(text, with_delta);
    std::istringstream in(text.str());
    expect(read_database(in) == with_delta, "database round trip");
    std::ostringstream parallel;
    write_database(parallel, build_database(800, std::max(2u, jobs), true));
    expect(parallel.str() == text.str(), "database differs across job counts");
  });

  return failures == 0 ? 0 : 1;
}
