#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>

#include "bernpairs/arith.hpp"
#include "bernpairs/bernoulli.hpp"
#include "bernpairs/composite.hpp"
#include "bernpairs/conjecture.hpp"
#include "bernpairs/errors.hpp"
#include "bernpairs/pairs.hpp"
#include "bernpairs/parallel.hpp"
#include "bernpairs/verify.hpp"

namespace bernpairs::cli {

namespace {

// Flag values that parse but are out of range.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

void require_pair_flags(std::uint64_t p, std::uint64_t l) {
  require(p >= 5 && is_prime(p), "--p must be a prime >= 5");
  require(l % 2 == 0 && l >= 2 && l + 3 <= p, "--l must be even with 2 <= l <= p-3");
}

std::optional<std::uint64_t> parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::ofstream open_csv(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  return f;
}

struct Flags {
  unsigned jobs = default_jobs();
  std::uint64_t p = 0, l = 0, max_p = 0, c = 0, m = 0, cap = 20000;
  unsigned order = 2, r = 1, n = 2;
  std::string db, out, csv, u0 = "inf", suite;
  bool with_delta = false;
};

PairDatabase database_from(const Flags& f, std::uint64_t fallback_max_p) {
  if (!f.db.empty()) return load_database(f.db);
  return build_database(f.max_p ? f.max_p : fallback_max_p, f.jobs);
}

int cmd_sieve(const Flags& f, std::ostream& out) {
  require(f.max_p >= 2, "--max-p must be >= 2");
  const PairDatabase db = build_database(f.max_p, f.jobs, f.with_delta);
  if (f.out.empty() || f.out == "-") {
    write_database(out, db);
  } else {
    save_database(db, f.out);
    out << "wrote " << db.pair_count() << " pairs for p < " << db.max_p() << " to " << f.out << '\n';
  }
  return 0;
}

int cmd_pairs(const Flags& f, std::ostream& out) {
  const PairDatabase db = load_database(f.db);
  if (f.p) {
    require(is_prime(f.p), "--p must be prime");
    if (!db.covers(f.p))
      throw DatabaseTooSmall(std::to_string(f.p) + " is not below max_p=" + std::to_string(db.max_p()), f.p + 1);
    for (const IrregularPair& pair : db.pairs_of(f.p)) out << pair.p << ',' << pair.l << '\n';
    return 0;
  }
  for (const IrregularPair& pair : db.all_pairs()) out << pair.p << ',' << pair.l << '\n';
  return 0;
}

int cmd_delta(const Flags& f, std::ostream& out) {
  require_pair_flags(f.p, f.l);
  const DeltaValue v = delta(make_irregular_pair(f.p, f.l));
  out << "delta" << v.pair << '=' << v.delta << '\n';
  return 0;
}

int cmd_lift(const Flags& f, std::ostream& out) {
  require_pair_flags(f.p, f.l);
  require(f.order >= 1, "--order must be >= 1");
  const OrderedPair lifted = lift(make_irregular_pair(f.p, f.l), f.order);
  out << lifted << " l_" << lifted.order() << '=' << lifted.index().get_str() << '\n';
  return 0;
}

int cmd_a_value(const Flags& f, std::ostream& out) {
  require_pair_flags(f.p, f.l);
  require(f.r >= 1, "--r must be >= 1");
  const IrregularPair pair = make_irregular_pair(f.p, f.l);
  // Prime factors of l-1 are below l.
  const PairDatabase db = database_from(f, f.l);
  const PrimePowerAValue result = a_value_prime_power(pair, f.r, db);
  if (const auto* none = std::get_if<NoSolution>(&result)) {
    out << "NO SOLUTION r=" << none->r << " digits=" << none->digits << " deviation_order=" << none->deviation_order
        << " gap=" << none->digit_gap << '\n';
    return 0;
  }
  const AValueResult& a = std::get<AValueResult>(result);
  out << "m=" << a.m.get_str() << (a.valid ? " VALID" : " INVALID");
  for (const IrregularPair& w : a.witnesses) out << " witness=" << w;
  out << '\n';
  return 0;
}

int cmd_exceptions(const Flags& f, std::ostream& out) {
  require(!f.db.empty() || f.max_p >= 2, "one of --db or --max-p is required");
  const PairDatabase db = database_from(f, 0);
  const std::vector<ExceptionRecord> records = find_exceptions(db, f.jobs);
  print_exception_table(out, records);
  const ExceptionCensus census = exception_census(db, records);
  out << "p < " << db.max_p() << ": pairs=" << census.pairs << " with_irregular_factor=" << census.with_irregular_factor
      << " exceptions=" << census.exceptions << '\n';
  if (!f.csv.empty()) {
    std::ofstream csv = open_csv(f.csv);
    write_exception_csv(csv, records);
  }
  return 0;
}

int cmd_lambda(const Flags& f, std::ostream& out) {
  require(f.c >= 2, "--c must be >= 2");
  const std::vector<PrimePower> factors = factorize(f.c);
  for (const PrimePower& pp : factors) require(pp.prime >= 5, "--c must not have prime factors 2 or 3");
  const PairDatabase db = database_from(f, factors.back().prime + 1);
  const LambdaResult r = lambda(f.c, db);
  out << "Lambda(" << f.c << ")=";
  if (r.value) {
    out << r.value->get_str() << " S=" << format_set(r.achieving_set) << '\n';
  } else if (r.unsupported_mixed_exponents) {
    out << "unsupported (mixed exponents) lower_bound=" << r.lower_bound->get_str() << '\n';
  } else {
    out << "inf\n";
  }
  return 0;
}

int cmd_mn(const Flags& f, std::ostream& out) {
  require(f.n >= 2, "--n must be >= 2");
  SearchOptions options;
  if (f.u0 != "inf" && f.u0 != "infinity") {
    mpz_class u0;
    require(u0.set_str(f.u0, 10) == 0 && u0 >= 1, "--u0 must be a positive integer or 'inf'");
    options.initial_bound = u0;
  }
  options.sieve_cap = f.cap;
  options.jobs = f.jobs;
  PairDatabase db = f.db.empty() ? PairDatabase() : load_database(f.db);
  const MinimalComposite result = minimal_composite(f.n, options, db);
  print_search_table(out, result.log);
  if (!f.csv.empty()) {
    std::ofstream csv = open_csv(f.csv);
    write_search_csv(csv, result.log);
  }
  out << "M_" << f.n << '=' << result.value.get_str();
  if (result.set.empty()) {
    out << " (initial bound not improved)\n";
  } else {
    std::vector<PrimePower> primes;
    for (const IrregularPair& pair : result.set) primes.push_back({pair.p, 1});
    out << " c=" << format_factorization(primes) << " S=" << format_set(result.set) << '\n';
  }
  return 0;
}

int cmd_ratio(const Flags& f, std::ostream& out) {
  require(f.m >= 2 && f.m % 2 == 0, "--m must be even and >= 2");
  require(f.m <= max_exact_index(), "--m exceeds the exact bound " + std::to_string(max_exact_index()));
  out << "ratio(" << f.m << ")=" << verify_ratio(f.m).get_str() << '\n';
  return 0;
}

int cmd_verify(const Flags& f, std::ostream& out) {
  const CheckSink sink = [&out](const CheckResult& r) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.detail.empty()) out << "  [" << r.detail << ']';
    out << std::endl;
  };
  const std::vector<CheckResult> results =
      f.suite == "paper-tables" ? verify_published_tables(f.jobs, sink) : verify_properties(f.jobs, sink);
  std::size_t passed = 0;
  for (const CheckResult& r : results) passed += r.passed;
  out << passed << '/' << results.size() << " passed\n";
  return passed == results.size() ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Flags f;
  CLI::App app("Irregular pairs of Bernoulli numbers and the numerator-ratio minima", "bernpairs");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--jobs", f.jobs, "Worker threads (default: available cores)")->check(CLI::PositiveNumber);

  auto* sieve = app.add_subcommand("sieve", "Sieve every prime below --max-p for irregular pairs");
  sieve->add_option("--max-p", f.max_p, "Exclusive prime bound")->required();
  sieve->add_option("--out", f.out, "Database file (default: standard output)");
  sieve->add_flag("--delta", f.with_delta, "Also store Delta for each pair");

  auto* pairs = app.add_subcommand("pairs", "List irregular pairs from a database as p,l");
  pairs->add_option("--db", f.db, "Database file")->required();
  pairs->add_option("--p", f.p, "Only this prime");

  auto* delta_cmd = app.add_subcommand("delta", "Delta of an irregular pair");
  delta_cmd->add_option("--p", f.p)->required();
  delta_cmd->add_option("--l", f.l)->required();

  auto* lift_cmd = app.add_subcommand("lift", "Lift an irregular pair to higher order");
  lift_cmd->add_option("--p", f.p)->required();
  lift_cmd->add_option("--l", f.l)->required();
  lift_cmd->add_option("--order", f.order, "Target order (default 2)");

  auto* a_cmd = app.add_subcommand("a-value", "A(p^r) = (l-1)p^r + 1 with its validity check");
  a_cmd->add_option("--p", f.p)->required();
  a_cmd->add_option("--l", f.l)->required();
  a_cmd->add_option("--r", f.r, "Prime power exponent (default 1)");
  a_cmd->add_option("--db", f.db, "Database covering the prime factors of l-1 (default: sieve below l)");

  auto* exc = app.add_subcommand("exceptions", "Pairs whose A(p) candidate is invalid");
  exc->add_option("--db", f.db, "Database file");
  exc->add_option("--max-p", f.max_p, "Sieve below this bound instead of reading --db");
  exc->add_option("--csv", f.csv, "Also write p,l,m,l_minus_1,q,l_prime rows here");

  auto* lam = app.add_subcommand("lambda", "Lambda(c) for c built from irregular primes");
  lam->add_option("--c", f.c)->required();
  lam->add_option("--db", f.db, "Database file (default: sieve up to the largest factor)");

  auto* mn = app.add_subcommand("mn", "Minimal Lambda over products of n irregular primes");
  mn->add_option("--n", f.n, "Number of prime factors")->required();
  mn->add_option("--u0", f.u0, "Initial bound U_0 or 'inf' (default)");
  mn->add_option("--cap", f.cap, "Never sieve primes at or above this bound (default 20000)");
  mn->add_option("--db", f.db, "Starting database");
  mn->add_option("--csv", f.csv, "Also write the search log as n,set,U,u");

  auto* ratio = app.add_subcommand("ratio", "num(B_m/m) / num(B_m/(m(m-1))) in exact arithmetic");
  ratio->add_option("--m", f.m)->required();

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("--suite", f.suite)->required()->check(CLI::IsMember({"paper-tables", "properties"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n\n";
    const auto selected = app.get_subcommands();
    err << (selected.empty() ? app.help() : selected.front()->help());
    return 2;
  }

  // The bound is process-wide; put it back for callers that run several commands.
  struct RestoreBound {
    std::uint64_t saved = max_exact_index();
    ~RestoreBound() { set_max_exact_index(saved); }
  } restore;

  try {
    if (const char* env = std::getenv("BERNPAIRS_MAX_EXACT_N")) {
      const auto bound = parse_u64(env);
      require(bound && *bound >= 2, "BERNPAIRS_MAX_EXACT_N must be an integer >= 2");
      set_max_exact_index(*bound);
    }
    if (*sieve) return cmd_sieve(f, out);
    if (*pairs) return cmd_pairs(f, out);
    if (*delta_cmd) return cmd_delta(f, out);
    if (*lift_cmd) return cmd_lift(f, out);
    if (*a_cmd) return cmd_a_value(f, out);
    if (*exc) return cmd_exceptions(f, out);
    if (*lam) return cmd_lambda(f, out);
    if (*mn) return cmd_mn(f, out);
    if (*ratio) return cmd_ratio(f, out);
    return cmd_verify(f, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.get_subcommands().front()->help();
    return 2;
  } catch (const DatabaseTooSmall& e) {
    err << "error: " << e.name() << ": " << e.what();
    if (e.needed_bound()) err << " (needs max_p >= " << e.needed_bound() << ')';
    err << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.name() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace bernpairs::cli
