#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "bernpairs");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = bernpairs::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("bernpairs_cli_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("sieve then pairs") {
  const std::string db = temp_path("db160.csv");
  REQUIRE(run({"sieve", "--max-p", "160", "--out", db}).code == 0);
  const Outcome r = run({"pairs", "--p", "157", "--db", db});
  CHECK(r.code == 0);
  CHECK(r.out == "157,62\n157,110\n");
  CHECK(run({"pairs", "--p", "41", "--db", db}).out.empty());
  const Outcome beyond = run({"pairs", "--p", "163", "--db", db});
  CHECK(beyond.code == 1);
  CHECK(beyond.err.find("DatabaseTooSmall") != std::string::npos);
  std::filesystem::remove(db);
}

TEST_CASE("sieve output is identical across job counts") {
  const Outcome one = run({"--jobs", "1", "sieve", "--max-p", "2000", "--delta"});
  const Outcome four = run({"sieve", "--max-p", "2000", "--delta", "--jobs", "4"});
  CHECK(one.code == 0);
  CHECK(one.out == four.out);
  CHECK(one.out.rfind("# bernpairs-db v1 max_p=2000\n37,32,21\n", 0) == 0);
}

TEST_CASE("a-value") {
  const std::string db = temp_path("db6500.csv");
  REQUIRE(run({"sieve", "--max-p", "6500", "--out", db}).code == 0);
  const Outcome r = run({"a-value", "--p", "6449", "--l", "4884", "--db", db});
  CHECK(r.code == 0);
  CHECK(r.out == "m=31490468 INVALID witness=(257,164)\n");
  CHECK(run({"a-value", "--p", "37", "--l", "32"}).out == "m=1148 VALID\n");
  const Outcome pp = run({"a-value", "--p", "353", "--l", "186", "--r", "2"});
  CHECK(pp.out == "NO SOLUTION r=2 digits=(353;186,190) deviation_order=2 gap=4\n");
  std::filesystem::remove(db);
}

TEST_CASE("mn") {
  const std::string csv = temp_path("mn.csv");
  const Outcome r = run({"mn", "--n", "2", "--u0", "7610864", "--csv", csv});
  CHECK(r.code == 0);
  CHECK(r.out.find("M_2=107430 c=103*149 S={(103,24),(149,130)}\n") != std::string::npos);
  CHECK(r.out.find("272876") != std::string::npos);
  CHECK(slurp(csv) == "n,set,U,u\n2,\"{(37,32),(59,44)}\",272876,522\n2,\"{(103,24),(149,130)}\",107430,327\n");
  std::filesystem::remove(csv);
  CHECK(run({"mn", "--n", "2", "--u0", "100"}).out.find("M_2=100 (initial bound not improved)") != std::string::npos);
  const Outcome capped = run({"mn", "--n", "3", "--cap", "600"});
  CHECK(capped.code == 1);
  CHECK(capped.err.find("DatabaseTooSmall") != std::string::npos);
}

TEST_CASE("delta, lift, ratio, lambda") {
  CHECK(run({"delta", "--p", "37", "--l", "32"}).out == "delta(37,32)=21\n");
  CHECK(run({"lift", "--p", "647", "--l", "554"}).out == "(647;554,558) l_2=361022\n");
  CHECK(run({"ratio", "--m", "1148"}).out == "ratio(1148)=37\n");
  CHECK(run({"ratio", "--m", "12"}).out == "ratio(12)=1\n");
  CHECK(run({"lambda", "--c", "15347"}).out == "Lambda(15347)=107430 S={(103,24),(149,130)}\n");
  CHECK(run({"lambda", "--c", "34453"}).out == "Lambda(34453)=inf\n");
}

TEST_CASE("exceptions") {
  const std::string csv = temp_path("exceptions.csv");
  const Outcome r = run({"exceptions", "--max-p", "6500", "--csv", csv});
  CHECK(r.code == 0);
  CHECK(r.out.find("exceptions=1") != std::string::npos);
  CHECK(slurp(csv) == "p,l,m,l_minus_1,q,l_prime\n6449,4884,31490468,19*257,257,164\n");
  std::filesystem::remove(csv);
}

TEST_CASE("domain errors exit with 1 and name the error") {
  const Outcome r = run({"lift", "--p", "37", "--l", "30"});
  CHECK(r.code == 1);
  CHECK(r.err.find("NotIrregularPair") != std::string::npos);
  const Outcome regular = run({"lambda", "--c", "41"});
  CHECK(regular.code == 1);
  CHECK(regular.err.find("NotIrregular") != std::string::npos);
  const Outcome missing = run({"pairs", "--db", temp_path("missing.csv")});
  CHECK(missing.code == 1);
}

TEST_CASE("usage errors exit with 2 and print flag documentation") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{}, {"frobnicate"}, {"lift", "--p", "36", "--l", "30"}, {"lift", "--p", "37", "--l", "31"},
        {"ratio", "--m", "13"}, {"sieve"}, {"mn", "--n", "2", "--u0", "abc"}, {"verify", "--suite", "other"},
        {"exceptions"}, {"--jobs", "0", "ratio", "--m", "12"}, {"lambda", "--c", "6"}}) {
    const Outcome r = run(args);
    INFO(args.size());
    CHECK(r.code == 2);
    CHECK(r.err.find("Options:") != std::string::npos);
  }
}

TEST_CASE("exact bound from the environment") {
  setenv("BERNPAIRS_MAX_EXACT_N", "1000", 1);
  const Outcome r = run({"ratio", "--m", "1148"});
  CHECK(r.code == 2);
  setenv("BERNPAIRS_MAX_EXACT_N", "nonsense", 1);
  CHECK(run({"ratio", "--m", "12"}).code == 2);
  unsetenv("BERNPAIRS_MAX_EXACT_N");
  CHECK(run({"ratio", "--m", "1148"}).code == 0);
}

TEST_CASE("properties suite") {
  const Outcome r = run({"verify", "--suite", "properties", "--jobs", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

}  // TEST_SUITE
