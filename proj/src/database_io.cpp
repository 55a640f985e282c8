#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "bernpairs/arith.hpp"
#include "bernpairs/errors.hpp"
#include "bernpairs/pairs.hpp"

namespace bernpairs {

namespace {

constexpr std::string_view kHeader = "# bernpairs-db v1 max_p=";

std::uint64_t parse_number(std::string_view field, std::size_t line, const char* what) {
  std::uint64_t value = 0;
  const char* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc{} || ptr != end)
    throw FormatError(std::string("malformed ") + what + " '" + std::string(field) + "'", line);
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

void write_database(std::ostream& os, const PairDatabase& db) {
  os << kHeader << db.max_p() << '\n';
  for (const auto& [p, list] : db.entries()) {
    for (const PairEntry& e : list) {
      os << p << ',' << e.l << ',';
      if (e.delta) os << *e.delta;
      os << '\n';
    }
  }
}

PairDatabase read_database(std::istream& is) {
  std::string text;
  std::size_t line_no = 1;
  if (!std::getline(is, text) || !std::string_view(text).starts_with(kHeader))
    throw FormatError("missing '# bernpairs-db v1 max_p=<N>' header", line_no);
  const std::uint64_t max_p = parse_number(std::string_view(text).substr(kHeader.size()), line_no, "max_p");

  PairDatabase db(max_p);
  std::uint64_t current_p = 0;
  std::vector<PairEntry> current;
  auto flush = [&] {
    if (current_p != 0) db.insert(current_p, std::move(current));
    current.clear();
  };

  while (std::getline(is, text)) {
    ++line_no;
    const std::vector<std::string_view> fields = split(text, ',');
    if (fields.size() < 2 || fields.size() > 3)
      throw FormatError("expected 'p,l[,delta]'", line_no);
    const std::uint64_t p = parse_number(fields[0], line_no, "prime");
    const std::uint64_t l = parse_number(fields[1], line_no, "index");
    if (!is_prime(p) || p < 5) throw FormatError(std::to_string(p) + " is not a prime >= 5", line_no);
    if (p >= max_p) throw FormatError("prime " + std::to_string(p) + " not below max_p", line_no);
    if (l % 2 != 0 || l < 2 || l + 3 > p)
      throw FormatError("index " + std::to_string(l) + " must be even in [2, p-3]", line_no);
    PairEntry entry{l, std::nullopt};
    if (fields.size() == 3 && !fields[2].empty()) {
      const std::uint64_t d = parse_number(fields[2], line_no, "delta");
      if (d >= p) throw FormatError("delta must be below p", line_no);
      entry.delta = d;
    }
    if (p < current_p || (p == current_p && !current.empty() && l <= current.back().l))
      throw FormatError("pairs must be strictly ascending in (p,l)", line_no);
    if (p != current_p) {
      flush();
      current_p = p;
    }
    current.push_back(entry);
  }
  flush();
  return db;
}

void save_database(const PairDatabase& db, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_database(out, db);
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

PairDatabase load_database(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_database(in);
}

}  // namespace bernpairs
