#include "rankverify/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

namespace rankverify {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double parse_double(const std::string& field, std::size_t line, const std::string& what) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || field.empty()) {
    throw ParseError(line, "non-numeric " + what + " field '" + field + "'");
  }
  if (!std::isfinite(value)) {
    throw ParseError(line, what + " must be finite");
  }
  return value;
}

std::size_t parse_count(const std::string& field, std::size_t line) {
  std::size_t value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || field.empty() || value == 0) {
    throw ParseError(line, "n must be a positive integer, got '" + field + "'");
  }
  return value;
}

// Yields (line_number, fields) for each non-comment, non-blank line.
template <typename Fn>
void for_each_row(std::istream& in, Fn fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) {
      line.erase(0, 3);  // UTF-8 byte-order mark
    }
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    fn(line_no, split_fields(stripped));
  }
}

void expect_header(std::size_t line, const std::vector<std::string>& fields,
                   const std::vector<std::string>& expected) {
  if (fields.size() != expected.size()) {
    throw ParseError(line, "expected header with " + std::to_string(expected.size()) +
                               " columns");
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (lower(fields[i]) != expected[i]) {
      throw ParseError(line, "expected header column '" + expected[i] + "', got '" +
                                 fields[i] + "'");
    }
  }
}

std::string format_shortest(double value) {
  char buffer[40];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

std::ifstream open_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open input file '" + path + "'");
  }
  return in;
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

std::vector<GroupSummaryRow> read_summary_csv(std::istream& in) {
  std::vector<GroupSummaryRow> rows;
  std::unordered_set<std::string> seen;
  bool header_done = false;
  for_each_row(in, [&](std::size_t line, const std::vector<std::string>& fields) {
    if (!header_done) {
      expect_header(line, fields, {"label", "n", "mean", "sd"});
      header_done = true;
      return;
    }
    if (fields.size() != 4) {
      throw ParseError(line, "expected 4 fields, got " + std::to_string(fields.size()));
    }
    GroupSummaryRow row;
    row.label = fields[0];
    if (row.label.empty()) throw ParseError(line, "empty label");
    if (!seen.insert(row.label).second) {
      throw ParseError(line, "duplicate label '" + row.label + "'");
    }
    row.n = parse_count(fields[1], line);
    row.mean = parse_double(fields[2], line, "mean");
    row.sd = parse_double(fields[3], line, "sd");
    if (!(row.sd > 0.0)) {
      throw ParseError(line, "sd must be positive for label '" + row.label + "'");
    }
    rows.push_back(std::move(row));
  });
  if (!header_done) throw ParseError(0, "empty file: missing header");
  if (rows.empty()) throw ParseError(0, "no data rows");
  return rows;
}

std::vector<GroupSummaryRow> read_raw_csv(std::istream& in) {
  // Keyed by label so the aggregate is independent of input row order.
  std::map<std::string, std::vector<double>> groups;
  bool header_done = false;
  for_each_row(in, [&](std::size_t line, const std::vector<std::string>& fields) {
    if (!header_done) {
      expect_header(line, fields, {"label", "value"});
      header_done = true;
      return;
    }
    if (fields.size() != 2) {
      throw ParseError(line, "expected 2 fields, got " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw ParseError(line, "empty label");
    groups[fields[0]].push_back(parse_double(fields[1], line, "value"));
  });
  if (!header_done) throw ParseError(0, "empty file: missing header");
  if (groups.empty()) throw ParseError(0, "no data rows");

  std::vector<GroupSummaryRow> rows;
  rows.reserve(groups.size());
  for (const auto& [label, values] : groups) {
    const std::size_t n = values.size();
    if (n < 2) {
      throw std::invalid_argument("group '" + label +
                                  "' needs at least two observations to estimate its sd");
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sample_var = ss / static_cast<double>(n - 1);
    const double se = std::sqrt(sample_var / static_cast<double>(n));
    if (!(se > 0.0)) {
      throw std::invalid_argument("group '" + label +
                                  "' is constant; its sd is zero and it cannot be tested");
    }
    rows.push_back({label, n, mean, se});
  }
  return rows;
}

std::vector<GroupSummaryRow> read_summary_csv_file(const std::string& path) {
  auto in = open_file(path);
  return read_summary_csv(in);
}

std::vector<GroupSummaryRow> read_raw_csv_file(const std::string& path) {
  auto in = open_file(path);
  return read_raw_csv(in);
}

Observations to_observations(const std::vector<GroupSummaryRow>& rows) {
  std::vector<Observation> items;
  items.reserve(rows.size());
  for (const auto& row : rows) {
    items.push_back({row.label, row.mean, row.sd});
  }
  return Observations(std::move(items));
}

Observations ingest_summary(const std::string& path) {
  return to_observations(read_summary_csv_file(path));
}

Observations ingest_raw(const std::string& path) {
  return to_observations(read_raw_csv_file(path));
}

std::string write_summary_csv(const std::vector<GroupSummaryRow>& rows) {
  std::ostringstream out;
  out << "label,n,mean,sd\n";
  for (const auto& row : rows) {
    out << row.label << ',' << row.n << ',' << format_shortest(row.mean) << ','
        << format_shortest(row.sd) << '\n';
  }
  return out.str();
}

}  // namespace rankverify
