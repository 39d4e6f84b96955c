#pragma once

#include <cstddef>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rankverify/observations.hpp"

namespace rankverify {

// One group-level summary: n observations, their mean, and the standard
// error of that mean.  The sd column is the standard error, not the raw
// dispersion, because the tests operate on group means.
struct GroupSummaryRow {
  std::string label;
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
};

// Parse failure carrying the 1-based line it occurred on.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Reads `label,n,mean,sd` rows.  Comma-separated, '.' decimal point, header
// required, '#' comment lines skipped.
std::vector<GroupSummaryRow> read_summary_csv(std::istream& in);
std::vector<GroupSummaryRow> read_summary_csv_file(const std::string& path);

// Reads `label,value` rows (one observation each) and aggregates per label:
// mean and standard error (sample sd / sqrt(n)).  Groups are ordered by
// label, so shuffled input rows produce identical output.
std::vector<GroupSummaryRow> read_raw_csv(std::istream& in);
std::vector<GroupSummaryRow> read_raw_csv_file(const std::string& path);

Observations to_observations(const std::vector<GroupSummaryRow>& rows);

Observations ingest_summary(const std::string& path);
Observations ingest_raw(const std::string& path);

// Emits rows back as summary CSV; numeric fields use shortest
// round-trip formatting, so read -> write -> read is value-exact.
std::string write_summary_csv(const std::vector<GroupSummaryRow>& rows);

}  // namespace rankverify
