#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rankverify/csv_io.hpp"
#include "rankverify/naive_test.hpp"
#include "rankverify/observations.hpp"
#include "rankverify/procedures.hpp"
#include "rankverify/simulation.hpp"
#include "rankverify/winner_test.hpp"

namespace rankverify {

enum class ReportFormat { kJson, kText, kCsv };

ReportFormat parse_format(const std::string& name);

// Identity of the ingested file: path, FNV-1a 64 content hash, row count,
// and the parsed rows themselves so every reported number is recomputable.
struct InputInfo {
  std::string path;
  std::string fingerprint;
  std::size_t rows = 0;
  std::vector<GroupSummaryRow> data;
};

InputInfo make_input_info(const std::string& path, std::vector<GroupSummaryRow> rows);

std::string fnv1a64_hex(const std::string& bytes);

// Shared report header fields.
struct ReportContext {
  std::string operation;
  double alpha = 0.0;
  std::optional<std::uint64_t> seed;
  std::optional<InputInfo> input;
};

std::string render_verification(const ReportContext& ctx, const Observations& obs,
                                const VerificationResult& result, TailDirection direction,
                                ReportFormat format);

std::string render_ranking(const ReportContext& ctx, const Observations& obs,
                           const RankingResult& result, ReportFormat format);

std::string render_set_test(const ReportContext& ctx, const Observations& obs,
                            const SetTestResult& result, ReportFormat format);

std::string render_grid(const ReportContext& ctx, const SimConfig& config,
                        const GridReport& grid, ReportFormat format);

std::string render_calibration(const ReportContext& ctx, const SimConfig& config,
                               double target_power, const CalibrationResult& result,
                               ReportFormat format);

std::string render_naive_bound(const ReportContext& ctx, const NaiveBoundConfig& config,
                               double bound, const std::optional<SimReport>& mc,
                               std::optional<std::size_t> mc_draws, ReportFormat format);

}  // namespace rankverify
