#include "rankverify/report.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rankverify/version.hpp"

namespace rankverify {
namespace {

using nlohmann::json;

// Fixed 12-significant-digit rendering for the text format; JSON and CSV use
// shortest round-trip encoding, so the formats agree to 12 digits.
std::string fmt12(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

std::string shortest(double value) {
  char buffer[40];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

const char* direction_name(TailDirection d) {
  return d == TailDirection::kUpper ? "upper" : "lower";
}

const char* rank_direction_name(RankDirection d) {
  return d == RankDirection::kTop ? "top" : "bottom";
}

const char* procedure_name(ProcedureKind p) {
  return p == ProcedureKind::kRanking ? "ranking" : "set";
}

const char* error_kind_name(ErrorKind e) {
  switch (e) {
    case ErrorKind::kType1Tied: return "type1-tied";
    case ErrorKind::kType1Spaced: return "type1-spaced";
    case ErrorKind::kType2: return "type2";
  }
  return "?";
}

json envelope(const ReportContext& ctx) {
  json doc;
  doc["schema"] = kReportSchema;
  doc["tool"] = kToolName;
  doc["version"] = kToolVersion;
  doc["operation"] = ctx.operation;
  doc["alpha"] = ctx.alpha;
  if (ctx.seed) doc["seed"] = *ctx.seed;
  if (ctx.input) {
    json rows = json::array();
    for (const auto& row : ctx.input->data) {
      rows.push_back({{"label", row.label}, {"n", row.n}, {"mean", row.mean}, {"sd", row.sd}});
    }
    doc["input"] = {{"path", ctx.input->path},
                    {"fnv1a64", ctx.input->fingerprint},
                    {"rows", ctx.input->rows},
                    {"data", rows}};
  }
  return doc;
}

void text_header(const ReportContext& ctx, std::ostringstream& out) {
  out << kToolName << " " << kToolVersion << " | " << ctx.operation << "\n";
  out << "alpha: " << fmt12(ctx.alpha) << "\n";
  if (ctx.seed) out << "seed: " << *ctx.seed << "\n";
  if (ctx.input) {
    out << "input: " << ctx.input->path << " (fnv1a64 " << ctx.input->fingerprint << ", "
        << ctx.input->rows << " rows)\n";
  }
}

std::string csv_optional(const std::optional<double>& value) {
  return value ? shortest(*value) : std::string();
}

json report_json(const SimReport& r) {
  json j;
  j["estimate"] = r.estimate ? json(*r.estimate) : json(nullptr);
  j["mc_se"] = r.mc_standard_error;
  j["n_effective"] = r.n_effective;
  j["n_draws"] = r.n_draws;
  return j;
}

}  // namespace

ReportFormat parse_format(const std::string& name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "text") return ReportFormat::kText;
  if (name == "csv") return ReportFormat::kCsv;
  throw std::invalid_argument("unknown format '" + name + "' (expected json|text|csv)");
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

InputInfo make_input_info(const std::string& path, std::vector<GroupSummaryRow> rows) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input file '" + path + "'");
  std::ostringstream contents;
  contents << in.rdbuf();
  InputInfo info;
  info.path = path;
  info.fingerprint = fnv1a64_hex(contents.str());
  info.rows = rows.size();
  info.data = std::move(rows);
  return info;
}

std::string render_verification(const ReportContext& ctx, const Observations& obs,
                                const VerificationResult& result, TailDirection direction,
                                ReportFormat format) {
  const std::size_t d = obs.size();
  const bool upper = direction == TailDirection::kUpper;
  const auto global_rank = [&](std::size_t pos) { return upper ? pos : d + 1 - pos; };
  const Observation& extreme = obs.by_rank(global_rank(1));

  if (format == ReportFormat::kJson) {
    json doc = envelope(ctx);
    json pairwise = json::array();
    for (const auto& t : result.pairwise) {
      pairwise.push_back({{"competitor_pos", t.competitor_pos},
                          {"competitor_rank", global_rank(t.competitor_pos)},
                          {"competitor_label", obs.by_rank(global_rank(t.competitor_pos)).label},
                          {"mu_bar", t.mu_bar},
                          {"sigma_bar", t.sigma_bar},
                          {"trunc_threshold", t.trunc_threshold},
                          {"p_value", t.p_value.value()},
                          {"direction", direction_name(t.direction)}});
    }
    doc["result"] = {{"direction", upper ? "top" : "bottom"},
                     {"tested_label", extreme.label},
                     {"tested_value", extreme.value},
                     {"tested_sd", extreme.sd},
                     {"p_star", result.p_star.value()},
                     {"verified", result.verified},
                     {"argmax_competitor_rank", global_rank(result.argmax_competitor)},
                     {"argmax_competitor_label",
                      obs.by_rank(global_rank(result.argmax_competitor)).label},
                     {"pairwise", pairwise}};
    return doc.dump(2) + "\n";
  }

  if (format == ReportFormat::kCsv) {
    std::ostringstream out;
    out << "competitor_rank,competitor_label,direction,mu_bar,sigma_bar,trunc_threshold,"
           "p_value\n";
    for (const auto& t : result.pairwise) {
      out << global_rank(t.competitor_pos) << ','
          << obs.by_rank(global_rank(t.competitor_pos)).label << ','
          << direction_name(t.direction) << ',' << shortest(t.mu_bar) << ','
          << shortest(t.sigma_bar) << ',' << shortest(t.trunc_threshold) << ','
          << shortest(t.p_value.value()) << '\n';
    }
    return out.str();
  }

  std::ostringstream out;
  text_header(ctx, out);
  out << "tested: " << extreme.label << " (" << (upper ? "largest" : "smallest")
      << " observed value " << fmt12(extreme.value) << ", sd " << fmt12(extreme.sd) << ")\n";
  out << "p*: " << fmt12(result.p_star.value()) << "  ("
      << (result.verified ? "verified" : "not verified") << " at alpha "
      << fmt12(ctx.alpha) << ")\n";
  out << "worst competitor: " << obs.by_rank(global_rank(result.argmax_competitor)).label
      << " (rank " << global_rank(result.argmax_competitor) << ")\n";
  out << "pairwise p-values:\n";
  for (const auto& t : result.pairwise) {
    out << "  vs " << obs.by_rank(global_rank(t.competitor_pos)).label << " (rank "
        << global_rank(t.competitor_pos) << "): p=" << fmt12(t.p_value.value())
        << "  mu_bar=" << fmt12(t.mu_bar) << "  sigma_bar=" << fmt12(t.sigma_bar)
        << "  threshold=" << fmt12(t.trunc_threshold) << "\n";
  }
  return out.str();
}

std::string render_ranking(const ReportContext& ctx, const Observations& obs,
                           const RankingResult& result, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    json doc = envelope(ctx);
    json steps = json::array();
    for (const auto& s : result.per_rank) {
      steps.push_back({{"tested_rank", s.tested_rank},
                       {"tested_label", obs.by_rank(s.tested_rank).label},
                       {"p_star", s.p_star.value()},
                       {"argmax_rank", s.argmax_rank},
                       {"argmax_label", obs.by_rank(s.argmax_rank).label},
                       {"rejected", s.p_star.value() <= result.alpha}});
    }
    doc["result"] = {{"direction", rank_direction_name(result.direction)},
                     {"verified_count", result.verified_count},
                     {"per_rank", steps}};
    return doc.dump(2) + "\n";
  }

  if (format == ReportFormat::kCsv) {
    std::ostringstream out;
    out << "step,tested_rank,tested_label,p_star,argmax_rank,argmax_label,rejected\n";
    std::size_t step = 0;
    for (const auto& s : result.per_rank) {
      out << ++step << ',' << s.tested_rank << ',' << obs.by_rank(s.tested_rank).label << ','
          << shortest(s.p_star.value()) << ',' << s.argmax_rank << ','
          << obs.by_rank(s.argmax_rank).label << ','
          << (s.p_star.value() <= result.alpha ? "true" : "false") << '\n';
    }
    return out.str();
  }

  std::ostringstream out;
  text_header(ctx, out);
  out << "direction: " << rank_direction_name(result.direction) << "\n";
  out << "verified ranks: " << result.verified_count << " of " << obs.size() << "\n";
  for (const auto& s : result.per_rank) {
    const bool rejected = s.p_star.value() <= result.alpha;
    out << "  rank " << s.tested_rank << " (" << obs.by_rank(s.tested_rank).label
        << "): p*=" << fmt12(s.p_star.value()) << "  worst vs "
        << obs.by_rank(s.argmax_rank).label << "  -> "
        << (rejected ? "rejected" : "not rejected, stop") << "\n";
  }
  return out.str();
}

std::string render_set_test(const ReportContext& ctx, const Observations& obs,
                            const SetTestResult& result, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    json doc = envelope(ctx);
    json per = json::array();
    for (std::size_t j = 0; j < result.per_element.size(); ++j) {
      per.push_back({{"top_rank", j + 1},
                     {"label", obs.by_rank(j + 1).label},
                     {"p_max", result.per_element[j].value()}});
    }
    doc["result"] = {{"k_set", result.k_set},
                     {"p_star", result.p_star.value()},
                     {"verified", result.verified},
                     {"worst_pair",
                      {{"top_rank", result.worst_pair.top_rank},
                       {"top_label", obs.by_rank(result.worst_pair.top_rank).label},
                       {"competitor_rank", result.worst_pair.competitor_rank},
                       {"competitor_label",
                        obs.by_rank(result.worst_pair.competitor_rank).label}}},
                     {"per_element", per}};
    return doc.dump(2) + "\n";
  }

  if (format == ReportFormat::kCsv) {
    std::ostringstream out;
    out << "top_rank,label,p_max\n";
    for (std::size_t j = 0; j < result.per_element.size(); ++j) {
      out << (j + 1) << ',' << obs.by_rank(j + 1).label << ','
          << shortest(result.per_element[j].value()) << '\n';
    }
    return out.str();
  }

  std::ostringstream out;
  text_header(ctx, out);
  out << "top-" << result.k_set << " set p*: " << fmt12(result.p_star.value()) << "  ("
      << (result.verified ? "verified" : "not verified") << ")\n";
  out << "worst pair: rank " << result.worst_pair.top_rank << " ("
      << obs.by_rank(result.worst_pair.top_rank).label << ") vs rank "
      << result.worst_pair.competitor_rank << " ("
      << obs.by_rank(result.worst_pair.competitor_rank).label << ")\n";
  for (std::size_t j = 0; j < result.per_element.size(); ++j) {
    out << "  rank " << (j + 1) << " (" << obs.by_rank(j + 1).label
        << "): max p=" << fmt12(result.per_element[j].value()) << "\n";
  }
  return out.str();
}

std::string render_grid(const ReportContext& ctx, const SimConfig& config,
                        const GridReport& grid, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    json doc = envelope(ctx);
    json cells = json::array();
    for (const auto& cell : grid.cells) {
      json c = report_json(cell.report);
      c["inflated_rank"] = cell.inflated_rank;
      c["multiplier"] = cell.multiplier;
      c["sigma_j"] = cell.sigma_j;
      cells.push_back(c);
    }
    doc["result"] = {{"procedure", procedure_name(config.procedure)},
                     {"k", config.k},
                     {"error", error_kind_name(config.error_kind)},
                     {"dimension", config.dimension},
                     {"draws", config.n_draws},
                     {"sigma_bar", grid.sigma_bar},
                     {"cells", cells}};
    return doc.dump(2) + "\n";
  }

  if (format == ReportFormat::kCsv) {
    std::ostringstream out;
    out << "procedure,k,error,inflated_rank,multiplier,sigma_j,estimate,mc_se,"
           "n_effective,n_draws\n";
    for (const auto& cell : grid.cells) {
      out << procedure_name(config.procedure) << ',' << config.k << ','
          << error_kind_name(config.error_kind) << ',' << cell.inflated_rank << ','
          << shortest(cell.multiplier) << ',' << shortest(cell.sigma_j) << ','
          << csv_optional(cell.report.estimate) << ','
          << shortest(cell.report.mc_standard_error) << ',' << cell.report.n_effective
          << ',' << cell.report.n_draws << '\n';
    }
    return out.str();
  }

  std::ostringstream out;
  text_header(ctx, out);
  out << "procedure: " << procedure_name(config.procedure) << "  k: " << config.k
      << "  error: " << error_kind_name(config.error_kind) << "  draws: " << config.n_draws
      << "\n";
  out << "sigma_bar: " << fmt12(grid.sigma_bar) << "\n";
  for (const auto& cell : grid.cells) {
    out << "  rank " << cell.inflated_rank << "  x" << fmt12(cell.multiplier)
        << " (sigma_j=" << fmt12(cell.sigma_j) << "): ";
    if (cell.report.estimate) {
      out << "estimate=" << fmt12(*cell.report.estimate)
          << "  mc_se=" << fmt12(cell.report.mc_standard_error);
    } else {
      out << "estimate=n/a (empty denominator)";
    }
    out << "  n_eff=" << cell.report.n_effective << "\n";
  }
  return out.str();
}

std::string render_calibration(const ReportContext& ctx, const SimConfig& config,
                               double target_power, const CalibrationResult& result,
                               ReportFormat format) {
  if (format == ReportFormat::kJson) {
    json doc = envelope(ctx);
    doc["result"] = {{"procedure", procedure_name(config.procedure)},
                     {"k", config.k},
                     {"dimension", config.dimension},
                     {"draws", config.n_draws},
                     {"target_power", target_power},
                     {"sigma_bar", result.sigma_bar},
                     {"achieved_power", result.achieved_power}};
    return doc.dump(2) + "\n";
  }
  if (format == ReportFormat::kCsv) {
    std::ostringstream out;
    out << "procedure,k,target_power,sigma_bar,achieved_power,n_draws\n";
    out << procedure_name(config.procedure) << ',' << config.k << ','
        << shortest(target_power) << ',' << shortest(result.sigma_bar) << ','
        << shortest(result.achieved_power) << ',' << config.n_draws << '\n';
    return out.str();
  }
  std::ostringstream out;
  text_header(ctx, out);
  out << "procedure: " << procedure_name(config.procedure) << "  k: " << config.k
      << "  draws: " << config.n_draws << "\n";
  out << "sigma_bar: " << fmt12(result.sigma_bar) << "  achieved power: "
      << fmt12(result.achieved_power) << " (target " << fmt12(target_power) << ")\n";
  return out.str();
}

std::string render_naive_bound(const ReportContext& ctx, const NaiveBoundConfig& config,
                               double bound, const std::optional<SimReport>& mc,
                               std::optional<std::size_t> mc_draws, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    json doc = envelope(ctx);
    json scenario = {{"means", config.scenario.means()},
                     {"sds", config.scenario.sds()},
                     {"index_best", config.index_best},
                     {"index_b", config.index_b},
                     {"index_c", config.index_c}};
    doc["result"] = {{"bound", bound},
                     {"n_grid", config.n_grid},
                     {"span_sds", config.span_sds},
                     {"exact_inner", config.exact_inner},
                     {"scenario", scenario},
                     {"mc", mc ? report_json(*mc) : json(nullptr)}};
    return doc.dump(2) + "\n";
  }

  if (format == ReportFormat::kCsv) {
    std::ostringstream out;
    out << "bound,alpha,n_grid,span_sds,exact_inner,mc_estimate,mc_se,mc_draws\n";
    out << shortest(bound) << ',' << shortest(config.alpha) << ',' << config.n_grid << ','
        << shortest(config.span_sds) << ',' << (config.exact_inner ? "true" : "false")
        << ',';
    if (mc && mc->estimate) {
      out << shortest(*mc->estimate) << ',' << shortest(mc->mc_standard_error) << ','
          << (mc_draws ? *mc_draws : mc->n_draws);
    } else {
      out << ",,";
    }
    out << '\n';
    return out.str();
  }

  std::ostringstream out;
  text_header(ctx, out);
  out << "scenario means:";
  for (double m : config.scenario.means()) out << ' ' << fmt12(m);
  out << "\nscenario sds:  ";
  for (double s : config.scenario.sds()) out << ' ' << fmt12(s);
  out << "\nfalse-verification lower bound: " << fmt12(bound) << "  (grid " << config.n_grid
      << ", span " << fmt12(config.span_sds) << " sds, inner "
      << (config.exact_inner ? "closed-form" : "grid") << ")\n";
  if (mc && mc->estimate) {
    out << "monte carlo cross-check: " << fmt12(*mc->estimate) << " (se "
        << fmt12(mc->mc_standard_error) << ", " << mc->n_draws << " draws)\n";
  }
  return out.str();
}

}  // namespace rankverify
