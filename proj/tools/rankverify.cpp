#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rankverify/csv_io.hpp"
#include "rankverify/naive_test.hpp"
#include "rankverify/procedures.hpp"
#include "rankverify/report.hpp"
#include "rankverify/simulation.hpp"
#include "rankverify/version.hpp"
#include "rankverify/winner_test.hpp"

namespace {

using namespace rankverify;

struct CommonOptions {
  std::string input;
  bool raw = false;
  std::string format = "text";
  std::string output;
  double alpha = 0.05;
};

void add_io_options(CLI::App* cmd, CommonOptions& opts, bool needs_input) {
  if (needs_input) {
    cmd->add_option("--input", opts.input, "input CSV file")->required();
    cmd->add_flag("--raw", opts.raw,
                  "input holds raw label,value rows instead of label,n,mean,sd summaries");
  }
  cmd->add_option("--format", opts.format, "output format: json|text|csv")
      ->default_val("text");
  cmd->add_option("--output", opts.output, "write the report to this file instead of stdout");
  cmd->add_option("--alpha", opts.alpha, "significance level")->default_val(0.05);
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw std::invalid_argument("--alpha must lie strictly inside (0, 1)");
  }
}

std::uint64_t default_seed() {
  const char* env = std::getenv("RANKVERIFY_SEED");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(env, &end, 10);
  if (end == nullptr || *end != '\0') {
    throw std::invalid_argument("RANKVERIFY_SEED must be an unsigned integer");
  }
  return value;
}

struct LoadedInput {
  std::vector<GroupSummaryRow> rows;
  InputInfo info;
};

LoadedInput load_input(const CommonOptions& opts) {
  LoadedInput loaded;
  loaded.rows = opts.raw ? read_raw_csv_file(opts.input) : read_summary_csv_file(opts.input);
  loaded.info = make_input_info(opts.input, loaded.rows);
  return loaded;
}

void emit(const CommonOptions& opts, const std::string& text) {
  if (opts.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opts.output, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + opts.output + "'");
  out << text;
}

int run(int argc, char** argv) {
  CLI::App app{"Rank verification for independent Gaussian means with known, "
               "possibly unequal variances"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);

  // verify -----------------------------------------------------------------
  auto verify_opts = std::make_shared<CommonOptions>();
  auto verify_direction = std::make_shared<std::string>("top");
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "verify the extreme observation as the true extreme");
  add_io_options(verify_cmd, *verify_opts, true);
  verify_cmd->add_option("--direction", *verify_direction, "top|bottom")->default_val("top");
  verify_cmd->callback([verify_opts, verify_direction] {
    check_alpha(verify_opts->alpha);
    const bool top = *verify_direction == "top";
    if (!top && *verify_direction != "bottom") {
      throw std::invalid_argument("--direction must be top or bottom");
    }
    LoadedInput loaded = load_input(*verify_opts);
    const Observations obs = to_observations(loaded.rows);
    const Probability alpha(verify_opts->alpha);
    const VerificationResult result = top ? verify_winner(obs, alpha) : verify_loser(obs, alpha);
    ReportContext ctx{"verify", verify_opts->alpha, std::nullopt, std::move(loaded.info)};
    emit(*verify_opts,
         render_verification(ctx, obs, result,
                             top ? TailDirection::kUpper : TailDirection::kLower,
                             parse_format(verify_opts->format)));
  });

  // rank -------------------------------------------------------------------
  auto rank_opts = std::make_shared<CommonOptions>();
  auto rank_direction = std::make_shared<std::string>("top");
  CLI::App* rank_cmd =
      app.add_subcommand("rank", "sequentially verify the leading (or trailing) ranks");
  add_io_options(rank_cmd, *rank_opts, true);
  rank_cmd->add_option("--direction", *rank_direction, "top|bottom")->default_val("top");
  rank_cmd->callback([rank_opts, rank_direction] {
    check_alpha(rank_opts->alpha);
    const bool top = *rank_direction == "top";
    if (!top && *rank_direction != "bottom") {
      throw std::invalid_argument("--direction must be top or bottom");
    }
    LoadedInput loaded = load_input(*rank_opts);
    const Observations obs = to_observations(loaded.rows);
    const Probability alpha(rank_opts->alpha);
    const RankingResult result = top ? rank_top(obs, alpha) : rank_bottom(obs, alpha);
    ReportContext ctx{"rank", rank_opts->alpha, std::nullopt, std::move(loaded.info)};
    emit(*rank_opts, render_ranking(ctx, obs, result, parse_format(rank_opts->format)));
  });

  // top-set ----------------------------------------------------------------
  auto set_opts = std::make_shared<CommonOptions>();
  auto set_k = std::make_shared<std::size_t>(1);
  CLI::App* set_cmd = app.add_subcommand("top-set", "test the leading-k set for correctness");
  add_io_options(set_cmd, *set_opts, true);
  set_cmd->add_option("--k", *set_k, "size of the leading set")->required();
  set_cmd->callback([set_opts, set_k] {
    check_alpha(set_opts->alpha);
    LoadedInput loaded = load_input(*set_opts);
    const Observations obs = to_observations(loaded.rows);
    const SetTestResult result = topk_set_test(obs, *set_k, Probability(set_opts->alpha));
    ReportContext ctx{"top-set", set_opts->alpha, std::nullopt, std::move(loaded.info)};
    emit(*set_opts, render_set_test(ctx, obs, result, parse_format(set_opts->format)));
  });

  // simulate ---------------------------------------------------------------
  auto sim_opts = std::make_shared<CommonOptions>();
  auto sim = std::make_shared<SimConfig>();
  auto sim_procedure = std::make_shared<std::string>("ranking");
  auto sim_error = std::make_shared<std::string>("type1-tied");
  auto sim_seed = std::make_shared<std::uint64_t>(default_seed());
  auto sim_sigma_bar = std::make_shared<double>(0.0);
  CLI::App* sim_cmd = app.add_subcommand(
      "simulate", "Monte Carlo error-rate grid over inflated per-element sds");
  add_io_options(sim_cmd, *sim_opts, false);
  sim_cmd->add_option("--procedure", *sim_procedure, "ranking|set")->default_val("ranking");
  sim_cmd->add_option("--k", sim->k, "claim size")->default_val(1);
  sim_cmd->add_option("--error", *sim_error, "type1-tied|type1-spaced|type2")
      ->default_val("type1-tied");
  sim_cmd->add_option("--draws", sim->n_draws, "Monte Carlo draws per cell")
      ->default_val(10000);
  sim_cmd->add_option("--seed", *sim_seed, "master seed (default: RANKVERIFY_SEED or 0)");
  sim_cmd->add_option("--dimension", sim->dimension, "number of elements")->default_val(5);
  CLI::Option* sigma_bar_opt =
      sim_cmd->add_option("--sigma-bar", *sim_sigma_bar,
                          "base sd; when omitted it is calibrated to power 0.9 at 10000 draws");
  sim_cmd->callback([sim_opts, sim, sim_procedure, sim_error, sim_seed, sim_sigma_bar,
                     sigma_bar_opt] {
    check_alpha(sim_opts->alpha);
    sim->alpha = sim_opts->alpha;
    sim->seed = *sim_seed;
    if (*sim_procedure == "ranking") {
      sim->procedure = ProcedureKind::kRanking;
    } else if (*sim_procedure == "set") {
      sim->procedure = ProcedureKind::kSet;
    } else {
      throw std::invalid_argument("--procedure must be ranking or set");
    }
    if (*sim_error == "type1-tied") {
      sim->error_kind = ErrorKind::kType1Tied;
    } else if (*sim_error == "type1-spaced") {
      sim->error_kind = ErrorKind::kType1Spaced;
    } else if (*sim_error == "type2") {
      sim->error_kind = ErrorKind::kType2;
    } else {
      throw std::invalid_argument("--error must be type1-tied, type1-spaced or type2");
    }
    double sigma_bar = *sim_sigma_bar;
    if (sigma_bar_opt->count() > 0) {
      if (!(sigma_bar > 0.0)) {
        throw std::invalid_argument("--sigma-bar must be positive");
      }
    } else {
      SimConfig calib = *sim;
      calib.n_draws = 10000;
      sigma_bar =
          calibrate_sigma(evenly_spaced_means(sim->dimension), 0.9, calib).sigma_bar;
    }
    const GridReport grid = run_inflation_grid(sigma_bar, *sim);
    ReportContext ctx{"simulate", sim->alpha, sim->seed, std::nullopt};
    emit(*sim_opts, render_grid(ctx, *sim, grid, parse_format(sim_opts->format)));
  });

  // calibrate ----------------------------------------------------------------
  auto cal_opts = std::make_shared<CommonOptions>();
  auto cal = std::make_shared<SimConfig>();
  auto cal_procedure = std::make_shared<std::string>("ranking");
  auto cal_seed = std::make_shared<std::uint64_t>(default_seed());
  auto cal_target = std::make_shared<double>(0.9);
  CLI::App* cal_cmd = app.add_subcommand(
      "calibrate", "find the common sd at which the procedure reaches the target power");
  add_io_options(cal_cmd, *cal_opts, false);
  cal_cmd->add_option("--procedure", *cal_procedure, "ranking|set")->default_val("ranking");
  cal_cmd->add_option("--k", cal->k, "claim size")->default_val(1);
  cal_cmd->add_option("--target-power", *cal_target, "power to calibrate to")
      ->default_val(0.9);
  cal_cmd->add_option("--draws", cal->n_draws, "Monte Carlo draws per evaluation")
      ->default_val(10000);
  cal_cmd->add_option("--seed", *cal_seed, "master seed (default: RANKVERIFY_SEED or 0)");
  cal_cmd->add_option("--dimension", cal->dimension, "number of elements")->default_val(5);
  cal_cmd->callback([cal_opts, cal, cal_procedure, cal_seed, cal_target] {
    check_alpha(cal_opts->alpha);
    cal->alpha = cal_opts->alpha;
    cal->seed = *cal_seed;
    if (*cal_procedure == "ranking") {
      cal->procedure = ProcedureKind::kRanking;
    } else if (*cal_procedure == "set") {
      cal->procedure = ProcedureKind::kSet;
    } else {
      throw std::invalid_argument("--procedure must be ranking or set");
    }
    const CalibrationResult result =
        calibrate_sigma(evenly_spaced_means(cal->dimension), *cal_target, *cal);
    ReportContext ctx{"calibrate", cal->alpha, cal->seed, std::nullopt};
    emit(*cal_opts,
         render_calibration(ctx, *cal, *cal_target, result, parse_format(cal_opts->format)));
  });

  // naive-error ----------------------------------------------------------------
  auto naive_opts = std::make_shared<CommonOptions>();
  auto naive_grid = std::make_shared<std::size_t>(100);
  auto naive_span = std::make_shared<double>(4.0);
  auto naive_exact = std::make_shared<bool>(true);
  auto naive_mc_draws = std::make_shared<std::size_t>(0);
  auto naive_seed = std::make_shared<std::uint64_t>(default_seed());
  CLI::App* naive_cmd = app.add_subcommand(
      "naive-error",
      "lower-bound the winner-vs-runner-up test's false-verification rate by quadrature");
  add_io_options(naive_cmd, *naive_opts, false);
  naive_cmd->add_option("--grid", *naive_grid, "subintervals per integration axis")
      ->default_val(100);
  naive_cmd->add_option("--span", *naive_span, "integration span in sds around each mean")
      ->default_val(4.0);
  naive_cmd->add_flag("--exact-inner,!--no-exact-inner", *naive_exact,
                      "evaluate the innermost axis in closed form (default on)");
  naive_cmd->add_option("--mc-draws", *naive_mc_draws,
                        "also run a Monte Carlo cross-check with this many draws");
  naive_cmd->add_option("--seed", *naive_seed, "Monte Carlo seed");
  naive_cmd->callback(
      [naive_opts, naive_grid, naive_span, naive_exact, naive_mc_draws, naive_seed] {
        check_alpha(naive_opts->alpha);
        NaiveBoundConfig config = reference_scenario_config();
        config.alpha = naive_opts->alpha;
        config.n_grid = *naive_grid;
        config.span_sds = *naive_span;
        config.exact_inner = *naive_exact;
        const double bound = naive_error_lower_bound(config).value();
        std::optional<SimReport> mc;
        if (*naive_mc_draws > 0) {
          mc = naive_error_mc(config, *naive_mc_draws, *naive_seed);
        }
        ReportContext ctx{"naive-error", config.alpha,
                          *naive_mc_draws > 0 ? std::optional<std::uint64_t>(*naive_seed)
                                              : std::nullopt,
                          std::nullopt};
        emit(*naive_opts, render_naive_bound(ctx, config, bound, mc, *naive_mc_draws,
                                             parse_format(naive_opts->format)));
      });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
