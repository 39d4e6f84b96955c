#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rankverify/observations.hpp"
#include "rankverify/rng.hpp"

namespace rankverify {

enum class ProcedureKind { kRanking, kSet };

// What a Monte Carlo campaign estimates:
//  kType1Tied   - unconditional rate of verifying a claim that is false of
//                 the generating means (used with a tie at the k boundary,
//                 where every claim of size k is false);
//  kType1Spaced - among draws whose empirical leaders are misordered or the
//                 wrong set, the rate at which the procedure still rejects;
//  kType2       - among draws whose empirical leaders are correct, the rate
//                 at which the procedure fails to reject.
enum class ErrorKind { kType1Tied, kType1Spaced, kType2 };

// Generating means and known sds for Monte Carlo draws.  Individual sds may
// be zero (a point mass, used by degenerate grid cells); an all-zero sd
// vector is rejected.
class Scenario {
 public:
  Scenario(std::vector<double> means, std::vector<double> sds);

  std::size_t size() const noexcept { return means_.size(); }
  const std::vector<double>& means() const noexcept { return means_; }
  const std::vector<double>& sds() const noexcept { return sds_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

 private:
  std::vector<double> means_;
  std::vector<double> sds_;
  std::vector<std::string> labels_;  // "1".."d", applied to every draw
};

struct SimConfig {
  std::size_t n_draws = 10000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  ProcedureKind procedure = ProcedureKind::kRanking;
  std::size_t k = 1;
  ErrorKind error_kind = ErrorKind::kType1Tied;
  std::size_t dimension = 5;  // used where a scenario is built internally
};

struct SimReport {
  std::optional<double> estimate;  // absent when no draw entered the denominator
  double mc_standard_error = 0.0;  // sqrt(p(1-p)/n_effective)
  std::size_t n_effective = 0;     // denominator draws actually scored
  std::size_t n_draws = 0;
};

// One Monte Carlo draw: an independent Gaussian per element, labeled by the
// element's 1-based index, sorted descending.  Exactly one variate is
// consumed per element regardless of its sd, so scenarios differing only in
// sds share the same underlying z draws for a given substream.
Observations draw(const Scenario& scenario, RandomStream::Substream substream);

// Claim semantics used for scoring.  The ranking claim of size K is the
// strict chain mu_{pi(1)} > ... > mu_{pi(K)} > max of the remaining means,
// where pi maps empirical rank to element; the set claim is
// mu_{pi(j)} > max_{k>K} mu_{pi(k)} for every j <= K.  Ties among the
// generating means make the claims false.
bool ranking_claim_false(const Observations& obs, std::size_t verified_count,
                         const std::vector<double>& true_means);
bool set_claim_false(const Observations& obs, std::size_t k_set,
                     const std::vector<double>& true_means);

// Whether the draw's leading k elements match the generating order / set.
// Meaningful only when the generating means are strictly ordered.
bool empirical_top_order_correct(const Observations& obs, std::size_t k,
                                 const std::vector<double>& true_means);
bool empirical_top_set_correct(const Observations& obs, std::size_t k,
                               const std::vector<double>& true_means);

// Monte Carlo error-rate estimate for the configured procedure.  Draw i is
// generated from substream(seed, i), so the result is bitwise identical at
// any level of internal parallelism.
SimReport estimate_error(const Scenario& scenario, const SimConfig& config);

struct CalibrationResult {
  double sigma_bar = 0.0;
  double achieved_power = 0.0;
};

// Bisection on a common sd until the configured procedure's Monte Carlo
// power over base_means is within 0.01 of target_power.  Every power
// evaluation reuses the same substreams (common random numbers), so the
// search is deterministic.  The initial bracket widens automatically, up to
// 60 doublings per side.
CalibrationResult calibrate_sigma(const std::vector<double>& base_means,
                                  double target_power, const SimConfig& config);

struct GridCell {
  std::size_t inflated_rank = 0;  // population rank of the atypical element
  double multiplier = 0.0;        // sigma_j in units of sigma_bar
  double sigma_j = 0.0;
  SimReport report;
};

struct GridReport {
  double sigma_bar = 0.0;
  std::vector<GridCell> cells;
};

// Evenly spaced generating means with unit gaps: d-1, d-2, ..., 0.
std::vector<double> evenly_spaced_means(std::size_t d);

// Evenly spaced means with the rank-k mean lowered onto rank k+1, the
// boundary tie under which no claim of size k can be true.
std::vector<double> tied_means(std::size_t d, std::size_t k);

// Sweeps the sd of the population-rank-2 and rank-4 elements while all
// others stay at sigma_bar: multipliers 2^0..2^6 for the type I kinds,
// 0..3 (in sigma_bar units, 7 points) for type II.
GridReport run_inflation_grid(double sigma_bar, const SimConfig& config);

}  // namespace rankverify
