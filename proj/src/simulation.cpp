#include "rankverify/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

#include "rankverify/procedures.hpp"
#include "rankverify/winner_test.hpp"

namespace rankverify {

Scenario::Scenario(std::vector<double> means, std::vector<double> sds)
    : means_(std::move(means)), sds_(std::move(sds)) {
  if (means_.empty() || means_.size() != sds_.size()) {
    throw std::invalid_argument("scenario needs equally many means and sds");
  }
  bool any_positive = false;
  for (std::size_t i = 0; i < means_.size(); ++i) {
    if (!std::isfinite(means_[i])) {
      throw std::invalid_argument("scenario means must be finite");
    }
    if (!std::isfinite(sds_[i]) || sds_[i] < 0.0) {
      throw std::invalid_argument("scenario sds must be finite and nonnegative");
    }
    if (sds_[i] > 0.0) any_positive = true;
  }
  if (!any_positive) {
    throw std::invalid_argument("scenario must have at least one positive sd");
  }
  labels_.reserve(means_.size());
  for (std::size_t i = 0; i < means_.size(); ++i) {
    labels_.push_back(std::to_string(i + 1));
  }
}

Observations draw(const Scenario& scenario, RandomStream::Substream substream) {
  std::vector<Observation> items;
  items.reserve(scenario.size());
  for (std::size_t i = 0; i < scenario.size(); ++i) {
    const double z = substream.next_gaussian();
    items.push_back({scenario.labels()[i], scenario.means()[i] + scenario.sds()[i] * z,
                     scenario.sds()[i]});
  }
  return Observations(std::move(items));
}

namespace {

// Element indices ordered by descending generating mean, ties by index.
std::vector<std::size_t> true_order(const std::vector<double>& means) {
  std::vector<std::size_t> order(means.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return means[a] > means[b]; });
  return order;
}

void check_dimension(const Observations& obs, const std::vector<double>& true_means) {
  if (obs.size() != true_means.size()) {
    throw std::invalid_argument("observation count does not match the generating means");
  }
}

}  // namespace

bool ranking_claim_false(const Observations& obs, std::size_t verified_count,
                         const std::vector<double>& true_means) {
  check_dimension(obs, true_means);
  if (verified_count == 0) return false;  // no claim was made
  const std::size_t d = obs.size();
  const std::size_t k = std::min(verified_count, d);
  for (std::size_t r = 1; r + 1 <= k; ++r) {
    if (!(true_means[obs.original_index(r)] > true_means[obs.original_index(r + 1)])) {
      return true;
    }
  }
  if (k < d) {
    double rest_max = -std::numeric_limits<double>::infinity();
    for (std::size_t r = k + 1; r <= d; ++r) {
      rest_max = std::max(rest_max, true_means[obs.original_index(r)]);
    }
    if (!(true_means[obs.original_index(k)] > rest_max)) return true;
  }
  return false;
}

bool set_claim_false(const Observations& obs, std::size_t k_set,
                     const std::vector<double>& true_means) {
  check_dimension(obs, true_means);
  const std::size_t d = obs.size();
  if (k_set < 1 || k_set >= d) {
    throw std::domain_error("set size must lie in [1, d-1]");
  }
  double rest_max = -std::numeric_limits<double>::infinity();
  for (std::size_t r = k_set + 1; r <= d; ++r) {
    rest_max = std::max(rest_max, true_means[obs.original_index(r)]);
  }
  for (std::size_t r = 1; r <= k_set; ++r) {
    if (!(true_means[obs.original_index(r)] > rest_max)) return true;
  }
  return false;
}

bool empirical_top_order_correct(const Observations& obs, std::size_t k,
                                 const std::vector<double>& true_means) {
  check_dimension(obs, true_means);
  const auto order = true_order(true_means);
  const std::size_t limit = std::min(k, obs.size());
  for (std::size_t r = 1; r <= limit; ++r) {
    if (obs.original_index(r) != order[r - 1]) return false;
  }
  return true;
}

bool empirical_top_set_correct(const Observations& obs, std::size_t k,
                               const std::vector<double>& true_means) {
  check_dimension(obs, true_means);
  const auto order = true_order(true_means);
  const std::size_t limit = std::min(k, obs.size());
  std::vector<std::size_t> expected(order.begin(), order.begin() + limit);
  std::vector<std::size_t> got;
  got.reserve(limit);
  for (std::size_t r = 1; r <= limit; ++r) got.push_back(obs.original_index(r));
  std::sort(expected.begin(), expected.end());
  std::sort(got.begin(), got.end());
  return expected == got;
}

namespace {

struct Tally {
  std::size_t denom = 0;
  std::size_t events = 0;
};

void validate_config(const Scenario& scenario, const SimConfig& config) {
  if (config.n_draws < 1) throw std::invalid_argument("n_draws must be at least 1");
  if (!std::isfinite(config.alpha) || config.alpha < 0.0 || config.alpha > 1.0) {
    throw std::invalid_argument("alpha must lie in [0, 1]");
  }
  const std::size_t d = scenario.size();
  if (config.procedure == ProcedureKind::kRanking) {
    if (config.k < 1 || config.k > d) {
      throw std::domain_error("ranking k must lie in [1, d]");
    }
  } else {
    if (config.k < 1 || d < 2 || config.k > d - 1) {
      throw std::domain_error("set k must lie in [1, d-1]");
    }
  }
}

// Scores one draw; returns {entered the denominator, counted as an event}.
std::pair<bool, bool> score_draw(const Observations& obs, const Scenario& scenario,
                                 const SimConfig& config) {
  const Probability alpha(config.alpha);
  const auto& means = scenario.means();
  switch (config.error_kind) {
    case ErrorKind::kType1Tied: {
      if (config.procedure == ProcedureKind::kRanking) {
        const std::size_t verified = rank_top(obs, alpha).verified_count;
        return {true, verified >= 1 && ranking_claim_false(obs, verified, means)};
      }
      const SetTestResult r = topk_set_test(obs, config.k, alpha);
      return {true, r.verified && set_claim_false(obs, config.k, means)};
    }
    case ErrorKind::kType1Spaced: {
      if (config.procedure == ProcedureKind::kRanking) {
        if (empirical_top_order_correct(obs, config.k, means)) return {false, false};
        return {true, rank_top(obs, alpha).verified_count >= config.k};
      }
      if (empirical_top_set_correct(obs, config.k, means)) return {false, false};
      return {true, topk_set_test(obs, config.k, alpha).verified};
    }
    case ErrorKind::kType2: {
      if (config.procedure == ProcedureKind::kRanking) {
        if (!empirical_top_order_correct(obs, config.k, means)) return {false, false};
        return {true, rank_top(obs, alpha).verified_count < config.k};
      }
      if (!empirical_top_set_correct(obs, config.k, means)) return {false, false};
      return {true, !topk_set_test(obs, config.k, alpha).verified};
    }
  }
  throw std::logic_error("unknown error kind");
}

}  // namespace

SimReport estimate_error(const Scenario& scenario, const SimConfig& config) {
  validate_config(scenario, config);
  const RandomStream stream(config.seed);
  const std::size_t n = config.n_draws;

  // Fixed-size blocks keep the draw->block assignment independent of the
  // worker count; block tallies are integer counts, so any summation order
  // yields the same totals.
  constexpr std::size_t kBlock = 1024;
  const std::size_t n_blocks = (n + kBlock - 1) / kBlock;
  std::vector<Tally> tallies(n_blocks);

  const unsigned hw = std::thread::hardware_concurrency();
  const std::size_t n_threads =
      std::min<std::size_t>({hw == 0 ? 1 : hw, n_blocks, 8});

  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&](std::size_t t) {
    try {
      for (std::size_t b = t; b < n_blocks; b += n_threads) {
        const std::size_t lo = b * kBlock;
        const std::size_t hi = std::min(n, lo + kBlock);
        Tally tally;
        for (std::size_t i = lo; i < hi; ++i) {
          const Observations obs = draw(scenario, stream.substream(i));
          const auto [in_denom, event] = score_draw(obs, scenario, config);
          tally.denom += in_denom;
          tally.events += event;
        }
        tallies[b] = tally;
      }
    } catch (...) {
      const std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  if (n_threads <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  Tally total;
  for (const Tally& t : tallies) {
    total.denom += t.denom;
    total.events += t.events;
  }

  SimReport report;
  report.n_draws = n;
  report.n_effective = total.denom;
  if (total.denom > 0) {
    const double p = static_cast<double>(total.events) / static_cast<double>(total.denom);
    report.estimate = p;
    report.mc_standard_error = std::sqrt(p * (1.0 - p) / static_cast<double>(total.denom));
  }
  return report;
}

CalibrationResult calibrate_sigma(const std::vector<double>& base_means,
                                  double target_power, const SimConfig& config) {
  if (base_means.size() < 2) {
    throw std::invalid_argument("calibration needs at least two means");
  }
  for (std::size_t i = 0; i + 1 < base_means.size(); ++i) {
    if (!(base_means[i] > base_means[i + 1])) {
      throw std::invalid_argument("calibration means must be strictly decreasing");
    }
  }
  if (!(target_power > 0.0) || !(target_power < 1.0)) {
    throw std::domain_error("target power must lie in (0, 1)");
  }

  SimConfig eval = config;
  eval.error_kind = ErrorKind::kType2;

  const auto power_at = [&](double sigma) {
    std::vector<double> sds(base_means.size(), sigma);
    const SimReport r = estimate_error(Scenario(base_means, sds), eval);
    return r.estimate ? 1.0 - *r.estimate : 0.0;
  };

  constexpr double kTolerance = 0.01;
  constexpr int kMaxWiden = 60;

  double lo = 1e-3;
  double power_lo = power_at(lo);
  for (int i = 0; power_lo < target_power && i <= kMaxWiden; ++i) {
    if (i == kMaxWiden) throw std::runtime_error("calibration bracket: no lower sigma found");
    lo *= 0.5;
    power_lo = power_at(lo);
  }
  if (std::abs(power_lo - target_power) <= kTolerance) return {lo, power_lo};

  double hi = 1.0;
  double power_hi = power_at(hi);
  for (int i = 0; power_hi > target_power && i <= kMaxWiden; ++i) {
    if (i == kMaxWiden) throw std::runtime_error("calibration bracket: no upper sigma found");
    hi *= 2.0;
    power_hi = power_at(hi);
  }
  if (std::abs(power_hi - target_power) <= kTolerance) return {hi, power_hi};
  if (power_lo < power_hi) {
    throw std::runtime_error("calibration bracket: power is not decreasing in sigma");
  }

  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double power_mid = power_at(mid);
    if (std::abs(power_mid - target_power) <= kTolerance) return {mid, power_mid};
    if (power_mid > target_power) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw std::runtime_error("calibration did not reach the target power tolerance");
}

std::vector<double> evenly_spaced_means(std::size_t d) {
  if (d < 2) throw std::invalid_argument("need at least two means");
  std::vector<double> means(d);
  for (std::size_t j = 0; j < d; ++j) means[j] = static_cast<double>(d - 1 - j);
  return means;
}

std::vector<double> tied_means(std::size_t d, std::size_t k) {
  if (k < 1 || k >= d) throw std::domain_error("tie position must lie in [1, d-1]");
  std::vector<double> means = evenly_spaced_means(d);
  means[k - 1] = means[k];
  return means;
}

GridReport run_inflation_grid(double sigma_bar, const SimConfig& config) {
  if (!(sigma_bar > 0.0) || !std::isfinite(sigma_bar)) {
    throw std::domain_error("sigma_bar must be positive and finite");
  }
  const std::size_t d = config.dimension;
  if (d < 4) {
    throw std::domain_error("the inflation grid sweeps ranks 2 and 4; need d >= 4");
  }

  const std::vector<double> means = config.error_kind == ErrorKind::kType1Tied
                                        ? tied_means(d, config.k)
                                        : evenly_spaced_means(d);

  std::vector<double> multipliers;
  if (config.error_kind == ErrorKind::kType2) {
    for (int i = 0; i <= 6; ++i) multipliers.push_back(0.5 * i);  // 0..3 sigma_bar
  } else {
    for (int e = 0; e <= 6; ++e) multipliers.push_back(std::ldexp(1.0, e));  // 2^0..2^6
  }

  GridReport grid;
  grid.sigma_bar = sigma_bar;
  for (std::size_t j : {std::size_t{2}, std::size_t{4}}) {
    for (double m : multipliers) {
      std::vector<double> sds(d, sigma_bar);
      sds[j - 1] = m * sigma_bar;
      GridCell cell;
      cell.inflated_rank = j;
      cell.multiplier = m;
      cell.sigma_j = m * sigma_bar;
      cell.report = estimate_error(Scenario(means, sds), config);
      grid.cells.push_back(cell);
    }
  }
  return grid;
}

}  // namespace rankverify
