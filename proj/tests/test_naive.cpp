#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracle.hpp"
#include "rankverify/naive_test.hpp"
#include "rankverify/winner_test.hpp"

using namespace rankverify;

namespace {

double rel_err(double got, double want) {
  if (want == 0.0) return std::abs(got);
  return std::abs(got - want) / std::abs(want);
}

Observations obs_from(const std::vector<double>& values, const std::vector<double>& sds) {
  std::vector<Observation> items;
  for (std::size_t i = 0; i < values.size(); ++i) {
    items.push_back({std::to_string(i + 1), values[i], sds[i]});
  }
  return Observations(std::move(items));
}

}  // namespace

TEST_CASE("naive p-value basics") {
  CHECK(naive_pvalue(obs_from({1.0, 1.0}, {1.0, 1.0})).value() == 1.0);
  CHECK(rel_err(naive_pvalue(obs_from({1.0, 0.0}, {1.0, 1.0})).value(),
                0.47950012218695346) < 1e-12);
  CHECK_THROWS_AS(naive_pvalue(obs_from({1.0}, {1.0})), std::invalid_argument);
}

TEST_CASE("naive p-value equals the reduced runner-up test under equal variances") {
  testoracle::TestRng rng(0xDADAu);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t d = rng.index(2, 7);
    const double sigma = rng.uniform(0.4, 2.0);
    std::vector<double> values;
    for (std::size_t i = 0; i < d; ++i) values.push_back(rng.gaussian());
    std::sort(values.begin(), values.end(), std::greater<>());
    const Observations obs = obs_from(values, std::vector<double>(d, sigma));
    const double runner_up =
        pairwise_pvalue(RankView::whole(obs), 2, TailDirection::kUpper).p_value.value();
    CHECK(rel_err(naive_pvalue(obs).value(), runner_up) < 1e-12);
  }
}

TEST_CASE("reference scenario: bound clears 0.30 and is stable under refinement") {
  NaiveBoundConfig config = reference_scenario_config();
  const double bound = naive_error_lower_bound(config).value();
  CHECK(bound > 0.30);
  // Regression fixture for the frozen reference configuration.
  CHECK(bound == doctest::Approx(0.46011436036549785).epsilon(1e-12));

  NaiveBoundConfig fine = config;
  fine.n_grid = 200;
  CHECK(std::abs(naive_error_lower_bound(fine).value() - bound) < 5e-3);

  NaiveBoundConfig trapezoid = config;
  trapezoid.rule = QuadratureRule::kTrapezoid;
  CHECK(std::abs(naive_error_lower_bound(trapezoid).value() - bound) < 1e-3);

  NaiveBoundConfig grid_inner = config;
  grid_inner.exact_inner = false;
  CHECK(std::abs(naive_error_lower_bound(grid_inner).value() - bound) < 1e-3);
}

TEST_CASE("bound validation") {
  NaiveBoundConfig config = reference_scenario_config();
  config.index_b = config.index_best;
  CHECK_THROWS_AS(naive_error_lower_bound(config), std::domain_error);
  NaiveBoundConfig bad_grid = reference_scenario_config();
  bad_grid.n_grid = 1;
  CHECK_THROWS_AS(naive_error_lower_bound(bad_grid), std::domain_error);
  NaiveBoundConfig bad_alpha = reference_scenario_config();
  bad_alpha.alpha = 0.0;
  CHECK_THROWS_AS(naive_error_lower_bound(bad_alpha), std::domain_error);
}

TEST_CASE("bound shrinks as the rejection threshold rises") {
  NaiveBoundConfig config{Scenario({2.0, 1.9, 1.8, 1.7, -2.0}, {2.0, 0.5, 0.5, 0.5, 0.5})};
  double prev = 1.0;
  for (double alpha : {0.2, 0.1, 0.05, 0.01, 0.001}) {
    config.alpha = alpha;
    const double bound = naive_error_lower_bound(config).value();
    CHECK(bound <= prev + 1e-12);
    prev = bound;
  }
}

TEST_CASE("symmetric configuration leaves almost no event mass") {
  // A sits far above two exchangeable elements: it nearly always wins.
  NaiveBoundConfig config{Scenario({10.0, 0.0, 0.0}, {0.1, 1.0, 1.0})};
  CHECK(naive_error_lower_bound(config).value() < 1e-6);
}

TEST_CASE("alpha near 1: bound collapses to the both-exceed event") {
  NaiveBoundConfig config = reference_scenario_config();
  config.alpha = 0.999999;
  const double bound = naive_error_lower_bound(config).value();
  const SimReport mc = naive_error_mc(config, 50000, 999);
  REQUIRE(mc.estimate.has_value());
  CHECK(std::abs(bound - *mc.estimate) <
        std::max(0.01, 4.0 * mc.mc_standard_error));
}

TEST_CASE("monte carlo cross-check on the reference scenario") {
  const NaiveBoundConfig config = reference_scenario_config();
  const double bound = naive_error_lower_bound(config).value();
  const SimReport mc = naive_error_mc(config, 50000, 4242);
  REQUIRE(mc.estimate.has_value());
  CHECK(std::abs(bound - *mc.estimate) < std::max(0.01, 4.0 * mc.mc_standard_error));
  // Regression fixtures: the two oracles on the frozen configuration.
  CHECK(bound == doctest::Approx(0.46011436036549785).epsilon(1e-12));
  CHECK(*mc.estimate == 0.46062);

  const SimReport again = naive_error_mc(config, 50000, 4242);
  CHECK(*again.estimate == *mc.estimate);
  CHECK_THROWS_AS(naive_error_mc(config, 0, 1), std::invalid_argument);
}

TEST_CASE("cross-oracle agreement on a randomized near-top family") {
  // Family kept inside the regime the quadrature factorization assumes:
  // a wide element A holding the top mean, and a tight near-top pack whose
  // sds are two orders of magnitude smaller.
  testoracle::TestRng rng(0x600Du);
  for (int rep = 0; rep < 8; ++rep) {
    const double sd_a = rng.uniform(1.5, 3.0);
    const double mu_b = rng.uniform(1.7, 1.9);
    const double gap = rng.uniform(0.05, 0.15);
    const double sd_b = rng.uniform(0.01, 0.04);
    const double sd_c = rng.uniform(0.01, 0.04);
    NaiveBoundConfig config{Scenario({2.0, mu_b, mu_b - gap, 1.0, -2.0},
                                     {sd_a, sd_b, sd_c, 0.05, 0.05})};
    config.alpha = 0.05;
    const double bound = naive_error_lower_bound(config).value();
    const SimReport mc = naive_error_mc(config, 60000, 1000 + rep);
    REQUIRE(mc.estimate.has_value());
    CHECK(std::abs(bound - *mc.estimate) <
          std::max(0.01, 4.0 * mc.mc_standard_error));
  }
}

TEST_CASE("selective test stays level where the naive test collapses") {
  const NaiveBoundConfig config = reference_scenario_config();
  const std::size_t n = 4000;
  const RandomStream stream(31415);
  const auto& means = config.scenario.means();
  const auto& sds = config.scenario.sds();
  std::size_t naive_errors = 0;
  std::size_t selective_errors = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto sub = stream.substream(i);
    std::vector<Observation> items;
    for (std::size_t j = 0; j < means.size(); ++j) {
      items.push_back({std::to_string(j + 1), means[j] + sds[j] * sub.next_gaussian(),
                       sds[j]});
    }
    const Observations obs(std::move(items));
    const bool wrong_winner = obs.original_index(1) != config.index_best;
    if (wrong_winner && naive_pvalue(obs).value() <= 0.05) ++naive_errors;
    if (wrong_winner && verify_winner(obs, Probability(0.05)).verified) ++selective_errors;
  }
  const double naive_rate = static_cast<double>(naive_errors) / n;
  const double selective_rate = static_cast<double>(selective_errors) / n;
  CHECK(naive_rate > 0.30);
  CHECK(selective_rate <=
        0.05 + 3.0 * std::sqrt(0.05 * 0.95 / static_cast<double>(n)));
}
