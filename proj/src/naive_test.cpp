#include "rankverify/naive_test.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace rankverify {
namespace {

double normal_density(double x, double mean, double sd) {
  return std_normal_pdf(ZScore((x - mean) / sd)) / sd;
}

// Composite 1-D quadrature with n subintervals (n made even for Simpson),
// summed through a compensated accumulator so strip order never matters.
template <typename F>
double integrate(F f, double lo, double hi, std::size_t n, QuadratureRule rule) {
  if (!(hi > lo)) return 0.0;
  if (rule == QuadratureRule::kSimpson && n % 2 != 0) ++n;
  const double h = (hi - lo) / static_cast<double>(n);
  double sum = 0.0, carry = 0.0;
  auto add = [&](double term) {  // Kahan
    const double y = term - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  };
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = i == n ? hi : lo + h * static_cast<double>(i);
    double w;
    if (rule == QuadratureRule::kSimpson) {
      w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      w /= 3.0;
    } else {
      w = (i == 0 || i == n) ? 0.5 : 1.0;
    }
    add(w * f(x));
  }
  return sum * h;
}

void validate_indices(const NaiveBoundConfig& config) {
  const std::size_t d = config.scenario.size();
  if (d < 3) {
    throw std::domain_error("naive bound needs at least three elements");
  }
  const auto a = config.index_best, b = config.index_b, c = config.index_c;
  if (a >= d || b >= d || c >= d || a == b || a == c || b == c) {
    throw std::domain_error("naive bound: A, B, C must be distinct valid indices");
  }
  if (!(config.scenario.sds()[b] > 0.0) || !(config.scenario.sds()[c] > 0.0)) {
    throw std::domain_error("naive bound: B and C need positive sds");
  }
  if (config.n_grid < 2) throw std::domain_error("n_grid must be at least 2");
  if (!(config.span_sds > 0.0)) throw std::domain_error("span_sds must be positive");
  if (!(config.alpha > 0.0) || !(config.alpha < 1.0)) {
    throw std::domain_error("alpha must lie in (0, 1)");
  }
}

}  // namespace

NaiveBoundConfig reference_scenario_config() {
  NaiveBoundConfig config{
      Scenario({2.0, 1.9, 1.8, 1.7, -2.0}, {2.0, 0.01, 0.01, 0.01, 0.01})};
  config.index_best = 0;
  config.index_b = 1;
  config.index_c = 2;
  return config;
}

Probability naive_pvalue(const Observations& obs) {
  if (obs.size() < 2) {
    throw std::invalid_argument("naive p-value needs at least two observations");
  }
  const Observation& winner = obs.by_rank(1);
  const Observation& runner_up = obs.by_rank(2);
  const double var_sum = winner.sd * winner.sd + runner_up.sd * runner_up.sd;
  if (!(var_sum > 0.0)) {
    throw std::domain_error("naive p-value: leading pair carries no variance");
  }
  const double z = (winner.value - runner_up.value) / std::sqrt(var_sum);
  const double p = 2.0 * std_normal_sf(ZScore(z)).value();
  return Probability(std::min(p, 1.0));
}

Probability naive_error_lower_bound(const NaiveBoundConfig& config) {
  validate_indices(config);
  const auto& means = config.scenario.means();
  const auto& sds = config.scenario.sds();
  const double mu_a = means[config.index_best], sd_a = sds[config.index_best];
  const double mu_b = means[config.index_b], sd_b = sds[config.index_b];
  const double mu_c = means[config.index_c], sd_c = sds[config.index_c];

  const double sigma_bc = std::sqrt(sd_b * sd_b + sd_c * sd_c);
  const double mu_q = mu_b - mu_c;
  const double q_threshold =
      std_normal_quantile(Probability(1.0 - config.alpha)).value() * sigma_bc;

  const double span = config.span_sds;
  const std::size_t n = config.n_grid;

  // The q axis starts at the rejection threshold; both ends stay inside the
  // finite span around the mean.
  const double q_lo = std::max(q_threshold, mu_q - span * sigma_bc);
  const double q_hi = mu_q + span * sigma_bc;
  const double q_mass = integrate(
      [&](double q) { return normal_density(q, mu_q, sigma_bc); }, q_lo, q_hi, n,
      config.rule);

  const double a_lo = mu_a - span * sd_a;
  const double a_hi = mu_a + span * sd_a;
  const auto inner_a = [&](double c) {
    if (config.exact_inner) {
      return std_normal_cdf(ZScore((c - mu_a) / sd_a)).value();
    }
    return integrate([&](double a) { return normal_density(a, mu_a, sd_a); }, a_lo,
                     std::min(c, a_hi), n, config.rule);
  };

  const double c_lo = mu_c - span * sd_c;
  const double c_hi = mu_c + span * sd_c;
  const double total = integrate(
      [&](double c) { return normal_density(c, mu_c, sd_c) * inner_a(c); }, c_lo, c_hi,
      n, config.rule);

  return Probability(std::clamp(total * q_mass, 0.0, 1.0));
}

SimReport naive_error_mc(const NaiveBoundConfig& config, std::size_t n_draws,
                         std::uint64_t seed) {
  validate_indices(config);
  if (n_draws < 1) throw std::invalid_argument("n_draws must be at least 1");

  const auto& means = config.scenario.means();
  const auto& sds = config.scenario.sds();
  const double sigma_bc = std::sqrt(sds[config.index_b] * sds[config.index_b] +
                                    sds[config.index_c] * sds[config.index_c]);
  const double z_threshold = std_normal_quantile(Probability(1.0 - config.alpha)).value();

  const RandomStream stream(seed);
  const std::size_t d = config.scenario.size();
  std::vector<double> x(d);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n_draws; ++i) {
    auto sub = stream.substream(i);
    for (std::size_t j = 0; j < d; ++j) {
      x[j] = means[j] + sds[j] * sub.next_gaussian();
    }
    const double xa = x[config.index_best];
    const double xb = x[config.index_b];
    const double xc = x[config.index_c];
    if (xb > xa && xc > xa && (xb - xc) / sigma_bc > z_threshold) ++hits;
  }

  SimReport report;
  report.n_draws = n_draws;
  report.n_effective = n_draws;
  const double p = static_cast<double>(hits) / static_cast<double>(n_draws);
  report.estimate = p;
  report.mc_standard_error = std::sqrt(p * (1.0 - p) / static_cast<double>(n_draws));
  return report;
}

}  // namespace rankverify
