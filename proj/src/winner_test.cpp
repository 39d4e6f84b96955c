#include "rankverify/winner_test.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rankverify {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Guard for the two evaluation routes of the observed and truncation z
// values: algebraically z_num >= z_den, but the routes round differently.
double clamp_truncation_z(double z_den, double z_num) {
  if (z_den <= z_num) return z_den;
  if (z_den - z_num <= 1e-9 * std::max(1.0, std::abs(z_num))) return z_num;
  throw std::logic_error(
      "pairwise test: truncation point exceeds the observed value "
      "(selection-event bookkeeping bug)");
}

}  // namespace

ZScore z_statistic(double x1, double xj, double sd1, double sdj) {
  if (!std::isfinite(x1) || !std::isfinite(xj)) {
    throw std::invalid_argument("z_statistic: observations must be finite");
  }
  if (!(sd1 > 0.0) || !(sdj > 0.0)) {
    throw std::domain_error("z_statistic: standard deviations must be positive");
  }
  return ZScore((x1 - xj) / std::sqrt(sd1 * sd1 + sdj * sdj));
}

PairwiseTest pairwise_pvalue(const RankView& view, std::size_t competitor_pos,
                             TailDirection direction) {
  const std::size_t d = view.size();
  if (d < 2) {
    throw std::invalid_argument("pairwise test needs at least two observations");
  }
  if (competitor_pos < 2 || competitor_pos > d) {
    throw std::out_of_range("competitor position out of range");
  }

  const bool upper = direction == TailDirection::kUpper;
  const Observation& tested = upper ? view.at(1) : view.at(d);
  const Observation& competitor =
      upper ? view.at(competitor_pos) : view.at(d + 1 - competitor_pos);

  const double s1_sq = tested.sd * tested.sd;
  const double sj_sq = competitor.sd * competitor.sd;
  const double var_sum = s1_sq + sj_sq;
  if (!(var_sum > 0.0)) {
    throw std::domain_error("pairwise test: tested pair carries no variance");
  }

  const double mu_bar = (sj_sq * tested.value + s1_sq * competitor.value) / var_sum;
  const double sigma_bar = s1_sq / std::sqrt(var_sum);

  // Extreme of the remaining elements; the selection event truncates at the
  // larger (upper) or smaller (lower) of it and mu_bar.
  double others_extreme = upper ? -kInf : kInf;
  for (std::size_t pos = 1; pos <= d; ++pos) {
    const std::size_t skip = upper ? competitor_pos : d + 1 - competitor_pos;
    const std::size_t self = upper ? 1 : d;
    if (pos == self || pos == skip) continue;
    const double v = view.at(pos).value;
    others_extreme = upper ? std::max(others_extreme, v) : std::min(others_extreme, v);
  }

  if (upper ? (tested.value < others_extreme || tested.value < competitor.value)
            : (tested.value > others_extreme || tested.value > competitor.value)) {
    throw std::logic_error("pairwise test: tested element is not the extreme one");
  }

  PairwiseTest result;
  result.competitor_pos = competitor_pos;
  result.mu_bar = mu_bar;
  result.sigma_bar = sigma_bar;
  result.direction = direction;

  if (upper) {
    const double eta = std::max(mu_bar, others_extreme);
    const double z_obs = (tested.value - competitor.value) / std::sqrt(var_sum);
    double z_trunc = eta <= mu_bar ? 0.0 : (eta - mu_bar) / sigma_bar;
    z_trunc = clamp_truncation_z(z_trunc, z_obs);
    result.trunc_threshold = eta;
    result.p_value = truncated_sf_ratio(ZScore(z_obs), ZScore(z_trunc));
  } else {
    const double gamma = std::min(mu_bar, others_extreme);
    const double z_obs = (competitor.value - tested.value) / std::sqrt(var_sum);
    double z_trunc = gamma >= mu_bar ? 0.0 : (mu_bar - gamma) / sigma_bar;
    z_trunc = clamp_truncation_z(z_trunc, z_obs);
    result.trunc_threshold = gamma;
    result.p_value = truncated_sf_ratio(ZScore(z_obs), ZScore(z_trunc));
  }
  return result;
}

namespace {

VerificationResult verify_extreme(const RankView& view, Probability alpha,
                                  TailDirection direction) {
  const std::size_t d = view.size();
  if (d < 2) {
    throw std::invalid_argument("verification needs at least two observations");
  }
  VerificationResult result;
  result.alpha = alpha.value();
  result.pairwise.reserve(d - 1);
  double p_star = -1.0;
  std::size_t argmax = 0;
  for (std::size_t pos = 2; pos <= d; ++pos) {
    PairwiseTest test = pairwise_pvalue(view, pos, direction);
    if (test.p_value.value() > p_star) {
      p_star = test.p_value.value();
      argmax = pos;
    }
    result.pairwise.push_back(std::move(test));
  }
  result.p_star = Probability(p_star);
  result.argmax_competitor = argmax;
  result.verified = p_star <= alpha.value();
  return result;
}

}  // namespace

VerificationResult verify_winner(const RankView& view, Probability alpha) {
  return verify_extreme(view, alpha, TailDirection::kUpper);
}

VerificationResult verify_loser(const RankView& view, Probability alpha) {
  return verify_extreme(view, alpha, TailDirection::kLower);
}

VerificationResult verify_winner(const Observations& obs, Probability alpha) {
  return verify_winner(RankView::whole(obs), alpha);
}

VerificationResult verify_loser(const Observations& obs, Probability alpha) {
  return verify_loser(RankView::whole(obs), alpha);
}

}  // namespace rankverify
