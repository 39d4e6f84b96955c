#include "rankverify/procedures.hpp"

#include <numeric>
#include <stdexcept>

namespace rankverify {

RankingResult rank_top(const Observations& obs, Probability alpha) {
  const std::size_t d = obs.size();
  if (d < 2) {
    throw std::invalid_argument("ranking verification needs at least two observations");
  }
  RankingResult result;
  result.alpha = alpha.value();
  result.direction = RankDirection::kTop;
  for (std::size_t k = 1; k <= d - 1; ++k) {
    const RankView view = RankView::suffix(obs, k);
    const VerificationResult v = verify_winner(view, alpha);
    result.per_rank.push_back(
        {k, v.p_star, view.global_rank(v.argmax_competitor)});
    if (!v.verified) return result;
    ++result.verified_count;
  }
  result.verified_count = d;  // every test rejected: full ordering certified
  return result;
}

RankingResult rank_bottom(const Observations& obs, Probability alpha) {
  const std::size_t d = obs.size();
  if (d < 2) {
    throw std::invalid_argument("ranking verification needs at least two observations");
  }
  RankingResult result;
  result.alpha = alpha.value();
  result.direction = RankDirection::kBottom;
  for (std::size_t step = 1; step <= d - 1; ++step) {
    const std::size_t view_size = d - step + 1;
    const RankView view = RankView::prefix(obs, view_size);
    const VerificationResult v = verify_loser(view, alpha);
    // Lower-direction positions count from the bottom of the view.
    const std::size_t argmax_rank = view.global_rank(view_size + 1 - v.argmax_competitor);
    result.per_rank.push_back({view_size, v.p_star, argmax_rank});
    if (!v.verified) return result;
    ++result.verified_count;
  }
  result.verified_count = d;
  return result;
}

SetTestResult topk_set_test(const Observations& obs, std::size_t k_set, Probability alpha) {
  const std::size_t d = obs.size();
  if (d < 2) {
    throw std::invalid_argument("set test needs at least two observations");
  }
  if (k_set < 1 || k_set > d - 1) {
    throw std::domain_error("set size must lie in [1, d-1]");
  }
  SetTestResult result;
  result.k_set = k_set;
  result.alpha = alpha.value();
  result.per_element.reserve(k_set);

  double p_star = -1.0;
  for (std::size_t j = 1; j <= k_set; ++j) {
    std::vector<std::size_t> ranks;
    ranks.reserve(d - k_set + 1);
    ranks.push_back(j);
    for (std::size_t r = k_set + 1; r <= d; ++r) ranks.push_back(r);
    const RankView view(obs, std::move(ranks));
    const VerificationResult v = verify_winner(view, alpha);
    result.per_element.push_back(v.p_star);
    if (v.p_star.value() > p_star) {
      p_star = v.p_star.value();
      result.worst_pair = {j, view.global_rank(v.argmax_competitor)};
    }
  }
  result.p_star = Probability(p_star);
  result.verified = p_star <= alpha.value();
  return result;
}

}  // namespace rankverify
