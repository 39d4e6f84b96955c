#pragma once

#include <cstddef>
#include <vector>

#include "rankverify/normal.hpp"
#include "rankverify/observations.hpp"
#include "rankverify/winner_test.hpp"

namespace rankverify {

enum class RankDirection { kTop, kBottom };

// One sequential verification step: the global rank that was tested, its
// aggregated p-value, and the global rank of the competitor attaining it.
struct RankStep {
  std::size_t tested_rank = 0;
  Probability p_star{1.0};
  std::size_t argmax_rank = 0;
};

// Output of the sequential ranking verification.  per_rank holds the
// verified_count rejecting steps followed by the first failing step, which
// is absent only when every possible test rejected; in that case
// verified_count equals d (the full ordering is certified).
struct RankingResult {
  std::size_t verified_count = 0;
  std::vector<RankStep> per_rank;
  double alpha = 0.0;
  RankDirection direction = RankDirection::kTop;
};

struct SetPair {
  std::size_t top_rank = 0;
  std::size_t competitor_rank = 0;
};

struct SetTestResult {
  std::size_t k_set = 0;
  Probability p_star{1.0};
  SetPair worst_pair;
  std::vector<Probability> per_element;  // max p-value for each top element j = 1..k_set
  double alpha = 0.0;
  bool verified = false;
};

// Sequential verification of the leading ranks: tests rank k against every
// rank it exceeds, for k = 1, 2, ..., stopping at the first non-rejection.
RankingResult rank_top(const Observations& obs, Probability alpha);

// Mirror procedure starting from the lowest order statistic, using
// lower-tail p-values.
RankingResult rank_bottom(const Observations& obs, Probability alpha);

// Tests whether the observed top-k_set set is correct: each of the leading
// k_set elements is verified as the winner of itself plus every element
// outside the set, and the results aggregate by the maximum.
SetTestResult topk_set_test(const Observations& obs, std::size_t k_set, Probability alpha);

}  // namespace rankverify
