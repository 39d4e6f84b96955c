#include "rankverify/observations.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rankverify {

Observations::Observations(std::vector<Observation> items) : items_(std::move(items)) {
  if (items_.empty()) {
    throw std::invalid_argument("observations must not be empty");
  }
  for (const auto& item : items_) {
    if (!std::isfinite(item.value)) {
      throw std::invalid_argument("observation '" + item.label + "' has a non-finite value");
    }
    if (!std::isfinite(item.sd) || item.sd < 0.0) {
      throw std::invalid_argument("observation '" + item.label +
                                  "' must have a finite, nonnegative sd");
    }
  }
  order_.resize(items_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  std::stable_sort(order_.begin(), order_.end(), [this](std::size_t a, std::size_t b) {
    return items_[a].value > items_[b].value;
  });
}

const Observation& Observations::by_rank(std::size_t rank) const {
  if (rank < 1 || rank > items_.size()) {
    throw std::out_of_range("rank out of range");
  }
  return items_[order_[rank - 1]];
}

std::size_t Observations::original_index(std::size_t rank) const {
  if (rank < 1 || rank > items_.size()) {
    throw std::out_of_range("rank out of range");
  }
  return order_[rank - 1];
}

RankView::RankView(const Observations& obs, std::vector<std::size_t> ranks)
    : obs_(&obs), ranks_(std::move(ranks)) {
  if (ranks_.empty()) {
    throw std::invalid_argument("rank view must not be empty");
  }
  std::size_t prev = 0;
  for (std::size_t r : ranks_) {
    if (r < 1 || r > obs.size()) {
      throw std::out_of_range("rank view index out of range");
    }
    if (r <= prev) {
      throw std::invalid_argument("rank view indices must be strictly ascending");
    }
    prev = r;
  }
}

RankView RankView::whole(const Observations& obs) {
  std::vector<std::size_t> ranks(obs.size());
  std::iota(ranks.begin(), ranks.end(), std::size_t{1});
  return RankView(obs, std::move(ranks));
}

RankView RankView::suffix(const Observations& obs, std::size_t first_rank) {
  if (first_rank < 1 || first_rank > obs.size()) {
    throw std::out_of_range("suffix start rank out of range");
  }
  std::vector<std::size_t> ranks(obs.size() - first_rank + 1);
  std::iota(ranks.begin(), ranks.end(), first_rank);
  return RankView(obs, std::move(ranks));
}

RankView RankView::prefix(const Observations& obs, std::size_t last_rank) {
  if (last_rank < 1 || last_rank > obs.size()) {
    throw std::out_of_range("prefix end rank out of range");
  }
  std::vector<std::size_t> ranks(last_rank);
  std::iota(ranks.begin(), ranks.end(), std::size_t{1});
  return RankView(obs, std::move(ranks));
}

const Observation& RankView::at(std::size_t pos) const {
  if (pos < 1 || pos > ranks_.size()) {
    throw std::out_of_range("view position out of range");
  }
  return obs_->by_rank(ranks_[pos - 1]);
}

std::size_t RankView::global_rank(std::size_t pos) const {
  if (pos < 1 || pos > ranks_.size()) {
    throw std::out_of_range("view position out of range");
  }
  return ranks_[pos - 1];
}

}  // namespace rankverify
