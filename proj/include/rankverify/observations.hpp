#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace rankverify {

// One labeled measurement with a known standard deviation.
struct Observation {
  std::string label;
  double value = 0.0;
  double sd = 0.0;
};

// Observations together with their descending-value ordering.  Ties are
// broken by original position (stable sort) so results are reproducible.
//
// A zero standard deviation marks a point mass; those arise in simulation
// grids where one element degenerates to a constant.  Tests stay defined as
// long as each tested pair has at least one positive sd, which the pairwise
// machinery enforces.
class Observations {
 public:
  explicit Observations(std::vector<Observation> items);

  std::size_t size() const noexcept { return items_.size(); }

  // rank is 1-based: rank 1 holds the largest observed value.
  const Observation& by_rank(std::size_t rank) const;

  // Original position (0-based) of the element holding the given rank.
  std::size_t original_index(std::size_t rank) const;

  const std::vector<Observation>& original() const noexcept { return items_; }

 private:
  std::vector<Observation> items_;   // original order
  std::vector<std::size_t> order_;   // rank-1 -> index into items_
};

// A subvector of an Observations object, identified by ascending global
// ranks.  The procedures run the winner test unchanged on suffixes
// ({k..d}) and on one-versus-tail unions ({j} u {K+1..d}).
class RankView {
 public:
  RankView(const Observations& obs, std::vector<std::size_t> ranks);

  static RankView whole(const Observations& obs);
  static RankView suffix(const Observations& obs, std::size_t first_rank);
  static RankView prefix(const Observations& obs, std::size_t last_rank);

  std::size_t size() const noexcept { return ranks_.size(); }

  // pos is 1-based within the view; pos 1 is the view's largest value.
  const Observation& at(std::size_t pos) const;

  // Global rank backing the given view position.
  std::size_t global_rank(std::size_t pos) const;

  const Observations& observations() const noexcept { return *obs_; }

 private:
  const Observations* obs_;
  std::vector<std::size_t> ranks_;  // strictly ascending global ranks
};

}  // namespace rankverify
