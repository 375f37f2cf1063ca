#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "dctopo/rational.hpp"

namespace dctopo {

/// A set of half-open sub-intervals [a,b) of the unit shard [0,1), with exact
/// rational endpoints. Always normalized: sorted, pairwise disjoint, adjacent
/// intervals merged, no empty intervals.
class ChunkSet {
 public:
  struct Interval {
    Rat lo, hi;
    bool operator==(const Interval& o) const { return lo == o.lo && hi == o.hi; }
  };

  ChunkSet() = default;
  static ChunkSet empty() { return ChunkSet(); }
  static ChunkSet full() { return interval(Rat(0), Rat(1)); }
  static ChunkSet interval(Rat lo, Rat hi);
  /// Flattened endpoints [a1,b1,a2,b2,...]; normalizes.
  static ChunkSet from_endpoints(const std::vector<Rat>& pts);

  const std::vector<Interval>& intervals() const { return ivs_; }
  bool is_empty() const { return ivs_.empty(); }
  Rat measure() const;

  ChunkSet unite(const ChunkSet& o) const;
  ChunkSet intersect(const ChunkSet& o) const;
  ChunkSet subtract(const ChunkSet& o) const;

  /// x -> scale*x + offset applied to every endpoint; scale must be positive.
  ChunkSet affine(Rat scale, Rat offset) const;

  bool operator==(const ChunkSet& o) const { return ivs_ == o.ivs_; }
  bool operator!=(const ChunkSet& o) const { return !(*this == o); }

  std::string str() const;

 private:
  explicit ChunkSet(std::vector<Interval> ivs) : ivs_(std::move(ivs)) {}
  static ChunkSet normalized(std::vector<Interval> ivs);
  std::vector<Interval> ivs_;
};

}  // namespace dctopo
