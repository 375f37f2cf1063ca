#include "dctopo/chunkset.hpp"

#include <algorithm>
#include <stdexcept>

namespace dctopo {

ChunkSet ChunkSet::interval(Rat lo, Rat hi) {
  if (hi <= lo) throw std::invalid_argument("chunkset: empty or reversed interval");
  return ChunkSet({Interval{lo, hi}});
}

ChunkSet ChunkSet::from_endpoints(const std::vector<Rat>& pts) {
  if (pts.size() % 2 != 0) throw std::invalid_argument("chunkset: odd endpoint list");
  std::vector<Interval> ivs;
  for (std::size_t i = 0; i < pts.size(); i += 2) ivs.push_back(Interval{pts[i], pts[i + 1]});
  return normalized(std::move(ivs));
}

ChunkSet ChunkSet::normalized(std::vector<Interval> ivs) {
  for (const auto& iv : ivs)
    if (iv.hi <= iv.lo) throw std::invalid_argument("chunkset: empty or reversed interval");
  std::sort(ivs.begin(), ivs.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> out;
  for (const auto& iv : ivs) {
    if (!out.empty() && iv.lo <= out.back().hi) {
      if (out.back().hi < iv.hi) out.back().hi = iv.hi;
    } else {
      out.push_back(iv);
    }
  }
  return ChunkSet(std::move(out));
}

Rat ChunkSet::measure() const {
  Rat m(0);
  for (const auto& iv : ivs_) m += iv.hi - iv.lo;
  return m;
}

ChunkSet ChunkSet::unite(const ChunkSet& o) const {
  std::vector<Interval> ivs = ivs_;
  ivs.insert(ivs.end(), o.ivs_.begin(), o.ivs_.end());
  return normalized(std::move(ivs));
}

ChunkSet ChunkSet::intersect(const ChunkSet& o) const {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < ivs_.size() && j < o.ivs_.size()) {
    Rat lo = std::max(ivs_[i].lo, o.ivs_[j].lo);
    Rat hi = std::min(ivs_[i].hi, o.ivs_[j].hi);
    if (lo < hi) out.push_back(Interval{lo, hi});
    if (ivs_[i].hi < o.ivs_[j].hi)
      ++i;
    else
      ++j;
  }
  return ChunkSet(std::move(out));
}

ChunkSet ChunkSet::subtract(const ChunkSet& o) const {
  std::vector<Interval> out;
  std::size_t j = 0;
  for (const auto& iv : ivs_) {
    Rat cur = iv.lo;
    while (j < o.ivs_.size() && o.ivs_[j].hi <= cur) ++j;
    std::size_t k = j;
    while (k < o.ivs_.size() && o.ivs_[k].lo < iv.hi) {
      if (cur < o.ivs_[k].lo) out.push_back(Interval{cur, o.ivs_[k].lo});
      if (cur < o.ivs_[k].hi) cur = o.ivs_[k].hi;
      ++k;
    }
    if (cur < iv.hi) out.push_back(Interval{cur, iv.hi});
  }
  return ChunkSet(std::move(out));
}

ChunkSet ChunkSet::affine(Rat scale, Rat offset) const {
  if (!(Rat(0) < scale)) throw std::invalid_argument("chunkset: non-positive scale");
  std::vector<Interval> out;
  out.reserve(ivs_.size());
  for (const auto& iv : ivs_) out.push_back(Interval{iv.lo * scale + offset, iv.hi * scale + offset});
  return ChunkSet(std::move(out));
}

std::string ChunkSet::str() const {
  std::string s = "{";
  for (std::size_t i = 0; i < ivs_.size(); ++i) {
    if (i) s += ", ";
    s += "[" + ivs_[i].lo.str() + "," + ivs_[i].hi.str() + ")";
  }
  return s + "}";
}

}  // namespace dctopo
