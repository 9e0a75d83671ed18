// Copyright 2026 The Geomatch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GEOMATCH_COVER_HPP_
#define GEOMATCH_COVER_HPP_

// Biclique covers ("compact representations") of point/range incidence
// graphs: a family of pairs (P_i, R_i) whose complete bipartite graphs
// union to I(P, R).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <numeric>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "geomatch/errors.hpp"
#include "geomatch/geometry.hpp"
#include "geomatch/kernels.hpp"

namespace geomatch {

struct CoverPart {
  std::vector<std::int32_t> points;  // sorted, distinct
  std::vector<std::int32_t> ranges;  // sorted, distinct
  friend bool operator==(const CoverPart&, const CoverPart&) = default;
};

struct BicliqueCover {
  std::size_t left_count = 0;   // |P|
  std::size_t right_count = 0;  // |R|
  std::vector<CoverPart> parts;
  friend bool operator==(const BicliqueCover&, const BicliqueCover&) = default;
};

// Sum over parts of |P_i| + |R_i|.
std::size_t cover_size(const BicliqueCover& c);

// Throws InputError unless every index is in bounds and no part repeats an
// index. Sorts each part's index lists in place.
void normalize_cover(BicliqueCover& c);

// Line-oriented text format:
//   sigma=<int> parts=<int>
//   P: i1 i2 ... | R: j1 j2 ...
void write_cover(std::ostream& out, const BicliqueCover& c);
// left/right counts of zero are inferred from the largest index seen.
BicliqueCover read_cover(std::istream& in, std::size_t left_count = 0,
                         std::size_t right_count = 0);

struct CoverReport {
  bool edge_set_ok = false;
  bool edge_disjoint = false;
  std::vector<IndexPair> missing;  // incident pairs no part covers
  std::vector<IndexPair> extra;    // covered pairs that are not incident
  std::uint64_t multiply_covered = 0;
};

inline constexpr std::uint64_t kValidateGuard = 10'000'000;

template <class S>
CoverReport validate_cover(const BicliqueCover& c, const std::vector<Point<S>>& points,
                           const std::vector<Range<S>>& ranges) {
  const std::uint64_t np = points.size(), nr = ranges.size();
  if (np * nr > kValidateGuard)
    throw InputError("validate_cover refuses instances above 10^7 point/range pairs");
  if (c.left_count != np || c.right_count != nr)
    throw InputError("cover dimensions do not match the instance");
  std::vector<std::uint8_t> hits(np * nr, 0);
  for (const auto& part : c.parts)
    for (auto p : part.points)
      for (auto r : part.ranges) {
        if (p < 0 || static_cast<std::uint64_t>(p) >= np || r < 0 ||
            static_cast<std::uint64_t>(r) >= nr)
          throw InputError("cover index out of bounds");
        auto& h = hits[p * nr + r];
        if (h < 255) ++h;
      }
  CoverReport rep;
  for (std::uint64_t p = 0; p < np; ++p)
    for (std::uint64_t r = 0; r < nr; ++r) {
      const bool inc = contains(ranges[r], points[p]);
      const auto h = hits[p * nr + r];
      if (inc && h == 0) rep.missing.emplace_back(p, r);
      if (!inc && h > 0) rep.extra.emplace_back(p, r);
      if (h > 1) ++rep.multiply_covered;
    }
  rep.edge_set_ok = rep.missing.empty() && rep.extra.empty();
  rep.edge_disjoint = rep.multiply_covered == 0;
  return rep;
}

namespace detail {

inline BicliqueCover cover_from_pairs(std::vector<IndexPair> pairs, std::size_t np,
                                      std::size_t nr) {
  std::sort(pairs.begin(), pairs.end());
  BicliqueCover c{np, nr, {}};
  c.parts.reserve(pairs.size());
  for (auto [p, r] : pairs) c.parts.push_back(CoverPart{{p}, {r}});
  return c;
}

struct CellHash {
  std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& k) const {
    return std::hash<std::int64_t>()(k.first * 0x9E3779B97F4A7C15ull ^ k.second);
  }
};

// Incidences between points and planar disks of one common radius. Points
// and centers are bucketed into square cells of side >= radius, so every
// incident pair lies in the same or a neighbouring cell. Tiny radii get
// coarser cells so that cell indices stay within 2^40.
template <class S>
std::vector<IndexPair> grid_disk_pairs(const std::vector<Point<S>>& points,
                                       const std::vector<Range<S>>& ranges) {
  using T = ScalarTraits<S>;
  const S& radius_sq = std::get<Disk<S>>(ranges.front()).radius_sq;
  S extent = 0;
  const auto widen = [&](const Point<S>& q) {
    for (const auto& x : q.coords) {
      if (extent < x) extent = x;
      if (x < -extent) extent = -x;
    }
  };
  for (const auto& p : points) widen(p);
  for (const auto& r : ranges) widen(std::get<Disk<S>>(r).center);
  S side = T::sqrt_upper(radius_sq);
  const S floor_side = extent / S(1099511627776.0);
  if (side < floor_side) side = floor_side;
  std::unordered_map<std::pair<std::int64_t, std::int64_t>, std::vector<std::int32_t>, CellHash>
      cells;
  for (std::size_t r = 0; r < ranges.size(); ++r) {
    const auto& c = std::get<Disk<S>>(ranges[r]).center;
    cells[{T::floor_div(c[0], side), T::floor_div(c[1], side)}].push_back(
        static_cast<std::int32_t>(r));
  }
  std::vector<IndexPair> out;
  for (std::size_t p = 0; p < points.size(); ++p) {
    const auto& pt = points[p];
    if (pt.dim() != 2) throw InputError("dimension mismatch between disk and point");
    const auto cx = T::floor_div(pt[0], side), cy = T::floor_div(pt[1], side);
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = cells.find({cx + dx, cy + dy});
        if (it == cells.end()) continue;
        for (auto r : it->second)
          if (contains(std::get<Disk<S>>(ranges[r]), pt))
            out.emplace_back(static_cast<std::int32_t>(p), r);
      }
  }
  return out;
}

}  // namespace detail

// One part ({p}, {r}) per incident pair, ordered by (p, r). Disks sharing
// one radius use grid bucketing; everything else is enumerated by the
// parallel pair kernel.
template <class S>
BicliqueCover trivial_cover(const std::vector<Point<S>>& points,
                            const std::vector<Range<S>>& ranges) {
  for (const auto& r : ranges) check_range(r);
  bool common_disks = !ranges.empty();
  for (const auto& r : ranges) {
    const auto* d = std::get_if<Disk<S>>(&r);
    if (!d || !(d->radius_sq == std::get_if<Disk<S>>(&ranges.front())->radius_sq)) {
      common_disks = false;
      break;
    }
  }
  if (common_disks && !points.empty())
    return detail::cover_from_pairs(detail::grid_disk_pairs(points, ranges), points.size(),
                                    ranges.size());
  return detail::cover_from_pairs(parallel::incident_pairs(points, ranges), points.size(),
                                  ranges.size());
}

namespace detail {

// Multi-level range tree decomposition. Level k sorts the current point
// subset by coordinate k (ties by index) and distributes each box over the
// canonical nodes of a balanced tree on that order; a box is registered at
// a node when its coordinate-k interval covers the node's whole span.
// Registered sets recurse to level k + 1; the last level emits parts.
template <class S>
class BoxCoverBuilder {
 public:
  BoxCoverBuilder(const std::vector<Point<S>>& points, const std::vector<Box<S>>& boxes,
                  std::size_t dim)
      : points_(points), boxes_(boxes), dim_(dim) {}

  void run(std::size_t level, std::vector<std::int32_t> ids, std::vector<std::int32_t> bxs,
           std::vector<CoverPart>& out) {
    if (ids.empty() || bxs.empty()) return;
    std::sort(ids.begin(), ids.end(), [&](std::int32_t a, std::int32_t b) {
      const S& ca = points_[a][level];
      const S& cb = points_[b][level];
      if (ca < cb) return true;
      if (cb < ca) return false;
      return a < b;
    });
    std::vector<Span> spans;
    spans.reserve(bxs.size());
    for (auto b : bxs) {
      const auto& box = boxes_[b];
      auto lo = std::lower_bound(ids.begin(), ids.end(), box.lo[level],
                                 [&](std::int32_t id, const S& v) { return points_[id][level] < v; });
      auto hi = std::upper_bound(lo, ids.end(), box.hi[level],
                                 [&](const S& v, std::int32_t id) { return v < points_[id][level]; });
      if (lo < hi)
        spans.push_back(Span{b, static_cast<std::size_t>(lo - ids.begin()),
                             static_cast<std::size_t>(hi - ids.begin())});
    }
    distribute(level, ids, 0, ids.size(), std::move(spans), out);
  }

 private:
  struct Span {
    std::int32_t box;
    std::size_t begin, end;
  };

  void distribute(std::size_t level, const std::vector<std::int32_t>& ids, std::size_t lo,
                  std::size_t hi, std::vector<Span> spans, std::vector<CoverPart>& out) {
    if (spans.empty()) return;
    std::vector<std::int32_t> here;
    std::vector<Span> left, right;
    const std::size_t mid = lo + (hi - lo) / 2;
    for (const auto& s : spans) {
      if (s.begin <= lo && hi <= s.end) {
        here.push_back(s.box);
        continue;
      }
      if (s.begin < mid) left.push_back(s);
      if (s.end > mid) right.push_back(s);
    }
    if (!here.empty()) {
      std::vector<std::int32_t> sub(ids.begin() + lo, ids.begin() + hi);
      if (level + 1 == dim_) {
        std::sort(sub.begin(), sub.end());
        std::sort(here.begin(), here.end());
        out.push_back(CoverPart{std::move(sub), std::move(here)});
      } else {
        run(level + 1, std::move(sub), std::move(here), out);
      }
    }
    if (hi - lo > 1) {
      distribute(level, ids, lo, mid, std::move(left), out);
      distribute(level, ids, mid, hi, std::move(right), out);
    }
  }

  const std::vector<Point<S>>& points_;
  const std::vector<Box<S>>& boxes_;
  std::size_t dim_;
};

}  // namespace detail

// Edge-disjoint cover of I(P, R) for axis-parallel boxes in R^d, of size
// O(n log^d n). Coordinate 0 is the outermost tree level.
template <class S>
BicliqueCover box_cover(const std::vector<Point<S>>& points, const std::vector<Box<S>>& boxes) {
  BicliqueCover c{points.size(), boxes.size(), {}};
  if (boxes.empty() || points.empty()) return c;
  const std::size_t dim = boxes.front().dim();
  for (const auto& b : boxes) {
    check_box(b);
    if (b.dim() != dim) throw InputError("boxes of mixed dimension");
  }
  for (const auto& p : points)
    if (p.dim() != dim) throw InputError("dimension mismatch between box and point");
  std::vector<std::int32_t> ids(points.size()), bxs(boxes.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::iota(bxs.begin(), bxs.end(), 0);
  detail::BoxCoverBuilder<S>(points, boxes, dim).run(0, std::move(ids), std::move(bxs), c.parts);
  return c;
}

template <class S>
BicliqueCover box_cover(const std::vector<Point<S>>& points, const std::vector<Range<S>>& ranges) {
  std::vector<Box<S>> boxes;
  boxes.reserve(ranges.size());
  for (const auto& r : ranges) {
    const auto* b = std::get_if<Box<S>>(&r);
    if (!b) throw InputError("box cover requires box ranges only");
    boxes.push_back(*b);
  }
  return box_cover(points, boxes);
}

}  // namespace geomatch

#endif  // GEOMATCH_COVER_HPP_
