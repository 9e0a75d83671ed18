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

#ifndef GEOMATCH_BOTTLENECK_HPP_
#define GEOMATCH_BOTTLENECK_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "geomatch/cover.hpp"
#include "geomatch/errors.hpp"
#include "geomatch/flow.hpp"
#include "geomatch/geometry.hpp"
#include "geomatch/kernels.hpp"

namespace geomatch {

inline constexpr std::uint64_t kMaterializeLimit = 10'000'000;
inline constexpr std::size_t kParallelRows = 4096;

template <class S>
std::uint64_t count_entries(const DifferenceMatrix<S>& m, const S& v, bool strict) {
  if (m.rows.size() >= kParallelRows) return parallel::count_at_most(m, v, strict);
  return serial::count_at_most(m, v, strict);
}

// The four matrices D_x, D̄_x, D_y, D̄_y over sorted coordinates. Owns the
// coordinate arrays; the matrices view them.
template <class S>
class SortedMatrices {
 public:
  SortedMatrices(const std::vector<Point<S>>& p, const std::vector<Point<S>>& q) {
    for (const auto& a : p)
      if (a.dim() != 2) throw InputError("sorted matrices require planar points");
    for (const auto& b : q)
      if (b.dim() != 2) throw InputError("sorted matrices require planar points");
    for (int axis = 0; axis < 2; ++axis) {
      auto& pc = coords_[axis][0];
      auto& qc = coords_[axis][1];
      for (const auto& a : p) pc.push_back(a[axis]);
      for (const auto& b : q) qc.push_back(b[axis]);
      std::sort(pc.begin(), pc.end());
      std::sort(qc.begin(), qc.end());
    }
    for (int axis = 0; axis < 2; ++axis) {
      mats_.push_back({coords_[axis][0], coords_[axis][1]});
      mats_.push_back({coords_[axis][1], coords_[axis][0]});
    }
  }
  SortedMatrices(const SortedMatrices&) = delete;
  SortedMatrices& operator=(const SortedMatrices&) = delete;

  // Order: D_x, D̄_x, D_y, D̄_y.
  const std::vector<DifferenceMatrix<S>>& matrices() const { return mats_; }

  std::uint64_t total() const {
    std::uint64_t n = 0;
    for (const auto& m : mats_) n += m.size();
    return n;
  }
  std::uint64_t count(const S& v, bool strict) const {
    std::uint64_t n = 0;
    for (const auto& m : mats_) n += count_entries(m, v, strict);
    return n;
  }

 private:
  std::vector<S> coords_[2][2];
  std::vector<DifferenceMatrix<S>> mats_;
};

// kth smallest (1-based) entry of the union of the matrices. Random pivots
// are drawn from the entries strictly between the current bounds; each
// round costs one rank count per matrix.
template <class S>
S select_kth(const std::vector<DifferenceMatrix<S>>& mats, std::uint64_t k, std::mt19937_64& rng) {
  std::uint64_t total = 0;
  for (const auto& m : mats) total += m.size();
  if (k < 1 || k > total) throw UsageError("select_kth: rank out of range");
  std::optional<S> lo, hi;  // exclusive bounds
  std::vector<std::size_t> a, b;
  for (;;) {
    // Row i's window is the column range [a, b).
    std::uint64_t window = 0;
    a.clear();
    b.clear();
    for (const auto& m : mats)
      for (std::size_t i = 0; i < m.rows.size(); ++i) {
        a.push_back(hi ? m.first_at_most(i, *hi, true) : 0);
        b.push_back(lo ? m.first_at_most(i, *lo, false) : m.cols.size());
        window += b.back() - a.back();
      }
    if (window == 0) throw InternalError("select_kth: empty window");
    std::uint64_t t = std::uniform_int_distribution<std::uint64_t>(0, window - 1)(rng);
    S pivot;
    std::size_t row = 0;
    for (const auto& m : mats) {
      bool found = false;
      for (std::size_t i = 0; i < m.rows.size(); ++i, ++row) {
        const std::uint64_t w = b[row] - a[row];
        if (t < w) {
          pivot = m.at(i, a[row] + t);
          found = true;
          row += m.rows.size() - i;
          break;
        }
        t -= w;
      }
      if (found) break;
    }
    std::uint64_t lt = 0, le = 0;
    for (const auto& m : mats) {
      lt += count_entries(m, pivot, true);
      le += count_entries(m, pivot, false);
    }
    if (lt < k && k <= le) return pivot;
    if (k <= lt) {
      hi = pivot;
    } else {
      lo = pivot;
    }
  }
}

template <class S>
struct Decision {
  bool feasible = false;
  Matching<S> matching;
  S value = 0;
};

namespace detail {

template <class S>
BicliqueCover ball_cover(const std::vector<Point<S>>& p, const std::vector<Point<S>>& q, Metric m,
                         const S& key) {
  if (m == Metric::kL2) {
    std::vector<Range<S>> disks;
    for (const auto& c : q) disks.push_back(Disk<S>{c, key});
    return trivial_cover(p, disks);
  }
  std::vector<Box<S>> boxes;
  if (m == Metric::kL1) {
    std::vector<Point<S>> rp;
    for (const auto& a : p) rp.push_back(rotate45(a));
    for (const auto& c : q) boxes.push_back(linf_ball(rotate45(c), key));
    return box_cover(rp, boxes);
  }
  for (const auto& c : q) boxes.push_back(linf_ball(c, key));
  return box_cover(p, boxes);
}

// key is lambda for L1/Linf and lambda squared for L2.
template <class S>
Decision<S> decide_key(const std::vector<Point<S>>& p, const std::vector<Point<S>>& q, Metric m,
                       const S& key, const SupplyDemand<S>& sd) {
  Decision<S> d;
  if (key < 0) return d;
  auto res = max_matching_flow(ball_cover(p, q, m, key), sd);
  d.value = res.flow_value;
  d.feasible = ScalarTraits<S>::equal(res.flow_value, sd.target());
  d.matching = std::move(res.matching);
  return d;
}

template <class S>
SupplyDemand<S> perfect_sd(const std::vector<Point<S>>& p, const std::vector<Point<S>>& q) {
  if (p.size() != q.size()) throw InputError("point sets must have equal size");
  return SupplyDemand<S>::unit(p.size(), q.size());
}

}  // namespace detail

// Does the graph {pq : d(p, q) <= lambda} admit a perfect matching?
template <class S>
Decision<S> decide(const std::vector<Point<S>>& p, const std::vector<Point<S>>& q, Metric m,
                   const S& lambda) {
  auto sd = detail::perfect_sd(p, q);
  if (lambda < 0) return {};
  return detail::decide_key(p, q, m, m == Metric::kL2 ? S(lambda * lambda) : lambda, sd);
}

// Many-to-many variant: feasible when the matching value reaches
// min(total supply, total demand).
template <class S>
Decision<S> decide(const std::vector<Point<S>>& p, const std::vector<Point<S>>& q, Metric m,
                   const S& lambda, const SupplyDemand<S>& sd) {
  sd.validate(p.size(), q.size());
  if (lambda < 0) return {};
  return detail::decide_key(p, q, m, m == Metric::kL2 ? S(lambda * lambda) : lambda, sd);
}

template <class S>
struct BottleneckResult {
  S value = 0;           // lambda*, or lambda* squared for L2
  bool squared = false;  // true for L2
  double lambda = 0;     // lambda* as a double
  Matching<S> matching;  // witness at lambda*
  std::size_t decisions = 0;
};

namespace detail {

// Smallest feasible entry among the matrices, by bisection over ranks of
// the nonnegative entries. The largest entry bounds every distance, so it
// is always feasible.
template <class S, class Decide>
S search_matrices(const SortedMatrices<S>& sm, std::mt19937_64& rng, Decide&& feasible,
                  std::size_t& decisions) {
  const auto& mats = sm.matrices();
  std::uint64_t lo = sm.count(S(0), true) + 1, hi = sm.total();
  if (lo > hi) throw InternalError("no nonnegative candidate distance");
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    S v = select_kth(mats, mid, rng);
    ++decisions;
    if (feasible(v)) {
      hi = std::max(lo, sm.count(v, true) + 1);
    } else {
      lo = sm.count(v, false) + 1;
    }
  }
  return select_kth(mats, lo, rng);
}

template <class S>
S sq_value(const std::vector<Point<S>>& a, const std::vector<Point<S>>& b, std::uint64_t idx) {
  return squared_distance(a[idx / b.size()], b[idx % b.size()]);
}

// Smallest feasible squared pairwise distance.
template <class S, class Decide>
S search_pairwise(const std::vector<Point<S>>& p, const std::vector<Point<S>>& q,
                  std::mt19937_64& rng, Decide&& feasible, std::size_t& decisions) {
  const std::uint64_t total = static_cast<std::uint64_t>(p.size()) * q.size();
  if (total <= kMaterializeLimit) {
    auto all = total >= 65536 ? parallel::pairwise_sq_distances(p, q)
                              : serial::pairwise_sq_distances(p, q);
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    std::size_t lo = 0, hi = all.size() - 1;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      ++decisions;
      if (feasible(all[mid])) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    return all[lo];
  }
  // Window (lo, hi]: hi is known feasible, lo known infeasible.
  std::optional<S> lo;
  S hi = sq_value(p, q, 0);
  for (std::uint64_t i = 1; i < total; ++i) hi = std::max(hi, sq_value(p, q, i));
  for (;;) {
    const std::uint64_t below_hi = parallel::count_pairs_at_most(p, q, hi, true);
    const std::uint64_t at_lo = lo ? parallel::count_pairs_at_most(p, q, *lo, false) : 0;
    if (below_hi <= at_lo) return hi;
    std::uint64_t t =
        std::uniform_int_distribution<std::uint64_t>(0, below_hi - at_lo - 1)(rng);
    S pivot = hi;
    for (std::uint64_t i = 0; i < total; ++i) {
      S v = sq_value(p, q, i);
      if (!(v < hi) || (lo && !(*lo < v))) continue;
      if (t-- == 0) {
        pivot = v;
        break;
      }
    }
    ++decisions;
    if (feasible(pivot)) {
      hi = pivot;
    } else {
      lo = pivot;
    }
  }
}

template <class S>
BottleneckResult<S> search(const std::vector<Point<S>>& p, const std::vector<Point<S>>& q,
                           Metric m, const SupplyDemand<S>& sd, std::uint64_t seed) {
  BottleneckResult<S> res;
  res.squared = m == Metric::kL2;
  if (p.empty() || q.empty()) return res;
  std::mt19937_64 rng(seed);
  auto feasible = [&](const S& key) { return decide_key(p, q, m, key, sd).feasible; };
  if (m == Metric::kL2) {
    res.value = search_pairwise(p, q, rng, feasible, res.decisions);
    res.lambda = std::sqrt(ScalarTraits<S>::to_double(res.value));
  } else {
    std::vector<Point<S>> rp = p, rq = q;
    if (m == Metric::kL1) {
      for (auto& a : rp) a = rotate45(a);
      for (auto& b : rq) b = rotate45(b);
    }
    SortedMatrices<S> sm(rp, rq);
    res.value = detail::search_matrices(sm, rng, feasible, res.decisions);
    res.lambda = ScalarTraits<S>::to_double(res.value);
  }
  auto witness = decide_key(p, q, m, res.value, sd);
  if (!witness.feasible) throw InternalError("bottleneck value is not feasible");
  res.matching = std::move(witness.matching);
  return res;
}

}  // namespace detail

// Bottleneck distance between equal-size point sets: the least lambda for
// which {pq : d(p, q) <= lambda} has a perfect matching, with a witness.
template <class S>
BottleneckResult<S> bottleneck_search(const std::vector<Point<S>>& p,
                                      const std::vector<Point<S>>& q, Metric m,
                                      std::uint64_t seed = 0) {
  return detail::search(p, q, m, detail::perfect_sd(p, q), seed);
}

template <class S>
BottleneckResult<S> bottleneck_search(const std::vector<Point<S>>& p,
                                      const std::vector<Point<S>>& q, Metric m,
                                      const SupplyDemand<S>& sd, std::uint64_t seed = 0) {
  sd.validate(p.size(), q.size());
  return detail::search(p, q, m, sd, seed);
}

template <class S>
struct DiagramPoint {
  S birth, death;
};

template <class S>
using PersistenceDiagram = std::vector<DiagramPoint<S>>;

template <class S>
void check_diagram(const PersistenceDiagram<S>& x) {
  for (const auto& a : x)
    if (!(a.birth < a.death)) throw InputError("diagram point must satisfy birth < death");
}

template <class S>
struct PdInstance {
  std::vector<Point<S>> p;  // X0 then Y0'
  std::vector<Point<S>> q;  // Y0 then X0'
  std::size_t nx = 0, ny = 0;
};

template <class S>
PdInstance<S> pd_instance(const PersistenceDiagram<S>& x, const PersistenceDiagram<S>& y) {
  PdInstance<S> inst{{}, {}, x.size(), y.size()};
  auto proj = [](const DiagramPoint<S>& a) {
    S mid = (a.birth + a.death) / 2;
    return Point<S>{mid, mid};
  };
  for (const auto& a : x) inst.p.push_back(Point<S>{a.birth, a.death});
  for (const auto& b : y) inst.p.push_back(proj(b));
  for (const auto& b : y) inst.q.push_back(Point<S>{b.birth, b.death});
  for (const auto& a : x) inst.q.push_back(proj(a));
  return inst;
}

// Cover of the decision graph at lambda: L-infinity incidences with
// p in X0 or q in Y0, plus one complete part (Y0', X0').
template <class S>
BicliqueCover pd_cover(const PdInstance<S>& inst, const S& lambda) {
  const std::size_t nx = inst.nx, ny = inst.ny, n = nx + ny;
  BicliqueCover c{n, n, {}};
  std::vector<Box<S>> all_boxes, y_boxes;
  for (const auto& b : inst.q) all_boxes.push_back(linf_ball(b, lambda));
  y_boxes.assign(all_boxes.begin(), all_boxes.begin() + ny);

  std::vector<Point<S>> xs(inst.p.begin(), inst.p.begin() + nx);
  std::vector<Point<S>> yp(inst.p.begin() + nx, inst.p.end());
  for (auto& part : box_cover(xs, all_boxes).parts) c.parts.push_back(std::move(part));
  for (auto& part : box_cover(yp, y_boxes).parts) {
    for (auto& i : part.points) i += static_cast<std::int32_t>(nx);
    c.parts.push_back(std::move(part));
  }
  if (nx > 0 && ny > 0) {
    CoverPart complete;
    for (std::size_t i = 0; i < ny; ++i) complete.points.push_back(static_cast<std::int32_t>(nx + i));
    for (std::size_t i = 0; i < nx; ++i) complete.ranges.push_back(static_cast<std::int32_t>(ny + i));
    c.parts.push_back(std::move(complete));
  }
  return c;
}

template <class S>
bool pd_decide(const PdInstance<S>& inst, const S& lambda) {
  if (lambda < 0) return false;
  const std::size_t n = inst.p.size();
  auto res = max_matching_flow(pd_cover(inst, lambda), SupplyDemand<S>::unit(n, n));
  return ScalarTraits<S>::equal(res.flow_value, S(static_cast<long>(n)));
}

template <class S>
struct PdResult {
  S value = 0;
  std::size_t decisions = 0;
};

// Bottleneck distance W_inf between two persistence diagrams.
template <class S>
PdResult<S> pd_bottleneck(const PersistenceDiagram<S>& x, const PersistenceDiagram<S>& y,
                          std::uint64_t seed = 0) {
  check_diagram(x);
  check_diagram(y);
  PdResult<S> res;
  if (x.empty() && y.empty()) return res;
  const auto inst = pd_instance(x, y);
  SortedMatrices<S> sm(inst.p, inst.q);
  std::mt19937_64 rng(seed);
  res.value = detail::search_matrices(
      sm, rng, [&](const S& lambda) { return pd_decide(inst, lambda); }, res.decisions);
  return res;
}

}  // namespace geomatch

#endif  // GEOMATCH_BOTTLENECK_HPP_
