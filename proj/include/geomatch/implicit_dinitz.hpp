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

#ifndef GEOMATCH_IMPLICIT_DINITZ_HPP_
#define GEOMATCH_IMPLICIT_DINITZ_HPP_

// Dinitz's algorithm on the four-layer graph s -> P -> R -> t whose
// forward edges exist only implicitly through a biclique cover. Between
// phases only the current flow is stored, and it is pruned to a forest so
// that it has O(n) edges. Works for arbitrary (real or rational) supplies
// and demands.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "geomatch/cover.hpp"
#include "geomatch/errors.hpp"
#include "geomatch/flow.hpp"
#include "geomatch/prune.hpp"

namespace geomatch {

// For every point, the cover parts whose point set contains it.
struct CoverIndex {
  std::vector<std::size_t> start;
  std::vector<std::int32_t> parts;

  explicit CoverIndex(const BicliqueCover& c) : start(c.left_count + 1, 0) {
    for (const auto& part : c.parts)
      for (auto p : part.points) ++start[p + 1];
    for (std::size_t p = 0; p < c.left_count; ++p) start[p + 1] += start[p];
    parts.resize(start.back());
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (std::size_t i = 0; i < c.parts.size(); ++i)
      for (auto p : c.parts[i].points) parts[fill[p]++] = static_cast<std::int32_t>(i);
  }
};

template <class S>
struct PhaseState {
  std::size_t num_points = 0;
  std::size_t num_ranges = 0;
  Matching<S> flow;            // positive amounts, ordered by (p, r)
  std::vector<S> used_supply;  // sum over r of f(p, r)
  std::vector<S> met_demand;   // sum over p of f(p, r)

  static PhaseState zero(std::size_t np, std::size_t nr) {
    return PhaseState{np, nr, {}, std::vector<S>(np, S(0)), std::vector<S>(nr, S(0))};
  }
  S value() const {
    S acc = 0;
    for (const auto& u : used_supply) acc += u;
    return acc;
  }
};

template <class S>
struct LevelGraph {
  struct Feeder {
    std::int32_t point;
    S capacity;  // unused supply
  };
  struct Backward {
    std::int32_t range;
    std::int32_t point;
    S capacity;  // f(point, range)
    int level;   // level of the range
  };
  struct Drain {
    std::int32_t range;
    S capacity;  // unmet demand
  };
  struct ForwardLayer {
    int level;  // odd level of the points; ranges sit at level + 1
    std::vector<CoverPart> parts;
  };

  int level_of_t = -1;
  // levels[j] for j >= 1: points on odd levels, ranges on even levels.
  std::vector<std::vector<std::int32_t>> levels;
  std::vector<Feeder> feeders;
  std::vector<Backward> backward;
  std::vector<Drain> drains;
  std::vector<ForwardLayer> forward;

  std::size_t vertex_count() const {
    std::size_t n = 2;
    for (const auto& l : levels) n += l.size();
    return n;
  }
};

// Scratch sets reused across phases; reset in O(n + |I|).
struct LevelScratch {
  std::vector<int> point_level;
  std::vector<int> range_level;
  std::vector<char> part_used;

  void reset(const BicliqueCover& c) {
    point_level.assign(c.left_count, -1);
    range_level.assign(c.right_count, -1);
    part_used.assign(c.parts.size(), 0);
  }
};

// Builds the level graph of the residual graph of the current flow, with
// forward edges kept as per-layer restricted covers. Returns nullopt when
// t is unreachable, i.e. the flow is maximum.
template <class S>
std::optional<LevelGraph<S>> build_level_graph(const PhaseState<S>& state, const BicliqueCover& c,
                                               const CoverIndex& index,
                                               const SupplyDemand<S>& sd,
                                               LevelScratch& scratch) {
  using T = ScalarTraits<S>;
  scratch.reset(c);
  auto& plevel = scratch.point_level;
  auto& rlevel = scratch.range_level;

  // f(., r) grouped by range.
  std::vector<std::size_t> by_range_start(c.right_count + 1, 0);
  for (const auto& a : state.flow) ++by_range_start[a.range + 1];
  for (std::size_t r = 0; r < c.right_count; ++r) by_range_start[r + 1] += by_range_start[r];
  std::vector<std::size_t> by_range(state.flow.size());
  {
    std::vector<std::size_t> fill(by_range_start.begin(), by_range_start.end() - 1);
    for (std::size_t k = 0; k < state.flow.size(); ++k) by_range[fill[state.flow[k].range]++] = k;
  }

  LevelGraph<S> L;
  L.levels.emplace_back();  // level 0 holds s
  std::vector<std::int32_t> frontier;
  for (std::size_t p = 0; p < c.left_count; ++p) {
    S unused = sd.supplies[p] - state.used_supply[p];
    if (!T::is_positive(unused)) continue;
    plevel[p] = 1;
    frontier.push_back(static_cast<std::int32_t>(p));
    L.feeders.push_back({static_cast<std::int32_t>(p), std::move(unused)});
  }
  int j = 1;
  while (!frontier.empty()) {
    L.levels.push_back(frontier);
    typename LevelGraph<S>::ForwardLayer layer{j, {}};
    std::vector<std::int32_t> next_ranges;
    for (auto p : frontier) {
      for (auto k = index.start[p]; k < index.start[p + 1]; ++k) {
        const auto i = index.parts[k];
        if (scratch.part_used[i]) continue;
        scratch.part_used[i] = 1;
        const auto& part = c.parts[i];
        CoverPart restricted;
        for (auto q : part.points)
          if (plevel[q] == j) restricted.points.push_back(q);
        for (auto r : part.ranges) {
          if (rlevel[r] < 0) {
            rlevel[r] = j + 1;
            next_ranges.push_back(r);
          }
          if (rlevel[r] == j + 1) restricted.ranges.push_back(r);
        }
        if (!restricted.ranges.empty()) layer.parts.push_back(std::move(restricted));
      }
    }
    if (next_ranges.empty()) return std::nullopt;
    L.forward.push_back(std::move(layer));
    L.levels.push_back(next_ranges);

    for (auto r : next_ranges) {
      S unmet = sd.demands[r] - state.met_demand[r];
      if (T::is_positive(unmet)) L.drains.push_back({r, std::move(unmet)});
    }
    if (!L.drains.empty()) {
      L.level_of_t = j + 2;
      return L;
    }

    frontier.clear();
    for (auto r : next_ranges) {
      for (auto k = by_range_start[r]; k < by_range_start[r + 1]; ++k) {
        const auto& a = state.flow[by_range[k]];
        if (!T::is_positive(a.amount)) continue;
        if (plevel[a.point] < 0) {
          plevel[a.point] = j + 2;
          frontier.push_back(a.point);
        }
        if (plevel[a.point] == j + 2) L.backward.push_back({r, a.point, a.amount, j + 1});
      }
    }
    j += 2;
  }
  return std::nullopt;
}

// Explicit graph L': every feeder, backward and drain edge verbatim, and
// each forward part expanded through a fresh middle vertex with
// uncapacitated edges. Edge layout: feeders, backward, drains, then the
// parts of each layer in order (points' edges, then ranges' edges).
template <class S>
struct ExpandedLevelGraph {
  FlowNetwork<S> network;
  std::vector<std::int32_t> point_node;  // -1 when the point is not in L
  std::vector<std::int32_t> range_node;
  std::size_t backward_begin = 0;
  std::size_t drain_begin = 0;
  std::size_t forward_begin = 0;
  std::size_t middle_vertices = 0;
};

template <class S>
ExpandedLevelGraph<S> expand_level_graph(const LevelGraph<S>& L, std::size_t num_points,
                                         std::size_t num_ranges) {
  ExpandedLevelGraph<S> X;
  auto& net = X.network;
  X.point_node.assign(num_points, -1);
  X.range_node.assign(num_ranges, -1);
  net.source = net.add_node(NodeRole::kSource);
  net.sink = net.add_node(NodeRole::kSink);
  for (std::size_t lv = 1; lv < L.levels.size(); ++lv)
    for (auto id : L.levels[lv]) {
      if (lv % 2 == 1) {
        X.point_node[id] = net.add_node(NodeRole::kPoint);
      } else {
        X.range_node[id] = net.add_node(NodeRole::kRange);
      }
    }
  for (const auto& f : L.feeders) net.add_edge(net.source, X.point_node[f.point], f.capacity);
  X.backward_begin = net.edges.size();
  for (const auto& b : L.backward)
    net.add_edge(X.range_node[b.range], X.point_node[b.point], b.capacity);
  X.drain_begin = net.edges.size();
  for (const auto& d : L.drains) net.add_edge(X.range_node[d.range], net.sink, d.capacity);
  X.forward_begin = net.edges.size();
  for (const auto& layer : L.forward)
    for (const auto& part : layer.parts) {
      const auto v = net.add_node(NodeRole::kPart);
      ++X.middle_vertices;
      for (auto p : part.points) net.add_edge(X.point_node[p], v, S(0), true);
      for (auto r : part.ranges) net.add_edge(v, X.range_node[r], S(0), true);
    }
  return X;
}

// Adds g to f: forward flow through each middle vertex is re-paired into
// (p, r) increments, backward flow cancels f(p, r), and supply/demand
// bookkeeping follows the feeder and drain flows.
template <class S>
PhaseState<S> augment_and_project(const PhaseState<S>& f, const Flow<S>& g, const LevelGraph<S>& L,
                                  const ExpandedLevelGraph<S>& X) {
  using T = ScalarTraits<S>;
  PhaseState<S> next = f;
  const auto& flow = g.edge_flow;
  for (std::size_t k = 0; k < L.feeders.size(); ++k)
    next.used_supply[L.feeders[k].point] += flow[k];
  for (std::size_t k = 0; k < L.drains.size(); ++k)
    next.met_demand[L.drains[k].range] += flow[X.drain_begin + k];

  Matching<S> delta = f.flow;
  for (std::size_t k = 0; k < L.backward.size(); ++k) {
    const auto& x = flow[X.backward_begin + k];
    if (T::is_positive(x))
      delta.push_back(Assignment<S>{L.backward[k].point, L.backward[k].range, S(-x)});
  }
  std::size_t e = X.forward_begin;
  for (const auto& layer : L.forward)
    for (const auto& part : layer.parts) {
      std::vector<S> lp, lr;
      S in = 0, out = 0;
      for (std::size_t q = 0; q < part.points.size(); ++q, ++e) {
        lp.push_back(flow[e]);
        in += flow[e];
      }
      for (std::size_t q = 0; q < part.ranges.size(); ++q, ++e) {
        lr.push_back(flow[e]);
        out += flow[e];
      }
      if (!T::equal(in, out)) throw InternalError("projection: middle vertex not conserved");
      pair_biclique_flow(part.points, std::move(lp), part.ranges, std::move(lr), delta);
    }
  Matching<S> merged = merge_assignments(std::move(delta), f.num_points, f.num_ranges);
  next.flow.clear();
  for (auto& a : merged) {
    if (T::is_negative(a.amount)) throw InternalError("projection: flow on a pair became negative");
    if (T::is_positive(a.amount)) next.flow.push_back(std::move(a));
  }
  return next;
}

struct PhaseTrace {
  int level_of_t;
  std::string blocking_value;
  std::size_t support_before_prune;
  std::size_t support_after_prune;
  std::size_t level_graph_vertices;
  std::size_t middle_vertices;
};

template <class S>
struct ImplicitResult {
  Matching<S> matching;
  S value = 0;
  std::vector<PhaseTrace> trace;
};

// Maximum matching by implicit Dinitz with per-phase pruning. Each phase:
// level graph -> expansion -> blocking flow -> projection -> prune.
template <class S>
ImplicitResult<S> max_matching_implicit(const BicliqueCover& c, const SupplyDemand<S>& sd) {
  using T = ScalarTraits<S>;
  sd.validate(c.left_count, c.right_count);
  const CoverIndex index(c);
  LevelScratch scratch;
  auto state = PhaseState<S>::zero(c.left_count, c.right_count);
  ImplicitResult<S> res;
  while (auto L = build_level_graph(state, c, index, sd, scratch)) {
    if (!res.trace.empty() && L->level_of_t <= res.trace.back().level_of_t)
      throw InternalError("level of t did not increase between phases");
    const auto X = expand_level_graph(*L, c.left_count, c.right_count);
    const auto g = blocking_flow(X.network);
    if (!T::is_positive(g.value)) throw InternalError("blocking flow of value zero");
    auto augmented = augment_and_project(state, g, *L, X);
    const std::size_t before = augmented.flow.size();
    augmented.flow = prune_to_forest(augmented.flow, c.left_count, c.right_count);
    state = std::move(augmented);
    res.trace.push_back(PhaseTrace{L->level_of_t, T::to_string(g.value), before, state.flow.size(),
                                   L->vertex_count(), X.middle_vertices});
    if (res.trace.size() > c.left_count + c.right_count)
      throw InternalError("phase count exceeded the number of objects");
  }
  res.value = state.value();
  res.matching = std::move(state.flow);
  return res;
}

inline void write_trace(std::ostream& out, const std::vector<PhaseTrace>& trace) {
  for (std::size_t i = 0; i < trace.size(); ++i)
    out << "phase " << i + 1 << " level_t=" << trace[i].level_of_t
        << " blocking=" << trace[i].blocking_value << " support=" << trace[i].support_after_prune
        << '\n';
}

}  // namespace geomatch

#endif  // GEOMATCH_IMPLICIT_DINITZ_HPP_
