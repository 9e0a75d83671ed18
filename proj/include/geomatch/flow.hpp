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

#ifndef GEOMATCH_FLOW_HPP_
#define GEOMATCH_FLOW_HPP_

// Explicit max-flow route: the five-layer network s -> P -> parts -> R -> t
// built from a biclique cover, Dinitz's algorithm, and recovery of a
// many-to-many matching from the flow.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "geomatch/cover.hpp"
#include "geomatch/errors.hpp"
#include "geomatch/geometry.hpp"
#include "geomatch/scalar.hpp"

namespace geomatch {

template <class S>
struct SupplyDemand {
  std::vector<S> supplies;  // one per point, > 0
  std::vector<S> demands;   // one per range, > 0

  static SupplyDemand unit(std::size_t points, std::size_t ranges) {
    return SupplyDemand{std::vector<S>(points, S(1)), std::vector<S>(ranges, S(1))};
  }

  S total_supply() const {
    S acc = 0;
    for (const auto& s : supplies) acc += s;
    return acc;
  }
  S total_demand() const {
    S acc = 0;
    for (const auto& d : demands) acc += d;
    return acc;
  }
  // mu = min(total supply, total demand).
  S target() const {
    S a = total_supply(), b = total_demand();
    return b < a ? b : a;
  }
  bool integral() const {
    for (const auto& s : supplies)
      if (!ScalarTraits<S>::is_integral(s)) return false;
    for (const auto& d : demands)
      if (!ScalarTraits<S>::is_integral(d)) return false;
    return true;
  }
  void validate(std::size_t points, std::size_t ranges) const {
    if (supplies.size() != points || demands.size() != ranges)
      throw InputError("supply/demand vector sizes do not match the instance");
    for (const auto& s : supplies)
      if (!(s > 0)) throw InputError("supplies must be strictly positive");
    for (const auto& d : demands)
      if (!(d > 0)) throw InputError("demands must be strictly positive");
  }
};

template <class S>
struct Assignment {
  std::int32_t point;
  std::int32_t range;
  S amount;
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

// Triples (p, r, a_pr), at most one per pair, ordered by (p, r).
template <class S>
using Matching = std::vector<Assignment<S>>;

template <class S>
S matching_value(const Matching<S>& m) {
  S acc = 0;
  for (const auto& a : m) acc += a.amount;
  return acc;
}

template <class S>
bool validate_matching(const Matching<S>& m, const std::vector<Point<S>>& points,
                       const std::vector<Range<S>>& ranges, const SupplyDemand<S>& sd) {
  using T = ScalarTraits<S>;
  std::vector<S> used(points.size(), S(0)), met(ranges.size(), S(0));
  std::vector<std::pair<std::int32_t, std::int32_t>> keys;
  keys.reserve(m.size());
  for (const auto& a : m) {
    if (a.point < 0 || static_cast<std::size_t>(a.point) >= points.size() || a.range < 0 ||
        static_cast<std::size_t>(a.range) >= ranges.size())
      return false;
    if (!T::is_positive(a.amount)) return false;
    if (!contains(ranges[a.range], points[a.point])) return false;
    used[a.point] += a.amount;
    met[a.range] += a.amount;
    keys.emplace_back(a.point, a.range);
  }
  std::sort(keys.begin(), keys.end());
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) return false;
  for (std::size_t p = 0; p < points.size(); ++p)
    if (T::is_positive(S(used[p] - sd.supplies[p]))) return false;
  for (std::size_t r = 0; r < ranges.size(); ++r)
    if (T::is_positive(S(met[r] - sd.demands[r]))) return false;
  return true;
}

enum class NodeRole : std::uint8_t { kSource, kSink, kPoint, kPart, kRange };

template <class S>
struct FlowEdge {
  std::int32_t from;
  std::int32_t to;
  S capacity;             // ignored when infinite
  bool infinite = false;
};

template <class S>
struct FlowNetwork {
  std::vector<NodeRole> roles;
  std::vector<FlowEdge<S>> edges;
  std::int32_t source = 0;
  std::int32_t sink = 1;

  std::size_t node_count() const { return roles.size(); }
  std::int32_t add_node(NodeRole role) {
    roles.push_back(role);
    return static_cast<std::int32_t>(roles.size() - 1);
  }
  std::size_t add_edge(std::int32_t from, std::int32_t to, S cap, bool infinite = false) {
    edges.push_back(FlowEdge<S>{from, to, std::move(cap), infinite});
    return edges.size() - 1;
  }
};

template <class S>
struct Flow {
  std::vector<S> edge_flow;  // parallel to FlowNetwork::edges
  S value = 0;
};

namespace detail {

// Residual-graph Dinitz solver. Arc 2e is edge e, arc 2e+1 its reversal.
template <class S>
class Dinitz {
 public:
  explicit Dinitz(const FlowNetwork<S>& net)
      : net_(net), n_(net.node_count()), flow_(2 * net.edges.size(), S(0)) {
    start_.assign(n_ + 1, 0);
    for (const auto& e : net.edges) {
      ++start_[e.from + 1];
      ++start_[e.to + 1];
    }
    for (std::size_t v = 0; v < n_; ++v) start_[v + 1] += start_[v];
    arcs_.resize(start_[n_]);
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t e = 0; e < net.edges.size(); ++e) {
      arcs_[fill[net.edges[e].from]++] = static_cast<std::int32_t>(2 * e);
      arcs_[fill[net.edges[e].to]++] = static_cast<std::int32_t>(2 * e + 1);
    }
  }

  // Levels by BFS over arcs with positive residual; false when t unreachable.
  bool build_levels() {
    level_.assign(n_, -1);
    std::vector<std::int32_t> queue{net_.source};
    level_[net_.source] = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const auto u = queue[qi];
      for (auto k = start_[u]; k < start_[u + 1]; ++k) {
        const auto a = arcs_[k];
        const auto v = head(a);
        if (level_[v] < 0 && has_residual(a)) {
          level_[v] = level_[u] + 1;
          queue.push_back(v);
        }
      }
    }
    return level_[net_.sink] >= 0;
  }

  // Blocking flow on the current level graph, by repeated DFS with
  // current-arc pointers; dead vertices are retired by clearing their level.
  S blocking_phase() {
    S pushed = 0;
    std::vector<std::size_t> cur(start_.begin(), start_.end() - 1);
    std::vector<std::int32_t> path;
    std::int32_t u = net_.source;
    while (true) {
      if (u == net_.sink) {
        bool bounded = false;
        S delta = 0;
        for (auto a : path) {
          if (is_infinite(a)) continue;
          S r = residual(a);
          if (!bounded || r < delta) delta = r;
          bounded = true;
        }
        if (!bounded) throw InternalError("unbounded s-t path in flow network");
        std::size_t cut = path.size();
        for (std::size_t i = 0; i < path.size(); ++i) {
          const auto a = path[i];
          flow_[a] += delta;
          flow_[a ^ 1] -= delta;
          if (cut == path.size() && !has_residual(a)) cut = i;
        }
        pushed += delta;
        path.resize(cut);
        u = path.empty() ? net_.source : head(path.back());
        continue;
      }
      bool advanced = false;
      for (; cur[u] < start_[u + 1]; ++cur[u]) {
        const auto a = arcs_[cur[u]];
        const auto v = head(a);
        if (level_[v] == level_[u] + 1 && has_residual(a)) {
          path.push_back(a);
          u = v;
          advanced = true;
          break;
        }
      }
      if (advanced) continue;
      if (u == net_.source) break;
      level_[u] = -1;
      path.pop_back();
      u = path.empty() ? net_.source : head(path.back());
      ++cur[u];
    }
    return pushed;
  }

  Flow<S> result() const {
    Flow<S> f;
    f.edge_flow.reserve(net_.edges.size());
    for (std::size_t e = 0; e < net_.edges.size(); ++e) f.edge_flow.push_back(flow_[2 * e]);
    for (std::size_t e = 0; e < net_.edges.size(); ++e)
      if (net_.edges[e].from == net_.source) f.value += flow_[2 * e];
    for (std::size_t e = 0; e < net_.edges.size(); ++e)
      if (net_.edges[e].to == net_.source) f.value -= flow_[2 * e];
    return f;
  }

 private:
  std::int32_t head(std::int32_t a) const {
    const auto& e = net_.edges[a >> 1];
    return (a & 1) ? e.from : e.to;
  }
  bool is_infinite(std::int32_t a) const { return !(a & 1) && net_.edges[a >> 1].infinite; }
  S residual(std::int32_t a) const {
    if (a & 1) return flow_[a ^ 1];
    return S(net_.edges[a >> 1].capacity - flow_[a]);
  }
  bool has_residual(std::int32_t a) const {
    return is_infinite(a) || ScalarTraits<S>::is_positive(residual(a));
  }

  const FlowNetwork<S>& net_;
  std::size_t n_;
  std::vector<S> flow_;
  std::vector<std::size_t> start_;
  std::vector<std::int32_t> arcs_;
  std::vector<int> level_;
};

}  // namespace detail

// Maximum s-t flow. Integral capacities give an integral flow.
template <class S>
Flow<S> max_flow_dinitz(const FlowNetwork<S>& net, std::size_t* phases = nullptr) {
  detail::Dinitz<S> solver(net);
  std::size_t count = 0;
  while (solver.build_levels()) {
    solver.blocking_phase();
    ++count;
  }
  if (phases) *phases = count;
  return solver.result();
}

// One Dinitz phase from the zero flow. On a leveled DAG (every edge goes
// from level j to j + 1) this is a blocking flow of the whole graph.
template <class S>
Flow<S> blocking_flow(const FlowNetwork<S>& net) {
  detail::Dinitz<S> solver(net);
  if (solver.build_levels()) solver.blocking_phase();
  return solver.result();
}

// Capacity and conservation check.
template <class S>
bool is_valid_flow(const FlowNetwork<S>& net, const Flow<S>& f) {
  using T = ScalarTraits<S>;
  if (f.edge_flow.size() != net.edges.size()) return false;
  std::vector<S> balance(net.node_count(), S(0));
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    const auto& x = f.edge_flow[e];
    if (T::is_negative(x)) return false;
    if (!net.edges[e].infinite && T::is_positive(S(x - net.edges[e].capacity))) return false;
    balance[net.edges[e].from] -= x;
    balance[net.edges[e].to] += x;
  }
  for (std::size_t v = 0; v < net.node_count(); ++v) {
    if (static_cast<std::int32_t>(v) == net.source || static_cast<std::int32_t>(v) == net.sink)
      continue;
    if (!T::is_zero(balance[v])) return false;
  }
  return T::equal(S(-balance[net.source]), f.value);
}

// True when t is still reachable from s in the residual graph of f.
template <class S>
bool residual_reaches_sink(const FlowNetwork<S>& net, const Flow<S>& f) {
  using T = ScalarTraits<S>;
  std::vector<std::vector<std::int32_t>> adj(net.node_count());
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    const auto& ed = net.edges[e];
    if (ed.infinite || T::is_positive(S(ed.capacity - f.edge_flow[e]))) adj[ed.from].push_back(ed.to);
    if (T::is_positive(f.edge_flow[e])) adj[ed.to].push_back(ed.from);
  }
  std::vector<char> seen(net.node_count(), 0);
  std::vector<std::int32_t> stack{net.source};
  seen[net.source] = 1;
  while (!stack.empty()) {
    auto u = stack.back();
    stack.pop_back();
    if (u == net.sink) return true;
    for (auto v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
  }
  return false;
}

// The five-layer network of a cover. Node layout: s = 0, t = 1, points,
// ranges, one vertex per part. Edge layout: feeders (s, p) in point order,
// drains (r, t) in range order, then per part its (p, v_i) edges followed by
// its (v_i, r) edges. Part edges are uncapacitated.
template <class S>
struct CoverNetwork {
  FlowNetwork<S> network;
  std::size_t num_points = 0;
  std::size_t num_ranges = 0;
  std::vector<std::size_t> part_edge_begin;  // first (p, v_i) edge of part i

  std::int32_t point_node(std::size_t p) const { return static_cast<std::int32_t>(2 + p); }
  std::int32_t range_node(std::size_t r) const {
    return static_cast<std::int32_t>(2 + num_points + r);
  }
  std::int32_t part_node(std::size_t i) const {
    return static_cast<std::int32_t>(2 + num_points + num_ranges + i);
  }
  std::size_t feeder_edge(std::size_t p) const { return p; }
  std::size_t drain_edge(std::size_t r) const { return num_points + r; }
};

template <class S>
CoverNetwork<S> build_network(const BicliqueCover& c, const SupplyDemand<S>& sd) {
  sd.validate(c.left_count, c.right_count);
  CoverNetwork<S> out;
  out.num_points = c.left_count;
  out.num_ranges = c.right_count;
  auto& net = out.network;
  net.roles.reserve(2 + c.left_count + c.right_count + c.parts.size());
  net.source = net.add_node(NodeRole::kSource);
  net.sink = net.add_node(NodeRole::kSink);
  for (std::size_t p = 0; p < c.left_count; ++p) net.add_node(NodeRole::kPoint);
  for (std::size_t r = 0; r < c.right_count; ++r) net.add_node(NodeRole::kRange);
  for (std::size_t i = 0; i < c.parts.size(); ++i) net.add_node(NodeRole::kPart);
  net.edges.reserve(c.left_count + c.right_count + cover_size(c));
  for (std::size_t p = 0; p < c.left_count; ++p)
    net.add_edge(net.source, out.point_node(p), sd.supplies[p]);
  for (std::size_t r = 0; r < c.right_count; ++r)
    net.add_edge(out.range_node(r), net.sink, sd.demands[r]);
  out.part_edge_begin.reserve(c.parts.size());
  for (std::size_t i = 0; i < c.parts.size(); ++i) {
    out.part_edge_begin.push_back(net.edges.size());
    const auto v = out.part_node(i);
    for (auto p : c.parts[i].points) {
      if (p < 0 || static_cast<std::size_t>(p) >= c.left_count)
        throw InputError("cover point index out of bounds");
      net.add_edge(out.point_node(p), v, S(0), true);
    }
    for (auto r : c.parts[i].ranges) {
      if (r < 0 || static_cast<std::size_t>(r) >= c.right_count)
        throw InputError("cover range index out of bounds");
      net.add_edge(v, out.range_node(r), S(0), true);
    }
  }
  return out;
}

// Splits the flow through one biclique into (p, r, amount) triples:
// repeatedly take the lowest-index point and range with positive load and
// move min(load(p), load(r)). Emits at most |P_i| + |R_i| - 1 triples.
template <class S>
void pair_biclique_flow(const std::vector<std::int32_t>& points, std::vector<S> point_load,
                        const std::vector<std::int32_t>& ranges, std::vector<S> range_load,
                        Matching<S>& out) {
  using T = ScalarTraits<S>;
  std::size_t i = 0, j = 0;
  while (true) {
    while (i < points.size() && !T::is_positive(point_load[i])) ++i;
    while (j < ranges.size() && !T::is_positive(range_load[j])) ++j;
    if (i == points.size() || j == ranges.size()) break;
    S delta = range_load[j] < point_load[i] ? range_load[j] : point_load[i];
    point_load[i] -= delta;
    range_load[j] -= delta;
    out.push_back(Assignment<S>{points[i], ranges[j], std::move(delta)});
  }
}

// Sorts triples by (p, r) with two stable bucket passes and sums duplicates.
template <class S>
Matching<S> merge_assignments(Matching<S> items, std::size_t num_points, std::size_t num_ranges) {
  auto bucket = [](Matching<S>& v, std::size_t buckets, auto key) {
    std::vector<std::size_t> start(buckets + 1, 0);
    for (const auto& a : v) ++start[key(a) + 1];
    for (std::size_t b = 0; b < buckets; ++b) start[b + 1] += start[b];
    Matching<S> sorted(v.size());
    for (auto& a : v) sorted[start[key(a)]++] = std::move(a);
    v.swap(sorted);
  };
  bucket(items, num_ranges, [](const Assignment<S>& a) { return static_cast<std::size_t>(a.range); });
  bucket(items, num_points, [](const Assignment<S>& a) { return static_cast<std::size_t>(a.point); });
  Matching<S> out;
  out.reserve(items.size());
  for (auto& a : items) {
    if (!out.empty() && out.back().point == a.point && out.back().range == a.range) {
      out.back().amount += a.amount;
    } else {
      out.push_back(std::move(a));
    }
  }
  return out;
}

// Recovers a matching of the flow's value from a flow on build_network's
// output. Throws InternalError when a part vertex violates conservation.
template <class S>
Matching<S> flow_to_matching(const Flow<S>& f, const CoverNetwork<S>& cn, const BicliqueCover& c) {
  using T = ScalarTraits<S>;
  if (f.edge_flow.size() != cn.network.edges.size() || cn.part_edge_begin.size() != c.parts.size())
    throw InternalError("flow does not belong to this network");
  Matching<S> raw;
  for (std::size_t i = 0; i < c.parts.size(); ++i) {
    const auto& part = c.parts[i];
    std::size_t e = cn.part_edge_begin[i];
    std::vector<S> lp, lr;
    S in = 0, out = 0;
    lp.reserve(part.points.size());
    lr.reserve(part.ranges.size());
    for (std::size_t k = 0; k < part.points.size(); ++k, ++e) {
      lp.push_back(f.edge_flow[e]);
      in += f.edge_flow[e];
    }
    for (std::size_t k = 0; k < part.ranges.size(); ++k, ++e) {
      lr.push_back(f.edge_flow[e]);
      out += f.edge_flow[e];
    }
    if (!T::equal(in, out))
      throw InternalError("flow conservation violated at part vertex " + std::to_string(i));
    pair_biclique_flow(part.points, std::move(lp), part.ranges, std::move(lr), raw);
  }
  return merge_assignments(std::move(raw), c.left_count, c.right_count);
}

// Integral route: cover -> network -> Dinitz -> matching.
template <class S>
struct FlowMatchResult {
  Matching<S> matching;
  S flow_value = 0;
  std::size_t phases = 0;
};

template <class S>
FlowMatchResult<S> max_matching_flow(const BicliqueCover& c, const SupplyDemand<S>& sd) {
  auto cn = build_network(c, sd);
  FlowMatchResult<S> res;
  auto f = max_flow_dinitz(cn.network, &res.phases);
  res.flow_value = f.value;
  res.matching = flow_to_matching(f, cn, c);
  return res;
}

}  // namespace geomatch

#endif  // GEOMATCH_FLOW_HPP_
