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

#ifndef GEOMATCH_ORACLE_HPP_
#define GEOMATCH_ORACLE_HPP_

// Brute-force reference implementations for tests. Nothing here calls into
// the production cover, flow, forest or bottleneck code: incidence tests,
// max-flow and matching are re-derived independently and always run on
// exact rationals.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "geomatch/errors.hpp"
#include "geomatch/geometry.hpp"
#include "geomatch/scalar.hpp"

namespace geomatch::oracle {

struct ExplicitBipartite {
  std::size_t left = 0;
  std::size_t right = 0;
  std::vector<std::pair<std::int32_t, std::int32_t>> edges;  // sorted, distinct
};

inline constexpr std::uint64_t kIncidenceGuard = 10'000'000;

bool point_in_range(const Point<Rational>& p, const Range<Rational>& r);

ExplicitBipartite brute_force_incidences(const std::vector<Point<Rational>>& points,
                                         const std::vector<Range<Rational>>& ranges);

// Max-flow of s -> P -> R -> t with the given supplies and demands, by
// shortest augmenting paths. Requires |P| + |R| <= 400.
Rational reference_max_flow(const ExplicitBipartite& g, const std::vector<Rational>& supplies,
                            const std::vector<Rational>& demands);

// Shortest-path distances from s in the residual graph of s -> P -> R -> t
// under the given flow on P x R edges (feeders and drains carry the
// implied totals). Entries: [0] = s, [1 + p], [1 + |P| + r], [last] = t;
// -1 for unreachable.
std::vector<int> residual_distances(const ExplicitBipartite& g,
                                    const std::vector<Rational>& supplies,
                                    const std::vector<Rational>& demands,
                                    const std::vector<std::pair<std::pair<std::int32_t, std::int32_t>, Rational>>& flow);

std::size_t hopcroft_karp(const ExplicitBipartite& g);

// Edges of the distance graph {pq : d(p, q) <= lambda}. For L2 pass the
// squared threshold.
ExplicitBipartite distance_graph(const std::vector<Point<Rational>>& p,
                                 const std::vector<Point<Rational>>& q, Metric m,
                                 const Rational& lambda_or_sq);

// Minimum lambda with a perfect matching in the distance graph; scans all
// |P| |Q| candidate values in sorted order. L2 returns the squared value.
Rational brute_bottleneck(const std::vector<Point<Rational>>& p,
                          const std::vector<Point<Rational>>& q, Metric m);

// Bottleneck distance of two persistence diagrams (off-diagonal points
// (birth, death)) via the augmented graph with diagonal projections.
Rational brute_pd_bottleneck(const std::vector<std::pair<Rational, Rational>>& x,
                             const std::vector<std::pair<Rational, Rational>>& y);

// Naive red-blue forest: parent pointers, O(n) path walks. Same operation
// set and usage errors as RbForest.
template <class S>
class NaiveRbForest {
 public:
  using NodeId = std::int32_t;
  struct FoundEdge {
    NodeId node;
    S value;
  };

  NodeId maketree(bool blue) {
    parent_.push_back(-1);
    value_.emplace_back(0);
    blue_.push_back(blue);
    return static_cast<NodeId>(parent_.size() - 1);
  }

  NodeId findroot(NodeId v) const {
    check(v);
    while (parent_[v] >= 0) v = parent_[v];
    return v;
  }

  void link(NodeId v, NodeId w, const S& x) {
    check(v);
    check(w);
    if (blue_[v] == blue_[w]) throw UsageError("link: endpoints have the same color");
    if (parent_[v] >= 0) throw UsageError("link: child is not a tree root");
    if (findroot(w) == v) throw UsageError("link: nodes are already in one tree");
    if (ScalarTraits<S>::is_negative(x)) throw UsageError("link: negative edge value");
    parent_[v] = w;
    value_[v] = x;
  }

  void cut(NodeId v) {
    check(v);
    if (parent_[v] < 0) throw UsageError("cut: node is a tree root");
    parent_[v] = -1;
    value_[v] = 0;
  }

  void evert(NodeId v) {
    check(v);
    NodeId prev = -1;
    S carried = 0;
    NodeId u = v;
    while (u >= 0) {
      const NodeId next = parent_[u];
      S val = value_[u];
      parent_[u] = prev;
      value_[u] = carried;
      prev = u;
      carried = val;
      u = next;
    }
  }

  std::optional<FoundEdge> findblue(NodeId v) const {
    check(v);
    std::optional<FoundEdge> best;
    for (NodeId u = v; parent_[u] >= 0; u = parent_[u]) {
      if (!blue_[parent_[u]]) continue;
      if (!best || !(best->value < value_[u])) best = FoundEdge{u, value_[u]};
    }
    return best;
  }

  void add_on_path(NodeId v, bool blue, const S& x) {
    check(v);
    for (NodeId u = v; parent_[u] >= 0; u = parent_[u])
      if (blue_[parent_[u]] == blue && ScalarTraits<S>::is_negative(S(value_[u] + x)))
        throw UsageError("add: edge value would become negative");
    for (NodeId u = v; parent_[u] >= 0; u = parent_[u])
      if (blue_[parent_[u]] == blue) value_[u] += x;
  }

  std::optional<std::pair<NodeId, S>> parent(NodeId v) const {
    check(v);
    if (parent_[v] < 0) return std::nullopt;
    return std::make_pair(parent_[v], value_[v]);
  }

  std::size_t node_count() const { return parent_.size(); }
  bool is_blue(NodeId v) const {
    check(v);
    return blue_[v];
  }

 private:
  void check(NodeId v) const {
    if (v < 0 || static_cast<std::size_t>(v) >= parent_.size())
      throw UsageError("naive forest: unknown node");
  }

  std::vector<NodeId> parent_;
  std::vector<S> value_;
  std::vector<bool> blue_;
};

}  // namespace geomatch::oracle

#endif  // GEOMATCH_ORACLE_HPP_
