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

#include "doctest.h"
#include "geomatch/errors.hpp"
#include "geomatch/flow.hpp"
#include "geomatch/oracle.hpp"
#include "support.hpp"

using namespace geomatch;
using Q = Rational;
namespace ts = testing_support;

namespace {

Matching<Q> pair_one(std::vector<Q> lp, std::vector<Q> lr) {
  std::vector<std::int32_t> pts(lp.size()), rng(lr.size());
  std::iota(pts.begin(), pts.end(), 0);
  std::iota(rng.begin(), rng.end(), 0);
  Matching<Q> out;
  pair_biclique_flow(pts, std::move(lp), rng, std::move(lr), out);
  return out;
}

bool same(const Assignment<Q>& a, std::int32_t p, std::int32_t r, const Q& x) {
  return a.point == p && a.range == r && a.amount == x;
}

}  // namespace

TEST_CASE("network shape follows the cover") {
  BicliqueCover c{6, 5, {{{0, 1, 2}, {0, 1}}, {{2, 3}, {2, 3}}, {{3, 4, 5}, {3, 4}}}};
  auto cn = build_network(c, SupplyDemand<Q>::unit(6, 5));
  CHECK(cn.network.node_count() == 16);
  CHECK(cn.network.edges.size() == 6 + 5 + 14);
  auto empty = build_network(BicliqueCover{3, 2, {}}, SupplyDemand<Q>::unit(3, 2));
  CHECK(empty.network.node_count() == 7);
  CHECK(max_flow_dinitz(empty.network).value == 0);
  auto one = build_network(BicliqueCover{1, 1, {{{0}, {0}}}}, SupplyDemand<Q>::unit(1, 1));
  CHECK(max_flow_dinitz(one.network).value == 1);
}

TEST_CASE("small max-flow values") {
  BicliqueCover both{2, 1, {{{0, 1}, {0}}}};
  CHECK(max_matching_flow(both, SupplyDemand<Q>::unit(2, 1)).flow_value == 1);
  SupplyDemand<Q> sd{{2, 3}, {4}};
  auto res = max_matching_flow(both, sd);
  CHECK(res.flow_value == 4);
  CHECK(matching_value(res.matching) == 4);
}

TEST_CASE("bad supplies are input errors") {
  BicliqueCover c{1, 1, {{{0}, {0}}}};
  CHECK_THROWS_AS(build_network(c, SupplyDemand<Q>{{0}, {1}}), InputError);
  CHECK_THROWS_AS(build_network(c, SupplyDemand<Q>{{1, 1}, {1}}), InputError);
  CHECK_THROWS_AS(build_network(BicliqueCover{1, 1, {{{3}, {0}}}}, SupplyDemand<Q>::unit(1, 1)),
                  InputError);
}

TEST_CASE("biclique pairing") {
  auto single = pair_one({2}, {2});
  REQUIRE(single.size() == 1);
  CHECK(same(single[0], 0, 0, 2));

  auto three = pair_one({3, 1}, {2, 2});
  REQUIRE(three.size() == 3);
  CHECK(same(three[0], 0, 0, 2));
  CHECK(same(three[1], 0, 1, 1));
  CHECK(same(three[2], 1, 1, 1));

  auto skip = pair_one({0, 5}, {0, 0, 5});
  REQUIRE(skip.size() == 1);
  CHECK(same(skip[0], 1, 2, 5));
}

TEST_CASE("overlapping parts merge duplicate pairs") {
  Matching<Q> raw{{1, 0, 2}, {0, 1, 1}, {1, 0, 3}, {0, 0, 1}};
  auto m = merge_assignments(raw, 2, 2);
  REQUIRE(m.size() == 3);
  CHECK(same(m[0], 0, 0, 1));
  CHECK(same(m[1], 0, 1, 1));
  CHECK(same(m[2], 1, 0, 5));
}

TEST_CASE("matching validation") {
  std::vector<Point<Q>> pts{{0, 0}, {1, 1}};
  std::vector<Range<Q>> r{Box<Q>{{0, 0}, {1, 1}}};
  SupplyDemand<Q> sd{{1, 1}, {2}};
  CHECK(validate_matching(Matching<Q>{}, pts, r, sd));
  CHECK(matching_value(Matching<Q>{}) == 0);
  CHECK(validate_matching(Matching<Q>{{0, 0, 1}, {1, 0, 1}}, pts, r, sd));
  CHECK_FALSE(validate_matching(Matching<Q>{{0, 0, 2}}, pts, r, sd));
  CHECK_FALSE(validate_matching(Matching<Q>{{0, 0, 1}, {0, 0, Q(1, 2)}}, pts, r, SupplyDemand<Q>{{2, 1}, {2}}));
  std::vector<Range<Q>> far{Box<Q>{{5, 5}, {6, 6}}};
  CHECK_FALSE(validate_matching(Matching<Q>{{0, 0, 1}}, pts, far, sd));
}

TEST_CASE("conservation violations are internal errors") {
  BicliqueCover c{1, 1, {{{0}, {0}}}};
  auto cn = build_network(c, SupplyDemand<Q>::unit(1, 1));
  auto f = max_flow_dinitz(cn.network);
  f.edge_flow[cn.part_edge_begin[0]] = 2;
  CHECK_THROWS_AS(flow_to_matching(f, cn, c), InternalError);
}

TEST_CASE("blocking flows on leveled graphs") {
  FlowNetwork<Q> net;
  net.source = net.add_node(NodeRole::kSource);
  net.sink = net.add_node(NodeRole::kSink);
  auto p = net.add_node(NodeRole::kPoint), v = net.add_node(NodeRole::kPart),
       r = net.add_node(NodeRole::kRange);
  net.add_edge(net.source, p, Q(2));
  net.add_edge(p, v, Q(0), true);
  net.add_edge(v, r, Q(0), true);
  net.add_edge(r, net.sink, Q(3));
  auto f = blocking_flow(net);
  CHECK(f.value == 2);
  CHECK(f.edge_flow[0] == 2);

  FlowNetwork<Q> two;
  two.source = two.add_node(NodeRole::kSource);
  two.sink = two.add_node(NodeRole::kSink);
  for (int k = 0; k < 2; ++k) {
    auto a = two.add_node(NodeRole::kPoint);
    two.add_edge(two.source, a, Q(1));
    two.add_edge(a, two.sink, Q(1));
  }
  CHECK(blocking_flow(two).value == 2);
}

TEST_CASE("blocking flows on random leveled graphs saturate every path") {
  ts::Rng rng(17);
  for (int it = 0; it < 200; ++it) {
    const int layers = ts::uniform(rng, 1, 3);
    FlowNetwork<Q> net;
    net.source = net.add_node(NodeRole::kSource);
    net.sink = net.add_node(NodeRole::kSink);
    std::vector<std::vector<std::int32_t>> level{{net.source}};
    for (int l = 0; l < layers; ++l) {
      std::vector<std::int32_t> nodes;
      for (int k = ts::uniform(rng, 1, 4); k > 0; --k) nodes.push_back(net.add_node(NodeRole::kPoint));
      level.push_back(nodes);
    }
    level.push_back({net.sink});
    for (std::size_t l = 0; l + 1 < level.size(); ++l)
      for (auto a : level[l])
        for (auto b : level[l + 1])
          if (ts::uniform(rng, 0, 2) > 0) {
            if (a != net.source && ts::uniform(rng, 0, 4) == 0) {
              net.add_edge(a, b, Q(0), true);
            } else {
              net.add_edge(a, b, ts::frac(ts::uniform(rng, 1, 9), ts::uniform(rng, 1, 3)));
            }
          }
    auto g = blocking_flow(net);
    CHECK(is_valid_flow(net, g));
    CHECK(g.value <= max_flow_dinitz(net).value);
    // Every s-t path contains a saturated edge: DFS over unsaturated edges.
    std::vector<std::vector<std::int32_t>> adj(net.node_count());
    for (std::size_t e = 0; e < net.edges.size(); ++e)
      if (net.edges[e].infinite || g.edge_flow[e] < net.edges[e].capacity)
        adj[net.edges[e].from].push_back(net.edges[e].to);
    std::vector<char> seen(net.node_count(), 0);
    std::vector<std::int32_t> stack{net.source};
    seen[net.source] = 1;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      for (auto w : adj[u])
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
    CHECK_FALSE(seen[net.sink]);
  }
}

TEST_CASE("integral route agrees with the reference max-flow") {
  ts::Rng rng(23);
  for (int it = 0; it < 150; ++it) {
    const std::size_t np = ts::uniform(rng, 0, 25), nr = ts::uniform(rng, 0, 25);
    auto pts = ts::random_points(rng, np, 2, 10);
    auto boxes = ts::random_boxes(rng, nr, 2, 10);
    SupplyDemand<Q> sd{ts::random_integral_weights(rng, np, 10), ts::random_integral_weights(rng, nr, 10)};
    auto c = box_cover(pts, boxes);
    auto res = max_matching_flow(c, sd);
    auto g = oracle::brute_force_incidences(pts, boxes);
    CHECK(res.flow_value == oracle::reference_max_flow(g, sd.supplies, sd.demands));
    CHECK(matching_value(res.matching) == res.flow_value);
    CHECK(validate_matching(res.matching, pts, boxes, sd));
    CHECK(res.matching.size() <= cover_size(c));
    for (const auto& a : res.matching) CHECK(a.amount.get_den() == 1);
  }
}

TEST_CASE("float mode stays close to the exact value") {
  ts::Rng rng(31);
  for (int it = 0; it < 50; ++it) {
    auto pts = ts::random_points(rng, 20, 2, 10);
    auto boxes = ts::random_boxes(rng, 20, 2, 10);
    SupplyDemand<Q> sd{ts::random_rational_weights(rng, 20), ts::random_rational_weights(rng, 20)};
    auto c = box_cover(pts, boxes);
    SupplyDemand<double> sdd;
    for (const auto& s : sd.supplies) sdd.supplies.push_back(s.get_d());
    for (const auto& d : sd.demands) sdd.demands.push_back(d.get_d());
    const double exact = max_matching_flow(c, sd).flow_value.get_d();
    CHECK(max_matching_flow(c, sdd).flow_value == doctest::Approx(exact).epsilon(1e-9));
  }
}
