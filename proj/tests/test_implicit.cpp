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
#include "geomatch/implicit_dinitz.hpp"
#include "geomatch/oracle.hpp"
#include "support.hpp"

using namespace geomatch;
using Q = Rational;
namespace ts = testing_support;

namespace {

std::vector<std::pair<std::pair<std::int32_t, std::int32_t>, Q>> as_oracle_flow(const Matching<Q>& m) {
  std::vector<std::pair<std::pair<std::int32_t, std::int32_t>, Q>> out;
  for (const auto& a : m) out.push_back({{a.point, a.range}, a.amount});
  return out;
}

// Levels of the implicit level graph must equal residual BFS distances
// for every vertex placed before t.
void check_levels(const LevelGraph<Q>& L, const oracle::ExplicitBipartite& g,
                  const SupplyDemand<Q>& sd, const Matching<Q>& flow) {
  auto dist = oracle::residual_distances(g, sd.supplies, sd.demands, as_oracle_flow(flow));
  CHECK(dist.back() == L.level_of_t);
  for (std::size_t lv = 1; lv < L.levels.size(); ++lv)
    for (auto id : L.levels[lv]) {
      const std::size_t idx = lv % 2 == 1 ? 1 + id : 1 + g.left + id;
      CHECK(dist[idx] == static_cast<int>(lv));
    }
  // Every vertex at residual distance below level(t) - 1 is present.
  std::size_t placed = 0, expected = 0;
  for (std::size_t lv = 1; lv < L.levels.size(); ++lv) placed += L.levels[lv].size();
  for (std::size_t i = 1; i + 1 < dist.size(); ++i)
    if (dist[i] >= 1 && dist[i] < L.level_of_t) ++expected;
  CHECK(placed == expected);
  for (const auto& b : L.backward) CHECK(b.level % 2 == 0);
  for (const auto& layer : L.forward) CHECK(layer.level % 2 == 1);
}

}  // namespace

TEST_CASE("first phase shape") {
  BicliqueCover c{2, 2, {{{0, 1}, {0, 1}}}};
  auto sd = SupplyDemand<Q>::unit(2, 2);
  CoverIndex index(c);
  LevelScratch scratch;
  auto L = build_level_graph(PhaseState<Q>::zero(2, 2), c, index, sd, scratch);
  REQUIRE(L);
  CHECK(L->level_of_t == 3);
  CHECK(L->backward.empty());
  CHECK(L->feeders.size() == 2);
  CHECK(L->drains.size() == 2);
}

TEST_CASE("saturated demands end the search") {
  BicliqueCover c{1, 1, {{{0}, {0}}}};
  auto sd = SupplyDemand<Q>{{2}, {1}};
  auto state = PhaseState<Q>::zero(1, 1);
  state.flow.push_back({0, 0, 1});
  state.used_supply[0] = 1;
  state.met_demand[0] = 1;
  CoverIndex index(c);
  LevelScratch scratch;
  CHECK_FALSE(build_level_graph(state, c, index, sd, scratch));
}

TEST_CASE("crossing incidences force a backward edge") {
  // p0 - r0, p1 - r0, p0 - r1. Flow p0 -> r0 blocks p1; the augmenting
  // path is s p1 r0 p0 r1 t.
  BicliqueCover c{2, 2, {{{0, 1}, {0}}, {{0}, {1}}}};
  auto sd = SupplyDemand<Q>::unit(2, 2);
  auto state = PhaseState<Q>::zero(2, 2);
  state.flow.push_back({0, 0, 1});
  state.used_supply[0] = 1;
  state.met_demand[0] = 1;
  CoverIndex index(c);
  LevelScratch scratch;
  auto L = build_level_graph(state, c, index, sd, scratch);
  REQUIRE(L);
  CHECK(L->level_of_t == 5);
  REQUIRE(L->backward.size() == 1);
  CHECK(L->backward[0].range == 0);
  CHECK(L->backward[0].point == 0);
  CHECK(L->backward[0].capacity == 1);
  oracle::ExplicitBipartite g{2, 2, {{0, 0}, {0, 1}, {1, 0}}};
  check_levels(*L, g, sd, state.flow);

  auto X = expand_level_graph(*L, 2, 2);
  auto f = blocking_flow(X.network);
  CHECK(f.value == 1);
  auto next = augment_and_project(state, f, *L, X);
  CHECK(next.value() == 2);
  REQUIRE(next.flow.size() == 2);
  CHECK(next.flow[0].point == 0);
  CHECK(next.flow[0].range == 1);
  CHECK(next.flow[1].point == 1);
  CHECK(next.flow[1].range == 0);
}

TEST_CASE("expansion inserts one middle vertex per part") {
  LevelGraph<Q> L;
  L.level_of_t = 3;
  L.levels = {{}, {0}, {0}};
  L.feeders.push_back({0, Q(2)});
  L.drains.push_back({0, Q(3)});
  L.forward.push_back({1, {CoverPart{{0}, {0}}}});
  auto X = expand_level_graph(L, 1, 1);
  CHECK(X.middle_vertices == 1);
  CHECK(X.network.node_count() == 5);
  REQUIRE(X.network.edges.size() == 4);
  CHECK(X.network.edges[2].infinite);
  CHECK(X.network.edges[3].infinite);
  CHECK(blocking_flow(X.network).value == 2);

  LevelGraph<Q> none = L;
  none.forward.clear();
  CHECK(blocking_flow(expand_level_graph(none, 1, 1).network).value == 0);
}

TEST_CASE("small maximum matchings") {
  const std::size_t k = 5;
  CoverPart all;
  for (std::size_t i = 0; i < k; ++i) {
    all.points.push_back(i);
    all.ranges.push_back(i);
  }
  auto res = max_matching_implicit(BicliqueCover{k, k, {all}}, SupplyDemand<Q>::unit(k, k));
  CHECK(res.value == 5);
  CHECK(res.trace.size() == 1);

  BicliqueCover tri{2, 2, {{{0}, {0, 1}}, {{1}, {1}}}};
  auto r2 = max_matching_implicit(tri, SupplyDemand<Q>{{2, 3}, {1, 4}});
  CHECK(r2.value == 5);
  CHECK(matching_value(r2.matching) == 5);

  CHECK(max_matching_implicit(BicliqueCover{3, 0, {}}, SupplyDemand<Q>{{1, 1, 1}, {}}).value == 0);
}

TEST_CASE("implicit engine agrees with the explicit network and the oracle") {
  ts::Rng rng(404);
  for (int it = 0; it < 150; ++it) {
    const std::size_t np = ts::uniform(rng, 0, 20), nr = ts::uniform(rng, 0, 20);
    auto pts = ts::random_points(rng, np, 2, 8);
    auto boxes = ts::random_boxes(rng, nr, 2, 8);
    SupplyDemand<Q> sd{ts::random_rational_weights(rng, np), ts::random_rational_weights(rng, nr)};
    auto c = box_cover(pts, boxes);
    auto res = max_matching_implicit(c, sd);
    auto g = oracle::brute_force_incidences(pts, boxes);
    CHECK(res.value == oracle::reference_max_flow(g, sd.supplies, sd.demands));
    CHECK(res.value == max_matching_flow(c, sd).flow_value);
    CHECK(validate_matching(res.matching, pts, boxes, sd));
    CHECK(res.matching.size() + 1 <= std::max<std::size_t>(np + nr, 1));
    CHECK(res.trace.size() <= np + nr);
    for (std::size_t i = 1; i < res.trace.size(); ++i)
      CHECK(res.trace[i - 1].level_of_t < res.trace[i].level_of_t);
  }
}

TEST_CASE("each phase's level graph matches residual distances") {
  ts::Rng rng(9);
  for (int it = 0; it < 60; ++it) {
    const std::size_t np = ts::uniform(rng, 1, 12), nr = ts::uniform(rng, 1, 12);
    auto pts = ts::random_points(rng, np, 2, 6);
    auto boxes = ts::random_boxes(rng, nr, 2, 6);
    SupplyDemand<Q> sd{ts::random_rational_weights(rng, np), ts::random_rational_weights(rng, nr)};
    auto c = box_cover(pts, boxes);
    auto g = oracle::brute_force_incidences(pts, boxes);
    CoverIndex index(c);
    LevelScratch scratch;
    auto state = PhaseState<Q>::zero(np, nr);
    while (auto L = build_level_graph(state, c, index, sd, scratch)) {
      check_levels(*L, g, sd, state.flow);
      auto X = expand_level_graph(*L, np, nr);
      auto f = blocking_flow(X.network);
      auto next = augment_and_project(state, f, *L, X);
      CHECK(next.value() == state.value() + f.value);
      next.flow = prune_to_forest(next.flow, np, nr);
      state = std::move(next);
    }
    auto dist = oracle::residual_distances(g, sd.supplies, sd.demands, as_oracle_flow(state.flow));
    CHECK(dist.back() == -1);
  }
}

TEST_CASE("float mode runs without invariant violations") {
  ts::Rng rng(5150);
  for (int it = 0; it < 30; ++it) {
    auto pts = ts::random_points(rng, 40, 2, 20);
    auto boxes = ts::random_boxes(rng, 40, 2, 20);
    SupplyDemand<Q> sd{ts::random_rational_weights(rng, 40), ts::random_rational_weights(rng, 40)};
    SupplyDemand<double> sdd{ts::convert_weights(sd.supplies), ts::convert_weights(sd.demands)};
    auto c = box_cover(pts, boxes);
    const double exact = max_matching_implicit(c, sd).value.get_d();
    CHECK(max_matching_implicit(c, sdd).value == doctest::Approx(exact).epsilon(1e-9));
  }
}
