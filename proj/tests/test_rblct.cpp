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

#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "doctest.h"
#include "geomatch/errors.hpp"
#include "geomatch/prune.hpp"
#include "geomatch/rblct.hpp"
#include "rb_differential.hpp"
#include "support.hpp"

using namespace geomatch;
using Q = Rational;
namespace ts = testing_support;

TEST_CASE("maketree creates singleton roots") {
  RbForest<Q> f;
  auto a = f.maketree(Color::kRed);
  auto b = f.maketree(Color::kBlue);
  CHECK(f.findroot(a) == a);
  CHECK(f.findroot(b) == b);
  CHECK(f.findroot(a) != f.findroot(b));
  for (int k = 0; k < 10; ++k) f.maketree(Color::kRed);
  std::set<RbForest<Q>::NodeId> roots;
  for (std::int32_t v = 0; v < static_cast<std::int32_t>(f.node_count()); ++v) roots.insert(f.findroot(v));
  CHECK(roots.size() == 12);
  f.check_invariants();
}

TEST_CASE("link and cut") {
  RbForest<Q> f;
  auto p = f.maketree(Color::kRed), r = f.maketree(Color::kBlue);
  f.link(p, r, Q(3));
  CHECK(f.findroot(p) == r);
  auto up = f.parent(p);
  REQUIRE(up);
  CHECK(up->first == r);
  CHECK(up->second == 3);
  f.cut(p);
  CHECK(f.findroot(p) == p);
  CHECK_THROWS_AS(f.cut(p), UsageError);
  f.check_invariants();
}

TEST_CASE("link preconditions") {
  RbForest<Q> f;
  auto p = f.maketree(Color::kRed), r = f.maketree(Color::kBlue), p2 = f.maketree(Color::kRed);
  CHECK_THROWS_AS(f.link(p, p2, Q(1)), UsageError);
  f.link(p, r, Q(1));
  CHECK_THROWS_AS(f.link(p, f.maketree(Color::kBlue), Q(1)), UsageError);
  CHECK_THROWS_AS(f.link(r, p, Q(1)), UsageError);
  CHECK_THROWS_AS(f.link(p2, r, Q(-1)), UsageError);
  CHECK_THROWS_AS(f.findroot(99), UsageError);
}

TEST_CASE("cutting the middle of a path") {
  RbForest<Q> f;
  std::vector<RbForest<Q>::NodeId> v;
  for (int k = 0; k < 5; ++k) v.push_back(f.maketree(k % 2 ? Color::kBlue : Color::kRed));
  for (int k = 0; k + 1 < 5; ++k) f.link(v[k], v[k + 1], Q(k + 1));
  f.cut(v[1]);
  int first = 0, second = 0;
  for (auto x : v) (f.findroot(x) == v[1] ? first : second)++;
  CHECK(first == 2);
  CHECK(second == 3);
  f.check_invariants();
}

TEST_CASE("evert reverses orientation and edge colors") {
  RbForest<Q> f;
  auto p = f.maketree(Color::kRed), r = f.maketree(Color::kBlue), p2 = f.maketree(Color::kRed);
  f.link(p, r, Q(3));
  f.link(p2, r, Q(5));
  // Root r is blue: both edges are blue.
  auto hit = f.findblue(p);
  REQUIRE(hit);
  CHECK(hit->node == p);
  CHECK(hit->value == 3);
  f.evert(p);
  CHECK(f.findroot(p2) == p);
  auto up = f.parent(r);
  REQUIRE(up);
  CHECK(up->first == p);
  CHECK(up->second == 3);
  // Edge (r, p) is now red, (p2, r) still blue.
  auto from_p2 = f.findblue(p2);
  REQUIRE(from_p2);
  CHECK(from_p2->node == p2);
  CHECK(from_p2->value == 5);
  CHECK_FALSE(f.findblue(r));
  f.evert(r);
  f.evert(r);
  CHECK(f.findroot(p) == r);
  f.check_invariants();
}

TEST_CASE("findblue returns the last minimum toward the root") {
  // Path v = b0 - r1 - b2 - r3 - b4 - r5 - b6 (root). Blue edges are those
  // whose parent endpoint is blue: (r1,b2), (r3,b4), (r5,b6).
  RbForest<Q> f;
  std::vector<RbForest<Q>::NodeId> v;
  for (int k = 0; k < 7; ++k) v.push_back(f.maketree(k % 2 ? Color::kRed : Color::kBlue));
  const Q vals[] = {9, 5, 9, 2, 9, 2};
  for (int k = 0; k < 6; ++k) f.link(v[k], v[k + 1], vals[k]);
  auto hit = f.findblue(v[0]);
  REQUIRE(hit);
  CHECK(hit->value == 2);
  CHECK(hit->node == v[5]);
  auto red = RbForest<Q>{};
  auto a = red.maketree(Color::kBlue), b = red.maketree(Color::kRed);
  red.link(a, b, Q(4));
  CHECK_FALSE(red.findblue(a));
  red.addred(a, Q(1));
  CHECK(red.parent(a)->second == 5);
  red.addblue(a, Q(7));
  CHECK(red.parent(a)->second == 5);
}

TEST_CASE("add on path is invertible") {
  RbForest<Q> f;
  std::vector<RbForest<Q>::NodeId> v;
  for (int k = 0; k < 6; ++k) v.push_back(f.maketree(k % 2 ? Color::kRed : Color::kBlue));
  for (int k = 0; k + 1 < 6; ++k) f.link(v[k], v[k + 1], Q(k + 2));
  f.addblue(v[0], Q(2));
  f.addblue(v[0], Q(-2));
  for (int k = 0; k + 1 < 6; ++k) CHECK(f.parent(v[k])->second == k + 2);
  CHECK_THROWS_AS(f.addblue(v[0], Q(-100)), UsageError);
  f.check_invariants();
}

TEST_CASE("differential run against the naive forest") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto rep = ts::run_rb_differential(seed, 20000, seed % 2 ? 20 : 120, 97);
    INFO(rep.first_mismatch);
    CHECK(rep.mismatches == 0);
    CHECK(rep.tie_queries > 0);
  }
}

namespace {

struct Totals {
  std::map<std::int32_t, Q> point, range;
};

Totals totals(const Matching<Q>& m) {
  Totals t;
  for (const auto& a : m) {
    t.point[a.point] += a.amount;
    t.range[a.range] += a.amount;
  }
  return t;
}

bool is_forest(const Matching<Q>& m, std::size_t np, std::size_t nr) {
  std::vector<std::int32_t> up(np + nr);
  std::iota(up.begin(), up.end(), 0);
  std::function<std::int32_t(std::int32_t)> find = [&](std::int32_t x) {
    return up[x] == x ? x : up[x] = find(up[x]);
  };
  for (const auto& a : m) {
    auto x = find(a.point), y = find(static_cast<std::int32_t>(np + a.range));
    if (x == y) return false;
    up[x] = y;
  }
  return true;
}

}  // namespace

TEST_CASE("pruning a 4-cycle") {
  Matching<Q> flow{{0, 0, 2}, {0, 1, 5}, {1, 0, 3}, {1, 1, 4}};
  auto out = prune_to_forest(flow, 2, 2);
  CHECK(out.size() == 3);
  CHECK(is_forest(out, 2, 2));
  auto t = totals(out);
  CHECK(t.point[0] == 7);
  CHECK(t.point[1] == 7);
  CHECK(t.range[0] == 5);
  CHECK(t.range[1] == 9);
  CHECK(matching_value(out) == 14);
}

TEST_CASE("pruning leaves forests unchanged") {
  Matching<Q> flow{{0, 0, 2}, {0, 1, 5}, {1, 1, 4}, {2, 2, Q(1, 3)}};
  auto out = prune_to_forest(flow, 3, 3);
  REQUIRE(out.size() == flow.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    CHECK(out[i].point == flow[i].point);
    CHECK(out[i].range == flow[i].range);
    CHECK(out[i].amount == flow[i].amount);
  }
}

TEST_CASE("pruning random supports") {
  ts::Rng rng(77);
  for (int it = 0; it < 200; ++it) {
    const std::size_t np = ts::uniform(rng, 1, 12), nr = ts::uniform(rng, 1, 12);
    std::set<std::pair<std::int32_t, std::int32_t>> keys;
    for (int e = ts::uniform(rng, 0, 60); e > 0; --e)
      keys.emplace(ts::uniform(rng, 0, np - 1), ts::uniform(rng, 0, nr - 1));
    Matching<Q> flow;
    for (auto [p, r] : keys) flow.push_back({p, r, ts::frac(ts::uniform(rng, 1, 9), ts::uniform(rng, 1, 3))});
    auto out = prune_to_forest(flow, np, nr);
    CHECK(is_forest(out, np, nr));
    CHECK(out.size() + 1 <= np + nr);
    auto a = totals(flow), b = totals(out);
    for (auto& [k, v] : b.point) CHECK(a.point[k] == v);
    for (auto& [k, v] : a.point) CHECK(b.point[k] == v);
    for (auto& [k, v] : a.range) CHECK(b.range[k] == v);
    for (const auto& x : out) CHECK(keys.count({x.point, x.range}) == 1);
  }
}
