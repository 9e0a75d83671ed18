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

#ifndef GEOMATCH_PRUNE_HPP_
#define GEOMATCH_PRUNE_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>

#include "geomatch/flow.hpp"
#include "geomatch/rblct.hpp"

namespace geomatch {

struct PruneStats {
  std::size_t links = 0;
  std::size_t cuts = 0;
  std::size_t pushes = 0;  // edges absorbed by pushing along an existing path
  std::uint64_t rotations = 0;
};

// Returns a matching with the same per-point and per-range totals whose
// support is a forest and a subset of the input support.
//
// Points are red nodes and ranges blue nodes of a red-blue link-cut forest.
// Edges are inserted one at a time; an edge (p, r) closing a cycle is
// instead routed along the tree path from p to r by raising red edges and
// lowering blue edges, and blue edges that reach zero are cut.
template <class S>
Matching<S> prune_to_forest(const Matching<S>& flow, std::size_t num_points,
                            std::size_t num_ranges, PruneStats* stats = nullptr) {
  using T = ScalarTraits<S>;
  RbForest<S> forest;
  for (std::size_t p = 0; p < num_points; ++p) forest.maketree(Color::kRed);
  for (std::size_t r = 0; r < num_ranges; ++r) forest.maketree(Color::kBlue);
  const auto range_id = [&](std::int32_t r) {
    return static_cast<std::int32_t>(num_points + r);
  };
  PruneStats local;

  const auto cut_zero_blue = [&](std::int32_t from) {
    while (auto hit = forest.findblue(from)) {
      if (!T::is_zero(hit->value)) break;
      forest.cut(hit->node);
      ++local.cuts;
    }
  };

  for (const auto& a : flow) {
    if (!T::is_positive(a.amount)) continue;
    const std::int32_t p = a.point;
    const std::int32_t r = range_id(a.range);
    if (!forest.connected(p, r)) {
      forest.evert(r);
      forest.link(r, p, a.amount);
      ++local.links;
      continue;
    }
    forest.evert(p);
    auto hit = forest.findblue(r);
    if (!hit) throw InternalError("prune: cycle without a blue edge");
    const S delta = hit->value;
    if (!(delta < a.amount)) {
      forest.addred(r, a.amount);
      forest.addblue(r, S(-a.amount));
      cut_zero_blue(r);
      ++local.pushes;
    } else {
      forest.addred(r, delta);
      forest.addblue(r, S(-delta));
      cut_zero_blue(r);
      forest.evert(r);
      forest.link(r, p, S(a.amount - delta));
      ++local.links;
    }
  }

  Matching<S> out;
  for (std::size_t v = 0; v < num_points + num_ranges; ++v) {
    auto up = forest.parent(static_cast<std::int32_t>(v));
    if (!up || !T::is_positive(up->second)) continue;
    const bool v_is_point = v < num_points;
    const auto point = v_is_point ? static_cast<std::int32_t>(v) : up->first;
    const auto range = static_cast<std::int32_t>(
        (v_is_point ? static_cast<std::size_t>(up->first) : v) - num_points);
    out.push_back(Assignment<S>{point, range, std::move(up->second)});
  }
  std::sort(out.begin(), out.end(), [](const Assignment<S>& x, const Assignment<S>& y) {
    return x.point != y.point ? x.point < y.point : x.range < y.range;
  });
  local.rotations = forest.rotations();
  if (stats) *stats = local;
  return out;
}

}  // namespace geomatch

#endif  // GEOMATCH_PRUNE_HPP_
