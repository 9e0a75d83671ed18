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

#ifndef GEOMATCH_TESTS_SUPPORT_HPP_
#define GEOMATCH_TESTS_SUPPORT_HPP_

// Random instance generators shared by the unit and acceptance tests.
// Small integer grids produce many ties and boundary incidences.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "geomatch/bottleneck.hpp"
#include "geomatch/flow.hpp"
#include "geomatch/geometry.hpp"
#include "geomatch/oracle.hpp"

namespace testing_support {

using geomatch::Box;
using geomatch::Disk;
using geomatch::Point;
using geomatch::Range;
using geomatch::Rational;
using Rng = std::mt19937_64;

inline long uniform(Rng& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

// Canonical a / b; mpq_class(a, b) alone leaves the fraction unreduced.
inline Rational frac(long a, long b) {
  Rational q(a, b);
  q.canonicalize();
  return q;
}

inline Rational random_rational(Rng& rng, long max_num, long max_den) {
  return frac(uniform(rng, 0, max_num), uniform(rng, 1, max_den));
}

inline std::vector<Point<Rational>> random_points(Rng& rng, std::size_t n, std::size_t dim,
                                                  long grid) {
  std::vector<Point<Rational>> out(n);
  for (auto& p : out)
    for (std::size_t i = 0; i < dim; ++i) p.coords.push_back(Rational(uniform(rng, 0, grid)));
  return out;
}

inline std::vector<Range<Rational>> random_boxes(Rng& rng, std::size_t n, std::size_t dim,
                                                 long grid) {
  std::vector<Range<Rational>> out;
  for (std::size_t k = 0; k < n; ++k) {
    Box<Rational> b;
    for (std::size_t i = 0; i < dim; ++i) {
      long a = uniform(rng, 0, grid), c = uniform(rng, 0, grid);
      if (c < a) std::swap(a, c);
      b.lo.coords.push_back(Rational(a));
      b.hi.coords.push_back(Rational(c));
    }
    out.push_back(b);
  }
  return out;
}

inline std::vector<Range<Rational>> random_disks(Rng& rng, std::size_t n, long grid,
                                                 const Rational& radius_sq) {
  std::vector<Range<Rational>> out;
  for (std::size_t k = 0; k < n; ++k)
    out.push_back(Disk<Rational>{
        Point<Rational>{Rational(uniform(rng, 0, grid)), Rational(uniform(rng, 0, grid))},
        radius_sq});
  return out;
}

inline std::vector<Rational> random_integral_weights(Rng& rng, std::size_t n, long max) {
  std::vector<Rational> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(Rational(uniform(rng, 1, max)));
  return out;
}

inline std::vector<Rational> random_rational_weights(Rng& rng, std::size_t n) {
  std::vector<Rational> out;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(frac(uniform(rng, 1, 60), uniform(rng, 1, 12)));
  return out;
}

inline std::vector<std::pair<Rational, Rational>> random_diagram(Rng& rng, std::size_t n,
                                                                 long grid) {
  std::vector<std::pair<Rational, Rational>> out;
  for (std::size_t i = 0; i < n; ++i) {
    Rational b = frac(uniform(rng, 0, grid), 2);
    out.emplace_back(b, b + frac(uniform(rng, 1, grid), 2));
  }
  return out;
}

inline geomatch::PersistenceDiagram<Rational> to_diagram(
    const std::vector<std::pair<Rational, Rational>>& x) {
  geomatch::PersistenceDiagram<Rational> out;
  for (const auto& [b, d] : x) out.push_back({b, d});
  return out;
}

inline std::vector<double> convert_weights(const std::vector<Rational>& xs) {
  std::vector<double> out;
  for (const auto& x : xs) out.push_back(x.get_d());
  return out;
}

// Every forward edge p -> r of a cover as an explicit bipartite graph.
inline geomatch::oracle::ExplicitBipartite cover_edges(const geomatch::BicliqueCover& c) {
  geomatch::oracle::ExplicitBipartite g{c.left_count, c.right_count, {}};
  for (const auto& part : c.parts)
    for (auto p : part.points)
      for (auto r : part.ranges) g.edges.emplace_back(p, r);
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  return g;
}

}  // namespace testing_support

#endif  // GEOMATCH_TESTS_SUPPORT_HPP_
