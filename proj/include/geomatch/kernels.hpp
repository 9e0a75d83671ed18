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

#ifndef GEOMATCH_KERNELS_HPP_
#define GEOMATCH_KERNELS_HPP_

// Data-parallel inner loops. Every kernel has a serial reference in
// geomatch::serial and an OpenMP version in geomatch::parallel with the
// same signature and bit-identical output; tests compare the two and the
// benchmark times them.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "geomatch/geometry.hpp"

namespace geomatch {

using IndexPair = std::pair<std::int32_t, std::int32_t>;

// Implicit matrix M(i, j) = rows[i] - cols[j] over ascending sequences.
// Each row is nonincreasing in j, each column nondecreasing in i.
template <class S>
struct DifferenceMatrix {
  std::span<const S> rows;
  std::span<const S> cols;

  std::size_t size() const { return rows.size() * cols.size(); }
  S at(std::size_t i, std::size_t j) const { return S(rows[i] - cols[j]); }

  // First column j whose entry is <= v (strict: < v). Entries satisfying
  // the bound form the suffix [j, cols.size()) of row i.
  std::size_t first_at_most(std::size_t i, const S& v, bool strict) const {
    S threshold = rows[i] - v;
    if (strict)
      return std::upper_bound(cols.begin(), cols.end(), threshold) - cols.begin();
    return std::lower_bound(cols.begin(), cols.end(), threshold) - cols.begin();
  }
};

namespace serial {

template <class S>
std::vector<IndexPair> incident_pairs(const std::vector<Point<S>>& points,
                                      const std::vector<Range<S>>& ranges) {
  std::vector<IndexPair> out;
  for (std::size_t p = 0; p < points.size(); ++p)
    for (std::size_t r = 0; r < ranges.size(); ++r)
      if (contains(ranges[r], points[p]))
        out.emplace_back(static_cast<std::int32_t>(p), static_cast<std::int32_t>(r));
  return out;
}

// Number of entries <= v (strict: < v), by a monotone staircase walk.
template <class S>
std::uint64_t count_at_most(const DifferenceMatrix<S>& m, const S& v, bool strict) {
  const std::size_t nr = m.rows.size(), nc = m.cols.size();
  std::uint64_t total = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < nr; ++i) {
    // rows[i] - cols[j] <= v  <=>  cols[j] >= rows[i] - v; the boundary only
    // moves right as rows[i] grows.
    S threshold = m.rows[i] - v;
    while (j < nc && (strict ? !(threshold < m.cols[j]) : m.cols[j] < threshold)) ++j;
    total += nc - j;
  }
  return total;
}

template <class S>
std::vector<S> pairwise_sq_distances(const std::vector<Point<S>>& a,
                                     const std::vector<Point<S>>& b) {
  std::vector<S> out;
  out.reserve(a.size() * b.size());
  for (const auto& p : a)
    for (const auto& q : b) out.push_back(squared_distance(p, q));
  return out;
}

template <class S>
std::uint64_t count_pairs_at_most(const std::vector<Point<S>>& a,
                                  const std::vector<Point<S>>& b, const S& v, bool strict) {
  std::uint64_t total = 0;
  for (const auto& p : a)
    for (const auto& q : b) {
      S d = squared_distance(p, q);
      if (strict ? d < v : !(v < d)) ++total;
    }
  return total;
}

}  // namespace serial

namespace parallel {

template <class S>
std::vector<IndexPair> incident_pairs(const std::vector<Point<S>>& points,
                                      const std::vector<Range<S>>& ranges) {
  const std::int64_t n = static_cast<std::int64_t>(points.size());
  std::vector<std::vector<std::int32_t>> hits(points.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t p = 0; p < n; ++p)
    for (std::size_t r = 0; r < ranges.size(); ++r)
      if (contains(ranges[r], points[p])) hits[p].push_back(static_cast<std::int32_t>(r));
  std::vector<IndexPair> out;
  for (std::size_t p = 0; p < hits.size(); ++p)
    for (std::int32_t r : hits[p]) out.emplace_back(static_cast<std::int32_t>(p), r);
  return out;
}

// Rows are independent: binary search each one.
template <class S>
std::uint64_t count_at_most(const DifferenceMatrix<S>& m, const S& v, bool strict) {
  const std::int64_t nr = static_cast<std::int64_t>(m.rows.size());
  const std::size_t nc = m.cols.size();
  std::uint64_t total = 0;
#pragma omp parallel for reduction(+ : total) schedule(static)
  for (std::int64_t i = 0; i < nr; ++i) total += nc - m.first_at_most(i, v, strict);
  return total;
}

template <class S>
std::vector<S> pairwise_sq_distances(const std::vector<Point<S>>& a,
                                     const std::vector<Point<S>>& b) {
  std::vector<S> out(a.size() * b.size());
  const std::int64_t na = static_cast<std::int64_t>(a.size());
  const std::size_t nb = b.size();
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) out[i * nb + j] = squared_distance(a[i], b[j]);
  return out;
}

template <class S>
std::uint64_t count_pairs_at_most(const std::vector<Point<S>>& a,
                                  const std::vector<Point<S>>& b, const S& v, bool strict) {
  const std::int64_t na = static_cast<std::int64_t>(a.size());
  std::uint64_t total = 0;
#pragma omp parallel for reduction(+ : total) schedule(static)
  for (std::int64_t i = 0; i < na; ++i)
    for (const auto& q : b) {
      S d = squared_distance(a[i], q);
      if (strict ? d < v : !(v < d)) ++total;
    }
  return total;
}

}  // namespace parallel

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace geomatch

#endif  // GEOMATCH_KERNELS_HPP_
