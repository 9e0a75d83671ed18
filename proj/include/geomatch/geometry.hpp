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

#ifndef GEOMATCH_GEOMETRY_HPP_
#define GEOMATCH_GEOMETRY_HPP_

#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "geomatch/errors.hpp"
#include "geomatch/scalar.hpp"

namespace geomatch {

template <class S>
struct Point {
  std::vector<S> coords;

  Point() = default;
  explicit Point(std::vector<S> c) : coords(std::move(c)) {}
  Point(std::initializer_list<S> c) : coords(c) {}

  std::size_t dim() const { return coords.size(); }
  const S& operator[](std::size_t i) const { return coords[i]; }
  S& operator[](std::size_t i) { return coords[i]; }
  friend bool operator==(const Point&, const Point&) = default;
};

// Closed axis-parallel box lo <= x <= hi.
template <class S>
struct Box {
  Point<S> lo, hi;
  std::size_t dim() const { return lo.dim(); }
};

// Closed planar disk. The squared radius is the primary field so that
// L2 decisions at irrational radii stay exact.
template <class S>
struct Disk {
  Point<S> center;
  S radius_sq;

  static Disk with_radius(Point<S> c, const S& r) {
    if (ScalarTraits<S>::is_negative(r)) throw InputError("negative disk radius");
    return Disk{std::move(c), S(r * r)};
  }
  std::size_t dim() const { return center.dim(); }
};

template <class S>
using Range = std::variant<Box<S>, Disk<S>>;

enum class Metric { kL1, kL2, kLinf };

inline const char* metric_name(Metric m) {
  switch (m) {
    case Metric::kL1: return "L1";
    case Metric::kL2: return "L2";
    case Metric::kLinf: return "Linf";
  }
  return "?";
}

template <class S>
std::size_t range_dim(const Range<S>& r) {
  return std::visit([](const auto& x) { return x.dim(); }, r);
}

template <class S>
void check_box(const Box<S>& b) {
  if (b.lo.dim() != b.hi.dim() || b.lo.dim() == 0)
    throw InputError("box corners have inconsistent dimension");
  for (std::size_t i = 0; i < b.lo.dim(); ++i)
    if (b.hi[i] < b.lo[i]) throw InputError("box with lo > hi");
}

template <class S>
void check_range(const Range<S>& r) {
  if (const auto* b = std::get_if<Box<S>>(&r)) {
    check_box(*b);
  } else {
    const auto& d = std::get<Disk<S>>(r);
    if (d.dim() != 2) throw InputError("disks must be planar");
    if (d.radius_sq < 0)
      throw InputError("negative squared radius");
  }
}

template <class S>
S squared_distance(const Point<S>& p, const Point<S>& q) {
  if (p.dim() != q.dim()) throw InputError("dimension mismatch in distance");
  S acc = 0;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    S d = p[i] - q[i];
    acc += d * d;
  }
  return acc;
}

template <class S>
bool contains(const Box<S>& b, const Point<S>& p) {
  if (b.dim() != p.dim()) throw InputError("dimension mismatch between box and point");
  for (std::size_t i = 0; i < p.dim(); ++i)
    if (p[i] < b.lo[i] || b.hi[i] < p[i]) return false;
  return true;
}

template <class S>
bool contains(const Disk<S>& d, const Point<S>& p) {
  if (d.dim() != p.dim()) throw InputError("dimension mismatch between disk and point");
  return !(d.radius_sq < squared_distance(d.center, p));
}

template <class S>
bool contains(const Range<S>& r, const Point<S>& p) {
  return std::visit([&](const auto& x) { return contains(x, p); }, r);
}

// L1 and Linf are exact in both numeric modes; L2 takes a square root
// (exact for perfect rational squares). Prefer compare_distance for L2
// decisions.
template <class S>
S distance(Metric m, const Point<S>& p, const Point<S>& q) {
  if (p.dim() != q.dim()) throw InputError("dimension mismatch in distance");
  if (m == Metric::kL2) return ScalarTraits<S>::sqrt(squared_distance(p, q));
  S acc = 0;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    S d = p[i] - q[i];
    if (d < 0) d = -d;
    if (m == Metric::kL1) {
      acc += d;
    } else if (acc < d) {
      acc = d;
    }
  }
  return acc;
}

// Returns <0, 0, >0 as dist(p, q) compares to lambda, without square roots.
template <class S>
int compare_distance(Metric m, const Point<S>& p, const Point<S>& q, const S& lambda) {
  S lhs, rhs;
  if (m == Metric::kL2) {
    if (lambda < 0) return 1;
    lhs = squared_distance(p, q);
    rhs = lambda * lambda;
  } else {
    lhs = distance(m, p, q);
    rhs = lambda;
  }
  if (lhs < rhs) return -1;
  if (rhs < lhs) return 1;
  return 0;
}

// (x, y) -> (x + y, x - y): L1 balls become axis-parallel squares of the
// same radius.
template <class S>
Point<S> rotate45(const Point<S>& p) {
  if (p.dim() != 2) throw InputError("rotation requires planar points");
  return Point<S>{S(p[0] + p[1]), S(p[0] - p[1])};
}

template <class S>
Box<S> linf_ball(const Point<S>& c, const S& radius) {
  Box<S> b{c, c};
  for (std::size_t i = 0; i < c.dim(); ++i) {
    b.lo[i] -= radius;
    b.hi[i] += radius;
  }
  return b;
}

}  // namespace geomatch

#endif  // GEOMATCH_GEOMETRY_HPP_
