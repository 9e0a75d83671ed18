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

#ifndef GEOMATCH_IO_HPP_
#define GEOMATCH_IO_HPP_

// Instance files. Numbers are read exactly (integers, decimals, a/b) and
// converted to the working scalar afterwards. Lines that are blank or
// start with '#' are skipped. Errors carry "source:line:".

#include <istream>
#include <string>
#include <vector>

#include "geomatch/bottleneck.hpp"
#include "geomatch/geometry.hpp"
#include "geomatch/scalar.hpp"

namespace geomatch {

// x1,...,xd[,supply]
struct PointTable {
  std::vector<Point<Rational>> points;
  std::vector<Rational> weights;  // defaults to 1
};

// box,lo1..lod,hi1..hid[,demand] or disk,cx,cy,radius[,demand]
struct RangeTable {
  std::vector<Range<Rational>> ranges;
  std::vector<Rational> weights;
};

PointTable read_points(std::istream& in, std::size_t dim, const std::string& source);
RangeTable read_ranges(std::istream& in, std::size_t dim, const std::string& source);
// birth,death
PersistenceDiagram<Rational> read_diagram(std::istream& in, const std::string& source);

PointTable load_points(const std::string& path, std::size_t dim);
RangeTable load_ranges(const std::string& path, std::size_t dim);
PersistenceDiagram<Rational> load_diagram(const std::string& path);

template <class S>
S convert(const Rational& x) {
  if constexpr (std::is_same_v<S, Rational>) {
    return x;
  } else {
    return x.get_d();
  }
}

template <class S>
std::vector<S> convert(const std::vector<Rational>& xs) {
  std::vector<S> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(convert<S>(x));
  return out;
}

template <class S>
Point<S> convert(const Point<Rational>& p) {
  return Point<S>(convert<S>(p.coords));
}

template <class S>
std::vector<Point<S>> convert(const std::vector<Point<Rational>>& ps) {
  std::vector<Point<S>> out;
  out.reserve(ps.size());
  for (const auto& p : ps) out.push_back(convert<S>(p));
  return out;
}

template <class S>
std::vector<Range<S>> convert(const std::vector<Range<Rational>>& rs) {
  std::vector<Range<S>> out;
  out.reserve(rs.size());
  for (const auto& r : rs) {
    if (const auto* b = std::get_if<Box<Rational>>(&r)) {
      out.push_back(Box<S>{convert<S>(b->lo), convert<S>(b->hi)});
    } else {
      const auto& d = std::get<Disk<Rational>>(r);
      out.push_back(Disk<S>{convert<S>(d.center), convert<S>(d.radius_sq)});
    }
  }
  return out;
}

template <class S>
PersistenceDiagram<S> convert(const PersistenceDiagram<Rational>& x) {
  PersistenceDiagram<S> out;
  for (const auto& a : x) out.push_back({convert<S>(a.birth), convert<S>(a.death)});
  return out;
}

}  // namespace geomatch

#endif  // GEOMATCH_IO_HPP_
