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

#include "geomatch/io.hpp"

#include <fstream>
#include <sstream>
#include <string_view>

#include "geomatch/errors.hpp"

namespace geomatch {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  // Next data line split on commas; false at end of input.
  bool next(std::vector<std::string_view>& fields) {
    while (std::getline(in_, line_)) {
      ++number_;
      std::string_view body = trim(line_);
      if (body.empty() || body.front() == '#') continue;
      fields.clear();
      std::size_t start = 0;
      for (;;) {
        const auto comma = body.find(',', start);
        fields.push_back(trim(body.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw InputError(source_ + ":" + std::to_string(number_) + ": " + message);
  }

  Rational number(std::string_view field) const {
    try {
      return parse_rational(field);
    } catch (const InputError& e) {
      fail(e.what());
    }
  }

 private:
  std::istream& in_;
  std::string source_;
  std::string line_;
  std::size_t number_ = 0;
};

Rational weight(const LineReader& lr, std::string_view field) {
  Rational w = lr.number(field);
  if (!(w > 0)) lr.fail("weight must be positive");
  return w;
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return in;
}

}  // namespace

PointTable read_points(std::istream& in, std::size_t dim, const std::string& source) {
  if (dim == 0) throw InputError("dimension must be at least 1");
  PointTable t;
  LineReader lr(in, source);
  std::vector<std::string_view> f;
  while (lr.next(f)) {
    if (f.size() != dim && f.size() != dim + 1)
      lr.fail("expected " + std::to_string(dim) + " coordinates and an optional supply, got " +
              std::to_string(f.size()) + " fields");
    Point<Rational> p;
    for (std::size_t i = 0; i < dim; ++i) p.coords.push_back(lr.number(f[i]));
    t.points.push_back(std::move(p));
    t.weights.push_back(f.size() > dim ? weight(lr, f[dim]) : Rational(1));
  }
  return t;
}

RangeTable read_ranges(std::istream& in, std::size_t dim, const std::string& source) {
  if (dim == 0) throw InputError("dimension must be at least 1");
  RangeTable t;
  LineReader lr(in, source);
  std::vector<std::string_view> f;
  while (lr.next(f)) {
    std::size_t used;
    if (f[0] == "box") {
      used = 1 + 2 * dim;
      if (f.size() != used && f.size() != used + 1)
        lr.fail("box needs " + std::to_string(2 * dim) + " coordinates and an optional demand");
      Box<Rational> b;
      for (std::size_t i = 0; i < dim; ++i) {
        b.lo.coords.push_back(lr.number(f[1 + i]));
        b.hi.coords.push_back(lr.number(f[1 + dim + i]));
        if (b.hi[i] < b.lo[i]) lr.fail("box has lo > hi");
      }
      t.ranges.push_back(std::move(b));
    } else if (f[0] == "disk") {
      if (dim != 2) lr.fail("disks require dimension 2");
      used = 4;
      if (f.size() != used && f.size() != used + 1)
        lr.fail("disk needs cx,cy,radius and an optional demand");
      Rational r = lr.number(f[3]);
      if (r < 0) lr.fail("negative disk radius");
      t.ranges.push_back(Disk<Rational>{Point<Rational>{lr.number(f[1]), lr.number(f[2])},
                                        Rational(r * r)});
    } else {
      lr.fail("unknown range kind '" + std::string(f[0]) + "'");
    }
    t.weights.push_back(f.size() > used ? weight(lr, f[used]) : Rational(1));
  }
  return t;
}

PersistenceDiagram<Rational> read_diagram(std::istream& in, const std::string& source) {
  PersistenceDiagram<Rational> x;
  LineReader lr(in, source);
  std::vector<std::string_view> f;
  while (lr.next(f)) {
    if (f.size() != 2) lr.fail("expected birth,death");
    DiagramPoint<Rational> a{lr.number(f[0]), lr.number(f[1])};
    if (!(a.birth < a.death)) lr.fail("birth must be smaller than death");
    x.push_back(std::move(a));
  }
  return x;
}

PointTable load_points(const std::string& path, std::size_t dim) {
  auto in = open(path);
  return read_points(in, dim, path);
}

RangeTable load_ranges(const std::string& path, std::size_t dim) {
  auto in = open(path);
  return read_ranges(in, dim, path);
}

PersistenceDiagram<Rational> load_diagram(const std::string& path) {
  auto in = open(path);
  return read_diagram(in, path);
}

}  // namespace geomatch
