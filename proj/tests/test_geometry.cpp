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

#include <sstream>

#include "doctest.h"
#include "geomatch/errors.hpp"
#include "geomatch/geometry.hpp"
#include "geomatch/io.hpp"
#include "support.hpp"

using namespace geomatch;
using Q = Rational;

TEST_CASE("closed boxes contain interior and boundary points") {
  Box<Q> b{{0, 0}, {2, 2}};
  CHECK(contains(b, Point<Q>{1, 1}));
  CHECK(contains(b, Point<Q>{2, 2}));
  CHECK_FALSE(contains(b, Point<Q>{Q(5, 2), 1}));
}

TEST_CASE("disk boundary is inclusive") {
  auto d = Disk<Q>::with_radius(Point<Q>{0, 0}, Q(5));
  CHECK(contains(d, Point<Q>{3, 4}));
  CHECK_FALSE(contains(d, Point<Q>{3, Q(401, 100)}));
  CHECK(contains(Range<Q>(d), Point<Q>{0, 0}));
}

TEST_CASE("dimension mismatch is an input error") {
  Box<Q> b{{0, 0}, {2, 2}};
  CHECK_THROWS_AS(contains(b, Point<Q>{1}), InputError);
  CHECK_THROWS_AS(distance(Metric::kL1, Point<Q>{1}, Point<Q>{1, 2}), InputError);
}

TEST_CASE("metric distances") {
  const Point<Q> o{0, 0};
  CHECK(distance(Metric::kLinf, o, Point<Q>{1, 2}) == 2);
  CHECK(distance(Metric::kL1, o, Point<Q>{1, 2}) == 3);
  CHECK(distance(Metric::kL2, o, Point<Q>{3, 4}) == 5);
  CHECK(compare_distance(Metric::kL2, o, Point<Q>{1, 2}, Q(2)) > 0);
  CHECK(compare_distance(Metric::kL2, o, Point<Q>{1, 2}, Q(9, 4)) < 0);
  CHECK(compare_distance(Metric::kL2, o, Point<Q>{3, 4}, Q(5)) == 0);
  CHECK(compare_distance(Metric::kLinf, o, Point<Q>{1, 2}, Q(19, 10)) > 0);
}

TEST_CASE("distances are symmetric and vanish on the diagonal") {
  testing_support::Rng rng(7);
  for (int it = 0; it < 200; ++it) {
    auto pts = testing_support::random_points(rng, 2, 3, 20);
    for (auto m : {Metric::kL1, Metric::kL2, Metric::kLinf}) {
      CHECK(distance(m, pts[0], pts[1]) == distance(m, pts[1], pts[0]));
      CHECK(distance(m, pts[0], pts[0]) == 0);
    }
  }
}

TEST_CASE("rational and float containment agree away from the boundary") {
  testing_support::Rng rng(11);
  for (int it = 0; it < 500; ++it) {
    Point<Q> p{testing_support::frac(testing_support::uniform(rng, 0, 1000), 7),
               testing_support::frac(testing_support::uniform(rng, 0, 1000), 13)};
    auto r = testing_support::random_disks(rng, 1, 100, Q(testing_support::uniform(rng, 1, 900)))[0];
    const auto& d = std::get<Disk<Q>>(r);
    const double slack = std::fabs(Q(squared_distance(p, d.center) - d.radius_sq).get_d());
    if (slack < 1e-9) continue;
    const Disk<double> dd{Point<double>{d.center[0].get_d(), d.center[1].get_d()},
                          d.radius_sq.get_d()};
    CHECK(contains(d, p) == contains(dd, Point<double>{p[0].get_d(), p[1].get_d()}));
  }
}

TEST_CASE("rotation maps L1 balls to Linf balls") {
  testing_support::Rng rng(3);
  for (int it = 0; it < 200; ++it) {
    auto pts = testing_support::random_points(rng, 2, 2, 30);
    CHECK(distance(Metric::kL1, pts[0], pts[1]) ==
          distance(Metric::kLinf, rotate45(pts[0]), rotate45(pts[1])));
  }
}

TEST_CASE("invalid ranges are rejected") {
  CHECK_THROWS_AS(check_range(Range<Q>(Box<Q>{{2, 0}, {1, 1}})), InputError);
  CHECK_THROWS_AS(check_range(Range<Q>(Disk<Q>{{0, 0, 0}, Q(1)})), InputError);
  CHECK_THROWS_AS(Disk<Q>::with_radius(Point<Q>{0, 0}, Q(-1)), InputError);
}

TEST_CASE("numbers parse exactly") {
  CHECK(parse_rational("12") == 12);
  CHECK(parse_rational("-0.25") == Q(-1, 4));
  CHECK(parse_rational("3/7") == Q(3, 7));
  CHECK(parse_rational("1e-3") == Q(1, 1000));
  CHECK(parse_rational("2.5E2") == 250);
  CHECK(parse_rational("007") == 7);
  CHECK(parse_rational("+.5") == Q(1, 2));
  for (const char* bad : {"", "abc", "1/0", "1.2.3", "--1", "1e", "3/", "0x10"})
    CHECK_THROWS_AS(parse_rational(bad), InputError);
}

TEST_CASE("double formatting round-trips") {
  CHECK(ScalarTraits<double>::to_string(0.1) == "0.1");
  CHECK(std::stod(ScalarTraits<double>::to_string(1.0 / 3)) == 1.0 / 3);
}

TEST_CASE("point files") {
  std::istringstream in("# header\n1,2\n\n 3/2 , 0.5 , 4\n");
  auto t = read_points(in, 2, "pts.csv");
  REQUIRE(t.points.size() == 2);
  CHECK(t.points[1] == Point<Q>{Q(3, 2), Q(1, 2)});
  CHECK(t.weights == std::vector<Q>{1, 4});

  std::istringstream bad("1,2\n1,2,3,4\n");
  CHECK_THROWS_WITH_AS(read_points(bad, 2, "pts.csv"), doctest::Contains("pts.csv:2:"),
                       InputError);
  std::istringstream zero("1,2,0\n");
  CHECK_THROWS_AS(read_points(zero, 2, "z"), InputError);
  std::istringstream junk("1,x\n");
  CHECK_THROWS_WITH_AS(read_points(junk, 2, "j"), doctest::Contains("j:1:"), InputError);
}

TEST_CASE("range files") {
  std::istringstream in("box,0,0,2,2\ndisk,1,1,5,3\n");
  auto t = read_ranges(in, 2, "r");
  REQUIRE(t.ranges.size() == 2);
  CHECK(std::get<Disk<Q>>(t.ranges[1]).radius_sq == 25);
  CHECK(t.weights == std::vector<Q>{1, 3});

  std::istringstream inverted("box,0,3,2,2\n");
  CHECK_THROWS_AS(read_ranges(inverted, 2, "r"), InputError);
  std::istringstream unknown("ball,0,0,1\n");
  CHECK_THROWS_AS(read_ranges(unknown, 2, "r"), InputError);
  std::istringstream disk3("disk,0,0,1\n");
  CHECK_THROWS_AS(read_ranges(disk3, 3, "r"), InputError);
  std::istringstream box1("box,0,1\n");
  CHECK(read_ranges(box1, 1, "r").ranges.size() == 1);
}

TEST_CASE("diagram files") {
  std::istringstream in("1,3\n0.5,2\n");
  auto x = read_diagram(in, "d");
  REQUIRE(x.size() == 2);
  CHECK(x[1].birth == Q(1, 2));
  std::istringstream flat("2,2\n");
  CHECK_THROWS_AS(read_diagram(flat, "d"), InputError);
}
