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

// Times the serial and OpenMP variants of the hot kernels on random inputs
// and checks that both produce identical results.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "geomatch/cover.hpp"
#include "geomatch/kernels.hpp"

using namespace geomatch;

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = Clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(Clock::now() - t0).count());
  }
  return best;
}

int mismatches = 0;

void report(const char* name, std::size_t n, double ts, double tp, bool same) {
  std::printf("%-22s n=%-8zu serial %9.4f s  parallel %9.4f s  speedup %5.2fx  %s\n", name, n, ts,
              tp, ts / std::max(tp, 1e-12), same ? "ok" : "MISMATCH");
  if (!same) ++mismatches;
}

std::vector<Point<double>> random_points(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point<double>> out(n);
  for (auto& p : out) p = Point<double>{u(rng), u(rng)};
  return out;
}

std::vector<Range<double>> random_boxes(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Range<double>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = u(rng), y = u(rng), w = 0.1 * u(rng), h = 0.1 * u(rng);
    out.push_back(Box<double>{{x, y}, {x + w, y + h}});
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial vs parallel kernel benchmark"};
  std::size_t n = 4000;
  int reps = 3;
  std::uint64_t seed = 1;
  app.add_option("-n,--size", n, "Points per side")->check(CLI::PositiveNumber);
  app.add_option("-r,--reps", reps, "Repetitions; the best time is reported")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Random seed");
  CLI11_PARSE(app, argc, argv);

  std::printf("threads: %d\n", max_threads());
  std::mt19937_64 rng(seed);
  auto a = random_points(rng, n), b = random_points(rng, n);
  auto boxes = random_boxes(rng, n);

  {
    std::vector<IndexPair> s, p;
    const double ts = best_of(reps, [&] { s = serial::incident_pairs(a, boxes); });
    const double tp = best_of(reps, [&] { p = parallel::incident_pairs(a, boxes); });
    report("incident_pairs", n, ts, tp, s == p);
  }
  {
    std::vector<double> s, p;
    const double ts = best_of(reps, [&] { s = serial::pairwise_sq_distances(a, b); });
    const double tp = best_of(reps, [&] { p = parallel::pairwise_sq_distances(a, b); });
    report("pairwise_sq_distances", n, ts, tp, s == p);
  }
  {
    std::uint64_t s = 0, p = 0;
    const double v = 0.05;
    const double ts = best_of(reps, [&] { s = serial::count_pairs_at_most(a, b, v, false); });
    const double tp = best_of(reps, [&] { p = parallel::count_pairs_at_most(a, b, v, false); });
    report("count_pairs_at_most", n, ts, tp, s == p);
  }
  {
    const std::size_t m = n * 250;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> rows(m), cols(m);
    for (auto& x : rows) x = u(rng);
    for (auto& x : cols) x = u(rng);
    std::sort(rows.begin(), rows.end());
    std::sort(cols.begin(), cols.end());
    DifferenceMatrix<double> mat{rows, cols};
    std::uint64_t s = 0, p = 0;
    const double ts = best_of(reps, [&] { s = serial::count_at_most(mat, 0.25, true); });
    const double tp = best_of(reps, [&] { p = parallel::count_at_most(mat, 0.25, true); });
    report("count_at_most", m, ts, tp, s == p);
  }
  {
    std::vector<Box<double>> bx;
    for (const auto& r : boxes) bx.push_back(std::get<Box<double>>(r));
    std::size_t sigma = 0;
    const double t = best_of(reps, [&] { sigma = cover_size(box_cover(a, bx)); });
    std::printf("%-22s n=%-8zu %9.4f s  sigma %zu\n", "box_cover", n, t, sigma);
  }
  return mismatches == 0 ? 0 : 1;
}
