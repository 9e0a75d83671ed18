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

#include "geomatch/oracle.hpp"

#include <deque>
#include <limits>
#include <queue>

namespace geomatch::oracle {

namespace {

Rational abs_diff(const Rational& a, const Rational& b) { return a < b ? Rational(b - a) : Rational(a - b); }

// d(p, q) for L1 / Linf, squared distance for L2.
Rational metric_value(const Point<Rational>& p, const Point<Rational>& q, Metric m) {
  Rational acc = 0;
  for (std::size_t i = 0; i < p.coords.size(); ++i) {
    Rational d = abs_diff(p.coords[i], q.coords[i]);
    switch (m) {
      case Metric::kL1: acc += d; break;
      case Metric::kL2: acc += d * d; break;
      case Metric::kLinf: if (acc < d) acc = d; break;
    }
  }
  return acc;
}

}  // namespace

bool point_in_range(const Point<Rational>& p, const Range<Rational>& r) {
  if (const auto* b = std::get_if<Box<Rational>>(&r)) {
    if (b->lo.coords.size() != p.coords.size()) throw InputError("oracle: dimension mismatch");
    for (std::size_t i = 0; i < p.coords.size(); ++i) {
      if (p.coords[i] < b->lo.coords[i]) return false;
      if (p.coords[i] > b->hi.coords[i]) return false;
    }
    return true;
  }
  const auto& d = std::get<Disk<Rational>>(r);
  if (d.center.coords.size() != p.coords.size()) throw InputError("oracle: dimension mismatch");
  return metric_value(p, d.center, Metric::kL2) <= d.radius_sq;
}

ExplicitBipartite brute_force_incidences(const std::vector<Point<Rational>>& points,
                                         const std::vector<Range<Rational>>& ranges) {
  if (static_cast<std::uint64_t>(points.size()) * ranges.size() > kIncidenceGuard)
    throw InputError("oracle: incidence enumeration above 10^7 pairs");
  ExplicitBipartite g{points.size(), ranges.size(), {}};
  for (std::size_t p = 0; p < points.size(); ++p)
    for (std::size_t r = 0; r < ranges.size(); ++r)
      if (point_in_range(points[p], ranges[r]))
        g.edges.emplace_back(static_cast<std::int32_t>(p), static_cast<std::int32_t>(r));
  return g;
}

Rational reference_max_flow(const ExplicitBipartite& g, const std::vector<Rational>& supplies,
                            const std::vector<Rational>& demands) {
  const std::size_t np = g.left, nr = g.right;
  if (np + nr > 400) throw InputError("oracle: reference_max_flow limited to 400 nodes");
  if (supplies.size() != np || demands.size() != nr) throw InputError("oracle: size mismatch");
  const std::size_t n = np + nr + 2, s = 0, t = n - 1;
  Rational big = 1;
  for (const auto& x : supplies) big += x;
  std::vector<std::vector<Rational>> cap(n, std::vector<Rational>(n, Rational(0)));
  std::vector<std::vector<std::size_t>> adj(n);
  auto add = [&](std::size_t u, std::size_t v, const Rational& c) {
    if (cap[u][v] == 0 && cap[v][u] == 0) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    cap[u][v] += c;
  };
  for (std::size_t p = 0; p < np; ++p) add(s, 1 + p, supplies[p]);
  for (std::size_t r = 0; r < nr; ++r) add(1 + np + r, t, demands[r]);
  for (auto [p, r] : g.edges) add(1 + p, 1 + np + r, big);

  Rational total = 0;
  while (true) {
    std::vector<long> prev(n, -1);
    prev[s] = static_cast<long>(s);
    std::deque<std::size_t> q{s};
    while (!q.empty() && prev[t] < 0) {
      auto u = q.front();
      q.pop_front();
      for (auto v : adj[u])
        if (prev[v] < 0 && cap[u][v] > 0) {
          prev[v] = static_cast<long>(u);
          q.push_back(v);
        }
    }
    if (prev[t] < 0) break;
    Rational push = -1;
    for (std::size_t v = t; v != s; v = prev[v]) {
      const auto& c = cap[prev[v]][v];
      if (push < 0 || c < push) push = c;
    }
    for (std::size_t v = t; v != s; v = prev[v]) {
      cap[prev[v]][v] -= push;
      cap[v][prev[v]] += push;
    }
    total += push;
  }
  return total;
}

std::vector<int> residual_distances(
    const ExplicitBipartite& g, const std::vector<Rational>& supplies,
    const std::vector<Rational>& demands,
    const std::vector<std::pair<std::pair<std::int32_t, std::int32_t>, Rational>>& flow) {
  const std::size_t np = g.left, nr = g.right, n = np + nr + 2, t = n - 1;
  std::vector<Rational> used(np, Rational(0)), met(nr, Rational(0));
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& [pr, amount] : flow) {
    used[pr.first] += amount;
    met[pr.second] += amount;
    if (amount > 0) adj[1 + np + pr.second].push_back(1 + pr.first);
  }
  for (std::size_t p = 0; p < np; ++p) {
    if (used[p] < supplies[p]) adj[0].push_back(1 + p);
    if (used[p] > 0) adj[1 + p].push_back(0);
  }
  for (std::size_t r = 0; r < nr; ++r) {
    if (met[r] < demands[r]) adj[1 + np + r].push_back(t);
    if (met[r] > 0) adj[t].push_back(1 + np + r);
  }
  for (auto [p, r] : g.edges) adj[1 + p].push_back(1 + np + r);
  std::vector<int> dist(n, -1);
  std::queue<std::size_t> q;
  dist[0] = 0;
  q.push(0);
  while (!q.empty()) {
    auto u = q.front();
    q.pop();
    for (auto v : adj[u])
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
  }
  return dist;
}

std::size_t hopcroft_karp(const ExplicitBipartite& g) {
  const std::size_t nl = g.left, nr = g.right;
  if (nl > 5000 || nr > 5000) throw InputError("oracle: hopcroft_karp limited to 5000 per side");
  std::vector<std::vector<std::int32_t>> adj(nl);
  for (auto [u, v] : g.edges) adj[u].push_back(v);
  constexpr int kInf = std::numeric_limits<int>::max();
  std::vector<int> match_l(nl, -1), match_r(nr, -1), dist(nl);

  auto bfs = [&]() {
    std::queue<std::size_t> q;
    bool found = false;
    for (std::size_t u = 0; u < nl; ++u) {
      if (match_l[u] < 0) {
        dist[u] = 0;
        q.push(u);
      } else {
        dist[u] = kInf;
      }
    }
    while (!q.empty()) {
      auto u = q.front();
      q.pop();
      for (auto v : adj[u]) {
        const int w = match_r[v];
        if (w < 0) {
          found = true;
        } else if (dist[w] == kInf) {
          dist[w] = dist[u] + 1;
          q.push(w);
        }
      }
    }
    return found;
  };

  std::vector<std::size_t> it(nl);
  auto dfs = [&](auto&& self, std::size_t u) -> bool {
    for (; it[u] < adj[u].size(); ++it[u]) {
      const auto v = adj[u][it[u]];
      const int w = match_r[v];
      if (w < 0 || (dist[w] == dist[u] + 1 && self(self, w))) {
        match_l[u] = v;
        match_r[v] = static_cast<int>(u);
        return true;
      }
    }
    dist[u] = kInf;
    return false;
  };

  std::size_t size = 0;
  while (bfs()) {
    std::fill(it.begin(), it.end(), 0);
    for (std::size_t u = 0; u < nl; ++u)
      if (match_l[u] < 0 && dfs(dfs, u)) ++size;
  }
  return size;
}

ExplicitBipartite distance_graph(const std::vector<Point<Rational>>& p,
                                 const std::vector<Point<Rational>>& q, Metric m,
                                 const Rational& lambda_or_sq) {
  ExplicitBipartite g{p.size(), q.size(), {}};
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j)
      if (metric_value(p[i], q[j], m) <= lambda_or_sq)
        g.edges.emplace_back(static_cast<std::int32_t>(i), static_cast<std::int32_t>(j));
  return g;
}

Rational brute_bottleneck(const std::vector<Point<Rational>>& p,
                          const std::vector<Point<Rational>>& q, Metric m) {
  if (p.size() != q.size()) throw InputError("oracle: bottleneck needs equal sizes");
  if (p.empty()) return 0;
  std::vector<Rational> cand;
  for (const auto& a : p)
    for (const auto& b : q) cand.push_back(metric_value(a, b, m));
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  for (const auto& c : cand)
    if (hopcroft_karp(distance_graph(p, q, m, c)) == p.size()) return c;
  throw InternalError("oracle: no perfect matching at the largest distance");
}

Rational brute_pd_bottleneck(const std::vector<std::pair<Rational, Rational>>& x,
                             const std::vector<std::pair<Rational, Rational>>& y) {
  const std::size_t m = x.size() + y.size();
  if (m == 0) return 0;
  auto proj = [](const std::pair<Rational, Rational>& b) {
    Rational mid = (b.first + b.second) / 2;
    return Point<Rational>{mid, mid};
  };
  // P = X0 then Y0'; Q = Y0 then X0'.
  std::vector<Point<Rational>> P, Q;
  for (const auto& b : x) P.push_back(Point<Rational>{b.first, b.second});
  for (const auto& b : y) P.push_back(proj(b));
  for (const auto& b : y) Q.push_back(Point<Rational>{b.first, b.second});
  for (const auto& b : x) Q.push_back(proj(b));
  auto in_x0 = [&](std::size_t i) { return i < x.size(); };
  auto in_y0 = [&](std::size_t j) { return j < y.size(); };

  std::vector<Rational> cand{Rational(0)};
  for (const auto& a : P)
    for (const auto& b : Q) cand.push_back(metric_value(a, b, Metric::kLinf));
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  for (const auto& lambda : cand) {
    ExplicitBipartite g{m, m, {}};
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        const bool diag_pair = !in_x0(i) && !in_y0(j);
        const bool near = (in_x0(i) || in_y0(j)) &&
                          metric_value(P[i], Q[j], Metric::kLinf) <= lambda;
        if (diag_pair || near)
          g.edges.emplace_back(static_cast<std::int32_t>(i), static_cast<std::int32_t>(j));
      }
    if (hopcroft_karp(g) == m) return lambda;
  }
  throw InternalError("oracle: persistence matching never became perfect");
}

}  // namespace geomatch::oracle
