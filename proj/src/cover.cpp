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

#include "geomatch/cover.hpp"

#include <climits>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace geomatch {

std::size_t cover_size(const BicliqueCover& c) {
  std::size_t sigma = 0;
  for (const auto& part : c.parts) sigma += part.points.size() + part.ranges.size();
  return sigma;
}

void normalize_cover(BicliqueCover& c) {
  auto fix = [](std::vector<std::int32_t>& v, std::size_t bound, const char* side) {
    std::sort(v.begin(), v.end());
    if (std::adjacent_find(v.begin(), v.end()) != v.end())
      throw InputError(std::string("duplicate ") + side + " index inside one cover part");
    for (auto i : v)
      if (i < 0 || static_cast<std::size_t>(i) >= bound)
        throw InputError(std::string(side) + " index out of bounds in cover");
  };
  for (auto& part : c.parts) {
    fix(part.points, c.left_count, "point");
    fix(part.ranges, c.right_count, "range");
  }
}

void write_cover(std::ostream& out, const BicliqueCover& c) {
  out << "sigma=" << cover_size(c) << " parts=" << c.parts.size() << '\n';
  for (const auto& part : c.parts) {
    out << "P:";
    for (auto p : part.points) out << ' ' << p;
    out << " | R:";
    for (auto r : part.ranges) out << ' ' << r;
    out << '\n';
  }
}

namespace {

std::vector<std::int32_t> parse_indices(const std::string& text, std::size_t line_no) {
  std::istringstream in(text);
  std::vector<std::int32_t> out;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    long v = -1;
    try {
      v = std::stol(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || v < 0 || v > INT32_MAX)
      throw InputError("cover line " + std::to_string(line_no) + ": bad index '" + tok + "'");
    out.push_back(static_cast<std::int32_t>(v));
  }
  return out;
}

}  // namespace

BicliqueCover read_cover(std::istream& in, std::size_t left_count, std::size_t right_count) {
  std::string line;
  std::size_t line_no = 0;
  long long sigma = -1, nparts = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (std::sscanf(line.c_str(), " sigma=%lld parts=%lld", &sigma, &nparts) != 2 || sigma < 0 ||
        nparts < 0)
      throw InputError("cover line " + std::to_string(line_no) +
                       ": expected header 'sigma=<int> parts=<int>'");
    break;
  }
  if (sigma < 0) throw InputError("cover file is empty");

  BicliqueCover c;
  std::size_t max_p = 0, max_r = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto bar = line.find('|');
    auto pl = line.find("P:");
    auto rl = line.find("R:", bar == std::string::npos ? 0 : bar);
    if (bar == std::string::npos || pl == std::string::npos || rl == std::string::npos || pl > bar)
      throw InputError("cover line " + std::to_string(line_no) +
                       ": expected 'P: ... | R: ...'");
    CoverPart part;
    part.points = parse_indices(line.substr(pl + 2, bar - pl - 2), line_no);
    part.ranges = parse_indices(line.substr(rl + 2), line_no);
    for (auto p : part.points) max_p = std::max<std::size_t>(max_p, p + 1);
    for (auto r : part.ranges) max_r = std::max<std::size_t>(max_r, r + 1);
    c.parts.push_back(std::move(part));
  }
  if (static_cast<long long>(c.parts.size()) != nparts)
    throw InputError("cover header announces " + std::to_string(nparts) + " parts, found " +
                     std::to_string(c.parts.size()));
  c.left_count = left_count ? left_count : max_p;
  c.right_count = right_count ? right_count : max_r;
  normalize_cover(c);
  if (static_cast<long long>(cover_size(c)) != sigma)
    throw InputError("cover header sigma does not match the parts");
  return c;
}

}  // namespace geomatch
