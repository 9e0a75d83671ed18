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

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "geomatch/bottleneck.hpp"
#include "geomatch/cover.hpp"
#include "geomatch/errors.hpp"
#include "geomatch/flow.hpp"
#include "geomatch/implicit_dinitz.hpp"
#include "geomatch/io.hpp"

namespace {

using geomatch::Rational;
using Json = nlohmann::ordered_json;

constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;
constexpr std::size_t kRationalLimit = 1000;

struct Common {
  std::string numeric = "auto";
  std::uint64_t seed = 0;
  std::size_t dim = 2;
};

bool use_rational(const Common& o, std::size_t n) {
  if (o.numeric == "rational") return true;
  if (o.numeric == "float") return false;
  return n <= kRationalLimit;
}

template <class S>
void put_scalar(Json& j, const std::string& key, const S& x) {
  j[key] = geomatch::ScalarTraits<S>::to_double(x);
  j[key + "_exact"] = geomatch::ScalarTraits<S>::to_string(x);
}

template <class S>
Json matching_json(const geomatch::Matching<S>& m) {
  Json arr = Json::array();
  for (const auto& a : m) {
    Json e;
    e["point"] = a.point;
    e["range"] = a.range;
    put_scalar(e, "amount", a.amount);
    arr.push_back(std::move(e));
  }
  return arr;
}

Json cover_stats(const geomatch::BicliqueCover& c) {
  Json j;
  const auto sigma = geomatch::cover_size(c);
  const double n = static_cast<double>(c.left_count + c.right_count);
  j["sigma"] = sigma;
  j["parts"] = c.parts.size();
  j["n"] = c.left_count + c.right_count;
  j["sigma_over_n_log2sq_n"] = n > 1 ? sigma / (n * std::log2(n) * std::log2(n)) : 0.0;
  return j;
}

bool all_boxes(const std::vector<geomatch::Range<Rational>>& ranges) {
  for (const auto& r : ranges)
    if (!std::holds_alternative<geomatch::Box<Rational>>(r)) return false;
  return true;
}

bool all_disks(const std::vector<geomatch::Range<Rational>>& ranges) {
  for (const auto& r : ranges)
    if (!std::holds_alternative<geomatch::Disk<Rational>>(r)) return false;
  return true;
}

geomatch::Metric parse_metric(const std::string& s) {
  if (s == "l1") return geomatch::Metric::kL1;
  if (s == "l2") return geomatch::Metric::kL2;
  return geomatch::Metric::kLinf;
}

// cover ----------------------------------------------------------------

struct CoverArgs {
  std::string points, ranges, shape = "box", out;
};

template <class S>
geomatch::BicliqueCover build_cover(const geomatch::PointTable& pt, const geomatch::RangeTable& rt,
                                    const std::string& shape) {
  const auto pts = geomatch::convert<S>(pt.points);
  const auto rs = geomatch::convert<S>(rt.ranges);
  if (shape == "box") {
    if (!all_boxes(rt.ranges)) throw geomatch::InputError("shape box requires box ranges only");
    return geomatch::box_cover(pts, rs);
  }
  if (shape == "disk" && !all_disks(rt.ranges))
    throw geomatch::InputError("shape disk requires disk ranges only");
  return geomatch::trivial_cover(pts, rs);
}

Json run_cover(const CoverArgs& a, const Common& o) {
  const auto pt = geomatch::load_points(a.points, o.dim);
  const auto rt = geomatch::load_ranges(a.ranges, o.dim);
  const bool exact = use_rational(o, pt.points.size() + rt.ranges.size());
  auto c = exact ? build_cover<Rational>(pt, rt, a.shape) : build_cover<double>(pt, rt, a.shape);
  if (!a.out.empty()) {
    std::ofstream out(a.out);
    if (!out) throw geomatch::InputError("cannot write " + a.out);
    geomatch::write_cover(out, c);
  }
  Json j;
  j["command"] = "cover";
  j["shape"] = a.shape;
  j["numeric"] = exact ? "rational" : "float";
  j["cover"] = cover_stats(c);
  if (!a.out.empty()) j["cover_file"] = a.out;
  return j;
}

// match ----------------------------------------------------------------

struct MatchArgs {
  std::vector<std::string> points, ranges;
  std::string mode = "real", cover = "auto";
  bool trace = false;
  int jobs = 1;
};

template <class S>
Json solve_match(const geomatch::PointTable& pt, const geomatch::RangeTable& rt,
                 const MatchArgs& a) {
  const auto pts = geomatch::convert<S>(pt.points);
  const auto rs = geomatch::convert<S>(rt.ranges);
  geomatch::SupplyDemand<S> sd{geomatch::convert<S>(pt.weights), geomatch::convert<S>(rt.weights)};
  geomatch::BicliqueCover c;
  if (a.cover == "auto") {
    c = all_boxes(rt.ranges) ? geomatch::box_cover(pts, rs) : geomatch::trivial_cover(pts, rs);
  } else {
    std::ifstream in(a.cover);
    if (!in) throw geomatch::InputError("cannot open " + a.cover);
    c = geomatch::read_cover(in, pts.size(), rs.size());
  }
  Json j;
  j["mode"] = a.mode;
  j["numeric"] = geomatch::ScalarTraits<S>::kName;
  j["cover"] = cover_stats(c);
  if (a.mode == "integral") {
    if (!sd.integral())
      throw geomatch::InputError("integral mode requires integral supplies and demands");
    auto res = geomatch::max_matching_flow(c, sd);
    put_scalar(j, "value", res.flow_value);
    put_scalar(j, "target", sd.target());
    j["phases"] = res.phases;
    j["assignments"] = res.matching.size();
    j["matching"] = matching_json(res.matching);
    return j;
  }
  auto res = geomatch::max_matching_implicit(c, sd);
  put_scalar(j, "value", res.value);
  put_scalar(j, "target", sd.target());
  j["phases"] = res.trace.size();
  j["assignments"] = res.matching.size();
  j["matching"] = matching_json(res.matching);
  if (a.trace) {
    Json tr = Json::array();
    for (const auto& ph : res.trace)
      tr.push_back(Json{{"level_t", ph.level_of_t},
                        {"blocking", ph.blocking_value},
                        {"support", ph.support_after_prune}});
    j["trace"] = std::move(tr);
    geomatch::write_trace(std::cerr, res.trace);
  }
  return j;
}

Json run_match(const MatchArgs& a, const Common& o) {
  if (a.points.size() != a.ranges.size())
    throw geomatch::InputError("--points and --ranges must be given the same number of times");
  const std::size_t count = a.points.size();
  std::vector<Json> results(count);
  std::vector<std::exception_ptr> errors(count);
  const int jobs = a.jobs < 1 ? 1 : a.jobs;
#pragma omp parallel for num_threads(jobs) schedule(dynamic, 1)
  for (std::size_t i = 0; i < count; ++i) {
    try {
      const auto pt = geomatch::load_points(a.points[i], o.dim);
      const auto rt = geomatch::load_ranges(a.ranges[i], o.dim);
      results[i] = use_rational(o, pt.points.size() + rt.ranges.size())
                       ? solve_match<Rational>(pt, rt, a)
                       : solve_match<double>(pt, rt, a);
      results[i]["points"] = a.points[i];
      results[i]["ranges"] = a.ranges[i];
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  Json j;
  j["command"] = "match";
  if (count == 1) {
    for (auto& [k, v] : results[0].items()) j[k] = v;
  } else {
    j["instances"] = results;
  }
  return j;
}

// bottleneck -----------------------------------------------------------

struct BottleneckArgs {
  std::string red, blue, metric = "linf";
  std::optional<std::string> lambda;
};

template <class S>
Json solve_bottleneck(const geomatch::PointTable& red, const geomatch::PointTable& blue,
                      const BottleneckArgs& a, const Common& o) {
  const auto p = geomatch::convert<S>(red.points);
  const auto q = geomatch::convert<S>(blue.points);
  const auto m = parse_metric(a.metric);
  bool unit = true;
  for (const auto& w : red.weights) unit = unit && w == 1;
  for (const auto& w : blue.weights) unit = unit && w == 1;
  geomatch::SupplyDemand<S> sd{geomatch::convert<S>(red.weights), geomatch::convert<S>(blue.weights)};
  if (unit && p.size() != q.size())
    throw geomatch::InputError("red and blue point sets must have equal size");
  Json j;
  j["command"] = "bottleneck";
  j["metric"] = geomatch::metric_name(m);
  j["numeric"] = geomatch::ScalarTraits<S>::kName;
  j["perfect"] = unit;
  if (a.lambda) {
    const S lambda = geomatch::parse_scalar<S>(*a.lambda);
    auto d = geomatch::decide(p, q, m, lambda, sd);
    put_scalar(j, "lambda", lambda);
    j["feasible"] = d.feasible;
    put_scalar(j, "value", d.value);
    j["matching"] = matching_json(d.matching);
    return j;
  }
  auto res = geomatch::bottleneck_search(p, q, m, sd, o.seed);
  j["lambda_star"] = res.lambda;
  if (res.squared) {
    j["lambda_star_squared_exact"] = geomatch::ScalarTraits<S>::to_string(res.value);
  } else {
    j["lambda_star_exact"] = geomatch::ScalarTraits<S>::to_string(res.value);
  }
  j["decisions"] = res.decisions;
  j["matching"] = matching_json(res.matching);
  return j;
}

Json run_bottleneck(const BottleneckArgs& a, const Common& o) {
  const auto red = geomatch::load_points(a.red, 2);
  const auto blue = geomatch::load_points(a.blue, 2);
  return use_rational(o, red.points.size() + blue.points.size())
             ? solve_bottleneck<Rational>(red, blue, a, o)
             : solve_bottleneck<double>(red, blue, a, o);
}

// pd -------------------------------------------------------------------

struct PdArgs {
  std::string x, y;
};

template <class S>
Json solve_pd(const geomatch::PersistenceDiagram<Rational>& x,
              const geomatch::PersistenceDiagram<Rational>& y, const Common& o) {
  auto res = geomatch::pd_bottleneck(geomatch::convert<S>(x), geomatch::convert<S>(y), o.seed);
  Json j;
  j["command"] = "pd";
  j["numeric"] = geomatch::ScalarTraits<S>::kName;
  put_scalar(j, "w_inf", res.value);
  j["decisions"] = res.decisions;
  return j;
}

Json run_pd(const PdArgs& a, const Common& o) {
  const auto x = geomatch::load_diagram(a.x);
  const auto y = geomatch::load_diagram(a.y);
  return use_rational(o, x.size() + y.size()) ? solve_pd<Rational>(x, y, o)
                                              : solve_pd<double>(x, y, o);
}

void add_common(CLI::App* cmd, Common& o, bool with_dim) {
  cmd->add_option("--numeric", o.numeric, "rational, float, or auto (rational up to 1000 objects)")
      ->check(CLI::IsMember({"auto", "rational", "float"}));
  cmd->add_option("--seed", o.seed, "seed for randomized pivot selection");
  if (with_dim) cmd->add_option("--dim", o.dim, "point dimension in the CSV files")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric many-to-many matching, bottleneck and persistence distances"};
  app.require_subcommand(1);

  Common common;
  CoverArgs cover_args;
  auto* cover = app.add_subcommand("cover", "build a biclique cover of the incidence graph");
  cover->add_option("--points", cover_args.points, "points CSV")->required();
  cover->add_option("--ranges", cover_args.ranges, "ranges CSV")->required();
  cover->add_option("--shape", cover_args.shape, "box, disk or trivial")
      ->check(CLI::IsMember({"box", "disk", "trivial"}));
  cover->add_option("--out", cover_args.out, "write the cover file here");
  add_common(cover, common, true);

  MatchArgs match_args;
  auto* match = app.add_subcommand("match", "maximum many-to-many matching");
  match->add_option("--points", match_args.points, "points CSV (repeatable)")->required();
  match->add_option("--ranges", match_args.ranges, "ranges CSV (repeatable)")->required();
  match->add_option("--mode", match_args.mode, "integral or real")
      ->check(CLI::IsMember({"integral", "real"}));
  match->add_option("--cover", match_args.cover, "auto or a cover file");
  match->add_flag("--trace", match_args.trace, "report one line per phase");
  match->add_option("--jobs", match_args.jobs, "instances solved in parallel")
      ->check(CLI::PositiveNumber);
  add_common(match, common, true);

  BottleneckArgs bn_args;
  auto* bn = app.add_subcommand("bottleneck", "bottleneck matching between two planar point sets");
  bn->add_option("--red", bn_args.red, "first points CSV")->required();
  bn->add_option("--blue", bn_args.blue, "second points CSV")->required();
  bn->add_option("--metric", bn_args.metric, "l1, l2 or linf")
      ->check(CLI::IsMember({"l1", "l2", "linf"}));
  bn->add_option("--lambda", bn_args.lambda, "decide feasibility at this distance");
  add_common(bn, common, false);

  PdArgs pd_args;
  auto* pd = app.add_subcommand("pd", "bottleneck distance between persistence diagrams");
  pd->add_option("--x", pd_args.x, "first diagram CSV (birth,death)")->required();
  pd->add_option("--y", pd_args.y, "second diagram CSV")->required();
  add_common(pd, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    Json out;
    if (*cover) {
      out = run_cover(cover_args, common);
    } else if (*match) {
      out = run_match(match_args, common);
    } else if (*bn) {
      out = run_bottleneck(bn_args, common);
    } else {
      out = run_pd(pd_args, common);
    }
    std::cout << out.dump(2) << '\n';
    return 0;
  } catch (const geomatch::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const geomatch::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const geomatch::InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}
