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

#ifndef GEOMATCH_RBLCT_HPP_
#define GEOMATCH_RBLCT_HPP_

// Red-blue link-cut tree: a forest of rooted trees over red and blue nodes
// where every edge joins a red and a blue node and carries a nonnegative
// value. An edge takes the color of its parent endpoint, so colors change
// when a path is reversed by evert.
//
// Solid paths are splay trees whose in-order sequence alternates node
// vertices and edge vertices. Every splay vertex stores
//   revx        its reverse bit xor the reverse bit of its splay parent
//   down[k]     own(v) - min(v)        (own = edge value or +inf)
//   dmin[k]     min(v) - min(parent)   (absolute min at a splay root)
// for the two color slots k. Slot k of a vertex means color k when the
// vertex's accumulated reverse bit is 0 and the other color when it is 1,
// so flipping a whole solid path is a single bit change at its root, and
// adding to every edge of one color on a path is one update to a root dmin.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geomatch/errors.hpp"
#include "geomatch/scalar.hpp"

namespace geomatch {

enum class Color : std::uint8_t { kRed = 0, kBlue = 1 };

inline Color other(Color c) { return c == Color::kRed ? Color::kBlue : Color::kRed; }

template <class S>
class RbForest {
 public:
  using NodeId = std::int32_t;

  struct FoundEdge {
    NodeId node;  // lower endpoint w of the edge (w, parent(w))
    S value;
  };

  NodeId maketree(Color c) {
    const auto v = new_vertex();
    vx_[v].node = static_cast<NodeId>(node_vertex_.size());
    vx_[v].slot = static_cast<std::uint8_t>(c);
    node_vertex_.push_back(v);
    return vx_[v].node;
  }

  std::size_t node_count() const { return node_vertex_.size(); }
  Color color(NodeId v) const { return static_cast<Color>(vx_[vertex(v)].slot); }
  std::uint64_t rotations() const { return rotations_; }

  NodeId findroot(NodeId v) {
    auto x = vertex(v);
    access(x);
    while (vx_[x].ch[0] >= 0) {
      x = vx_[x].ch[0];
      normalize(x);
    }
    splay(x);
    return vx_[x].node;
  }

  bool connected(NodeId a, NodeId b) { return findroot(a) == findroot(b); }

  // Adds edge (v, w) of value x with w as the parent of v. v must be a root,
  // the colors must differ, and v and w must lie in different trees.
  void link(NodeId v, NodeId w, const S& x) {
    const auto xv = vertex(v), xw = vertex(w);
    if (color(v) == color(w)) throw UsageError("link: endpoints have the same color");
    if (findroot(v) != v) throw UsageError("link: child is not a tree root");
    if (findroot(w) == v) throw UsageError("link: nodes are already in one tree");
    if (ScalarTraits<S>::is_negative(x)) throw UsageError("link: negative edge value");
    const auto e = new_vertex();
    auto& ev = vx_[e];
    const int k = static_cast<int>(color(w));
    ev.slot = static_cast<std::uint8_t>(k);
    ev.ends[static_cast<int>(color(v))] = v;
    ev.ends[k] = w;
    ev.dmin[k] = Ext::of(x);
    ev.down[k] = Ext::of(S(0));
    access(xv);
    vx_[xv].par = e;
    access(e);
    vx_[e].par = xw;
  }

  // Removes the edge between v and its parent.
  void cut(NodeId v) {
    const auto x = vertex(v);
    access(x);
    auto y = vx_[x].ch[0];
    if (y < 0) throw UsageError("cut: node is a tree root");
    normalize(y);
    while (vx_[y].ch[1] >= 0) {
      y = vx_[y].ch[1];
      normalize(y);
    }
    const auto e = y;
    set_child(x, 0, -1);
    access(e);
    set_child(e, 0, -1);
    free_vertex(e);
  }

  void evert(NodeId v) {
    const auto x = vertex(v);
    access(x);
    vx_[x].revx ^= 1;
  }

  // Minimum value x of a blue edge on the path from v to its root, and the
  // last vertex w on that path (closest to the root) with (w, parent(w)) a
  // blue edge of value x. Empty when the path has no blue edge.
  std::optional<FoundEdge> findblue(NodeId v) {
    using T = ScalarTraits<S>;
    constexpr int kB = static_cast<int>(Color::kBlue);
    auto x = vertex(v);
    access(x);
    const Ext target = vx_[x].dmin[kB];
    if (target.inf) return std::nullopt;
    Ext base = target;
    while (true) {
      const auto l = vx_[x].ch[0];
      if (l >= 0) {
        normalize(l);
        const Ext ml = add(base, vx_[l].dmin[kB]);
        if (!ml.inf && !T::is_positive(S(ml.v - target.v))) {
          x = l;
          base = ml;
          continue;
        }
      }
      const Ext own = add(base, vx_[x].down[kB]);
      if (!own.inf && !T::is_positive(S(own.v - target.v))) break;
      const auto r = vx_[x].ch[1];
      if (r < 0) throw InternalError("findblue: minimum not found in solid tree");
      normalize(r);
      base = add(base, vx_[r].dmin[kB]);
      x = r;
    }
    const NodeId w = vx_[x].ends[static_cast<int>(Color::kRed)];
    splay(x);
    return FoundEdge{w, target.v};
  }

  // Adds x to every edge of color c on the path from v to its root.
  void add_on_path(NodeId v, Color c, const S& x) {
    const auto u = vertex(v);
    access(u);
    auto& m = vx_[u].dmin[static_cast<int>(c)];
    if (m.inf) return;
    S next = m.v + x;
    if (ScalarTraits<S>::is_negative(next)) throw UsageError("add: edge value would become negative");
    m.v = std::move(next);
  }
  void addblue(NodeId v, const S& x) { add_on_path(v, Color::kBlue, x); }
  void addred(NodeId v, const S& x) { add_on_path(v, Color::kRed, x); }

  // Parent of v and the value of edge (v, parent), or empty for a root.
  std::optional<std::pair<NodeId, S>> parent(NodeId v) {
    const auto x = vertex(v);
    access(x);
    auto y = vx_[x].ch[0];
    if (y < 0) return std::nullopt;
    normalize(y);
    while (vx_[y].ch[1] >= 0) {
      y = vx_[y].ch[1];
      normalize(y);
    }
    splay(y);
    const auto& e = vx_[y];
    const int k = e.slot;  // splay root, so its reverse bit is 0 here
    if (e.revx) throw InternalError("parent: splay root not normalized");
    S value = add(e.dmin[k], e.down[k]).v;
    const NodeId up = e.ends[0] == v ? e.ends[1] : e.ends[0];
    return std::make_pair(up, std::move(value));
  }

  // Recomputes every aggregate from scratch along each solid tree and checks
  // it against the differential fields; also checks that each edge's derived
  // color matches its parent endpoint. Throws InternalError on mismatch.
  void check_invariants() const;

 private:
  struct Ext {
    S v{};
    bool inf = true;
    static Ext of(S x) {
      Ext e;
      e.v = std::move(x);
      e.inf = false;
      return e;
    }
  };

  static Ext add(const Ext& a, const Ext& b) {
    if (a.inf || b.inf) return Ext{};
    return Ext::of(S(a.v + b.v));
  }
  static Ext sub(const Ext& a, const Ext& b) {
    if (a.inf) return Ext{};
    if (b.inf) throw InternalError("rb-forest: finite minimum below an infinite one");
    return Ext::of(S(a.v - b.v));
  }
  static Ext min(const Ext& a, const Ext& b) {
    if (a.inf) return b;
    if (b.inf) return a;
    return b.v < a.v ? b : a;
  }

  struct Vertex {
    std::int32_t ch[2] = {-1, -1};
    std::int32_t par = -1;  // splay parent, or path-parent at a splay root
    std::uint8_t revx = 0;
    std::uint8_t slot = 0;  // node: its color; edge: color slot of its value
    NodeId node = -1;       // -1 for edge vertices
    NodeId ends[2] = {-1, -1};  // edge endpoints indexed by color
    Ext dmin[2];
    Ext down[2];
  };

  std::int32_t vertex(NodeId v) const {
    if (v < 0 || static_cast<std::size_t>(v) >= node_vertex_.size())
      throw UsageError("rb-forest: unknown node " + std::to_string(v));
    return node_vertex_[v];
  }

  std::int32_t new_vertex() {
    if (!free_.empty()) {
      auto v = free_.back();
      free_.pop_back();
      vx_[v] = Vertex{};
      return v;
    }
    vx_.emplace_back();
    return static_cast<std::int32_t>(vx_.size() - 1);
  }
  void free_vertex(std::int32_t v) {
    vx_[v] = Vertex{};
    free_.push_back(v);
  }

  bool is_splay_root(std::int32_t x) const {
    const auto p = vx_[x].par;
    return p < 0 || (vx_[p].ch[0] != x && vx_[p].ch[1] != x);
  }

  // Clears x's accumulated reverse bit, assuming its splay parent (if any)
  // already has none: children swap, the bit moves down to them, and the
  // color slots of x swap meaning.
  void normalize(std::int32_t x) {
    auto& v = vx_[x];
    if (!v.revx) return;
    std::swap(v.ch[0], v.ch[1]);
    for (auto c : v.ch)
      if (c >= 0) vx_[c].revx ^= 1;
    std::swap(v.dmin[0], v.dmin[1]);
    std::swap(v.down[0], v.down[1]);
    if (v.node < 0) v.slot ^= 1;
    v.revx = 0;
  }

  // Subtree minimum of child c, in the frame used by base (its parent's
  // subtree minimum). Slot lookup honours c's own reverse bit.
  Ext child_min(const Ext& base, std::int32_t c, int color) const {
    if (c < 0) return Ext{};
    return add(base, vx_[c].dmin[color ^ vx_[c].revx]);
  }
  void set_child_min(std::int32_t c, int color, const Ext& value, const Ext& parent_min) {
    if (c < 0) return;
    vx_[c].dmin[color ^ vx_[c].revx] = sub(value, parent_min);
  }

  void rotate(std::int32_t x) {
    const auto y = vx_[x].par;
    const auto z = vx_[y].par;
    const int dir = vx_[y].ch[1] == x ? 1 : 0;
    const auto a = vx_[x].ch[dir];
    const auto b = vx_[x].ch[dir ^ 1];
    const auto c = vx_[y].ch[dir ^ 1];
    for (int k = 0; k < 2; ++k) {
      const Ext my = vx_[y].dmin[k];
      const Ext mx = add(my, vx_[x].dmin[k]);
      const Ext own_x = add(mx, vx_[x].down[k]);
      const Ext own_y = add(my, vx_[y].down[k]);
      const Ext ma = child_min(mx, a, k);
      const Ext mb = child_min(mx, b, k);
      const Ext mc = child_min(my, c, k);
      const Ext my_new = min(own_y, min(mb, mc));
      const Ext mx_new = my;
      vx_[x].dmin[k] = my;
      vx_[y].dmin[k] = sub(my_new, mx_new);
      vx_[x].down[k] = sub(own_x, mx_new);
      vx_[y].down[k] = sub(own_y, my_new);
      set_child_min(a, k, ma, mx_new);
      set_child_min(b, k, mb, my_new);
      set_child_min(c, k, mc, my_new);
    }
    if (!is_splay_root(y)) vx_[z].ch[vx_[z].ch[1] == y ? 1 : 0] = x;
    vx_[x].par = z;
    vx_[y].ch[dir] = b;
    if (b >= 0) vx_[b].par = y;
    vx_[x].ch[dir ^ 1] = y;
    vx_[y].par = x;
    ++rotations_;
  }

  void splay(std::int32_t x) {
    path_.clear();
    for (auto u = x;; u = vx_[u].par) {
      path_.push_back(u);
      if (is_splay_root(u)) break;
    }
    for (auto it = path_.rbegin(); it != path_.rend(); ++it) normalize(*it);
    while (!is_splay_root(x)) {
      const auto y = vx_[x].par;
      if (!is_splay_root(y)) {
        const auto z = vx_[y].par;
        const bool zigzig = (vx_[z].ch[0] == y) == (vx_[y].ch[0] == x);
        rotate(zigzig ? y : x);
      }
      rotate(x);
    }
  }

  // Replaces child dir of splay root y (normalized) by c, which must be a
  // splay root or -1. The old child becomes a splay root that keeps y as its
  // path-parent when dir = 1 and is detached otherwise.
  void set_child(std::int32_t y, int dir, std::int32_t c) {
    const auto old = vx_[y].ch[dir];
    const auto keep = vx_[y].ch[dir ^ 1];
    for (int k = 0; k < 2; ++k) {
      const Ext my = vx_[y].dmin[k];
      const Ext own = add(my, vx_[y].down[k]);
      const Ext mk = child_min(my, keep, k);
      const Ext mo = child_min(my, old, k);
      const Ext mc = c >= 0 ? vx_[c].dmin[k ^ vx_[c].revx] : Ext{};
      const Ext my_new = min(own, min(mk, mc));
      if (old >= 0) vx_[old].dmin[k ^ vx_[old].revx] = mo;
      vx_[y].dmin[k] = my_new;
      vx_[y].down[k] = sub(own, my_new);
      set_child_min(keep, k, mk, my_new);
      set_child_min(c, k, mc, my_new);
    }
    vx_[y].ch[dir] = c;
    if (c >= 0) vx_[c].par = y;
    if (old >= 0 && dir == 0) vx_[old].par = -1;
  }

  // Makes the path from x to its tree root one solid path with x deepest;
  // x ends as the root of that splay tree.
  void access(std::int32_t x) {
    std::int32_t last = -1;
    for (auto y = x; y >= 0; y = vx_[y].par) {
      splay(y);
      set_child(y, 1, last);
      last = y;
    }
    splay(x);
  }

  void check_subtree(std::int32_t x, int r_parent, const Ext parent_min[2],
                     std::vector<std::int32_t>& inorder, std::vector<int>& rev) const;

  std::vector<Vertex> vx_;
  std::vector<std::int32_t> node_vertex_;
  std::vector<std::int32_t> free_;
  std::vector<std::int32_t> path_;
  std::uint64_t rotations_ = 0;
};

template <class S>
void RbForest<S>::check_subtree(std::int32_t x, int r_parent, const Ext parent_min[2],
                                std::vector<std::int32_t>& inorder, std::vector<int>& rev) const {
  const auto& v = vx_[x];
  const int r = r_parent ^ v.revx;
  Ext m[2], own[2];
  for (int color = 0; color < 2; ++color) {
    const int k = color ^ r;
    m[color] = parent_min ? add(parent_min[color], v.dmin[k]) : v.dmin[k];
    own[color] = add(m[color], v.down[k]);
  }
  const int first = r ? 1 : 0;
  Ext sub_min[2] = {own[0], own[1]};
  const auto visit = [&](std::int32_t c) {
    if (c < 0) return;
    if (vx_[c].par != x) throw InternalError("rb-forest: broken splay parent pointer");
    check_subtree(c, r, m, inorder, rev);
  };
  visit(v.ch[first]);
  inorder.push_back(x);
  rev.push_back(r);
  visit(v.ch[first ^ 1]);
  for (int color = 0; color < 2; ++color) {
    for (auto c : v.ch) {
      if (c < 0) continue;
      const int rc = r ^ vx_[c].revx;
      sub_min[color] = min(sub_min[color], add(m[color], vx_[c].dmin[color ^ rc]));
    }
    const bool same = sub_min[color].inf == m[color].inf &&
                      (m[color].inf || ScalarTraits<S>::equal(sub_min[color].v, m[color].v));
    if (!same) throw InternalError("rb-forest: subtree minimum does not match its fields");
    if (v.node >= 0 && !own[color].inf)
      throw InternalError("rb-forest: node vertex carries a value");
  }
}

template <class S>
void RbForest<S>::check_invariants() const {
  std::vector<char> is_free(vx_.size(), 0);
  for (auto f : free_) is_free[f] = 1;
  for (std::size_t root = 0; root < vx_.size(); ++root) {
    const auto x = static_cast<std::int32_t>(root);
    if (is_free[x] || !is_splay_root(x)) continue;
    std::vector<std::int32_t> seq;
    std::vector<int> rev;
    check_subtree(x, 0, nullptr, seq, rev);
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const auto& v = vx_[seq[i]];
      const bool want_node = (i % 2 == 0) == (vx_[seq[0]].node >= 0);
      if ((v.node >= 0) != want_node)
        throw InternalError("rb-forest: solid path does not alternate nodes and edges");
      if (v.node >= 0) continue;
      // Upper endpoint: predecessor on the path, or the path-parent.
      std::int32_t upper = i > 0 ? seq[i - 1] : vx_[x].par;
      std::int32_t lower = i + 1 < seq.size() ? seq[i + 1] : -1;
      if (upper < 0 || vx_[upper].node < 0)
        throw InternalError("rb-forest: edge vertex without an upper endpoint");
      const int actual = v.slot ^ rev[i];
      if (actual != vx_[upper].slot)
        throw InternalError("rb-forest: edge color differs from its parent endpoint color");
      if (v.ends[actual] != vx_[upper].node)
        throw InternalError("rb-forest: edge endpoints inconsistent");
      if (lower >= 0 && v.ends[actual ^ 1] != vx_[lower].node)
        throw InternalError("rb-forest: edge endpoints inconsistent");
    }
  }
}

}  // namespace geomatch

#endif  // GEOMATCH_RBLCT_HPP_
