#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "infnear/skeleton.hpp"

namespace infnear {

/// Intersection graph of the exceptional components E_p on the blow-up of a
/// cluster, or an induced subgraph of it. Vertex weights are |E_p . E_p| =
/// r_p + 1, with r_p counted in the whole cluster.
class DualGraph {
 public:
  DualGraph() = default;

  DualGraph(std::vector<PointId> vertices, std::vector<int> weights)
      : vertices_(std::move(vertices)), weights_(std::move(weights)), adjacency_(vertices_.size()) {
    for (std::size_t i = 0; i < vertices_.size(); ++i) slot_[vertices_[i].index] = i;
  }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<PointId>& vertices() const { return vertices_; }
  const std::vector<std::pair<PointId, PointId>>& edges() const { return edges_; }

  bool contains(PointId p) const { return slot_.count(p.index) != 0; }

  int weight(PointId p) const { return weights_.at(slot(p)); }

  std::vector<PointId> neighbours(PointId p) const {
    std::vector<PointId> out;
    for (auto s : adjacency_.at(slot(p))) out.push_back(vertices_[s]);
    return out;
  }

  std::size_t degree(PointId p) const { return adjacency_.at(slot(p)).size(); }

  bool adjacent(PointId a, PointId b) const {
    if (!contains(a) || !contains(b)) return false;
    const auto& adj = adjacency_[slot(a)];
    return std::find(adj.begin(), adj.end(), slot(b)) != adj.end();
  }

  void add_edge(PointId a, PointId b) {
    if (a > b) std::swap(a, b);
    edges_.emplace_back(a, b);
    std::sort(edges_.begin(), edges_.end());
    adjacency_[slot(a)].push_back(slot(b));
    adjacency_[slot(b)].push_back(slot(a));
    std::sort(adjacency_[slot(a)].begin(), adjacency_[slot(a)].end());
    std::sort(adjacency_[slot(b)].begin(), adjacency_[slot(b)].end());
  }

  bool is_tree() const {
    if (vertices_.empty()) return false;
    if (edges_.size() + 1 != vertices_.size()) return false;
    return component_of(vertices_.front()).size() == vertices_.size();
  }

  /// Vertices reachable from `start` inside the graph.
  std::vector<PointId> component_of(PointId start) const {
    std::vector<bool> seen(vertices_.size(), false);
    std::vector<PointId> out;
    std::vector<std::size_t> stack{slot(start)};
    seen[stack.back()] = true;
    while (!stack.empty()) {
      auto cur = stack.back();
      stack.pop_back();
      out.push_back(vertices_[cur]);
      for (auto n : adjacency_[cur])
        if (!seen[n]) {
          seen[n] = true;
          stack.push_back(n);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Subgraph induced on `keep` (weights unchanged).
  DualGraph induced(const std::vector<PointId>& keep) const {
    std::vector<PointId> vs;
    std::vector<int> ws;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      if (std::find(keep.begin(), keep.end(), vertices_[i]) != keep.end()) {
        vs.push_back(vertices_[i]);
        ws.push_back(weights_[i]);
      }
    DualGraph g(vs, ws);
    for (auto [a, b] : edges_)
      if (g.contains(a) && g.contains(b)) g.add_edge(a, b);
    return g;
  }

  /// The unique path from a to b, endpoints included. Empty if disconnected.
  std::vector<PointId> chain(PointId a, PointId b) const {
    const std::size_t sa = slot(a), sb = slot(b);
    std::vector<std::optional<std::size_t>> prev(vertices_.size());
    std::vector<bool> seen(vertices_.size(), false);
    std::queue<std::size_t> q;
    q.push(sa);
    seen[sa] = true;
    while (!q.empty()) {
      auto cur = q.front();
      q.pop();
      if (cur == sb) break;
      for (auto n : adjacency_[cur])
        if (!seen[n]) {
          seen[n] = true;
          prev[n] = cur;
          q.push(n);
        }
    }
    if (!seen[sb]) return {};
    std::vector<PointId> path;
    for (std::size_t cur = sb;; cur = *prev[cur]) {
      path.push_back(vertices_[cur]);
      if (cur == sa) break;
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

  /// ch^0(a, b): the chain without its endpoints.
  std::vector<PointId> open_chain(PointId a, PointId b) const {
    auto c = chain(a, b);
    if (c.size() <= 2) return {};
    return {c.begin() + 1, c.end() - 1};
  }

 private:
  std::vector<PointId> vertices_;
  std::vector<int> weights_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<std::pair<PointId, PointId>> edges_;
  std::map<std::size_t, std::size_t> slot_;

  std::size_t slot(PointId p) const {
    auto it = slot_.find(p.index);
    if (it == slot_.end()) throw InputError("point is not a vertex of the graph");
    return it->second;
  }
};

/// Edge rule: for q after p, {p, q} is an edge iff q is proximate to p and no
/// point of the cluster is proximate to both.
inline DualGraph dual_graph(const ClusterSkeleton& k) {
  k.require_valid();
  std::vector<PointId> vs;
  std::vector<int> ws;
  for (std::size_t i = 0; i < k.size(); ++i) {
    vs.push_back(PointId{i});
    ws.push_back(static_cast<int>(k.proximate_count(PointId{i})) + 1);
  }
  DualGraph g(std::move(vs), std::move(ws));
  for (std::size_t q = 1; q < k.size(); ++q) {
    for (auto p : k.raw()[q].proximities) {
      bool blocked = false;
      for (auto r : k.proximate_to(PointId{p}))
        if (k.is_proximate(PointId{r}, PointId{q})) {
          blocked = true;
          break;
        }
      if (!blocked) g.add_edge(PointId{p}, PointId{q});
    }
  }
  return g;
}

/// A vertex-weighted tree with anonymous vertices, used for isomorphism tests
/// between resolution graphs and user-supplied graph specs.
struct WeightedTree {
  std::vector<int> weights;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  static WeightedTree from(const DualGraph& g) {
    WeightedTree t;
    std::map<std::size_t, std::size_t> slot;
    for (std::size_t i = 0; i < g.vertex_count(); ++i) {
      slot[g.vertices()[i].index] = i;
      t.weights.push_back(g.weight(g.vertices()[i]));
    }
    for (auto [a, b] : g.edges()) t.edges.emplace_back(slot[a.index], slot[b.index]);
    return t;
  }

  std::vector<std::vector<std::size_t>> adjacency() const {
    std::vector<std::vector<std::size_t>> adj(weights.size());
    for (auto [a, b] : edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    return adj;
  }

  bool is_tree() const {
    if (weights.empty() || edges.size() + 1 != weights.size()) return false;
    auto adj = adjacency();
    std::vector<bool> seen(weights.size(), false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t count = 0;
    while (!stack.empty()) {
      auto cur = stack.back();
      stack.pop_back();
      ++count;
      for (auto n : adj[cur])
        if (!seen[n]) {
          seen[n] = true;
          stack.push_back(n);
        }
    }
    return count == weights.size();
  }

  /// AHU canonical code rooted at the tree centre(s); equal codes iff the
  /// weighted trees are isomorphic.
  std::string canonical_code() const {
    if (!is_tree()) throw InputError("not a tree");
    auto adj = adjacency();
    const std::size_t n = weights.size();
    std::vector<std::size_t> deg(n);
    std::vector<std::size_t> leaves;
    for (std::size_t i = 0; i < n; ++i) {
      deg[i] = adj[i].size();
      if (deg[i] <= 1) leaves.push_back(i);
    }
    std::size_t remaining = n;
    while (remaining > 2) {
      std::vector<std::size_t> next;
      for (auto l : leaves) {
        --remaining;
        for (auto nb : adj[l])
          if (--deg[nb] == 1) next.push_back(nb);
      }
      leaves = std::move(next);
    }
    std::string best;
    for (auto c : leaves) {
      auto code = encode(adj, c, n);
      if (best.empty() || code < best) best = code;
    }
    return best;
  }

 private:
  std::string encode(const std::vector<std::vector<std::size_t>>& adj, std::size_t root, std::size_t n) const {
    std::vector<std::size_t> parent(n, n), order;
    std::vector<std::size_t> stack{root};
    parent[root] = root;
    while (!stack.empty()) {
      auto cur = stack.back();
      stack.pop_back();
      order.push_back(cur);
      for (auto nb : adj[cur])
        if (parent[nb] == n) {
          parent[nb] = cur;
          stack.push_back(nb);
        }
    }
    std::vector<std::vector<std::string>> child_codes(n);
    std::vector<std::string> code(n);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      auto v = *it;
      auto& cc = child_codes[v];
      std::sort(cc.begin(), cc.end());
      std::string s = "(" + std::to_string(weights[v]);
      for (auto& c : cc) s += c;
      s += ")";
      code[v] = std::move(s);
      if (v != root) child_codes[parent[v]].push_back(code[v]);
    }
    return code[root];
  }
};

inline bool isomorphic(const WeightedTree& a, const WeightedTree& b) {
  if (a.weights.size() != b.weights.size()) return false;
  return a.canonical_code() == b.canonical_code();
}

}  // namespace infnear
