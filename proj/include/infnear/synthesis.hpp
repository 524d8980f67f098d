#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "infnear/dual_graph.hpp"
#include "infnear/singularity.hpp"
#include "infnear/weighted.hpp"

namespace infnear {

/// Resolution graph of a candidate minimal singularity: a tree whose vertex
/// weights are the self-intersections -omega of the exceptional curves.
struct MinimalGraphSpec {
  std::vector<std::string> names;
  std::vector<int> weights;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  std::size_t size() const { return names.size(); }
  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> deg(size(), 0);
    for (auto [a, b] : edges) {
      ++deg[a];
      ++deg[b];
    }
    return deg;
  }
  WeightedTree tree() const { return WeightedTree{weights, edges}; }
};

inline void validate_graph_spec(const MinimalGraphSpec& g) {
  if (g.names.empty()) throw InputError("graph has no vertices");
  if (g.weights.size() != g.names.size()) throw InputError("graph weights do not match its vertices");
  for (auto [a, b] : g.edges)
    if (a >= g.size() || b >= g.size() || a == b) throw InputError("graph edge refers to an unknown vertex or is a loop");
  if (!g.tree().is_tree()) throw InputError("graph is not a connected tree");
  const auto deg = g.degrees();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.weights[i] < 2) throw InputError("weight of " + g.names[i] + " is below 2");
    if (static_cast<std::size_t>(g.weights[i]) < deg[i])
      throw InputError("weight of " + g.names[i] + " is below its degree; the fundamental cycle is not reduced");
  }
}

/// Sum of (omega - deg) plus one: the number of smooth branches contracted to
/// the singular point by the synthesized projection.
inline std::int64_t count_contracted_branches(const MinimalGraphSpec& g) {
  validate_graph_spec(g);
  const auto deg = g.degrees();
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < g.size(); ++i) sum += g.weights[i] - static_cast<std::int64_t>(deg[i]);
  return sum + 1;
}

struct SynthesisResult {
  WeightedCluster cluster;
  BoundaryPoint w;
  std::vector<PointId> vertex_points;  ///< point of the cluster realizing each graph vertex
  SingularityReport report;
};

/// Cluster K and boundary point w such that Q is a minimal singularity with
/// the given resolution graph and K_+^Q has mult + 1 elements.
///
/// O and a free point u carry excess 1; the root vertex is the satellite point
/// proximate to u and O, the remaining vertices hang off it as free points, and
/// every vertex q gets omega(q) - 1 - #children extra free points of
/// multiplicity 1. Graph vertices have zero excess.
inline SynthesisResult synthesize(const MinimalGraphSpec& g) {
  validate_graph_spec(g);
  const auto deg = g.degrees();
  std::size_t root = g.size();
  for (std::size_t i = 0; i < g.size(); ++i)
    if (static_cast<std::size_t>(g.weights[i]) > deg[i]) {
      root = i;
      break;
    }
  internal_check(root < g.size(), "valid graph spec without a vertex of weight above its degree");

  std::set<std::string> taken;
  for (const auto& n : g.names)
    if (!taken.insert(n).second) throw InputError("duplicate vertex name " + n);
  auto fresh = [&](std::string base) {
    while (taken.count(base)) base += "'";
    taken.insert(base);
    return base;
  };
  ClusterSkeleton s = ClusterSkeleton::with_origin(fresh("O"));
  auto u = s.add_free(PointId{0}, fresh("u"));

  const auto adj = g.tree().adjacency();
  SynthesisResult res{WeightedCluster(ClusterSkeleton::with_origin(), {0}), BoundaryPoint::free_on(PointId{0}), {}, {}};
  res.vertex_points.assign(g.size(), PointId{0});
  res.vertex_points[root] = s.add_satellite(u, PointId{0}, g.names[root]);

  std::vector<bool> seen(g.size(), false);
  std::queue<std::size_t> todo;
  todo.push(root);
  seen[root] = true;
  std::size_t extra_serial = 0;
  while (!todo.empty()) {
    const auto q = todo.front();
    todo.pop();
    std::vector<std::size_t> kids;
    for (auto c : adj[q])
      if (!seen[c]) kids.push_back(c);
    std::sort(kids.begin(), kids.end());
    for (auto c : kids) {
      seen[c] = true;
      res.vertex_points[c] = s.add_free(res.vertex_points[q], g.names[c]);
      todo.push(c);
    }
    const auto extras = g.weights[q] - 1 - static_cast<int>(kids.size());
    internal_check(extras >= 0, "negative number of extra points at " + g.names[q]);
    for (int e = 0; e < extras; ++e) {
      s.add_free(res.vertex_points[q], fresh("x" + std::to_string(++extra_serial)));
    }
  }

  Weights nu(s.size(), 0);
  const auto r = res.vertex_points[root];
  for (std::size_t p = s.size(); p-- > r.index + 1;) {
    if (s.proximate_count(PointId{p}) == 0) nu[p] = 1;
    for (auto x : s.proximate_to(PointId{p})) nu[p] += nu[x];
  }
  for (auto x : s.proximate_to(r)) nu[r.index] += nu[x];
  nu[u.index] = nu[r.index] + 1;
  nu[0] = nu[u.index] + nu[r.index] + 1;

  res.cluster = WeightedCluster(std::move(s), std::move(nu));
  res.w = BoundaryPoint::free_on(r);
  res.report = analyze(res.cluster, res.w);

  const auto& rep = res.report;
  auto expected = res.vertex_points;
  std::sort(expected.begin(), expected.end());
  internal_check(!rep.smooth && rep.contracted == expected, "synthesized cluster contracts the wrong points");
  internal_check(isomorphic(WeightedTree::from(rep.resolution_graph), g.tree()),
                 "resolution graph of the synthesized cluster differs from the input");
  internal_check(static_cast<std::int64_t>(rep.components_at_q.size()) == count_contracted_branches(g) &&
                     static_cast<std::int64_t>(rep.components_at_q.size()) == rep.multiplicity + 1,
                 "synthesized singularity does not contract mult + 1 branches");
  internal_check(rep.embedding_flags.all(), "equality flags fail on the synthesized singularity");
  internal_check(rep.minimal, "synthesized singularity is not minimal");
  return res;
}

}  // namespace infnear
