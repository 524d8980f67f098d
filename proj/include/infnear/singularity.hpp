#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "infnear/dual_graph.hpp"
#include "infnear/skeleton.hpp"
#include "infnear/weighted.hpp"

namespace infnear {

/// Combinatorial class of a point w on the exceptional divisor E_K: a generic
/// free point of E_p, or the intersection point of two adjacent components.
struct BoundaryPoint {
  enum class Kind { kFree, kSatellite };

  Kind kind = Kind::kFree;
  PointId first;
  PointId second;  // satellite only

  static BoundaryPoint free_on(PointId p) { return {Kind::kFree, p, p}; }
  static BoundaryPoint satellite(PointId p, PointId q) { return {Kind::kSatellite, p, q}; }

  bool is_free() const { return kind == Kind::kFree; }

  friend bool operator==(const BoundaryPoint&, const BoundaryPoint&) = default;
};

/// K_w: K with w appended as a point of virtual multiplicity one. A satellite
/// w lies in the first neighbourhood of the later of its two points.
inline WeightedCluster extend(const WeightedCluster& k, const BoundaryPoint& w, std::string tag = "w") {
  k.skeleton.require_valid();
  if (w.first.index >= k.size() || w.second.index >= k.size()) throw InputError("boundary point refers to unknown points");
  WeightedCluster out = k;
  if (out.skeleton.find(tag)) tag += "'";
  if (w.is_free()) {
    out.skeleton.add_free(w.first, tag);
  } else {
    if (w.first == w.second) throw InputError("a satellite boundary point needs two distinct components");
    if (!dual_graph(k.skeleton).adjacent(w.first, w.second))
      throw InputError("components " + k.skeleton.label(w.first) + " and " + k.skeleton.label(w.second) +
                       " do not meet");
    auto later = std::max(w.first, w.second), earlier = std::min(w.first, w.second);
    out.skeleton.add_satellite(later, earlier, tag);
  }
  out.nu.push_back(1);
  return out;
}

/// Text form used on the command line and in reports: `free:P` or `sat:P,Q`.
inline std::string boundary_point_text(const ClusterSkeleton& s, const BoundaryPoint& w) {
  if (w.is_free()) return "free:" + s.label(w.first);
  return "sat:" + s.label(w.first) + "," + s.label(w.second);
}

inline BoundaryPoint parse_boundary_point(const ClusterSkeleton& s, std::string_view text) {
  auto point = [&](std::string_view tag) {
    auto p = s.find(tag);
    if (!p) throw InputError("unknown point '" + std::string(tag) + "'");
    return *p;
  };
  if (text.starts_with("free:")) return BoundaryPoint::free_on(point(text.substr(5)));
  if (text.starts_with("sat:")) {
    auto rest = text.substr(4);
    auto comma = rest.find(',');
    if (comma == std::string_view::npos) throw InputError("expected sat:P,Q");
    return BoundaryPoint::satellite(point(rest.substr(0, comma)), point(rest.substr(comma + 1)));
  }
  throw InputError("expected free:P or sat:P,Q, got '" + std::string(text) + "'");
}

struct BranchEqualityFlags {
  bool no_satellite_drops = false;        ///< (i) B^2_Q is empty
  bool outer_drops_maximal = false;       ///< (ii) points of B_Q \ T_Q are m_K-proximate to T_Q
  bool root_mK_satellite = false;         ///< (iii) o_Q is m_K-satellite
  bool root_targets_adjacent = false;     ///< o_Q is satellite and both points it is proximate to meet T_Q in the dual graph
  bool all() const { return no_satellite_drops && outer_drops_maximal && root_mK_satellite; }
  bool all_adjacent() const { return no_satellite_drops && outer_drops_maximal && root_targets_adjacent; }
};

struct EmbeddingEqualityFlags {
  bool drops_outside_contracted = false;  ///< (1) B_Q and T_Q are disjoint
  bool drops_maximal = false;             ///< (2) every point of B_Q is m_K-proximate to T_Q
  bool root_mK_satellite = false;         ///< (3) o_Q is m_K-satellite
  bool root_targets_adjacent = false;     ///< o_Q is satellite and both points it is proximate to meet T_Q in the dual graph
  bool all() const { return drops_outside_contracted && drops_maximal && root_mK_satellite; }
  bool all_adjacent() const { return drops_outside_contracted && drops_maximal && root_targets_adjacent; }
};

/// Everything attached to the point Q of Bl_I(S) that corresponds to w.
/// Point sets are sorted by index and refer to points of the base cluster.
struct SingularityReport {
  BoundaryPoint w;
  bool smooth = true;

  std::vector<PointId> contracted;       ///< T_Q: components of E_K contracted to Q
  PointId contracted_root;               ///< o_Q: the unique minimal point of T_Q
  Weights multiplicity_shift;            ///< epsilon = nu' - nu on K
  std::vector<PointId> dropped;          ///< B_Q: epsilon = -1
  std::vector<PointId> dropped_free;     ///< B^1_Q: proximate to one point of T_Q
  std::vector<PointId> dropped_satellite;///< B^2_Q: proximate to two points of T_Q
  std::vector<PointId> components_at_q;  ///< K_+^Q: dicritical points adjacent to T_Q
  Weights fundamental_cycle;             ///< z per point of K, zero off T_Q
  std::int64_t multiplicity = 1;
  std::int64_t embedding_dimension = 2;
  std::int64_t section_branches = 1;     ///< branches of a generic hyperplane section
  bool minimal = false;

  bool cycle_reduced = false;            ///< all z in {0, 1}
  bool branches_equal_multiplicity = false;
  bool no_free_drops_in_contracted = false;

  BranchEqualityFlags branch_flags;
  EmbeddingEqualityFlags embedding_flags;
  DualGraph resolution_graph;

  WeightedCluster unloaded;              ///< unloaded K_w, zero points kept
  UnloadingTrace trace;
  Weights unloaded_excess;               ///< rho' on K
  bool all_steps_tame = true;
};

namespace detail {

inline bool contains(const std::vector<PointId>& set, PointId p) {
  return std::binary_search(set.begin(), set.end(), p);
}

inline void require_base_cluster(const WeightedCluster& k) {
  k.skeleton.require_valid();
  if (!is_consistent(k)) throw InputError("the cluster is not consistent");
  for (std::size_t p = 0; p < k.size(); ++p)
    if (k.nu[p] == 0)
      throw InputError("point " + k.skeleton.label(p) + " has virtual multiplicity zero; drop zero points first");
}

/// q is m_K-proximate to some point of `targets`.
inline bool mK_proximate_to_set(const ClusterSkeleton& s, PointId q, const std::vector<PointId>& targets) {
  for (auto t : s.proximities(q))
    if (contains(targets, t) && is_mK_proximate(s, q, t)) return true;
  return false;
}

}  // namespace detail

/// Analyzes the point Q corresponding to w. Throws InternalError when two
/// independent routes to the same invariant disagree.
inline SingularityReport analyze(const WeightedCluster& k, const BoundaryPoint& w) {
  using detail::contains;
  detail::require_base_cluster(k);
  const auto& s = k.skeleton;
  const std::size_t n = k.size();

  SingularityReport rep;
  rep.w = w;
  WeightedCluster kw = extend(k, w);
  if (is_consistent(kw)) {
    const auto rho = excesses(kw);
    rep.unloaded_excess.assign(rho.begin(), rho.begin() + static_cast<std::ptrdiff_t>(n));
    rep.unloaded = std::move(kw);
    return rep;
  }
  rep.smooth = false;

  auto unloaded = unload(kw);
  rep.unloaded = unloaded.cluster;
  rep.trace = unloaded.trace;
  for (const auto& step : rep.trace) rep.all_steps_tame = rep.all_steps_tame && step.tame;

  const Weights v = values(k);
  const Weights v_new = values(rep.unloaded);
  for (std::size_t p = 0; p < n; ++p)
    if (v_new[p] > v[p]) rep.contracted.push_back(PointId{p});
  internal_check(!rep.contracted.empty(), "singular point with empty contracted set");

  {
    std::set<std::size_t> touched;
    for (const auto& step : rep.trace)
      if (step.point.index < n) touched.insert(step.point.index);
    std::vector<PointId> touched_ids;
    for (auto t : touched) touched_ids.push_back(PointId{t});
    internal_check(touched_ids == rep.contracted, "contracted set differs from the unloaded points");
  }

  std::optional<PointId> root;
  for (auto t : rep.contracted) {
    bool below_all = std::all_of(rep.contracted.begin(), rep.contracted.end(),
                                 [&](PointId u) { return s.infinitely_near_or_equal(u, t); });
    if (below_all) root = t;
  }
  internal_check(root.has_value(), "contracted set has no unique minimal point");
  rep.contracted_root = *root;

  rep.multiplicity_shift.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    rep.multiplicity_shift[p] = rep.unloaded.nu[p] - k.nu[p];
    if (rep.multiplicity_shift[p] == -1) rep.dropped.push_back(PointId{p});
  }
  for (auto q : rep.dropped) {
    std::size_t hits = 0;
    for (auto t : s.proximities(q))
      if (contains(rep.contracted, t)) ++hits;
    if (hits == 1) rep.dropped_free.push_back(q);
    if (hits == 2) rep.dropped_satellite.push_back(q);
  }

  const DualGraph graph = dual_graph(s);
  const auto rho = excesses(k);
  for (std::size_t p = 0; p < n; ++p) {
    if (rho[p] <= 0) continue;
    for (auto t : rep.contracted)
      if (graph.adjacent(PointId{p}, t)) {
        rep.components_at_q.push_back(PointId{p});
        break;
      }
  }

  rep.fundamental_cycle.assign(n, 0);
  for (std::size_t p = 0; p < n; ++p) rep.fundamental_cycle[p] = v_new[p] - v[p];
  for (std::size_t p = 0; p < n; ++p) {
    std::int64_t rec = rep.multiplicity_shift[p];
    for (auto q : s.raw()[p].proximities) rec += rep.fundamental_cycle[q];
    internal_check(rec == rep.fundamental_cycle[p], "fundamental cycle recursion mismatch at " + s.label(p));
  }

  rep.multiplicity = 1 + static_cast<std::int64_t>(rep.dropped.size());
  {
    auto kq = drop_zero_points(rep.unloaded).cluster;
    internal_check(self_intersection(kq) - self_intersection(k) == rep.multiplicity,
                   "multiplicity differs from the self-intersection difference");
  }
  rep.embedding_dimension = rep.multiplicity + 1;

  rep.unloaded_excess.assign(n, 0);
  {
    auto rho_all = excesses(rep.unloaded);
    std::copy_n(rho_all.begin(), n, rep.unloaded_excess.begin());
  }
  std::int64_t free_in_contracted = 0;
  for (auto q : rep.dropped_free)
    if (contains(rep.contracted, q)) ++free_in_contracted;
  rep.section_branches = rep.multiplicity - free_in_contracted;
  {
    std::int64_t by_excess = 0;
    for (auto t : rep.contracted) by_excess += rep.unloaded_excess[t.index];
    internal_check(by_excess == rep.section_branches, "branch count differs from the contracted excess sum");
  }

  rep.cycle_reduced = std::all_of(rep.fundamental_cycle.begin(), rep.fundamental_cycle.end(),
                                  [](std::int64_t z) { return z == 0 || z == 1; });
  rep.branches_equal_multiplicity = rep.section_branches == rep.multiplicity;
  rep.no_free_drops_in_contracted = free_in_contracted == 0;
  rep.minimal = rep.cycle_reduced;

  const bool root_sat = is_mK_satellite(s, rep.contracted_root);
  bool root_adj = s.is_satellite(rep.contracted_root);
  for (auto q : s.proximities(rep.contracted_root))
    root_adj = root_adj && std::any_of(rep.contracted.begin(), rep.contracted.end(),
                                       [&](PointId t) { return graph.adjacent(q, t); });
  rep.branch_flags.no_satellite_drops = rep.dropped_satellite.empty();
  rep.branch_flags.outer_drops_maximal = std::all_of(rep.dropped.begin(), rep.dropped.end(), [&](PointId q) {
    return contains(rep.contracted, q) || detail::mK_proximate_to_set(s, q, rep.contracted);
  });
  rep.branch_flags.root_mK_satellite = root_sat;
  rep.branch_flags.root_targets_adjacent = root_adj;
  rep.embedding_flags.drops_outside_contracted =
      std::none_of(rep.dropped.begin(), rep.dropped.end(), [&](PointId q) { return contains(rep.contracted, q); });
  rep.embedding_flags.drops_maximal = std::all_of(rep.dropped.begin(), rep.dropped.end(), [&](PointId q) {
    return detail::mK_proximate_to_set(s, q, rep.contracted);
  });
  rep.embedding_flags.root_mK_satellite = root_sat;
  rep.embedding_flags.root_targets_adjacent = root_adj;

  rep.resolution_graph = graph.induced(rep.contracted);
  if (rep.minimal) {
    std::int64_t sum = 0;
    for (auto t : rep.contracted)
      sum += rep.resolution_graph.weight(t) - static_cast<std::int64_t>(rep.resolution_graph.degree(t));
    internal_check(sum == rep.multiplicity, "weight/degree sum differs from the multiplicity of a minimal point");
  }
  return rep;
}

/// Resolution graph of Q: the dual graph restricted to T_Q.
inline DualGraph resolution_graph(const SingularityReport& rep) {
  if (rep.smooth) throw InputError("a smooth point has no resolution graph");
  return rep.resolution_graph;
}

/// Connected components of the zero-excess points in the dual graph, ordered
/// by their lowest point. Each one is the contracted set of one singular point.
inline std::vector<std::vector<PointId>> zero_excess_components(const WeightedCluster& k) {
  const auto rho = excesses(k);
  std::vector<PointId> zeros;
  for (std::size_t p = 0; p < k.size(); ++p)
    if (rho[p] == 0) zeros.push_back(PointId{p});
  if (zeros.empty()) return {};
  const DualGraph g = dual_graph(k.skeleton).induced(zeros);
  std::vector<std::vector<PointId>> out;
  std::vector<bool> done(k.size(), false);
  for (auto z : zeros) {
    if (done[z.index]) continue;
    auto comp = g.component_of(z);
    for (auto c : comp) done[c.index] = true;
    out.push_back(std::move(comp));
  }
  return out;
}

/// Component index the point w lands in, or nullopt if w is a smooth point.
inline std::optional<std::size_t> component_of(const WeightedCluster& k, const BoundaryPoint& w) {
  auto comps = zero_excess_components(k);
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (detail::contains(comps[i], w.first)) return i;
    if (!w.is_free() && detail::contains(comps[i], w.second)) return i;
  }
  return std::nullopt;
}

/// One report per singular point, analysed at a generic free point of the
/// lowest component of its contracted set.
inline std::vector<SingularityReport> enumerate_singularities(const WeightedCluster& k) {
  detail::require_base_cluster(k);
  std::vector<SingularityReport> out;
  for (const auto& comp : zero_excess_components(k)) {
    auto rep = analyze(k, BoundaryPoint::free_on(comp.front()));
    internal_check(!rep.smooth && rep.contracted == comp, "contracted set differs from its zero-excess component");
    out.push_back(std::move(rep));
  }
  return out;
}

/// Every boundary point class of K: a free point on each component and each
/// intersection of two adjacent components.
inline std::vector<BoundaryPoint> boundary_points(const ClusterSkeleton& s) {
  std::vector<BoundaryPoint> out;
  for (std::size_t p = 0; p < s.size(); ++p) out.push_back(BoundaryPoint::free_on(PointId{p}));
  const DualGraph g = dual_graph(s);
  for (auto [a, b] : g.edges()) out.push_back(BoundaryPoint::satellite(a, b));
  return out;
}

/// Excess relation between K and the unloaded K_w: (a) pointwise formula in
/// terms of epsilon; (b) growth on T_Q, loss of one on K_+^Q, unchanged
/// elsewhere.
inline bool verify_difexcess(const WeightedCluster& k, const SingularityReport& rep) {
  if (rep.smooth) return true;
  const auto& s = k.skeleton;
  const auto rho = excesses(k);
  for (std::size_t p = 0; p < k.size(); ++p) {
    std::int64_t expected = rho[p] + rep.multiplicity_shift[p];
    for (auto q : s.proximate_to(PointId{p})) expected -= rep.multiplicity_shift[q];
    if (expected != rep.unloaded_excess[p]) return false;
    const PointId id{p};
    if (detail::contains(rep.contracted, id)) {
      if (rep.unloaded_excess[p] < rho[p]) return false;
    } else if (detail::contains(rep.components_at_q, id)) {
      if (rep.unloaded_excess[p] != rho[p] - 1) return false;
    } else if (rep.unloaded_excess[p] != rho[p]) {
      return false;
    }
  }
  return true;
}

/// Unit coefficients of the fundamental cycle where they are forced, and the
/// description of the dropped points outside T_Q as those proximate to T_Q.
inline bool verify_coef_fund(const WeightedCluster& k, const SingularityReport& rep) {
  if (rep.smooth) return true;
  const auto& s = k.skeleton;
  const auto rho = excesses(k);
  const auto& z = rep.fundamental_cycle;
  if (z[rep.contracted_root.index] != 1) return false;
  for (auto t : rep.contracted) {
    bool dicritical_proximate = false;
    for (auto x : s.proximate_to(t))
      if (rho[x] > 0) dicritical_proximate = true;
    bool outside_target = false;
    for (auto q : s.proximities(t))
      if (!detail::contains(rep.contracted, q)) outside_target = true;
    if ((dicritical_proximate || outside_target) && z[t.index] != 1) return false;
  }
  for (std::size_t u = 0; u < k.size(); ++u) {
    const PointId id{u};
    if (detail::contains(rep.contracted, id)) continue;
    bool near = false;
    for (auto q : s.proximities(id))
      if (detail::contains(rep.contracted, q)) near = true;
    if (near != detail::contains(rep.dropped, id)) return false;
  }
  return true;
}

}  // namespace infnear
