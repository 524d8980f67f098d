#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "infnear/cartier.hpp"
#include "infnear/dsl.hpp"
#include "infnear/dual_graph.hpp"
#include "infnear/oracle.hpp"
#include "infnear/singularity.hpp"
#include "infnear/synthesis.hpp"
#include "infnear/weighted.hpp"

// Randomized property checks shared by the test suites and `selftest`.

namespace infnear::props {

struct Outcome {
  std::string name;
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::string first_violation;

  bool ok() const { return checked > 0 && violations == 0; }
  void check(bool holds, const std::function<std::string()>& describe) {
    ++checked;
    if (holds) return;
    if (violations++ == 0) first_violation = describe();
  }
  void absorb(const Outcome& o) {
    checked += o.checked;
    if (o.violations > 0 && violations == 0) first_violation = o.first_violation;
    violations += o.violations;
  }
};

inline std::string describe(const WeightedCluster& k) { return serialize(k, "K"); }

inline std::string describe(const WeightedCluster& k, const BoundaryPoint& w) {
  return serialize(k, "K") + "at " + boundary_point_text(k.skeleton, w);
}

inline bool contains(const std::vector<PointId>& v, PointId p) { return std::binary_search(v.begin(), v.end(), p); }

/// Clusters of assorted sizes and multiplicity ranges from one seed.
inline std::vector<WeightedCluster> corpus(std::uint64_t seed, std::size_t count, std::size_t max_points = 12) {
  std::mt19937_64 rng(seed);
  std::vector<WeightedCluster> out;
  for (std::size_t i = 0; i < count; ++i) {
    oracle::GeneratorConfig cfg;
    cfg.max_points = 4 + i % (max_points > 3 ? max_points - 3 : 1);
    cfg.max_multiplicity = 2 + static_cast<std::int64_t>(i % 5);
    cfg.satellite_probability = 0.2 + 0.1 * static_cast<double>(i % 5);
    out.push_back(oracle::random_cluster(rng, cfg));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Structure of clusters

inline void proximity_inverse(const ClusterSkeleton& s, Outcome& out) {
  const auto p = proximity_matrix(s);
  const auto inv = p.unit_lower_inverse();
  out.check(p * inv == IntMatrix::identity(s.size()) && inv * p == IntMatrix::identity(s.size()),
            [&] { return serialize(s, "K"); });
}

inline void dual_graph_tree(const ClusterSkeleton& s, Outcome& out) {
  const DualGraph g = dual_graph(s);
  out.check(g.is_tree() && g.edge_count() + 1 == g.vertex_count(), [&] { return serialize(s, "K"); });
}

/// Shape of the chain between q and a point p infinitely near to it.
inline bool chain_shape(const ClusterSkeleton& s, const DualGraph& g, PointId q, PointId p) {
  const auto u = g.chain(q, p);
  if (u.size() < 2) return false;
  const std::size_t last = u.size() - 1;
  for (std::size_t i0 = 0; i0 <= last; ++i0) {
    bool ok = true;
    for (std::size_t k = 0; k < last && ok; ++k)
      ok = k < i0 ? s.is_proximate(u[k + 1], u[k]) : s.is_proximate(u[k], u[k + 1]);
    for (std::size_t j = i0; j <= last && ok; ++j) {
      bool found = false;
      for (std::size_t sigma = 0; sigma < i0; ++sigma) found = found || s.is_proximate(u[j], u[sigma]);
      ok = found;
    }
    if (ok) return true;
  }
  return false;
}

/// Chain shape for every pair with p proximate to q. For a point merely
/// infinitely near q the shape can fail, see the pinned case in the tests.
inline void chain_shape_proximate(const ClusterSkeleton& s, Outcome& out) {
  const DualGraph g = dual_graph(s);
  for (std::size_t p = 0; p < s.size(); ++p)
    for (auto q : s.proximities(PointId{p}))
      out.check(chain_shape(s, g, q, PointId{p}),
                [&] { return serialize(s, "K") + "chain " + s.label(q) + " .. " + s.label(PointId{p}); });
}

inline void serialization_round_trip(const WeightedCluster& k, Outcome& out) {
  const auto text = serialize(k, "K");
  auto docs = parse_clusters(text);
  out.check(docs.size() == 1 && docs[0].name == "K" && docs[0].cluster() == k && serialize(docs[0].cluster(), "K") == text,
            [&] { return text; });
}

inline void canonical_form_idempotent(const ClusterSkeleton& s, Outcome& out) {
  const auto c = canonical_form(s);
  out.check(c.is_valid() && canonical_form(c) == c, [&] { return serialize(s, "K"); });
}

// ---------------------------------------------------------------------------
// Weighted clusters and unloading

inline WeightedCluster random_weights(std::mt19937_64& rng, const ClusterSkeleton& s, std::int64_t lo, std::int64_t hi) {
  std::uniform_int_distribution<std::int64_t> d(lo, hi);
  Weights nu(s.size());
  for (auto& x : nu) x = d(rng);
  return WeightedCluster(s, std::move(nu));
}

inline void values_match_recursion(const WeightedCluster& k, Outcome& out) {
  out.check(values(k) == oracle::brute_values(k) && multiplicities_from_values(k.skeleton, values(k)) == k,
            [&] { return describe(k); });
}

inline void unloading_order_independent(std::mt19937_64& rng, const WeightedCluster& k, Outcome& out) {
  const auto reference = unload(k).cluster;
  UnloadPicker pick = [&rng](const std::vector<std::size_t>& candidates) {
    std::uniform_int_distribution<std::size_t> d(0, candidates.size() - 1);
    return d(rng);
  };
  const auto shuffled = unload(k, pick).cluster;
  out.check(shuffled == reference && is_consistent(reference), [&] { return describe(k); });
}

inline void unloading_step_forms_agree(std::mt19937_64& rng, const WeightedCluster& k, Outcome& out) {
  const auto rho = excesses(k);
  std::vector<std::size_t> negative;
  for (std::size_t p = 0; p < k.size(); ++p)
    if (rho[p] < 0) negative.push_back(p);
  if (negative.empty()) return;
  std::uniform_int_distribution<std::size_t> d(0, negative.size() - 1);
  const PointId p{negative[d(rng)]};
  const auto n = unloading_increment(rho[p.index], k.skeleton.proximate_count(p));
  auto v = values(k);
  v[p.index] += n;
  const auto by_values = multiplicities_from_values(k.skeleton, v);
  out.check(by_values == unload_step_multiplicity(k, p, n), [&] { return describe(k) + "step at " + k.skeleton.label(p); });
}

inline void unloading_matches_brute_force(const WeightedCluster& k, Outcome& out) {
  if (k.size() > oracle::kBruteMaxPoints) return;
  for (auto x : k.nu)
    if (x < 0 || x > oracle::kBruteMaxMultiplicity) return;
  out.check(unload(k).cluster == oracle::brute_unload(k), [&] { return describe(k); });
}

inline void simple_cluster_unit_excess(const ClusterSkeleton& s, Outcome& out) {
  for (std::size_t p = 0; p < s.size(); ++p) {
    const auto simple = simple_cluster(s, PointId{p});
    const auto rho = excesses(simple);
    bool ok = true;
    for (std::size_t q = 0; q < s.size(); ++q) ok = ok && rho[q] == (q == p ? 1 : 0);
    out.check(ok, [&] { return serialize(s, "K") + "simple cluster of " + s.label(p); });
  }
}

/// Positive combinations of consistent clusters on one skeleton stay consistent.
inline void linear_combination_consistent(std::mt19937_64& rng, const WeightedCluster& a, Outcome& out) {
  const auto b = unload(random_weights(rng, a.skeleton, 0, 4)).cluster;
  std::uniform_int_distribution<std::int64_t> c(1, 4);
  const auto ca = c(rng), cb = c(rng);
  const auto sum = linear_combination({{a, ca}, {b, cb}});
  bool same = true;
  for (std::size_t p = 0; p < a.size(); ++p) same = same && sum.nu[p] == ca * a.nu[p] + cb * b.nu[p];
  out.check(same && is_consistent(sum), [&] { return describe(a) + describe(b); });
}

// ---------------------------------------------------------------------------
// Singular points

/// Unloading steps tame, shape of epsilon, T_Q free of dicriticals and the
/// description of B_Q outside T_Q.
inline void extension_invariants(const WeightedCluster& k, const SingularityReport& rep, Outcome& out) {
  if (rep.smooth) return;
  const auto& s = k.skeleton;
  const auto rho = excesses(k);
  bool ok = rep.all_steps_tame;
  for (std::size_t p = 0; p < k.size(); ++p) {
    const auto e = rep.multiplicity_shift[p];
    if (p == rep.contracted_root.index)
      ok = ok && e == 1;
    else
      ok = ok && (e == 0 || e == -1);
  }
  for (auto t : rep.contracted) ok = ok && rho[t.index] == 0;
  for (std::size_t u = 0; u < k.size(); ++u) {
    const PointId id{u};
    if (contains(rep.contracted, id)) continue;
    bool near = false;
    for (auto q : s.proximities(id)) near = near || contains(rep.contracted, q);
    ok = ok && near == contains(rep.dropped, id);
  }
  ok = ok && verify_coef_fund(k, rep) && verify_difexcess(k, rep);
  out.check(ok, [&] { return describe(k, rep.w); });
}

/// The invariants recomputed here from the unloaded cluster, independently of
/// the report's own derivations.
inline void formula_equivalences(const WeightedCluster& k, const SingularityReport& rep, Outcome& out) {
  if (rep.smooth) return;
  const auto& s = k.skeleton;
  const auto n = k.size();
  const auto kq = drop_zero_points(rep.unloaded).cluster;
  const auto by_drops = 1 + static_cast<std::int64_t>(rep.dropped.size());
  const auto by_squares = self_intersection(kq) - self_intersection(k);

  std::int64_t free_in_t = 0;
  for (auto b : rep.dropped_free) free_in_t += contains(rep.contracted, b) ? 1 : 0;
  const auto rho_new = excesses(rep.unloaded);
  std::int64_t through_t = 0;
  for (auto t : rep.contracted) through_t += rho_new[t.index];

  const auto v = values(k), v_new = values(rep.unloaded);
  Weights by_values(n), by_recursion(n);
  for (std::size_t p = 0; p < n; ++p) {
    by_values[p] = v_new[p] - v[p];
    by_recursion[p] = rep.unloaded.nu[p] - k.nu[p];
    for (auto q : s.raw()[p].proximities) by_recursion[p] += by_recursion[q];
  }
  const bool ok = rep.multiplicity == by_drops && by_drops == by_squares &&
                  rep.section_branches == rep.multiplicity - free_in_t && rep.section_branches == through_t &&
                  by_values == by_recursion && by_values == rep.fundamental_cycle;
  out.check(ok, [&] { return describe(k, rep.w); });
}

inline void bound_chain(const WeightedCluster& k, const SingularityReport& rep, Outcome& out) {
  if (rep.smooth) return;
  const auto nk = static_cast<std::int64_t>(rep.components_at_q.size());
  out.check(nk <= rep.section_branches + 1 && rep.section_branches + 1 <= rep.multiplicity + 1 &&
                rep.multiplicity + 1 == rep.embedding_dimension,
            [&] { return describe(k, rep.w); });
}

/// Equality #K_+^Q = br + 1 iff flags (i)-(iii), with (iii) read literally.
inline void branch_equality_flags(const WeightedCluster& k, const SingularityReport& rep, Outcome& out) {
  if (rep.smooth) return;
  const bool eq = static_cast<std::int64_t>(rep.components_at_q.size()) == rep.section_branches + 1;
  out.check(eq == rep.branch_flags.all(), [&] { return describe(k, rep.w); });
}

/// Equality #K_+^Q = emdim iff flags (1)-(3), with (3) read literally.
inline void embedding_equality_flags(const WeightedCluster& k, const SingularityReport& rep, Outcome& out) {
  if (rep.smooth) return;
  const bool eq = static_cast<std::int64_t>(rep.components_at_q.size()) == rep.embedding_dimension;
  out.check(eq == rep.embedding_flags.all(), [&] { return describe(k, rep.w); });
}

/// Both equalities against the flags with the adjacency reading of o_Q.
inline void equality_flags_adjacent(const WeightedCluster& k, const SingularityReport& rep, Outcome& out) {
  if (rep.smooth) return;
  const auto nk = static_cast<std::int64_t>(rep.components_at_q.size());
  out.check((nk == rep.section_branches + 1) == rep.branch_flags.all_adjacent() &&
                (nk == rep.embedding_dimension) == rep.embedding_flags.all_adjacent(),
            [&] { return describe(k, rep.w); });
}

inline void equality_implies_minimal(const WeightedCluster& k, const SingularityReport& rep, Outcome& out) {
  if (rep.smooth) return;
  const bool eq = static_cast<std::int64_t>(rep.components_at_q.size()) == rep.embedding_dimension;
  if (!eq && !rep.embedding_flags.all()) return;
  out.check(rep.minimal, [&] { return describe(k, rep.w); });
}

inline void minimality_triple(const WeightedCluster& k, const SingularityReport& rep, Outcome& out) {
  if (rep.smooth) return;
  bool reduced = true;
  for (auto z : rep.fundamental_cycle) reduced = reduced && (z == 0 || z == 1);
  const bool br_eq = rep.section_branches == rep.multiplicity;
  bool no_free = true;
  for (auto b : rep.dropped_free) no_free = no_free && !contains(rep.contracted, b);
  out.check(reduced == br_eq && br_eq == no_free && rep.minimal == reduced, [&] { return describe(k, rep.w); });
}

inline void excess_in_chains(const WeightedCluster& k, const SingularityReport& rep, Outcome& out) {
  if (rep.smooth) return;
  const DualGraph g = dual_graph(k.skeleton);
  const auto& kp = rep.components_at_q;
  for (std::size_t i = 0; i < kp.size(); ++i)
    for (std::size_t j = i + 1; j < kp.size(); ++j) {
      auto inner = g.open_chain(kp[i], kp[j]);
      const bool ok =
          std::any_of(inner.begin(), inner.end(), [&](PointId u) { return rep.unloaded_excess[u.index] > 0; });
      out.check(ok, [&] {
        return describe(k, rep.w) + "between " + k.skeleton.label(kp[i]) + " and " + k.skeleton.label(kp[j]);
      });
    }
}

/// A_1 = K_+^Q meet B_Q and A_2 inside the points o_Q is proximate to.
inline void dicriticals_at_root(const WeightedCluster& k, const SingularityReport& rep, Outcome& out) {
  if (rep.smooth) return;
  const auto& s = k.skeleton;
  bool ok = true;
  for (auto p : rep.components_at_q) {
    if (s.infinitely_near_or_equal(p, rep.contracted_root))
      ok = ok && contains(rep.dropped, p);
    else
      ok = ok && s.is_proximate(rep.contracted_root, p);
  }
  for (auto b : rep.dropped)
    if (contains(rep.components_at_q, b)) ok = ok && s.infinitely_near_or_equal(b, rep.contracted_root);
  out.check(ok, [&] { return describe(k, rep.w); });
}

/// Three dicriticals reached from u in T_Q through disjoint chains of zero
/// unloaded excess force excess at least two at u.
inline void three_chains(const WeightedCluster& k, const SingularityReport& rep, Outcome& out) {
  if (rep.smooth) return;
  const DualGraph g = dual_graph(k.skeleton);
  const auto& kp = rep.components_at_q;
  for (auto u : rep.contracted) {
    std::vector<std::vector<PointId>> chains;
    std::vector<PointId> ends;
    for (auto p : kp) {
      auto c = g.chain(u, p);
      bool zero_inside = true;
      for (std::size_t i = 1; i + 1 < c.size(); ++i) zero_inside = zero_inside && rep.unloaded_excess[c[i].index] == 0;
      if (zero_inside) {
        chains.push_back(std::move(c));
        ends.push_back(p);
      }
    }
    auto disjoint = [&](std::size_t a, std::size_t b) {
      for (std::size_t i = 1; i < chains[a].size(); ++i)
        if (std::find(chains[b].begin() + 1, chains[b].end(), chains[a][i]) != chains[b].end()) return false;
      return true;
    };
    for (std::size_t a = 0; a < chains.size(); ++a)
      for (std::size_t b = a + 1; b < chains.size(); ++b)
        for (std::size_t c = b + 1; c < chains.size(); ++c)
          if (disjoint(a, b) && disjoint(a, c) && disjoint(b, c))
            out.check(rep.unloaded_excess[u.index] >= 2, [&] { return describe(k, rep.w) + "at " + k.skeleton.label(u); });
  }
}

/// mult = -Z^2 for the fundamental cycle on the weighted resolution graph.
inline void multiplicity_from_cycle(const WeightedCluster& k, const SingularityReport& rep, Outcome& out) {
  if (rep.smooth) return;
  const auto& g = rep.resolution_graph;
  const auto& z = rep.fundamental_cycle;
  std::int64_t q = 0;
  for (auto t : g.vertices()) q += static_cast<std::int64_t>(g.weight(t)) * z[t.index] * z[t.index];
  for (auto [a, b] : g.edges()) q -= 2 * z[a.index] * z[b.index];
  out.check(q == rep.multiplicity, [&] { return describe(k, rep.w); });
}

/// All boundary points landing on the same component give the same unloaded
/// cluster and the same invariants.
inline void same_component_same_report(const WeightedCluster& k, Outcome& out) {
  std::map<std::size_t, SingularityReport> first;
  for (const auto& w : boundary_points(k.skeleton)) {
    const auto comp = component_of(k, w);
    const auto rep = analyze(k, w);
    if (!comp) {
      out.check(rep.smooth, [&] { return describe(k, w); });
      continue;
    }
    auto [it, fresh] = first.emplace(*comp, rep);
    if (fresh) continue;
    const auto& a = it->second;
    auto trim = [&](const WeightedCluster& c) {
      return Weights(c.nu.begin(), c.nu.begin() + static_cast<std::ptrdiff_t>(k.size()));
    };
    out.check(!rep.smooth && trim(rep.unloaded) == trim(a.unloaded) && rep.contracted == a.contracted &&
                  rep.dropped == a.dropped && rep.components_at_q == a.components_at_q &&
                  rep.fundamental_cycle == a.fundamental_cycle && rep.multiplicity == a.multiplicity &&
                  rep.section_branches == a.section_branches && rep.minimal == a.minimal,
              [&] { return describe(k, w); });
  }
}

// ---------------------------------------------------------------------------
// Construction procedures

inline Alpha random_alpha(std::mt19937_64& rng, const SingularityReport& rep, std::int64_t max_alpha) {
  std::uniform_int_distribution<std::int64_t> d(1, max_alpha);
  Alpha alpha;
  for (auto p : rep.components_at_q) alpha[p] = d(rng);
  return alpha;
}

inline void cartier_certified(const WeightedCluster& k, const SingularityReport& rep, const Alpha& alpha, Outcome& out) {
  std::string failure;
  bool ok = false;
  try {
    auto res = build_cartier(CartierRequest{k, rep, alpha, {}});
    ok = res.certificate.passed();
    if (!ok) failure = res.certificate.failures.front();
  } catch (const std::exception& e) {
    failure = e.what();
  }
  out.check(ok, [&] {
    std::string a;
    for (auto [p, n] : alpha) a += " " + k.skeleton.label(p) + "=" + std::to_string(n);
    return describe(k, rep.w) + "alpha" + a + ": " + failure;
  });
}

inline MinimalGraphSpec graph_spec(const oracle::RandomGraph& g) {
  MinimalGraphSpec spec;
  for (std::size_t i = 0; i < g.weights.size(); ++i) spec.names.push_back("E" + std::to_string(i));
  spec.weights = g.weights;
  spec.edges = g.edges;
  return spec;
}

inline void synthesis_round_trip(const MinimalGraphSpec& spec, Outcome& out) {
  std::string failure;
  bool ok = false;
  try {
    auto res = synthesize(spec);
    const auto rep = analyze(res.cluster, res.w);
    ok = !rep.smooth && isomorphic(WeightedTree::from(rep.resolution_graph), spec.tree()) &&
         static_cast<std::int64_t>(rep.components_at_q.size()) == rep.multiplicity + 1 &&
         static_cast<std::int64_t>(rep.components_at_q.size()) == count_contracted_branches(spec) && rep.minimal;
    if (!ok) failure = "analysis does not reproduce the graph";
  } catch (const std::exception& e) {
    failure = e.what();
  }
  out.check(ok, [&] { return serialize(spec) + failure; });
}

}  // namespace infnear::props
