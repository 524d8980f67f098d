#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "infnear/dual_graph.hpp"
#include "infnear/skeleton.hpp"

namespace infnear {

using Weights = std::vector<std::int64_t>;

/// A cluster together with integer virtual multiplicities. Multiplicities may
/// be negative in intermediate states (before unloading).
struct WeightedCluster {
  ClusterSkeleton skeleton;
  Weights nu;

  WeightedCluster() = default;
  WeightedCluster(ClusterSkeleton s, Weights w) : skeleton(std::move(s)), nu(std::move(w)) {
    if (nu.size() != skeleton.size()) throw InputError("one virtual multiplicity per point is required");
  }

  std::size_t size() const { return skeleton.size(); }
  std::int64_t operator[](PointId p) const { return nu.at(p.index); }

  friend bool operator==(const WeightedCluster&, const WeightedCluster&) = default;
};

/// v_p = nu_p + sum over p -> q of v_q, by forward substitution.
inline Weights values(const WeightedCluster& k) {
  k.skeleton.require_valid();
  Weights v(k.size(), 0);
  for (std::size_t p = 0; p < k.size(); ++p) {
    v[p] = k.nu[p];
    for (auto q : k.skeleton.raw()[p].proximities) v[p] += v[q];
  }
  return v;
}

inline WeightedCluster multiplicities_from_values(const ClusterSkeleton& s, const Weights& v) {
  s.require_valid();
  if (v.size() != s.size()) throw InputError("one value per point is required");
  Weights nu(s.size());
  for (std::size_t p = 0; p < s.size(); ++p) {
    nu[p] = v[p];
    for (auto q : s.raw()[p].proximities) nu[p] -= v[q];
  }
  return {s, std::move(nu)};
}

/// rho_p = nu_p - sum over q -> p of nu_q.
inline Weights excesses(const WeightedCluster& k) {
  Weights rho(k.nu);
  for (std::size_t q = 0; q < k.size(); ++q)
    for (auto p : k.skeleton.raw()[q].proximities) rho[p] -= k.nu[q];
  return rho;
}

inline bool is_consistent(const WeightedCluster& k) {
  for (auto r : excesses(k))
    if (r < 0) return false;
  return true;
}

/// K_+: points with positive excess.
inline std::vector<PointId> dicritical_set(const WeightedCluster& k) {
  std::vector<PointId> out;
  auto rho = excesses(k);
  for (std::size_t p = 0; p < rho.size(); ++p)
    if (rho[p] > 0) out.push_back(PointId{p});
  return out;
}

struct UnloadingStep {
  PointId point;
  std::int64_t increment = 0;
  bool tame = false;

  friend bool operator==(const UnloadingStep&, const UnloadingStep&) = default;
};

using UnloadingTrace = std::vector<UnloadingStep>;

struct UnloadResult {
  WeightedCluster cluster;
  UnloadingTrace trace;
};

/// Chooses the next point to unload among the points with negative excess
/// (given in increasing index order) and returns its position in that list.
using UnloadPicker = std::function<std::size_t(const std::vector<std::size_t>&)>;

inline std::int64_t unloading_increment(std::int64_t excess, std::size_t proximate_count) {
  const auto denom = static_cast<std::int64_t>(proximate_count) + 1;
  return (-excess + denom - 1) / denom;
}

/// Classical multiplicity-form unloading step at p: nu_p += n and nu_q -= n
/// for every q proximate to p.
inline WeightedCluster unload_step_multiplicity(const WeightedCluster& k, PointId p, std::int64_t n) {
  WeightedCluster out = k;
  out.nu[p.index] += n;
  for (auto q : k.skeleton.proximate_to(p)) out.nu[q] -= n;
  return out;
}

/// Unloading in value form: while some excess is negative, raise the value at
/// a point p of negative excess by n = ceil(-rho_p / (r_p + 1)) and recompute
/// the multiplicities. The default picker takes the lowest index.
inline UnloadResult unload(const WeightedCluster& k, const UnloadPicker& pick = {}) {
  k.skeleton.require_valid();
  std::int64_t mass = 0;
  for (auto x : k.nu) mass += std::llabs(x);
  const auto n = static_cast<std::int64_t>(k.size());
  const std::int64_t cap = 10 * std::max<std::int64_t>(mass, 1) * n * n;

  UnloadResult res{k, {}};
  Weights v = values(k);
  while (true) {
    auto rho = excesses(res.cluster);
    std::vector<std::size_t> negative;
    for (std::size_t p = 0; p < rho.size(); ++p)
      if (rho[p] < 0) negative.push_back(p);
    if (negative.empty()) break;
    if (static_cast<std::int64_t>(res.trace.size()) >= cap)
      throw InternalError("unloading exceeded its step cap of " + std::to_string(cap));
    const std::size_t p = pick ? negative.at(pick(negative)) : negative.front();
    const auto inc = unloading_increment(rho[p], k.skeleton.proximate_count(PointId{p}));
    v[p] += inc;
    res.cluster = multiplicities_from_values(k.skeleton, v);
    res.trace.push_back({PointId{p}, inc, inc == 1 && rho[p] == -1});
  }
  return res;
}

struct DropResult {
  WeightedCluster cluster;
  std::vector<PointId> kept;     ///< new index -> original index
  std::vector<PointId> blocked;  ///< zero points that are not maximal
};

/// Repeatedly removes maximal points (no remaining point is proximate to them)
/// with zero virtual multiplicity.
inline DropResult drop_zero_points(const WeightedCluster& k) {
  k.skeleton.require_valid();
  std::vector<bool> keep(k.size(), true);
  std::vector<std::size_t> dependants(k.size(), 0);
  for (std::size_t p = 0; p < k.size(); ++p)
    for (auto q : k.skeleton.raw()[p].proximities) ++dependants[q];
  for (std::size_t p = k.size(); p-- > 0;) {
    if (k.nu[p] != 0 || dependants[p] != 0) continue;
    keep[p] = false;
    for (auto q : k.skeleton.raw()[p].proximities) --dependants[q];
  }
  DropResult out;
  for (std::size_t p = 0; p < k.size(); ++p)
    if (keep[p] && k.nu[p] == 0) out.blocked.push_back(PointId{p});
  auto r = restrict_to(k.skeleton, keep);
  Weights nu;
  for (auto old : r.to_parent) nu.push_back(k.nu[old.index]);
  out.cluster = WeightedCluster(std::move(r.skeleton), std::move(nu));
  out.kept = std::move(r.to_parent);
  return out;
}

/// K(p): the weighted cluster of the simple ideal of p, embedded in the whole
/// skeleton (zero outside the predecessors of p). Its excess vector is the
/// unit vector at p.
inline WeightedCluster simple_cluster(const ClusterSkeleton& s, PointId p) {
  s.require_valid();
  if (p.index >= s.size()) throw InputError("point out of range");
  std::vector<bool> support(s.size(), false);
  for (auto q : s.predecessors(p)) support[q.index] = true;
  Weights nu(s.size(), 0);
  for (std::size_t q = s.size(); q-- > 0;) {
    if (!support[q]) continue;
    std::int64_t acc = q == p.index ? 1 : 0;
    for (auto x : s.proximate_to(PointId{q}))
      if (support[x]) acc += nu[x];
    nu[q] = acc;
  }
  return {s, std::move(nu)};
}

/// Sum of clusters with positive integer coefficients. Terms may live on
/// sub-skeletons of a common ambient skeleton; points are matched by tag and
/// the result lives on the largest term's skeleton.
inline WeightedCluster linear_combination(const std::vector<std::pair<WeightedCluster, std::int64_t>>& terms) {
  if (terms.empty()) throw InputError("linear combination of no clusters");
  std::size_t amb = 0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].second <= 0) throw InputError("coefficients must be positive");
    terms[i].first.skeleton.require_valid();
    if (terms[i].first.size() > terms[amb].first.size()) amb = i;
  }
  const ClusterSkeleton& ambient = terms[amb].first.skeleton;
  Weights nu(ambient.size(), 0);
  for (const auto& [k, c] : terms) {
    for (std::size_t p = 0; p < k.size(); ++p) {
      auto target = ambient.find(k.skeleton.raw()[p].tag);
      if (!target) throw InputError("incompatible skeletons: '" + k.skeleton.raw()[p].tag + "' missing");
      std::vector<std::string> mine, theirs;
      for (auto q : k.skeleton.raw()[p].proximities) mine.push_back(k.skeleton.raw()[q].tag);
      for (auto q : ambient.raw()[target->index].proximities) theirs.push_back(ambient.raw()[q].tag);
      if (mine != theirs)
        throw InputError("incompatible skeletons: proximities of '" + k.skeleton.raw()[p].tag + "' differ");
      nu[target->index] += c * k.nu[p];
    }
  }
  return {ambient, std::move(nu)};
}

/// K^2 = sum of squared virtual multiplicities.
inline std::int64_t self_intersection(const WeightedCluster& k) {
  return std::accumulate(k.nu.begin(), k.nu.end(), std::int64_t{0},
                         [](std::int64_t acc, std::int64_t x) { return acc + x * x; });
}

/// Intersection of the strict transform of a curve going sharply through K
/// with each exceptional component: e_p minus the sum of e_q over q -> p,
/// which is the excess vector of K.
inline Weights exceptional_intersections(const WeightedCluster& k) {
  if (!is_consistent(k)) throw InputError("exceptional intersections need a consistent cluster");
  return excesses(k);
}

}  // namespace infnear
