#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "infnear/skeleton.hpp"
#include "infnear/weighted.hpp"

namespace infnear::oracle {

struct GeneratorConfig {
  std::size_t max_points = 10;
  std::int64_t max_multiplicity = 4;
  double satellite_probability = 0.35;
  std::uint64_t seed = 1;
};

/// Random valid skeleton with between 1 and `max_points` points.
inline ClusterSkeleton random_skeleton(std::mt19937_64& rng, std::size_t points, double satellite_probability) {
  auto s = ClusterSkeleton::with_origin("O");
  std::bernoulli_distribution satellite(satellite_probability);
  for (std::size_t i = 1; i < points; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, s.size() - 1);
    const PointId parent{pick(rng)};
    const std::string tag = "p" + std::to_string(i);
    if (satellite(rng)) {
      std::vector<PointId> options;
      for (auto q : s.proximities(parent)) {
        bool taken = false;
        for (auto c : s.children(parent))
          if (s.is_proximate(c, q)) taken = true;
        if (!taken) options.push_back(q);
      }
      if (!options.empty()) {
        std::uniform_int_distribution<std::size_t> which(0, options.size() - 1);
        s.add_satellite(parent, options[which(rng)], tag);
        continue;
      }
    }
    s.add_free(parent, tag);
  }
  return s;
}

/// Consistent cluster without zero points: random skeleton and multiplicities,
/// unloaded, zero points dropped.
inline WeightedCluster random_cluster(std::mt19937_64& rng, const GeneratorConfig& cfg) {
  std::uniform_int_distribution<std::size_t> size(1, std::max<std::size_t>(cfg.max_points, 1));
  auto s = random_skeleton(rng, size(rng), cfg.satellite_probability);
  std::uniform_int_distribution<std::int64_t> mult(0, cfg.max_multiplicity);
  Weights nu(s.size());
  for (auto& x : nu) x = mult(rng);
  nu[0] = std::max<std::int64_t>(nu[0], 1);
  auto unloaded = unload(WeightedCluster(std::move(s), std::move(nu))).cluster;
  return drop_zero_points(unloaded).cluster;
}

inline WeightedCluster random_cluster(const GeneratorConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  return random_cluster(rng, cfg);
}

/// Values by the defining recursion, without memoisation.
inline Weights brute_values(const WeightedCluster& k) {
  struct Rec {
    const WeightedCluster& k;
    std::int64_t operator()(std::size_t p) const {
      std::int64_t v = k.nu[p];
      for (auto q : k.skeleton.raw()[p].proximities) v += (*this)(q);
      return v;
    }
  };
  Rec rec{k};
  Weights v(k.size());
  for (std::size_t p = 0; p < k.size(); ++p) v[p] = rec(p);
  return v;
}

inline constexpr std::size_t kBruteMaxPoints = 7;
inline constexpr std::int64_t kBruteMaxMultiplicity = 6;
inline constexpr std::int64_t kBruteOriginCap = 96;

/// Exhaustive search for the consistent cluster on the same points whose
/// values dominate values(K) and are pointwise minimal among all such
/// clusters. Multiplicities of a consistent cluster are non-negative and each
/// is bounded by the partial excess of the points it is proximate to, so only
/// the origin needs an explicit bound; the origin is scanned upwards and the
/// first multiplicity admitting a candidate is the minimum.
inline WeightedCluster brute_unload(const WeightedCluster& k) {
  k.skeleton.require_valid();
  if (k.size() > kBruteMaxPoints) throw InputError("instance too large for exhaustive unloading");
  for (auto x : k.nu)
    if (x > kBruteMaxMultiplicity || x < -kBruteMaxMultiplicity)
      throw InputError("instance too large for exhaustive unloading");

  const auto& s = k.skeleton;
  const std::size_t n = k.size();
  const Weights floor_v = brute_values(k);

  Weights nu(n, 0), v(n, 0), partial(n, 0), best;
  bool found = false;

  auto leaf = [&] {
    if (!found) {
      best = v;
      found = true;
    } else {
      for (std::size_t p = 0; p < n; ++p) best[p] = std::min(best[p], v[p]);
    }
  };

  auto dfs = [&](auto&& self, std::size_t p) -> void {
    if (p == n) {
      leaf();
      return;
    }
    std::int64_t from_targets = 0, hi = std::numeric_limits<std::int64_t>::max();
    for (auto q : s.raw()[p].proximities) {
      from_targets += v[q];
      hi = std::min(hi, partial[q]);
    }
    const std::int64_t lo = std::max<std::int64_t>(0, floor_v[p] - from_targets);
    for (std::int64_t m = lo; m <= hi; ++m) {
      nu[p] = m;
      v[p] = m + from_targets;
      partial[p] = m;
      for (auto q : s.raw()[p].proximities) partial[q] -= m;
      self(self, p + 1);
      for (auto q : s.raw()[p].proximities) partial[q] += m;
    }
  };

  for (std::int64_t origin = std::max<std::int64_t>(0, floor_v[0]); origin <= kBruteOriginCap; ++origin) {
    nu[0] = origin;
    v[0] = origin;
    partial[0] = origin;
    dfs(dfs, 1);
    if (found) break;
  }
  if (!found) throw InputError("no consistent cluster found below the origin cap");

  Weights result_nu(n);
  for (std::size_t p = 0; p < n; ++p) {
    result_nu[p] = best[p];
    for (auto q : s.raw()[p].proximities) result_nu[p] -= best[q];
  }
  WeightedCluster result(s, std::move(result_nu));
  auto rho = result.nu;
  for (std::size_t q = 0; q < n; ++q)
    for (auto p : s.raw()[q].proximities) rho[p] -= result.nu[q];
  for (auto r : rho)
    if (r < 0) throw InternalError("pointwise minimum of dominating consistent clusters is not consistent");
  return result;
}

/// Random tree with weights satisfying weight >= max(2, degree) and at least
/// one vertex with weight > degree.
struct RandomGraph {
  std::vector<int> weights;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

inline RandomGraph random_minimal_graph(std::mt19937_64& rng, std::size_t max_vertices, int max_weight) {
  std::uniform_int_distribution<std::size_t> size(1, max_vertices);
  RandomGraph g;
  const std::size_t n = size(rng);
  std::vector<int> deg(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    std::vector<std::size_t> options;
    for (std::size_t j = 0; j < i; ++j)
      if (deg[j] + 1 <= max_weight) options.push_back(j);
    std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
    const auto parent = options[pick(rng)];
    g.edges.emplace_back(parent, i);
    ++deg[parent];
    ++deg[i];
  }
  g.weights.resize(n);
  bool strict = false;
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<int> w(std::max(2, deg[i]), max_weight);
    g.weights[i] = w(rng);
    if (g.weights[i] > deg[i]) strict = true;
  }
  if (!strict) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::size_t tries = 0;
    for (auto i = pick(rng); tries < n; i = (i + 1) % n, ++tries)
      if (deg[i] < max_weight) {
        g.weights[i] = deg[i] + 1;
        strict = true;
        break;
      }
  }
  return g;
}

}  // namespace infnear::oracle
