#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "infnear/dual_graph.hpp"
#include "infnear/singularity.hpp"
#include "infnear/weighted.hpp"

namespace infnear {

using Alpha = std::map<PointId, std::int64_t>;

struct CartierRequest {
  WeightedCluster base;
  SingularityReport singularity;
  Alpha alpha;                       ///< prescribed multiplicities on K_+^Q
  std::optional<PointId> seed_point; ///< where the first free point goes; o_Q by default
};

struct CartierCertificate {
  bool consistent = false;
  bool values_match = false;        ///< values at K_+ equal those of the product of simple ideals
  bool localized = false;           ///< dicritical points of T lie over Q
  bool excess_zero = false;         ///< zero excess on K outside T_Q
  bool intersections_match = false; ///< read-out multiplicities equal alpha
  std::map<PointId, std::int64_t> readout;  ///< intersection with each L_p, p in K_+
  std::vector<std::string> failures;

  bool passed() const { return consistent && values_match && localized && excess_zero && intersections_match; }
};

struct CartierStage {
  std::string label;
  WeightedCluster cluster;  ///< current cluster, zero points dropped
  UnloadingTrace trace;     ///< unloading steps, indices in the result skeleton
};

struct CartierResult {
  WeightedCluster t;                ///< K plus added points; zero multiplicities allowed
  std::vector<PointId> added;       ///< added points, in order of addition, indices in t
  std::vector<CartierStage> stages;
  std::vector<std::int64_t> dicritical_excess;  ///< sum of excesses on K_+^Q after each stage
  std::size_t micro_steps = 0;
  CartierCertificate certificate;
};

namespace detail {

struct Fraction {
  __int128 num = 0;
  __int128 den = 1;

  static __int128 gcd(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      auto t = a % b;
      a = b;
      b = t;
    }
    return a;
  }
  Fraction normalized() const {
    Fraction f = *this;
    if (f.den < 0) {
      f.num = -f.num;
      f.den = -f.den;
    }
    auto g = gcd(f.num, f.den);
    if (g > 1) {
      f.num /= g;
      f.den /= g;
    }
    return f;
  }
  friend Fraction operator-(Fraction a, Fraction b) { return Fraction{a.num * b.den - b.num * a.den, a.den * b.den}.normalized(); }
  friend Fraction operator*(Fraction a, Fraction b) { return Fraction{a.num * b.num, a.den * b.den}.normalized(); }
  friend Fraction operator/(Fraction a, Fraction b) { return Fraction{a.num * b.den, a.den * b.num}.normalized(); }
  bool is_zero() const { return num == 0; }
};

/// Exact solve of a non-singular square system; nullopt if singular.
inline std::optional<std::vector<Fraction>> solve_exact(std::vector<std::vector<std::int64_t>> a,
                                                        std::vector<std::int64_t> b) {
  const std::size_t n = b.size();
  std::vector<std::vector<Fraction>> m(n, std::vector<Fraction>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m[i][j] = Fraction{a[i][j], 1};
    m[i][n] = Fraction{b[i], 1};
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col].is_zero()) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[piv], m[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      auto factor = m[r][col] / m[col][col];
      for (std::size_t c = col; c <= n; ++c) m[r][c] = m[r][c] - factor * m[col][c];
    }
  }
  std::vector<Fraction> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = m[i][n] / m[i][i];
  return x;
}

inline std::string fresh_tag(const ClusterSkeleton& s, std::string base) {
  while (s.find(base)) base += "'";
  return base;
}

}  // namespace detail

/// Certificate for a candidate cluster T, computed only from K, the report,
/// alpha and T itself. Points of K are matched in T by tag.
inline CartierCertificate verify_cartier(const WeightedCluster& k, const SingularityReport& rep, const Alpha& alpha,
                                         const WeightedCluster& t) {
  CartierCertificate cert;
  auto fail = [&](std::string why) { cert.failures.push_back(std::move(why)); };
  const auto& ks = k.skeleton;
  const auto& ts = t.skeleton;
  if (!ts.is_valid()) {
    fail("T is not a valid cluster");
    return cert;
  }
  std::vector<PointId> in_t(k.size());
  for (std::size_t p = 0; p < k.size(); ++p) {
    auto found = ts.find(ks.raw()[p].tag);
    if (!found) {
      fail("T is missing point " + ks.label(p));
      return cert;
    }
    in_t[p] = *found;
  }
  cert.consistent = is_consistent(t);
  if (!cert.consistent) fail("T is not consistent");

  const auto rho_k = excesses(k);
  std::vector<PointId> dicritical;
  for (std::size_t p = 0; p < k.size(); ++p)
    if (rho_k[p] > 0) dicritical.push_back(PointId{p});

  std::map<PointId, Weights> simple_values;
  for (auto p : dicritical) simple_values[p] = values(simple_cluster(ks, p));

  const auto vt = values(t);
  cert.values_match = true;
  for (auto p : dicritical) {
    std::int64_t expected = 0;
    for (auto [q, a] : alpha) expected += a * simple_values.at(q)[p.index];
    if (vt[in_t[p.index].index] != expected) {
      cert.values_match = false;
      fail("value at " + ks.label(p) + " is " + std::to_string(vt[in_t[p.index].index]) + ", expected " +
           std::to_string(expected));
    }
  }

  std::vector<bool> is_k_point(t.size(), false), contracted(t.size(), false);
  for (std::size_t p = 0; p < k.size(); ++p) is_k_point[in_t[p].index] = true;
  for (auto c : rep.contracted) contracted[in_t[c.index].index] = true;
  std::vector<bool> over_q(t.size(), false);
  for (std::size_t p = 0; p < t.size(); ++p) {
    if (is_k_point[p]) continue;
    for (auto q : ts.raw()[p].proximities)
      if (contracted[q] || over_q[q]) over_q[p] = true;
  }
  const auto rho_t = excesses(t);
  cert.localized = true;
  for (std::size_t p = 0; p < t.size(); ++p) {
    if (rho_t[p] <= 0) continue;
    if (is_k_point[p] ? !contracted[p] : !over_q[p]) {
      cert.localized = false;
      fail("dicritical point " + ts.label(p) + " of T does not lie over Q");
    }
  }

  cert.excess_zero = true;
  for (std::size_t p = 0; p < k.size(); ++p) {
    const auto tp = in_t[p].index;
    if (!contracted[tp] && rho_t[tp] != 0) {
      cert.excess_zero = false;
      fail("excess of T at " + ks.label(p) + " is " + std::to_string(rho_t[tp]));
    }
  }

  // Solve sum_q beta_q v_p(K(q)) = v_p(T) over p, q in K_+.
  std::vector<std::vector<std::int64_t>> mat(dicritical.size(), std::vector<std::int64_t>(dicritical.size()));
  std::vector<std::int64_t> rhs(dicritical.size());
  for (std::size_t i = 0; i < dicritical.size(); ++i) {
    for (std::size_t j = 0; j < dicritical.size(); ++j)
      mat[i][j] = simple_values.at(dicritical[j])[dicritical[i].index];
    rhs[i] = vt[in_t[dicritical[i].index].index];
  }
  cert.intersections_match = true;
  auto beta = detail::solve_exact(mat, rhs);
  if (!beta) {
    cert.intersections_match = false;
    fail("value matrix of the simple ideals is singular");
  } else {
    for (std::size_t i = 0; i < dicritical.size(); ++i) {
      const auto& b = (*beta)[i];
      const auto p = dicritical[i];
      if (b.den != 1) {
        cert.intersections_match = false;
        fail("non-integral intersection with L_" + ks.label(p));
        continue;
      }
      const auto got = static_cast<std::int64_t>(b.num);
      cert.readout[p] = got;
      auto it = alpha.find(p);
      const std::int64_t want = it == alpha.end() ? 0 : it->second;
      if (got != want) {
        cert.intersections_match = false;
        fail("intersection with L_" + ks.label(p) + " is " + std::to_string(got) + ", expected " + std::to_string(want));
      }
    }
  }
  return cert;
}

/// Builds a consistent cluster T whose generic curve has a Cartier strict
/// transform on Bl_I(S) meeting the exceptional locus only at Q, with
/// intersection multiplicity alpha_p against each component L_p through Q.
///
/// Starts from the product of simple ideals prod I_p^alpha_p, adds a free
/// point over Q and unloads; then, while some p in K_+^Q keeps positive
/// excess, adds the next satellite point on E_p towards the contracted set.
/// Zero points are dropped after every stage and the points of K are put back
/// with multiplicity zero at the end.
inline CartierResult build_cartier(const CartierRequest& req) {
  const auto& k = req.base;
  const auto& rep = req.singularity;
  detail::require_base_cluster(k);
  if (rep.smooth) throw InputError("Cartier construction needs a singular point");
  if (rep.multiplicity_shift.size() != k.size()) throw InputError("report does not belong to this cluster");

  const auto& targets = rep.components_at_q;
  if (req.alpha.size() != targets.size()) throw InputError("alpha must be given on exactly the components through Q");
  for (auto p : targets) {
    auto it = req.alpha.find(p);
    if (it == req.alpha.end()) throw InputError("alpha missing for " + k.skeleton.label(p));
    if (it->second <= 0) throw InputError("alpha must be positive");
  }

  const DualGraph kgraph = dual_graph(k.skeleton);
  std::map<PointId, PointId> towards;  // p -> the point of T_Q adjacent to p
  for (auto p : targets) {
    std::vector<PointId> adj;
    for (auto t : rep.contracted)
      if (kgraph.adjacent(p, t)) adj.push_back(t);
    internal_check(adj.size() == 1, "component " + k.skeleton.label(p) + " meets T_Q more than once");
    towards[p] = adj.front();
  }
  const auto k_dicritical = dicritical_set(k);

  std::vector<std::pair<WeightedCluster, std::int64_t>> terms;
  for (auto p : targets) terms.emplace_back(simple_cluster(k.skeleton, p), req.alpha.at(p));
  const WeightedCluster k0 = linear_combination(terms);

  CartierResult res;
  ClusterSkeleton ambient = k.skeleton;
  Weights nu = k0.nu;
  std::vector<bool> present(k.size());
  for (std::size_t p = 0; p < k.size(); ++p) present[p] = nu[p] != 0;

  std::int64_t alpha_sum = 0;
  for (auto [p, a] : req.alpha) alpha_sum += a;
  const auto kn = static_cast<std::int64_t>(k.size());
  const std::int64_t cap = 4 * alpha_sum * kn * kn;

  auto excess_now = [&] {
    WeightedCluster cur(ambient, nu);
    for (std::size_t p = 0; p < ambient.size(); ++p)
      if (!present[p]) cur.nu[p] = 0;
    return excesses(cur);
  };

  auto run_stage = [&](std::string label) {
    present = proximity_closure(ambient, present);
    auto r = restrict_to(ambient, present);
    Weights local;
    for (auto old : r.to_parent) local.push_back(nu[old.index]);
    WeightedCluster cur(r.skeleton, std::move(local));
    CartierStage stage{std::move(label), {}, {}};
    if (!is_consistent(cur)) {
      auto unloaded = unload(cur);
      for (auto step : unloaded.trace) {
        step.point = r.to_parent[step.point.index];
        internal_check(!std::binary_search(k_dicritical.begin(), k_dicritical.end(), step.point),
                       "unloading touched the dicritical point " + ambient.label(step.point));
        stage.trace.push_back(step);
      }
      res.micro_steps += unloaded.trace.size();
      cur = std::move(unloaded.cluster);
    }
    for (std::size_t i = 0; i < r.to_parent.size(); ++i) nu[r.to_parent[i].index] = cur.nu[i];
    auto dropped = drop_zero_points(cur);
    std::fill(present.begin(), present.end(), false);
    for (auto kept : dropped.kept) present[r.to_parent[kept.index].index] = true;
    stage.cluster = std::move(dropped.cluster);
    res.stages.push_back(std::move(stage));
    if (static_cast<std::int64_t>(res.micro_steps) > cap)
      throw InternalError("Cartier construction exceeded its step cap after stage " + res.stages.back().label);
  };

  auto dicritical_excess = [&] {
    auto rho = excess_now();
    std::int64_t sum = 0;
    for (auto p : targets) sum += rho[p.index];
    return sum;
  };

  auto check_inner_chains = [&] {
    std::vector<bool> mask = present;
    for (std::size_t p = 0; p < k.size(); ++p) mask[p] = true;
    mask = proximity_closure(ambient, mask);
    auto r = restrict_to(ambient, mask);
    Weights local;
    for (auto old : r.to_parent) local.push_back(present[old.index] ? nu[old.index] : 0);
    const WeightedCluster cur(r.skeleton, std::move(local));
    const auto rho = excesses(cur);
    const DualGraph g = dual_graph(cur.skeleton);
    for (std::size_t i = 0; i < targets.size(); ++i)
      for (std::size_t j = i + 1; j < targets.size(); ++j) {
        auto a = *r.from_parent[targets[i].index], b = *r.from_parent[targets[j].index];
        auto inner = g.open_chain(a, b);
        bool positive = std::any_of(inner.begin(), inner.end(), [&](PointId u) { return rho[u.index] > 0; });
        internal_check(positive, "no positive excess between " + k.skeleton.label(targets[i]) + " and " +
                                     k.skeleton.label(targets[j]) + " after stage " + res.stages.back().label);
      }
  };

  const PointId seed = req.seed_point.value_or(rep.contracted_root);
  if (!std::binary_search(rep.contracted.begin(), rep.contracted.end(), seed))
    throw InputError("seed point " + k.skeleton.label(seed) + " is not contracted to Q");
  for (auto p : k.skeleton.predecessors(seed)) present[p.index] = true;
  res.added.push_back(ambient.add_free(seed, detail::fresh_tag(ambient, "w0")));
  nu.push_back(1);
  present.push_back(true);
  ++res.micro_steps;
  run_stage("w0");
  {
    auto rho = excess_now();
    for (auto p : targets)
      internal_check(rho[p.index] == req.alpha.at(p) - 1,
                     "excess at " + k.skeleton.label(p) + " after the first stage is not alpha - 1");
  }
  res.dicritical_excess.push_back(dicritical_excess());
  check_inner_chains();

  for (std::size_t step = 2;; ++step) {
    auto rho = excess_now();
    std::optional<PointId> pick;
    for (auto p : targets)
      if (rho[p.index] > 0) {
        pick = p;
        break;
      }
    if (!pick) break;
    const DualGraph g = dual_graph(ambient);
    auto path = g.chain(*pick, towards.at(*pick));
    internal_check(path.size() >= 2, "no chain towards the contracted set");
    const PointId next = path[1];
    const PointId later = std::max(*pick, next), earlier = std::min(*pick, next);
    const std::string tag = detail::fresh_tag(ambient, "w" + std::to_string(step));
    res.added.push_back(ambient.add_satellite(later, earlier, tag));
    nu.push_back(1);
    present.push_back(true);
    ++res.micro_steps;
    run_stage(tag);
    res.dicritical_excess.push_back(dicritical_excess());
    internal_check(res.dicritical_excess.back() < res.dicritical_excess[res.dicritical_excess.size() - 2],
                   "total excess on K_+^Q did not decrease at stage " + tag);
    check_inner_chains();
  }

  std::vector<bool> keep = present;
  for (std::size_t p = 0; p < k.size(); ++p) keep[p] = true;
  keep = proximity_closure(ambient, keep);
  auto r = restrict_to(ambient, keep);
  Weights t_nu;
  for (auto old : r.to_parent) t_nu.push_back(present[old.index] ? nu[old.index] : 0);
  res.t = WeightedCluster(r.skeleton, std::move(t_nu));
  std::vector<PointId> added;
  for (auto a : res.added)
    if (r.from_parent[a.index]) added.push_back(*r.from_parent[a.index]);
  res.added = std::move(added);
  for (auto& stage : res.stages)
    for (auto& step : stage.trace)
      if (r.from_parent[step.point.index]) step.point = *r.from_parent[step.point.index];
  res.certificate = verify_cartier(k, rep, req.alpha, res.t);
  return res;
}

}  // namespace infnear
