#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "infnear/cartier.hpp"
#include "infnear/singularity.hpp"
#include "infnear/weighted.hpp"

namespace infnear {

using Json = nlohmann::ordered_json;

inline constexpr int kJsonSchema = 1;

namespace detail {

inline Json tags(const ClusterSkeleton& s, const std::vector<PointId>& points) {
  Json out = Json::array();
  for (auto p : points) out.push_back(s.label(p));
  return out;
}

inline Json per_point(const ClusterSkeleton& s, const Weights& w) {
  Json out = Json::object();
  for (std::size_t i = 0; i < s.size() && i < w.size(); ++i) out[s.label(i)] = w[i];
  return out;
}

}  // namespace detail

inline Json cluster_json(const WeightedCluster& k, const std::string& name) {
  const auto& s = k.skeleton;
  Json out;
  out["schema"] = kJsonSchema;
  out["name"] = name;
  Json points = Json::array();
  for (std::size_t i = 0; i < k.size(); ++i) {
    Json p;
    p["tag"] = s.label(i);
    Json prox = Json::array();
    for (auto q : s.raw()[i].proximities) prox.push_back(s.label(q));
    p["proximate_to"] = prox;
    points.push_back(p);
  }
  out["points"] = points;
  out["nu"] = detail::per_point(s, k.nu);
  out["values"] = detail::per_point(s, values(k));
  out["excess"] = detail::per_point(s, excesses(k));
  out["consistent"] = is_consistent(k);
  out["dicritical"] = detail::tags(s, dicritical_set(k));
  return out;
}

inline Json graph_json(const ClusterSkeleton& s, const DualGraph& g) {
  Json out;
  Json vertices = Json::object();
  for (auto v : g.vertices()) vertices[s.label(v)] = g.weight(v);
  Json edges = Json::array();
  for (auto [a, b] : g.edges()) edges.push_back(Json::array({s.label(a), s.label(b)}));
  out["vertices"] = vertices;
  out["edges"] = edges;
  return out;
}

inline Json trace_json(const ClusterSkeleton& s, const UnloadingTrace& trace) {
  Json out = Json::array();
  for (const auto& step : trace) {
    Json j;
    j["point"] = s.label(step.point);
    j["increment"] = step.increment;
    j["tame"] = step.tame;
    out.push_back(j);
  }
  return out;
}

inline Json report_json(const WeightedCluster& k, const SingularityReport& rep) {
  const auto& s = k.skeleton;
  Json out;
  out["schema"] = kJsonSchema;
  out["w"] = boundary_point_text(s, rep.w);
  out["smooth"] = rep.smooth;
  out["T_Q"] = detail::tags(s, rep.contracted);
  out["o_Q"] = rep.smooth ? Json(nullptr) : Json(s.label(rep.contracted_root));
  out["epsilon"] = detail::per_point(s, rep.multiplicity_shift);
  out["B_Q"] = detail::tags(s, rep.dropped);
  out["B1_Q"] = detail::tags(s, rep.dropped_free);
  out["B2_Q"] = detail::tags(s, rep.dropped_satellite);
  out["Kplus_Q"] = detail::tags(s, rep.components_at_q);
  out["z"] = detail::per_point(s, rep.fundamental_cycle);
  out["mult"] = rep.multiplicity;
  out["emdim"] = rep.embedding_dimension;
  out["br"] = rep.section_branches;
  out["minimal"] = rep.minimal;
  Json tests;
  tests["cycle_reduced"] = rep.cycle_reduced;
  tests["branches_equal_multiplicity"] = rep.branches_equal_multiplicity;
  tests["no_free_drops_in_contracted"] = rep.no_free_drops_in_contracted;
  out["minimality_tests"] = tests;
  Json flags;
  flags["branches"] = {{"no_satellite_drops", rep.branch_flags.no_satellite_drops},
                       {"outer_drops_maximal", rep.branch_flags.outer_drops_maximal},
                       {"root_mK_satellite", rep.branch_flags.root_mK_satellite},
                       {"root_targets_adjacent", rep.branch_flags.root_targets_adjacent}};
  flags["embedding"] = {{"drops_outside_contracted", rep.embedding_flags.drops_outside_contracted},
                        {"drops_maximal", rep.embedding_flags.drops_maximal},
                        {"root_mK_satellite", rep.embedding_flags.root_mK_satellite},
                        {"root_targets_adjacent", rep.embedding_flags.root_targets_adjacent}};
  out["flags"] = flags;
  out["resolution_graph"] = graph_json(s, rep.resolution_graph);
  out["unloaded"] = detail::per_point(rep.unloaded.skeleton, rep.unloaded.nu);
  out["unloaded_excess"] = detail::per_point(s, rep.unloaded_excess);
  out["trace"] = trace_json(rep.unloaded.skeleton, rep.trace);
  return out;
}

inline Json certificate_json(const ClusterSkeleton& k, const CartierCertificate& c) {
  Json out;
  out["schema"] = kJsonSchema;
  out["passed"] = c.passed();
  out["consistent"] = c.consistent;
  out["values_match"] = c.values_match;
  out["localized"] = c.localized;
  out["excess_zero"] = c.excess_zero;
  out["intersections_match"] = c.intersections_match;
  Json readout = Json::object();
  for (auto [p, n] : c.readout) readout[k.label(p)] = n;
  out["intersections"] = readout;
  out["failures"] = c.failures;
  return out;
}

}  // namespace infnear
