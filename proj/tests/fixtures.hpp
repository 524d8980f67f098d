#pragma once

#include <string>

#include "infnear/singularity.hpp"
#include "infnear/skeleton.hpp"
#include "infnear/weighted.hpp"

namespace fixtures {

using namespace infnear;

/// O; p1 -> O; q1 -> p1
inline ClusterSkeleton free_chain() {
  auto s = ClusterSkeleton::with_origin("O");
  auto p1 = s.add_free(PointId{0}, "p1");
  s.add_free(p1, "q1");
  return s;
}

/// O; p1 -> O; w -> p1, O
inline ClusterSkeleton satellite_over_origin() {
  auto s = ClusterSkeleton::with_origin("O");
  auto p1 = s.add_free(PointId{0}, "p1");
  s.add_satellite(p1, PointId{0}, "w");
  return s;
}

/// The D_r family: p1..pr each proximate to O in a satellite chain, then a
/// free chain q1..qr over pr, weighted by the simple cluster of qr.
inline WeightedCluster d_family(int r) {
  auto s = ClusterSkeleton::with_origin("O");
  PointId prev = s.add_free(PointId{0}, "p1");
  for (int i = 2; i <= r; ++i) prev = s.add_satellite(prev, PointId{0}, "p" + std::to_string(i));
  for (int i = 1; i <= r; ++i) prev = s.add_free(prev, "q" + std::to_string(i));
  return simple_cluster(s, prev);
}

inline WeightedCluster weighted(ClusterSkeleton s, Weights nu) { return WeightedCluster(std::move(s), std::move(nu)); }

inline PointId at(const WeightedCluster& k, const char* tag) { return k.skeleton.at_tag(tag); }
inline PointId at(const ClusterSkeleton& s, const char* tag) { return s.at_tag(tag); }

}  // namespace fixtures
