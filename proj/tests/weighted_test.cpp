#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "infnear/oracle.hpp"
#include "infnear/weighted.hpp"

namespace {

using namespace infnear;
using namespace fixtures;

/// O; p1 -> O; q1 -> p1; w -> p1, O
WeightedCluster satellite_extension() {
  auto s = free_chain();
  s.add_satellite(PointId{1}, PointId{0}, "w");
  return weighted(s, {1, 1, 1, 1});
}

TEST(Values, FreeChain) {
  auto k = weighted(free_chain(), {1, 1, 1});
  EXPECT_EQ(values(k), (Weights{1, 2, 3}));
  EXPECT_EQ(multiplicities_from_values(k.skeleton, values(k)), k);
}

TEST(Values, Origin) { EXPECT_EQ(values(weighted(ClusterSkeleton::with_origin(), {1})), Weights{1}); }

TEST(Values, SatelliteAddsBothTargets) {
  auto s = free_chain();
  s.add_satellite(PointId{2}, PointId{1}, "w");
  auto k = weighted(s, {1, 1, 1, 1});
  EXPECT_EQ(values(k)[3], 6);
  EXPECT_EQ(values(k), oracle::brute_values(k));
}

TEST(Excess, FreeChain) {
  auto k = weighted(free_chain(), {1, 1, 1});
  EXPECT_EQ(excesses(k), (Weights{0, 0, 1}));
  EXPECT_TRUE(is_consistent(k));
  EXPECT_EQ(dicritical_set(k), std::vector<PointId>{PointId{2}});
}

TEST(Excess, SatelliteMakesTwoNegative) {
  auto k = satellite_extension();
  auto rho = excesses(k);
  EXPECT_EQ(rho[0], -1);
  EXPECT_EQ(rho[1], -1);
  EXPECT_FALSE(is_consistent(k));
}

TEST(Excess, Origin) {
  auto k = weighted(ClusterSkeleton::with_origin(), {1});
  EXPECT_EQ(excesses(k), Weights{1});
  EXPECT_EQ(dicritical_set(k), std::vector<PointId>{PointId{0}});
}

TEST(Excess, MatrixForm) {
  auto k = d_family(3);
  auto p = proximity_matrix(k.skeleton);
  EXPECT_EQ(p.transposed().apply(k.nu), excesses(k));
  EXPECT_EQ(p.apply(values(k)), k.nu);
}

TEST(Unload, SatelliteExtensionByTameSteps) {
  auto res = unload(satellite_extension());
  EXPECT_EQ(res.cluster.nu, (Weights{2, 1, 0, 0}));
  EXPECT_EQ(values(res.cluster), (Weights{2, 3, 3, 5}));
  ASSERT_EQ(res.trace.size(), 3u);
  EXPECT_EQ(res.trace[0].point, PointId{0});
  EXPECT_EQ(res.trace[1].point, PointId{1});
  EXPECT_EQ(res.trace[2].point, PointId{3});
  for (const auto& step : res.trace) {
    EXPECT_EQ(step.increment, 1);
    EXPECT_TRUE(step.tame);
  }
  EXPECT_EQ(res.cluster, oracle::brute_unload(satellite_extension()));
}

TEST(Unload, ConsistentInputIsFixed) {
  auto k = weighted(free_chain(), {1, 1, 1});
  auto res = unload(k);
  EXPECT_EQ(res.cluster, k);
  EXPECT_TRUE(res.trace.empty());
}

TEST(Unload, FreePointOverOrigin) {
  auto s = free_chain();
  s.add_free(PointId{0}, "w");
  // With O:3 the cluster is already consistent, so unloading starts from O:2.
  EXPECT_TRUE(is_consistent(weighted(s, {3, 2, 2, 1})));
  auto k = weighted(s, {2, 2, 2, 1});
  auto res = unload(k);
  EXPECT_EQ(res.cluster.nu, (Weights{3, 2, 1, 0}));
  EXPECT_EQ(values(res.cluster), (Weights{3, 5, 6, 3}));
  ASSERT_EQ(res.trace.size(), 2u);
  EXPECT_EQ(res.trace[0].point, PointId{0});
  EXPECT_EQ(res.trace[1].point, PointId{1});
  EXPECT_TRUE(res.trace[0].tame && res.trace[1].tame);
  EXPECT_EQ(res.cluster, oracle::brute_unload(k));
}

TEST(Unload, LargeDeficitTakesOneWideStep) {
  auto s = ClusterSkeleton::with_origin();
  s.add_free(PointId{0}, "a");
  s.add_free(PointId{0}, "b");
  auto k = weighted(s, {0, 3, 3});
  auto res = unload(k);
  ASSERT_FALSE(res.trace.empty());
  EXPECT_EQ(res.trace[0].increment, 2);
  EXPECT_FALSE(res.trace[0].tame);
  EXPECT_EQ(res.cluster.nu, (Weights{2, 1, 1}));
  EXPECT_EQ(res.cluster, oracle::brute_unload(k));
}

TEST(Unload, ValuesDominateInput) {
  auto k = satellite_extension();
  auto before = values(k), after = values(unload(k).cluster);
  for (std::size_t p = 0; p < k.size(); ++p) EXPECT_GE(after[p], before[p]);
}

TEST(Unload, MultiplicityFormStepMatchesValueForm) {
  auto k = satellite_extension();
  auto v = values(k);
  v[0] += 1;
  EXPECT_EQ(unload_step_multiplicity(k, PointId{0}, 1), multiplicities_from_values(k.skeleton, v));
}

TEST(Drop, MaximalZerosGo) {
  auto s = free_chain();
  s.add_satellite(PointId{1}, PointId{0}, "w");
  auto res = drop_zero_points(weighted(s, {2, 1, 0, 0}));
  EXPECT_EQ(res.cluster.nu, (Weights{2, 1}));
  EXPECT_EQ(res.cluster.skeleton.size(), 2u);
  EXPECT_TRUE(res.blocked.empty());
}

TEST(Drop, NoZerosIsIdentity) {
  auto k = weighted(free_chain(), {1, 1, 1});
  EXPECT_EQ(drop_zero_points(k).cluster, k);
}

TEST(Drop, NonMaximalZeroIsBlocked) {
  auto s = ClusterSkeleton::with_origin();
  s.add_free(PointId{0}, "p1");
  auto k = weighted(s, {0, 1});
  auto res = drop_zero_points(k);
  EXPECT_EQ(res.cluster, k);
  EXPECT_EQ(res.blocked, std::vector<PointId>{PointId{0}});
}

TEST(SimpleCluster, FreeChain) {
  auto s = free_chain();
  EXPECT_EQ(simple_cluster(s, PointId{2}).nu, (Weights{1, 1, 1}));
  EXPECT_EQ(simple_cluster(s, PointId{0}).nu, (Weights{1, 0, 0}));
}

TEST(SimpleCluster, SatelliteOverChain) {
  auto s = free_chain();
  auto w = s.add_satellite(PointId{2}, PointId{1}, "w");
  auto k = simple_cluster(s, w);
  EXPECT_EQ(k.nu, (Weights{2, 2, 1, 1}));
  EXPECT_EQ(excesses(k), (Weights{0, 0, 0, 1}));
}

TEST(LinearCombination, Examples) {
  auto s = free_chain();
  auto kq = simple_cluster(s, PointId{2});
  auto kp = simple_cluster(s, PointId{1});
  EXPECT_EQ(linear_combination({{kq, 2}}).nu, (Weights{2, 2, 2}));
  EXPECT_EQ(linear_combination({{kq, 1}, {kp, 1}}).nu, (Weights{2, 2, 1}));
  EXPECT_EQ(linear_combination({{kq, 1}}), kq);
}

TEST(LinearCombination, SubSkeletonsMatchByTag) {
  auto big = free_chain();
  auto small = ClusterSkeleton::with_origin("O");
  small.add_free(PointId{0}, "p1");
  auto sum = linear_combination({{weighted(small, {1, 1}), 2}, {weighted(big, {1, 1, 1}), 1}});
  EXPECT_EQ(sum.nu, (Weights{3, 3, 1}));
}

TEST(LinearCombination, RejectsIncompatibleSkeletons) {
  auto a = free_chain();
  auto b = ClusterSkeleton::with_origin("O");
  auto x = b.add_free(PointId{0}, "p1");
  b.add_satellite(x, PointId{0}, "q1");
  EXPECT_THROW(linear_combination({{weighted(a, {1, 1, 1}), 1}, {weighted(b, {2, 1, 1}), 1}}), InputError);
  EXPECT_THROW(linear_combination({{weighted(a, {1, 1, 1}), 0}}), InputError);
}

TEST(SelfIntersection, SumOfSquares) {
  EXPECT_EQ(self_intersection(weighted(free_chain(), {1, 1, 1})), 3);
  auto s = ClusterSkeleton::with_origin();
  s.add_free(PointId{0}, "p1");
  EXPECT_EQ(self_intersection(weighted(s, {2, 1})), 5);
  EXPECT_EQ(self_intersection(weighted(free_chain(), {3, 2, 1})), 14);
}

TEST(ExceptionalIntersections, Examples) {
  EXPECT_EQ(exceptional_intersections(weighted(free_chain(), {1, 1, 1})), (Weights{0, 0, 1}));
  auto s = ClusterSkeleton::with_origin();
  s.add_free(PointId{0}, "p1");
  EXPECT_EQ(exceptional_intersections(weighted(s, {2, 1})), (Weights{1, 1}));
  EXPECT_EQ(exceptional_intersections(weighted(ClusterSkeleton::with_origin(), {1})), Weights{1});
  EXPECT_THROW(exceptional_intersections(satellite_extension()), InputError);
}

}  // namespace
