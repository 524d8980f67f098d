#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "infnear/singularity.hpp"

namespace {

using namespace infnear;
using namespace fixtures;

WeightedCluster d1() { return d_family(1); }

std::vector<PointId> ids(std::initializer_list<std::size_t> xs) {
  std::vector<PointId> out;
  for (auto x : xs) out.push_back(PointId{x});
  return out;
}

TEST(Extend, SatelliteHangsFromTheLaterPoint) {
  auto kw = extend(d1(), BoundaryPoint::satellite(PointId{0}, PointId{1}));
  ASSERT_EQ(kw.size(), 4u);
  EXPECT_EQ(kw.skeleton.raw()[3].proximities, (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(kw.nu[3], 1);
  EXPECT_TRUE(kw.skeleton.is_valid());
}

TEST(Extend, FreePoint) {
  auto kw = extend(d1(), BoundaryPoint::free_on(PointId{2}));
  EXPECT_EQ(kw.skeleton.raw()[3].proximities, std::vector<std::size_t>{2});
}

TEST(Extend, NonAdjacentSatelliteRejected) {
  EXPECT_THROW(extend(d1(), BoundaryPoint::satellite(PointId{0}, PointId{2})), InputError);
}

TEST(Analyze, D1AtTheSatellitePoint) {
  auto k = d1();
  auto rep = analyze(k, BoundaryPoint::satellite(PointId{0}, PointId{1}));
  ASSERT_FALSE(rep.smooth);
  EXPECT_EQ(rep.contracted, ids({0, 1}));
  EXPECT_EQ(rep.contracted_root, PointId{0});
  EXPECT_EQ(rep.dropped, ids({2}));
  EXPECT_EQ(rep.components_at_q, ids({2}));
  EXPECT_EQ(rep.fundamental_cycle, (Weights{1, 1, 0}));
  EXPECT_EQ(rep.multiplicity_shift, (Weights{1, 0, -1}));
  EXPECT_EQ(rep.multiplicity, 2);
  EXPECT_EQ(rep.embedding_dimension, 3);
  EXPECT_EQ(rep.section_branches, 2);
  EXPECT_TRUE(rep.minimal);
  EXPECT_TRUE(rep.all_steps_tame);
}

TEST(Analyze, SameComponentGivesTheSameReport) {
  auto k = d1();
  auto a = analyze(k, BoundaryPoint::satellite(PointId{0}, PointId{1}));
  auto b = analyze(k, BoundaryPoint::free_on(PointId{1}));
  EXPECT_EQ(a.contracted, b.contracted);
  EXPECT_EQ(a.dropped, b.dropped);
  EXPECT_EQ(a.components_at_q, b.components_at_q);
  EXPECT_EQ(a.fundamental_cycle, b.fundamental_cycle);
  EXPECT_EQ(a.multiplicity, b.multiplicity);
  EXPECT_EQ(a.section_branches, b.section_branches);
  EXPECT_EQ(drop_zero_points(b.unloaded).cluster.nu, (Weights{2, 1}));
}

TEST(Analyze, PointOnADicriticalComponentIsSmooth) {
  auto rep = analyze(d1(), BoundaryPoint::free_on(PointId{2}));
  EXPECT_TRUE(rep.smooth);
}

TEST(Analyze, RejectsInconsistentOrZeroClusters) {
  EXPECT_THROW(analyze(weighted(free_chain(), {1, 2, 1}), BoundaryPoint::free_on(PointId{0})), InputError);
  EXPECT_THROW(analyze(weighted(free_chain(), {1, 1, 0}), BoundaryPoint::free_on(PointId{0})), InputError);
}

class DFamily : public ::testing::TestWithParam<int> {};

TEST_P(DFamily, OneSingularityOfMultiplicityRPlusOne) {
  const int r = GetParam();
  auto k = d_family(r);
  auto reps = enumerate_singularities(k);
  ASSERT_EQ(reps.size(), 1u);
  const auto& rep = reps[0];
  EXPECT_EQ(rep.components_at_q.size(), 1u);
  EXPECT_EQ(rep.multiplicity, r + 1);
  EXPECT_EQ(rep.embedding_dimension, r + 2);
  std::vector<PointId> non_dicritical;
  const auto rho = excesses(k);
  for (std::size_t p = 0; p < k.size(); ++p)
    if (rho[p] == 0) non_dicritical.push_back(PointId{p});
  EXPECT_EQ(rep.contracted, non_dicritical);
}

INSTANTIATE_TEST_SUITE_P(R1To6, DFamily, ::testing::Range(1, 7));

TEST(Enumerate, SmoothBlowUp) {
  EXPECT_TRUE(enumerate_singularities(weighted(ClusterSkeleton::with_origin(), {1})).empty());
}

TEST(Enumerate, D1Component) {
  auto reps = enumerate_singularities(d1());
  ASSERT_EQ(reps.size(), 1u);
  EXPECT_EQ(reps[0].contracted, ids({0, 1}));
  EXPECT_EQ(zero_excess_components(d1()), std::vector<std::vector<PointId>>{ids({0, 1})});
  EXPECT_EQ(component_of(d1(), BoundaryPoint::satellite(PointId{1}, PointId{2})), std::optional<std::size_t>{0});
  EXPECT_EQ(component_of(d1(), BoundaryPoint::free_on(PointId{2})), std::nullopt);
}

TEST(Difexcess, D1) {
  auto k = d1();
  auto rep = analyze(k, BoundaryPoint::free_on(PointId{0}));
  EXPECT_EQ(excesses(k), (Weights{0, 0, 1}));
  EXPECT_EQ(rep.unloaded_excess, (Weights{1, 1, 0}));
  EXPECT_TRUE(verify_difexcess(k, rep));
  EXPECT_TRUE(verify_difexcess(k, analyze(k, BoundaryPoint::free_on(PointId{2}))));
}

TEST(CoefFund, D1) {
  auto k = d1();
  auto rep = analyze(k, BoundaryPoint::free_on(PointId{0}));
  EXPECT_TRUE(verify_coef_fund(k, rep));
  auto broken = rep;
  broken.dropped.clear();
  EXPECT_FALSE(verify_coef_fund(k, broken));
}

TEST(ResolutionGraph, D1IsAPathOfTwos) {
  auto rep = analyze(d1(), BoundaryPoint::free_on(PointId{0}));
  auto g = resolution_graph(rep);
  EXPECT_EQ(g.vertices(), ids({0, 1}));
  EXPECT_TRUE(g.adjacent(PointId{0}, PointId{1}));
  EXPECT_EQ(g.weight(PointId{0}), 2);
  EXPECT_EQ(g.weight(PointId{1}), 2);
  EXPECT_THROW(resolution_graph(analyze(d1(), BoundaryPoint::free_on(PointId{2}))), InputError);
}

TEST(Analyze, SingleContractedVertex) {
  // O:4, u:2, r -> u, O of multiplicity 1, z -> r of multiplicity 1.
  auto s = ClusterSkeleton::with_origin("O");
  auto u = s.add_free(PointId{0}, "u");
  auto r = s.add_satellite(u, PointId{0}, "r");
  s.add_free(r, "z");
  auto k = weighted(s, {4, 2, 1, 1});
  auto rep = analyze(k, BoundaryPoint::free_on(r));
  ASSERT_FALSE(rep.smooth);
  EXPECT_EQ(rep.contracted, ids({2}));
  EXPECT_EQ(drop_zero_points(rep.unloaded).cluster.nu, (Weights{4, 2, 2}));
  EXPECT_EQ(rep.dropped, ids({3}));
  EXPECT_EQ(rep.multiplicity, 2);
  EXPECT_EQ(rep.embedding_dimension, 3);
  EXPECT_EQ(rep.components_at_q.size(), 3u);
  EXPECT_TRUE(rep.minimal);
  EXPECT_EQ(rep.unloaded_excess[0], excesses(k)[0] - 1);
  EXPECT_TRUE(verify_difexcess(k, rep));
  EXPECT_TRUE(rep.embedding_flags.all());
}

// o_Q = c is proximate to O, but so is the later point d; O still meets T_Q
// through d, so the bound is attained although c is not m_K-satellite.
TEST(EqualityFlags, RootProximateToAComponentThroughALaterPoint) {
  auto s = ClusterSkeleton::with_origin("O");
  auto b = s.add_free(PointId{0}, "b");
  auto c = s.add_satellite(b, PointId{0}, "c");
  auto d = s.add_satellite(c, PointId{0}, "d");
  auto e = s.add_free(d, "e");
  s.add_free(e, "f");
  auto k = weighted(s, {6, 2, 1, 1, 1, 1});
  ASSERT_TRUE(is_consistent(k));
  auto rep = analyze(k, BoundaryPoint::free_on(c));
  ASSERT_FALSE(rep.smooth);
  EXPECT_EQ(rep.contracted, (std::vector<PointId>{c, d, e}));
  EXPECT_EQ(rep.contracted_root, c);
  EXPECT_EQ(rep.components_at_q.size(), 3u);
  EXPECT_EQ(rep.embedding_dimension, 3);
  EXPECT_TRUE(rep.minimal);
  EXPECT_FALSE(is_mK_satellite(s, c));
  EXPECT_FALSE(rep.embedding_flags.root_mK_satellite);
  EXPECT_TRUE(rep.embedding_flags.root_targets_adjacent);
  EXPECT_TRUE(rep.embedding_flags.all_adjacent());
}

TEST(BoundaryPoints, TextForm) {
  auto k = d1();
  auto w = parse_boundary_point(k.skeleton, "sat:O,p1");
  EXPECT_EQ(w, BoundaryPoint::satellite(PointId{0}, PointId{1}));
  EXPECT_EQ(boundary_point_text(k.skeleton, w), "sat:O,p1");
  EXPECT_EQ(parse_boundary_point(k.skeleton, "free:q1"), BoundaryPoint::free_on(PointId{2}));
  EXPECT_THROW(parse_boundary_point(k.skeleton, "free:zz"), InputError);
  EXPECT_THROW(parse_boundary_point(k.skeleton, "edge:O"), InputError);
  EXPECT_EQ(boundary_points(k.skeleton).size(), 5u);
}

}  // namespace
