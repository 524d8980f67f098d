#include <gtest/gtest.h>

#include "infnear/synthesis.hpp"

namespace {

using namespace infnear;

TEST(Synthesis, SingleVertex) {
  MinimalGraphSpec g{{"E"}, {2}, {}};
  auto res = synthesize(g);
  const auto& s = res.cluster.skeleton;
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(res.cluster.nu, (Weights{4, 2, 1, 1}));
  EXPECT_EQ(s.raw()[2].proximities, (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(s.raw()[3].proximities, std::vector<std::size_t>{2});
  EXPECT_EQ(res.w, BoundaryPoint::free_on(PointId{2}));
  EXPECT_EQ(res.report.multiplicity, 2);
  EXPECT_EQ(res.report.embedding_dimension, 3);
  EXPECT_EQ(res.report.components_at_q.size(), 3u);
  EXPECT_TRUE(res.report.minimal);
  EXPECT_EQ(count_contracted_branches(g), 3);
}

TEST(Synthesis, PathOfTwo) {
  MinimalGraphSpec g{{"a", "b"}, {2, 2}, {{0, 1}}};
  auto res = synthesize(g);
  EXPECT_EQ(res.report.components_at_q.size(), 3u);
  EXPECT_EQ(res.report.multiplicity, 2);
  EXPECT_EQ(count_contracted_branches(g), 3);
}

TEST(Synthesis, Star) {
  MinimalGraphSpec g{{"c", "x", "y", "z"}, {4, 2, 2, 2}, {{0, 1}, {0, 2}, {0, 3}}};
  EXPECT_EQ(count_contracted_branches(g), 5);
  auto res = synthesize(g);
  EXPECT_EQ(res.report.multiplicity, 4);
  EXPECT_EQ(static_cast<std::int64_t>(res.report.components_at_q.size()), count_contracted_branches(g));
  EXPECT_TRUE(isomorphic(WeightedTree::from(res.report.resolution_graph), g.tree()));
}

TEST(Synthesis, NamesClashingWithHelpersAreKept) {
  MinimalGraphSpec g{{"O", "u", "x1"}, {3, 2, 2}, {{0, 1}, {0, 2}}};
  auto res = synthesize(g);
  for (const auto& n : g.names) EXPECT_TRUE(res.cluster.skeleton.find(n));
  EXPECT_TRUE(res.cluster.skeleton.is_valid());
}

TEST(Synthesis, RejectsInvalidSpecs) {
  EXPECT_THROW(synthesize(MinimalGraphSpec{{"a"}, {1}, {}}), InputError);
  EXPECT_THROW(synthesize(MinimalGraphSpec{{"a", "b", "c", "d"}, {2, 2, 2, 2}, {{0, 1}, {0, 2}, {0, 3}}}), InputError);
  EXPECT_THROW(synthesize(MinimalGraphSpec{{"a", "b", "c"}, {2, 2, 2}, {{0, 1}, {1, 2}, {2, 0}}}), InputError);
  EXPECT_THROW(synthesize(MinimalGraphSpec{{"a", "b"}, {2, 2}, {}}), InputError);
  EXPECT_THROW(synthesize(MinimalGraphSpec{{}, {}, {}}), InputError);
  EXPECT_THROW(synthesize(MinimalGraphSpec{{"a", "a"}, {2, 2}, {{0, 1}}}), InputError);
}

}  // namespace
