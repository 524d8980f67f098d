#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "infnear/cartier.hpp"
#include "infnear/oracle.hpp"

namespace {

using namespace infnear;
using namespace fixtures;

struct D1 {
  WeightedCluster k = d_family(1);
  SingularityReport rep = enumerate_singularities(k).at(0);
  PointId q1 = k.skeleton.at_tag("q1");
};

TEST(Cartier, D1WithAlphaOne) {
  D1 d;
  auto res = build_cartier({d.k, d.rep, {{d.q1, 1}}, {}});
  EXPECT_EQ(res.t.skeleton, d.k.skeleton);
  EXPECT_EQ(res.t.nu, (Weights{2, 1, 0}));
  EXPECT_TRUE(res.added.empty());
  ASSERT_EQ(res.stages.size(), 1u);
  EXPECT_TRUE(res.certificate.passed()) << res.certificate.failures.size();
  EXPECT_EQ(values(res.t)[2], 3);
}

TEST(Cartier, D1WithAlphaTwo) {
  D1 d;
  auto res = build_cartier({d.k, d.rep, {{d.q1, 2}}, {}});
  ASSERT_EQ(res.t.size(), 4u);
  EXPECT_EQ(res.t.skeleton.tag(PointId{3}), "w2");
  EXPECT_EQ(res.t.skeleton.raw()[3].proximities, (std::vector<std::size_t>{2, 1}));
  EXPECT_EQ(res.t.nu, (Weights{3, 2, 1, 1}));
  EXPECT_TRUE(is_consistent(res.t));
  EXPECT_EQ(excesses(res.t), (Weights{1, 0, 0, 1}));
  EXPECT_EQ(res.added, std::vector<PointId>{PointId{3}});
  EXPECT_EQ(res.dicritical_excess, (std::vector<std::int64_t>{1, 0}));
  ASSERT_EQ(res.stages.size(), 2u);
  EXPECT_EQ(res.stages[0].cluster.nu, (Weights{3, 2, 1}));
  EXPECT_TRUE(res.certificate.passed());
  EXPECT_EQ(values(res.t)[2], 6);
  EXPECT_EQ(res.certificate.readout.at(d.q1), 2);
}

TEST(Cartier, TamperedClusterFailsTheValueCheck) {
  D1 d;
  auto res = build_cartier({d.k, d.rep, {{d.q1, 2}}, {}});
  auto t = res.t;
  t.nu[2] += 1;
  auto cert = verify_cartier(d.k, d.rep, {{d.q1, 2}}, t);
  EXPECT_FALSE(cert.values_match);
  EXPECT_FALSE(cert.passed());
  EXPECT_FALSE(cert.failures.empty());
}

TEST(Cartier, WrongAlphaFailsTheReadout) {
  D1 d;
  auto res = build_cartier({d.k, d.rep, {{d.q1, 2}}, {}});
  auto cert = verify_cartier(d.k, d.rep, {{d.q1, 3}}, res.t);
  EXPECT_FALSE(cert.intersections_match);
  EXPECT_FALSE(cert.values_match);
}

TEST(Cartier, DicriticalAwayFromQFailsLocalization) {
  D1 d;
  // Extra free point on q1: its excess is positive and it does not lie over Q.
  auto s = d.k.skeleton;
  s.add_free(d.q1, "x");
  auto t = weighted(s, {3, 2, 2, 1});
  auto cert = verify_cartier(d.k, d.rep, {{d.q1, 2}}, t);
  EXPECT_FALSE(cert.localized);
}

TEST(Cartier, InvalidRequests) {
  D1 d;
  EXPECT_THROW(build_cartier({d.k, d.rep, {}, {}}), InputError);
  EXPECT_THROW(build_cartier({d.k, d.rep, {{d.q1, 0}}, {}}), InputError);
  EXPECT_THROW(build_cartier({d.k, d.rep, {{PointId{0}, 1}}, {}}), InputError);
  auto smooth = analyze(d.k, BoundaryPoint::free_on(d.q1));
  EXPECT_THROW(build_cartier({d.k, smooth, {{d.q1, 1}}, {}}), InputError);
  EXPECT_THROW(build_cartier({d.k, d.rep, {{d.q1, 1}}, d.q1}), InputError);
}

TEST(Cartier, SeedPointOverride) {
  D1 d;
  auto res = build_cartier({d.k, d.rep, {{d.q1, 3}}, PointId{1}});
  EXPECT_TRUE(res.certificate.passed());
}

TEST(Cartier, UnitAlphaReadsOutOnes) {
  std::mt19937_64 rng(11);
  int seen = 0;
  for (int i = 0; i < 200 && seen < 20; ++i) {
    auto k = oracle::random_cluster(rng, {});
    for (const auto& rep : enumerate_singularities(k)) {
      Alpha alpha;
      for (auto p : rep.components_at_q) alpha[p] = 1;
      auto res = build_cartier({k, rep, alpha, {}});
      ASSERT_TRUE(res.certificate.passed());
      for (auto p : rep.components_at_q) EXPECT_EQ(res.certificate.readout.at(p), 1);
      ++seen;
    }
  }
  EXPECT_GT(seen, 0);
}

TEST(Cartier, AllPointsOfKSurvive) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    auto k = oracle::random_cluster(rng, {});
    for (const auto& rep : enumerate_singularities(k)) {
      Alpha alpha;
      for (auto p : rep.components_at_q) alpha[p] = 2;
      auto res = build_cartier({k, rep, alpha, {}});
      for (std::size_t p = 0; p < k.size(); ++p) EXPECT_TRUE(res.t.skeleton.find(k.skeleton.tag(PointId{p})));
      for (std::size_t j = 1; j < res.dicritical_excess.size(); ++j)
        EXPECT_LT(res.dicritical_excess[j], res.dicritical_excess[j - 1]);
    }
  }
}

}  // namespace
