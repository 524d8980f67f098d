#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "infnear/dsl.hpp"
#include "infnear/report_json.hpp"

namespace {

using namespace infnear;
using namespace fixtures;

constexpr const char* kD1 = R"(# the D_1 cluster
cluster D1 { O ; p1 -> O ; q1 -> p1 }
weights D1 { O=1 p1=1 q1=1 }
)";

TEST(Dsl, ParsesClusterAndWeights) {
  auto docs = parse_clusters(kD1);
  ASSERT_EQ(docs.size(), 1u);
  EXPECT_EQ(docs[0].name, "D1");
  EXPECT_TRUE(docs[0].has_weights);
  EXPECT_EQ(docs[0].cluster(), d_family(1));
}

TEST(Dsl, SatelliteTargetsAndDefaultWeights) {
  auto k = parse_cluster("cluster K { O ; p1 -> O ; q1 -> p1 ; w -> q1, p1 }\nweights K { O=2 w=1 }");
  EXPECT_EQ(k.skeleton.raw()[3].proximities, (std::vector<std::size_t>{2, 1}));
  EXPECT_EQ(k.nu, (Weights{2, 0, 0, 1}));
}

TEST(Dsl, SeveralBlocksAndNegativeWeights) {
  auto docs = parse_clusters("cluster A { O }\ncluster B { O ; a -> O }\nweights B { O=-1 a=2 }\n");
  ASSERT_EQ(docs.size(), 2u);
  EXPECT_FALSE(docs[0].has_weights);
  EXPECT_EQ(docs[1].nu, (Weights{-1, 2}));
}

TEST(Dsl, UnknownTargetIsADiagnosticNotAParseError) {
  auto docs = parse_clusters("cluster K { O ; p1 -> O ; w -> p1, zz }");
  ASSERT_EQ(docs.size(), 1u);
  auto diags = docs[0].skeleton.validate();
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].rule, "proximity-target-missing");
  EXPECT_THROW(parse_cluster("cluster K { O ; p1 -> O ; w -> p1, zz }"), InputError);
}

TEST(Dsl, ErrorsCarryLineAndColumn) {
  try {
    parse_clusters("cluster K { O ;\n  p1 -> }\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 9u);
  }
  EXPECT_THROW(parse_clusters("weights K { O=1 }"), ParseError);
  EXPECT_THROW(parse_clusters("cluster K { O }\nweights K { p=1 }"), ParseError);
  EXPECT_THROW(parse_clusters("cluster K { O }\ncluster K { O }"), ParseError);
  EXPECT_THROW(parse_clusters("cluster K { O @ }"), ParseError);
  EXPECT_THROW(parse_clusters("cluster K { O }\nweights K { O=1 O=2 }"), ParseError);
  EXPECT_THROW(parse_clusters("cluster K { }"), ParseError);
}

TEST(Dsl, SerializerFormat) {
  auto s = free_chain();
  s.add_satellite(PointId{2}, PointId{1}, "w");
  auto k = weighted(s, {2, 2, 1, 1});
  EXPECT_EQ(serialize(k, "K"),
            "cluster K { O ; p1 -> O ; q1 -> p1 ; w -> q1, p1 }\n"
            "weights K { O=2 p1=2 q1=1 w=1 }\n");
  EXPECT_EQ(parse_clusters(serialize(k, "K"))[0].cluster(), k);
}

TEST(Dsl, SerializerRejectsUnwritableTags) {
  auto s = ClusterSkeleton::with_origin("has space");
  EXPECT_THROW(serialize(weighted(s, {1}), "K"), InputError);
  EXPECT_THROW(serialize(weighted(ClusterSkeleton::with_origin(), {1}), "bad name"), InputError);
}

TEST(Dot, EnriquesViewDashesSatelliteEdges) {
  auto k = weighted(satellite_over_origin(), {2, 1, 1});
  auto dot = enriques_dot(k, "K");
  EXPECT_NE(dot.find("\"O\" -> \"p1\";"), std::string::npos);
  EXPECT_NE(dot.find("\"p1\" -> \"w\";"), std::string::npos);
  EXPECT_NE(dot.find("\"O\" -> \"w\" [style=dashed];"), std::string::npos);
  EXPECT_EQ(dot, enriques_dot(k, "K"));
}

TEST(Dot, DualViewLabelsWeights) {
  auto s = free_chain();
  auto dot = dual_dot(s, dual_graph(s), "K");
  EXPECT_EQ(dot,
            "graph \"K\" {\n"
            "  \"O\" [label=\"O (2)\"];\n"
            "  \"p1\" [label=\"p1 (2)\"];\n"
            "  \"q1\" [label=\"q1 (1)\"];\n"
            "  \"O\" -- \"p1\";\n"
            "  \"p1\" -- \"q1\";\n"
            "}\n");
}

TEST(GraphSpec, ParsesEdgesAndWeights) {
  auto g = parse_graph_spec("# star\nweight c=4\nedge c x\nedge c y\nedge c z\nweight x=2\nweight y = 2\nweight z=2\n");
  EXPECT_EQ(g.names, (std::vector<std::string>{"c", "x", "y", "z"}));
  EXPECT_EQ(g.weights, (std::vector<int>{4, 2, 2, 2}));
  EXPECT_EQ(g.edges.size(), 3u);
  EXPECT_EQ(parse_graph_spec(serialize(g)).weights, g.weights);
}

TEST(GraphSpec, Errors) {
  EXPECT_THROW(parse_graph_spec("edge a b\nweight a=2\n"), InputError);
  try {
    parse_graph_spec("weight a=2\n  vertex b\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 3u);
  }
  EXPECT_THROW(parse_graph_spec("weight a=2\nweight a=3\n"), ParseError);
  EXPECT_THROW(parse_graph_spec("edge a a\n"), ParseError);
}

TEST(Json, ClusterFields) {
  auto j = cluster_json(d_family(1), "D1");
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["nu"]["q1"], 1);
  EXPECT_EQ(j["values"]["q1"], 3);
  EXPECT_EQ(j["excess"]["q1"], 1);
  EXPECT_EQ(j["dicritical"], Json::array({"q1"}));
  EXPECT_EQ(j.begin().key(), "schema");
}

TEST(Json, ReportFields) {
  auto k = d_family(1);
  auto rep = analyze(k, parse_boundary_point(k.skeleton, "sat:O,p1"));
  auto j = report_json(k, rep);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["w"], "sat:O,p1");
  EXPECT_EQ(j["T_Q"], Json::array({"O", "p1"}));
  EXPECT_EQ(j["o_Q"], "O");
  EXPECT_EQ(j["B_Q"], Json::array({"q1"}));
  EXPECT_EQ(j["Kplus_Q"], Json::array({"q1"}));
  EXPECT_EQ(j["mult"], 2);
  EXPECT_EQ(j["emdim"], 3);
  EXPECT_EQ(j["br"], 2);
  EXPECT_EQ(j["minimal"], true);
  EXPECT_EQ(j["resolution_graph"]["vertices"]["O"], 2);
  EXPECT_EQ(j.dump(), report_json(k, rep).dump());
}

}  // namespace
