#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "gro/evariables.hpp"
#include "gro/io.hpp"
#include "test_support.hpp"

using namespace gro;

TEST(ParseTable, JsonAndCsvAgree) {
  Table j = parse_table_text(R"({"groups":[{"n":8,"ones":3},{"n":10,"ones":4}]})", TableFormat::kJson);
  Table c = parse_table_text("a,8,3\nb,10,4", TableFormat::kCsv);
  Table h = parse_table_text("group_id,n,ones\na,8,3\nb,10,4\n", TableFormat::kCsv);
  EXPECT_EQ(j.k(), 2u);
  EXPECT_EQ(j, c);
  EXPECT_EQ(j, h);
}

TEST(ParseTable, Errors) {
  try {
    parse_table_text(R"({"groups":[{"n":10,"ones":11}]})", TableFormat::kJson);
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "invalid table row 1");
  }
  try {
    parse_table_text(R"({"groups":[]})", TableFormat::kJson);
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "no groups");
  }
  EXPECT_THROW(parse_table_text("{", TableFormat::kJson), Error);
  EXPECT_THROW(parse_table_text("a,8\n", TableFormat::kCsv), Error);
  EXPECT_THROW(parse_table_text("a,8,x\n", TableFormat::kCsv), Error);
  EXPECT_THROW(parse_table("/nonexistent/table.json"), Error);
}

TEST(ParseTable, RoundTrip) {
  Table t({{3, 1}, {0, 0}, {9, 9}});
  Json j = table_to_json(t);
  EXPECT_EQ(parse_table_text(j.dump(), TableFormat::kJson), t);
  // Whitespace and key order normalize away.
  Table u = parse_table_text(R"({ "groups" : [ {"ones":1, "n":3}, {"n":0,"ones":0}, {"n":9,"ones":9} ] })",
                             TableFormat::kJson);
  EXPECT_EQ(table_to_json(u).dump(), j.dump());
}

TEST(ParsePrior, Forms) {
  EXPECT_EQ(parse_prior("uniform"), PriorSpec::uniform());
  EXPECT_EQ(parse_prior("nml"), PriorSpec::nml());
  EXPECT_EQ(parse_prior("beta:1.5,2"), PriorSpec::beta(1.5, 2));
  EXPECT_TRUE(parse_prior("explicit:0.25,0.75").is_explicit());
  EXPECT_THROW(parse_prior("beta:1"), Error);
  EXPECT_THROW(parse_prior("beta:0,1"), Error);
  EXPECT_THROW(parse_prior("explicit:0.2,0.2"), Error);
  EXPECT_THROW(parse_prior("gauss"), Error);
  EXPECT_EQ(expand_priors({}, 3).size(), 3u);
  EXPECT_EQ(expand_priors({"nml"}, 2)[1], PriorSpec::nml());
  EXPECT_THROW(expand_priors({"nml", "uniform"}, 3), Error);
}

TEST(Network, TriangleExample) {
  NetworkInput net;
  net.edges = {{"1", "2"}, {"2", "3"}, {"1", "3"}};
  net.partition = {{"1", "A"}, {"2", "A"}, {"3", "B"}};
  NetworkTable nt = network_to_table(net);
  ASSERT_EQ(nt.table.k(), 2u);
  EXPECT_EQ(nt.table.groups()[0], (Group{1, 1}));
  EXPECT_EQ(nt.table.groups()[1], (Group{2, 2}));
  EXPECT_EQ(nt.group_labels, (std::vector<std::string>{"A~A", "A~B"}));
  ASSERT_EQ(nt.warnings.size(), 1u);
  EXPECT_NE(nt.warnings[0].find("B~B"), std::string::npos);
}

TEST(Network, DyadCountsMatchEnumeration) {
  // Oracle: enumerate node pairs directly.
  NetworkInput net;
  net.partition = {{"a", "X"}, {"b", "X"}, {"c", "X"}, {"d", "Y"}, {"e", "Y"}, {"f", "Z"}};
  net.edges = {{"a", "b"}, {"a", "d"}, {"e", "d"}, {"f", "c"}, {"f", "e"}};
  for (NetworkMode mode : {NetworkMode::kSbmUndirected, NetworkMode::kSbmDirected}) {
    net.mode = mode;
    const bool directed = mode == NetworkMode::kSbmDirected;
    std::map<std::string, std::pair<long, long>> oracle;
    for (const auto& [u, bu] : net.partition) {
      for (const auto& [v, bv] : net.partition) {
        if (u == v || (!directed && v < u)) continue;
        std::string key = (directed || bu <= bv) ? bu + (directed ? "->" : "~") + bv : bv + "~" + bu;
        ++oracle[key].first;
        for (const auto& [x, y] : net.edges) {
          if ((x == u && y == v) || (!directed && x == v && y == u)) ++oracle[key].second;
        }
      }
    }
    NetworkTable nt = network_to_table(net);
    ASSERT_EQ(nt.table.k(), nt.group_labels.size());
    for (std::size_t i = 0; i < nt.table.k(); ++i) {
      auto [size, ones] = oracle.at(nt.group_labels[i]);
      EXPECT_EQ(nt.table.groups()[i].size, size) << nt.group_labels[i];
      EXPECT_EQ(nt.table.groups()[i].ones, ones) << nt.group_labels[i];
    }
    EXPECT_TRUE(std::is_sorted(nt.group_labels.begin(), nt.group_labels.end()));
  }
}

TEST(Network, EmptyGraphHasNoOnes) {
  NetworkInput net;
  net.partition = {{"1", "A"}, {"2", "A"}, {"3", "B"}, {"4", "B"}};
  NetworkTable nt = network_to_table(net);
  ASSERT_EQ(nt.table.k(), 3u);
  for (const Group& g : nt.table.groups()) EXPECT_EQ(g.ones, 0);
}

TEST(Network, Errors) {
  NetworkInput net;
  net.partition = {{"1", "A"}, {"2", "A"}};
  net.edges = {{"1", "2"}, {"2", "1"}};
  EXPECT_THROW(network_to_table(net), Error);
  net.mode = NetworkMode::kSbmDirected;
  EXPECT_NO_THROW(network_to_table(net));
  net.edges = {{"1", "1"}};
  EXPECT_THROW(network_to_table(net), Error);
  net.edges = {{"1", "3"}};
  EXPECT_THROW(network_to_table(net), Error);
  EXPECT_THROW(parse_network_mode("er"), Error);
}

TEST(Network, BipartiteAllOnes) {
  std::vector<std::vector<int>> full(3, std::vector<int>(4, 1));
  Table t = biadjacency_to_table(full);
  ASSERT_EQ(t.k(), 3u);
  for (const Group& g : t.groups()) EXPECT_EQ(g, (Group{4, 4}));
  EXPECT_EQ(parse_biadjacency_csv("1,1,1,1\n1,1,1,1\n1,1,1,1\n"), full);
  EXPECT_THROW(biadjacency_to_table({{1, 0}, {1}}), Error);
  EXPECT_THROW(biadjacency_to_table({{2}}), Error);
}

TEST(Network, BipartiteEdgeList) {
  NetworkInput net;
  net.mode = NetworkMode::kPcmBipartite;
  net.partition = {{"r1", "rows"}, {"r2", "rows"}, {"c1", "cols"}, {"c2", "cols"}, {"c3", "cols"}};
  net.edges = {{"r1", "c1"}, {"c2", "r1"}, {"r2", "c3"}};
  net.constrained = "rows";
  NetworkTable nt = network_to_table(net);
  ASSERT_EQ(nt.table.k(), 2u);
  EXPECT_EQ(nt.table.groups()[0], (Group{3, 2}));
  EXPECT_EQ(nt.table.groups()[1], (Group{3, 1}));
  EXPECT_EQ(nt.group_labels, (std::vector<std::string>{"r1", "r2"}));
  net.edges.push_back({"c1", "r1"});
  EXPECT_THROW(network_to_table(net), Error);
  net.edges = {{"r1", "r2"}};
  EXPECT_THROW(network_to_table(net), Error);
}

TEST(Network, NullExpectationOfEValueIsOne) {
  // Undirected SBM on 5 nodes, blocks {1,2,3} and {4,5}: E over the ER null of S_mic equals one.
  NetworkInput net;
  net.partition = {{"1", "A"}, {"2", "A"}, {"3", "A"}, {"4", "B"}, {"5", "B"}};
  net.edges = {{"1", "4"}};
  Table t = network_to_table(net).table;
  std::vector<long> sizes = t.sizes();
  std::vector<PriorSpec> specs(sizes.size(), PriorSpec::uniform());
  SeparableStatistic s = gro_mic_statistic(specs, sizes);
  for (double p0 : {0.1, 0.35, 0.5, 0.9}) {
    double e = 0.0;
    test::for_each_c1(sizes, [&](const std::vector<long>& c1) {
      double w = 1.0;
      for (std::size_t i = 0; i < sizes.size(); ++i) w *= test::binomial_pmf(sizes[i], c1[i], p0);
      e += w * std::exp(s.log_e(c1));
    });
    EXPECT_NEAR(e, 1.0, 1e-10);
  }
}

TEST(EdgeAndPartitionText, Parse) {
  auto e = parse_edge_list("1 2\n# comment\n2,3\n\n");
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e[1], (std::pair<std::string, std::string>{"2", "3"}));
  EXPECT_THROW(parse_edge_list("1 2 3\n"), Error);
  auto p = parse_partition("1,A\n2,B\n");
  EXPECT_EQ(p.at("2"), "B");
  EXPECT_THROW(parse_partition("1,A\n1,B\n"), Error);
}

TEST(Report, JsonFields) {
  std::vector<PriorSpec> specs(2, PriorSpec::uniform());
  EValueReport r = log_e_gro_mic(Table({{2, 2}, {2, 0}}), specs);
  Json j = report_to_json(r, 0.05);
  EXPECT_EQ(j["statistic_kind"], "gro_mic");
  EXPECT_EQ(j["is_evariable"], true);
  EXPECT_NEAR(j["e"].get<double>(), 2.0, 1e-12);
  EXPECT_EQ(j["decision"], "continue");
  EXPECT_NEAR(j["post_hoc_level"].get<double>(), 0.5, 1e-12);
  EXPECT_EQ(j["table_stats"]["c0"], 2);
  EXPECT_FALSE(j.contains("achieved_kl"));
  EXPECT_TRUE(json_number(-INFINITY).is_null());
}
