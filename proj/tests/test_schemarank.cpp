#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "dretk/schemarank.hpp"
#include "support/corpus_files.hpp"
#include "support/dense_pagerank.hpp"

using namespace dretk;
using prop::graph;
using prop::random_graph;
using prop::dense_oracle;

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST(Graph, Examples) {
  const auto once = graph({"A", "B"}, {{0, 1}});
  EXPECT_EQ(once.edges.at({0, 1}), 1U);
  EXPECT_EQ(once.times, (std::vector<double>{0.0, 1.0}));
  const auto twice = graph({"A", "B"}, {{0, 1}, {0, 1}});
  EXPECT_EQ(twice.edges.at({0, 1}), 2U);
  EXPECT_EQ(twice.times[1], 2.0);
  EXPECT_TRUE(graph({"A", "B"}, {}).edges.empty());
}

TEST(Graph, FromFixtureDocs) {
  const auto docs = prop::load_docs(prop::corpus_files(prop::fixtures() / "corpus" / "xsd"));
  const auto g = build_graph(docs);
  for (const auto& [k, m] : g.edges) {
    EXPECT_LT(k.first, g.size());
    EXPECT_LT(k.second, g.size());
  }
  std::vector<double> in(g.size(), 0.0);
  for (const auto& [k, m] : g.edges) in[k.second] += static_cast<double>(m);
  EXPECT_EQ(in, g.times);
  const auto common = std::find_if(g.nodes.begin(), g.nodes.end(),
                                   [](const std::string& p) { return p.ends_with("xsd/common.xsd"); });
  ASSERT_NE(common, g.nodes.end());
  const auto ci = static_cast<std::size_t>(common - g.nodes.begin());
  EXPECT_FALSE(g.external[ci]);
  EXPECT_GE(g.times[ci], 2.0);
  EXPECT_TRUE(std::any_of(g.external.begin(), g.external.end(), [](bool b) { return b; }));

  GraphOptions distinct;
  distinct.times_mode = TimesMode::DistinctFiles;
  const auto gd = build_graph(docs, distinct);
  EXPECT_LT(gd.times[gd.index.at(*common)], g.times[ci]);
}

TEST(PageRank, Examples) {
  const auto cycle = pagerank(graph({"A", "B"}, {{0, 1}, {1, 0}}));
  EXPECT_NEAR(cycle.pr[0], 0.5, 1e-12);
  EXPECT_NEAR(cycle.pr[1], 0.5, 1e-12);
  EXPECT_NEAR(pagerank(graph({"A"}, {})).pr[0], 1.0, 1e-15);
  EXPECT_THROW(pagerank(RefGraph{}), std::invalid_argument);
  PageRankOptions bad;
  bad.damping = 1.0;
  EXPECT_THROW(pagerank(graph({"A"}, {}), bad), std::invalid_argument);
}

TEST(PageRank, MatchesDenseOracle) {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 200; ++t) {
    const auto g = random_graph(rng);
    // the default 100-step cap can stop short on slowly mixing graphs;
    // here the iteration must stop on eps
    PageRankOptions opt;
    opt.max_iter = 2000;
    const auto got = pagerank(g, opt);
    ASSERT_LT(got.residual, opt.eps);
    const auto want = dense_oracle(g, 0.85);
    double l1 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) l1 += std::abs(got.pr[i] - want[i]);
    ASSERT_LT(l1, 1e-8) << "graph " << t << " n=" << g.size();
    ASSERT_NEAR(sum(got.pr), 1.0, 1e-9);
  }
}

TEST(PageRank, EdgelessIsUniform) {
  const auto g = graph({"a", "b", "c", "d"}, {});
  const auto s = schemarank(pagerank(g), g);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(s.pr[i], 0.25, 1e-15);
    EXPECT_EQ(s.sr[i], 0.0);
  }
}

TEST(PageRank, RelabelingKeepsScores) {
  std::mt19937_64 rng(62);
  for (int t = 0; t < 50; ++t) {
    const auto g = random_graph(rng);
    // relabel so that the path order is reversed
    std::vector<std::string> renamed;
    for (const auto& n : g.nodes) renamed.push_back("z" + std::to_string(3000 - std::stoi(n.substr(1))));
    std::vector<std::pair<int, int>> arcs;
    for (const auto& [k, m] : g.edges)
      for (std::size_t r = 0; r < m; ++r) arcs.emplace_back(static_cast<int>(k.first), static_cast<int>(k.second));
    const auto h = graph(renamed, arcs);
    const auto sg = schemarank(pagerank(g), g);
    const auto sh = schemarank(pagerank(h), h);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto j = h.index.at(renamed[i]);
      ASSERT_NEAR(sg.pr[i], sh.pr[j], 1e-12);
      ASSERT_NEAR(sg.sr[i], sh.sr[j], 1e-12);
    }
  }
}

TEST(SchemaRank, Formula) {
  RefGraph g = graph({"p", "q"}, {});
  g.times = {4.0, 0.0};
  PageRankResult pr;
  pr.pr = {0.5, 0.5};
  const auto s = schemarank(pr, g);
  EXPECT_DOUBLE_EQ(s.sr[0], 2.0);
  EXPECT_EQ(s.sr[1], 0.0);
}

TEST(SchemaRank, TopK) {
  // A<->B plus C->B gives times (1, 2)
  const auto g = graph({"A", "B", "C"}, {{0, 1}, {1, 0}, {2, 1}});
  const auto s = schemarank(pagerank(g), g);
  EXPECT_EQ(s.nodes[top_k(s, 1)[0]], "B");
  EXPECT_EQ(top_k(s, 10).size(), 3U);

  const auto flat = graph({"b", "a", "c"}, {});
  const auto fs = schemarank(pagerank(flat), flat);
  std::vector<std::string> names;
  for (auto i : top_k(fs, 3)) names.push_back(fs.nodes[i]);
  EXPECT_EQ(names, (std::vector<std::string>{"a", "b", "c"}));
}

TEST(SchemaRank, ArgmaxSurvivesTimesScaling) {
  std::mt19937_64 rng(63);
  for (int t = 0; t < 100; ++t) {
    auto g = random_graph(rng);
    const auto pr = pagerank(g);
    const auto before = top_k(schemarank(pr, g), 1)[0];
    for (auto& x : g.times) x *= 7.5;
    EXPECT_EQ(top_k(schemarank(pr, g), 1)[0], before);
  }
}
