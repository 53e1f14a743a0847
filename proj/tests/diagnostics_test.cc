// Copyright 2026 The gramwb Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gramwb/diagnostics.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "demo_fixture.h"
#include "fragment_oracle.h"

namespace gramwb {
namespace {

const std::vector<std::string> kThree = {"der", "Hund", "schläft"};

std::vector<std::string> Labels(const std::vector<Span>& spans) {
  std::vector<std::string> out;
  for (const auto& s : spans) out.push_back(FormatSpan(s));
  return out;
}

TEST(FragmentsTest, SpanningEdgeIsTheOnlyFragment) {
  std::vector<Span> spans = {{0, 1, "Det", 0}, {1, 2, "N", 1}, {2, 3, "V", 2},
                             {0, 2, "NP", 3}, {2, 3, "VP", 4}, {0, 3, "S", 5}};
  FailureReport r = DiagnoseFailure(spans, kThree);
  EXPECT_EQ(Labels(r.fragments.fragments), std::vector<std::string>{"S[0,3]#5"});
  EXPECT_DOUBLE_EQ(r.fragments.coverage(), 1.0);
  ASSERT_EQ(r.paths.size(), 1u);
  EXPECT_EQ(r.paths[0].length(), 1u);
}

TEST(FragmentsTest, GreedyLeftToRight) {
  std::vector<Span> spans = {{0, 2, "NP", 0}, {2, 3, "V", 1}};
  FragmentReport r = LargestFragments(spans, kThree);
  EXPECT_EQ(Labels(r.fragments), (std::vector<std::string>{"NP[0,2]#0", "V[2,3]#1"}));
}

TEST(FragmentsTest, TieGoesToLastEdge) {
  std::vector<Span> spans = {{0, 2, "NP", 7}, {0, 2, "XP", 9}, {0, 1, "Det", 11}};
  FragmentReport r = LargestFragments(spans, kThree);
  ASSERT_EQ(r.fragments.size(), 2u);
  EXPECT_EQ(r.fragments[0].id, 9u);
  EXPECT_EQ(FormatSpan(r.fragments[1]), "'schläft'[2,3]");
  EXPECT_EQ(r.covered, 2u);
}

TEST(ShortestPathsTest, PrefersFewerEdges) {
  std::vector<Span> spans = {{0, 2, "NP", 0}, {0, 1, "Det", 1}, {1, 2, "N", 2}, {2, 3, "V", 3}};
  std::vector<ChartPath> paths = ShortestPaths(spans, kThree);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(Labels(paths[0].edges), (std::vector<std::string>{"NP[0,2]#0", "V[2,3]#3"}));
}

TEST(ShortestPathsTest, GapRoutesThroughWordUnit) {
  std::vector<Span> spans = {{0, 1, "Det", 0}, {2, 3, "V", 1}};
  std::vector<ChartPath> paths = ShortestPaths(spans, kThree);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(Labels(paths[0].edges),
            (std::vector<std::string>{"Det[0,1]#0", "'Hund'[1,2]", "V[2,3]#1"}));
}

TEST(ShortestPathsTest, DeadEndStillReachesTheEnd) {
  // Position 2 has no outgoing span although B covers token 2.
  std::vector<Span> spans = {{0, 2, "A", 0}, {1, 3, "B", 1}};
  std::vector<ChartPath> paths = ShortestPaths(spans, kThree);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(Labels(paths[0].edges), (std::vector<std::string>{"A[0,2]#0", "'schläft'[2,3]"}));
}

TEST(ShortestPathsTest, CapsAndTextJson) {
  std::vector<std::string> tokens(4, "w");
  std::vector<Span> spans;
  std::size_t id = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    for (int k = 0; k < 3; ++k) spans.push_back({i, i + 1, "X" + std::to_string(k), id++});
  }
  EXPECT_EQ(ShortestPaths(spans, tokens).size(), kMaxShortestPaths);
  EXPECT_EQ(ShortestPaths(spans, tokens, 100).size(), 81u);
  FailureReport r = DiagnoseFailure(spans, tokens);
  EXPECT_EQ(FormatFailure(r).substr(0, 54), "largest fragments (4/4 tokens covered): X2[0,1]#2 X2[1");
  nlohmann::json j = FailureToJson(r);
  EXPECT_EQ(j["paths"].size(), kMaxShortestPaths);
  EXPECT_EQ(j["fragments"][0]["id"], 2);
  EXPECT_TRUE(ShortestPaths({}, {}).empty());
}

// ---------------------------------------------------------------------------
// Random spans against exhaustive enumeration.

struct RandomChart {
  std::vector<std::string> tokens;
  std::vector<Span> spans;
};

RandomChart MakeChart(std::mt19937& rng) {
  RandomChart c;
  std::size_t n = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
  for (std::size_t i = 0; i < n; ++i) c.tokens.push_back("t" + std::to_string(i));
  std::size_t m = std::uniform_int_distribution<std::size_t>(0, 20)(rng);
  std::vector<std::size_t> ids(m);
  for (std::size_t i = 0; i < m; ++i) ids[i] = i * 3 + 1;
  std::shuffle(ids.begin(), ids.end(), rng);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t from = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    std::size_t len = std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(4, n - from))(rng);
    c.spans.push_back({from, from + len, "L" + std::to_string(rng() % 4), ids[i]});
  }
  return c;
}

TEST(DiagnosticsOracleTest, RandomCharts) {
  std::mt19937 rng(7);
  for (int round = 0; round < 500; ++round) {
    RandomChart c = MakeChart(rng);
    const std::size_t n = c.tokens.size();
    FragmentReport f = LargestFragments(c.spans, c.tokens);

    // Non-overlapping and covering, greedy, ties to the highest id.
    std::size_t pos = 0;
    std::size_t covered = 0;
    for (const Span& s : f.fragments) {
      ASSERT_EQ(s.from, pos);
      ASSERT_GT(s.to, s.from);
      for (const Span& other : c.spans) {
        if (other.from != pos) continue;
        ASSERT_TRUE(s.id.has_value());
        ASSERT_LE(other.length(), s.length());
        if (other.length() == s.length()) ASSERT_LE(*other.id, *s.id);
      }
      if (s.id) covered += s.length();
      pos = s.to;
    }
    ASSERT_EQ(pos, n);
    ASSERT_EQ(f.covered, covered);

    std::size_t best = 0;
    std::set<std::vector<std::string>> minimal = testing::MinimalSegmentations(c.spans, c.tokens, &best);

    std::vector<ChartPath> paths = ShortestPaths(c.spans, c.tokens, 1000);
    std::set<std::vector<std::string>> got;
    for (const auto& p : paths) {
      ASSERT_EQ(p.length(), best);
      got.insert(Labels(p.edges));
    }
    ASSERT_EQ(got.size(), paths.size());
    ASSERT_EQ(got, minimal);
    ASSERT_LE(best, f.fragments.size());

    std::vector<ChartPath> capped = ShortestPaths(c.spans, c.tokens);
    ASSERT_EQ(capped.size(), std::min(kMaxShortestPaths, minimal.size()));
  }
}

// ---------------------------------------------------------------------------
// Real charts and tables.

TEST(DiagnosticsDemoTest, ScrambledSentence) {
  Grammar g = testing::DemoGrammar();
  CompiledGrammar cg = Compile(g);
  BoundLexicon lex = testing::DemoLexicon();
  std::vector<std::string> tokens = SplitSentence("Hund der schläft");
  Chart chart;
  ParseResult r = ParseChart(cg, lex.analyze(tokens), chart);
  ASSERT_TRUE(r.readings.empty());
  FailureReport f = DiagnoseFailure(PassiveSpans(chart), tokens);
  ASSERT_EQ(f.fragments.covered, 3u);
  // The chart has no span over 0..2 or 1..3 that crosses into a clause.
  for (const Span& s : f.fragments.fragments) EXPECT_TRUE(s.id.has_value());
  ASSERT_FALSE(f.paths.empty());
  EXPECT_LE(f.paths[0].length(), f.fragments.fragments.size());
  for (const Span& s : f.fragments.fragments) {
    const ChartEdge& e = chart.edge(*s.id);
    EXPECT_TRUE(e.passive);
    EXPECT_EQ(e.label, s.label);
  }
}

TEST(DiagnosticsDemoTest, TableSpansFollowDiscovery) {
  Grammar g = testing::DemoGrammar("demo.dcg");
  CompiledGrammar cg = Compile(g);
  BoundLexicon lex = testing::DemoLexicon();
  std::vector<std::string> tokens = SplitSentence("der Hund schläft mit");
  TdParse r = ParseTopDown(cg, RunChecks(g), lex.analyze(tokens));
  ASSERT_TRUE(r.result.readings.empty());
  std::vector<Span> spans = PassiveSpans(r.wfst);
  ASSERT_FALSE(spans.empty());
  for (std::size_t i = 1; i < spans.size(); ++i) EXPECT_LT(*spans[i - 1].id, *spans[i].id);
  FragmentReport f = LargestFragments(spans, tokens);
  // "der Hund schläft" is an S. No goal ever starts at "mit": the only
  // continuation after V wants an NP there, and Det fails first.
  ASSERT_EQ(f.fragments.size(), 2u);
  EXPECT_EQ(f.fragments[0].label, "S");
  EXPECT_EQ(f.fragments[0].length(), 3u);
  EXPECT_EQ(FormatSpan(f.fragments[1]), "'mit'[3,4]");
}

}  // namespace
}  // namespace gramwb
