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

#include "gramwb/testsuite.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "demo_fixture.h"
#include "gramwb/chart_parser.h"
#include "gramwb/td_parser.h"

namespace gramwb {
namespace {

namespace fs = std::filesystem;

std::string SuiteDir() { return testing::DemoPath("suite"); }

TEST(ClassFileTest, HeaderAndCases) {
  ClassLoad c = ParseClass(
      "%PHENOMENON verb group syntax\n"
      "der Hund schläft | 1 @intransitive\n"
      "// a comment\n"
      "\n"
      "*   Hund der   schläft | 0 @order @bad\n"
      "die Katze lacht @intransitive\n",
      "dir/verbs.suite");
  ASSERT_TRUE(c.test_class);
  EXPECT_TRUE(c.diagnostics.empty());
  const TestClass& t = *c.test_class;
  EXPECT_EQ(t.name, "verb group syntax");
  ASSERT_EQ(t.cases.size(), 3u);
  EXPECT_TRUE(t.cases[0].good);
  EXPECT_EQ(t.cases[0].expected, 1u);
  EXPECT_EQ(t.cases[1].sentence, "Hund der schläft");
  EXPECT_FALSE(t.cases[1].good);
  EXPECT_EQ(t.cases[1].expected, 0u);
  EXPECT_EQ(t.cases[1].tags, (std::vector<std::string>{"order", "bad"}));
  EXPECT_EQ(t.cases[1].location.line, 5);
  EXPECT_FALSE(t.cases[2].expected);
}

TEST(ClassFileTest, FallbackNameAndWarnings) {
  ClassLoad c = ParseClass("der Hund schläft\nder  Hund schläft\n", "dir/01_intr.suite");
  ASSERT_TRUE(c.test_class);
  EXPECT_EQ(c.test_class->name, "01_intr");
  ASSERT_EQ(c.diagnostics.size(), 2u);
  EXPECT_EQ(c.diagnostics[0].kind, "duplicate-sentence");
  EXPECT_EQ(c.diagnostics[0].location.line, 2);
  EXPECT_EQ(c.diagnostics[1].kind, "missing-header");

  ClassLoad empty = ParseClass("%PHENOMENON nothing\n", "e.suite");
  ASSERT_TRUE(empty.test_class);
  ASSERT_EQ(empty.diagnostics.size(), 1u);
  EXPECT_EQ(empty.diagnostics[0].kind, "empty-class");
  EXPECT_EQ(empty.diagnostics[0].severity, Severity::kWarning);
}

TEST(ClassFileTest, MalformedLinesAreAtomicAndPositioned) {
  ClassLoad c = ParseClass(
      "%PHENOMENON x\n"
      "der Hund | zwei\n"
      "* der Hund | 2\n"
      "  | 1\n"
      "ok @\n",
      "x.suite");
  EXPECT_FALSE(c.test_class);
  ASSERT_EQ(c.diagnostics.size(), 4u);
  EXPECT_EQ(c.diagnostics[0].kind, "bad-count");
  EXPECT_EQ(c.diagnostics[0].location.line, 2);
  EXPECT_EQ(c.diagnostics[0].location.column, 10);
  EXPECT_EQ(c.diagnostics[1].kind, "bad-expectation");
  EXPECT_EQ(c.diagnostics[2].kind, "empty-sentence");
  EXPECT_EQ(c.diagnostics[2].location.column, 3);
  EXPECT_EQ(c.diagnostics[3].kind, "bad-tag");
  EXPECT_EQ(c.diagnostics[3].location.column, 4);
  EXPECT_NE(FormatDiagnostic(c.diagnostics[0]).find("x.suite:2:10"), std::string::npos);
}

TEST(SelectionTest, TagIntersection) {
  SuiteLoad s = LoadSuiteDirectory(SuiteDir());
  ASSERT_TRUE(s.diagnostics.empty());
  ASSERT_EQ(s.classes.size(), 8u);
  EXPECT_EQ(AllCases(s.classes).size(), 40u);

  std::vector<SelectedCase> passive = SelectCases(s.classes, {"passive"});
  std::vector<std::string> sentences;
  for (const auto& c : passive) sentences.push_back(c.test.sentence);
  // Independently: raw lines of the demo files carrying @passive.
  std::vector<std::string> expected;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(SuiteDir())) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    std::ifstream in(f);
    std::string line;
    while (std::getline(in, line)) {
      if (line.find("@passive") == std::string::npos) continue;
      std::string s = line.substr(0, line.find('|'));
      if (s[0] == '*') s = s.substr(2);
      expected.push_back(s.substr(0, s.find_last_not_of(' ') + 1));
    }
  }
  EXPECT_EQ(sentences, expected);
  EXPECT_EQ(sentences.size(), 6u);

  std::vector<SelectedCase> both = SelectCases(s.classes, {"passive", "subordinate"});
  ASSERT_EQ(both.size(), 1u);
  EXPECT_EQ(both[0].test.sentence, "der Mann sagt dass der Hund wird gejagt");
  EXPECT_EQ(both[0].phenomenon, "subordinate clauses");

  std::vector<Diagnostic> warnings;
  EXPECT_TRUE(SelectCases(s.classes, {"passive", "nosuchtag"}, &warnings).empty());
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_EQ(warnings[0].kind, "unknown-tag");
}

TEST(JudgeTest, Expectations) {
  TestCase good{"a", true, std::nullopt, {}, {}};
  TestCase two{"a", true, 2, {}, {}};
  TestCase bad{"a", false, 0, {}, {}};
  ParseResult none;
  ParseResult one;
  one.readings.resize(1);
  std::string why;
  EXPECT_EQ(Judge(good, one), Outcome::kPass);
  EXPECT_EQ(Judge(good, none, &why), Outcome::kFail);
  EXPECT_EQ(why, "grammatical sentence has no reading");
  EXPECT_EQ(Judge(two, one, &why), Outcome::kFail);
  EXPECT_EQ(why, "expected 2 readings, got 1");
  EXPECT_EQ(Judge(bad, none), Outcome::kPass);
  EXPECT_EQ(Judge(bad, one), Outcome::kFail);
  none.status = "aborted";
  EXPECT_EQ(Judge(bad, none), Outcome::kError);
}

class SweepTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    grammar_ = new CompiledGrammar(Compile(testing::DemoGrammar()));
    lexicon_ = new BoundLexicon(testing::DemoLexicon());
    classes_ = new std::vector<TestClass>(LoadSuiteDirectory(SuiteDir()).classes);
  }
  static void TearDownTestSuite() {
    delete grammar_;
    delete lexicon_;
    delete classes_;
  }

  static ParseResult ChartParse(const std::string& sentence) {
    Chart chart;
    return ParseChart(*grammar_, lexicon_->analyze(SplitSentence(sentence)), chart);
  }

  void SetUp() override {
    store_dir_ = fs::temp_directory_path() /
                 ("gramwb_suite_" + std::to_string(std::random_device{}()));
    fs::create_directories(store_dir_);
  }
  void TearDown() override { fs::remove_all(store_dir_); }

  static CompiledGrammar* grammar_;
  static BoundLexicon* lexicon_;
  static std::vector<TestClass>* classes_;
  fs::path store_dir_;
};

CompiledGrammar* SweepTest::grammar_ = nullptr;
BoundLexicon* SweepTest::lexicon_ = nullptr;
std::vector<TestClass>* SweepTest::classes_ = nullptr;

TEST_F(SweepTest, DemoSuitePassesWithProgressAndBaselines) {
  std::vector<SelectedCase> cases = AllCases(*classes_);
  BaselineStore store(store_dir_.string());
  std::vector<std::size_t> seen;
  SuiteOptions save;
  save.workers = 4;
  save.save_to = &store;
  save.on_progress = [&](const SuiteProgress& p) {
    EXPECT_EQ(p.total, 40u);
    seen.push_back(p.done);
  };
  SuiteRunTable first = RunSuite(cases, ChartParse, save);
  ASSERT_EQ(first.rows.size(), 40u);
  EXPECT_EQ(first.passed(), 40u) << FormatSuiteTable(first);
  EXPECT_EQ(first.passed() + first.failed() + first.errors(), first.rows.size());
  ASSERT_EQ(seen.size(), 40u);
  for (std::size_t i = 0; i < seen.size(); ++i) EXPECT_EQ(seen[i], i + 1);
  for (std::size_t i = 0; i < first.rows.size(); ++i) {
    EXPECT_EQ(first.rows[i].index, i);
    EXPECT_EQ(first.rows[i].test.sentence, cases[i].test.sentence);
  }

  SuiteOptions compare;
  compare.compare_to = &store;
  compare.fingerprint = grammar_->fingerprint;
  SuiteRunTable again = RunSuite(cases, ChartParse, compare);
  EXPECT_TRUE(again.all_equal()) << FormatSuiteTable(again);
  EXPECT_EQ(again.passed(), 40u);
}

TEST_F(SweepTest, NewlyAmbiguousSentenceShowsPlusOne) {
  std::vector<SelectedCase> cases = SelectCases(*classes_, {"intransitive"});
  ASSERT_GE(cases.size(), 2u);
  BaselineStore store(store_dir_.string());
  SuiteOptions save;
  save.save_to = &store;
  RunSuite(cases, ChartParse, save);

  const std::string target = cases[0].test.sentence;
  SentenceParser doubled = [&](const std::string& s) {
    ParseResult r = ChartParse(s);
    if (s == target) r.readings.push_back(r.readings.back());
    return r;
  };
  SuiteOptions compare;
  compare.compare_to = &store;
  SuiteRunTable t = RunSuite(cases, doubled, compare);
  ASSERT_TRUE(t.rows[0].verdict);
  EXPECT_EQ(*t.rows[0].verdict, Verdict::kReadingCountDiff);
  EXPECT_EQ(t.rows[0].comparison, "+1 additional reading");
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    ASSERT_TRUE(t.rows[i].verdict);
    EXPECT_EQ(*t.rows[i].verdict, Verdict::kEqual);
  }
  EXPECT_NE(FormatSuiteTable(t).find("reading_count_diff +1 additional reading"), std::string::npos);
}

TEST_F(SweepTest, FailuresNeverStopTheSweep) {
  std::vector<SelectedCase> cases = AllCases(*classes_);
  SentenceParser flaky = [&](const std::string& s) {
    if (s.find("Katze") != std::string::npos) throw Error("boom", "parser exploded");
    return ChartParse(s);
  };
  SuiteOptions options;
  options.workers = 3;
  BaselineStore store(store_dir_.string());
  options.compare_to = &store;
  SuiteRunTable t = RunSuite(cases, flaky, options);
  ASSERT_EQ(t.rows.size(), 40u);
  std::size_t katze = 0;
  for (const auto& r : t.rows) {
    bool expected_error = r.test.sentence.find("Katze") != std::string::npos;
    katze += expected_error;
    EXPECT_EQ(r.outcome == Outcome::kError, expected_error) << r.test.sentence;
    if (expected_error) {
      EXPECT_EQ(r.status, "boom");
      EXPECT_EQ(r.reason, "parser exploded");
      EXPECT_TRUE(r.comparison.empty());
    } else {
      EXPECT_EQ(r.comparison, "no baseline");
    }
  }
  EXPECT_EQ(t.errors(), katze);
  EXPECT_EQ(t.passed() + t.failed() + t.errors(), 40u);

  std::atomic<bool> cancel{true};
  options.cancel = &cancel;
  SuiteRunTable cancelled = RunSuite(cases, ChartParse, options);
  EXPECT_EQ(cancelled.errors(), 40u);
  EXPECT_EQ(cancelled.rows[0].status, "cancelled");
}

TEST_F(SweepTest, ClassOrderDoesNotChangeRows) {
  std::vector<TestClass> reversed(classes_->rbegin(), classes_->rend());
  SuiteRunTable a = RunSuite(AllCases(*classes_), ChartParse);
  SuiteRunTable b = RunSuite(AllCases(reversed), ChartParse);
  std::map<std::string, std::pair<std::size_t, Outcome>> rows;
  for (const auto& r : a.rows) rows[r.test.sentence] = {r.readings, r.outcome};
  ASSERT_EQ(b.rows.size(), a.rows.size());
  for (const auto& r : b.rows) {
    auto it = rows.find(r.test.sentence);
    ASSERT_NE(it, rows.end());
    EXPECT_EQ(it->second.first, r.readings);
    EXPECT_EQ(it->second.second, r.outcome);
  }
}

TEST_F(SweepTest, Serializations) {
  std::vector<SelectedCase> cases = SelectCases(*classes_, {"order"});
  SuiteRunTable t = RunSuite(cases, ChartParse);
  std::string text = FormatSuiteTable(t);
  EXPECT_NE(text.find("-- word order"), std::string::npos);
  EXPECT_NE(text.find("* Hund der schläft"), std::string::npos);
  EXPECT_NE(text.find("total " + std::to_string(cases.size()) + ": "), std::string::npos);

  std::string tsv = SuiteTableToTsv(t);
  EXPECT_EQ(static_cast<std::size_t>(std::count(tsv.begin(), tsv.end(), '\n')), cases.size() + 1);
  EXPECT_EQ(tsv.substr(0, 17), "index\tphenomenon\t");

  nlohmann::json j = SuiteTableToJson(t);
  EXPECT_EQ(j["rows"].size(), cases.size());
  EXPECT_EQ(j["totals"]["cases"], cases.size());
  EXPECT_EQ(j["rows"][0]["outcome"], "pass");
  EXPECT_TRUE(j["rows"][0]["verdict"].is_null());
}

TEST(TopDownSweepTest, OrderedDemoGrammarOnOrderedCases) {
  // The DCG fixes word order: the verb-first clause has no reading, and the
  // subordinate clause loses its scrambled (object-first) reading.
  Grammar g = testing::DemoGrammar("demo.dcg");
  CompiledGrammar cg = Compile(g);
  CheckReport checks = RunChecks(g);
  BoundLexicon lex = testing::DemoLexicon();
  SuiteLoad s = LoadSuiteDirectory(SuiteDir());
  SuiteRunTable t = RunSuite(AllCases(s.classes), [&](const std::string& sentence) {
    return ParseTopDown(cg, checks, lex.analyze(SplitSentence(sentence))).result;
  });
  std::vector<std::string> failing;
  for (const auto& r : t.rows) {
    if (r.outcome != Outcome::kPass) failing.push_back(r.test.sentence);
  }
  EXPECT_EQ(failing, (std::vector<std::string>{"schläft der Hund",
                                               "der Mann glaubt dass die Frau die Katze sieht"}));
  EXPECT_EQ(t.rows.back().outcome, Outcome::kPass);
}

}  // namespace
}  // namespace gramwb
