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

#include "gramwb/lexicon.h"

#include <gtest/gtest.h>

namespace gramwb {
namespace {

const std::string kDemo = std::string(GRAMWB_DATA_DIR) + "/demo/";

LexEntry Entry(std::string_view line) {
  LexiconLoad l = ParseLexicon(line);
  EXPECT_TRUE(l.lexicon) << (l.diagnostics.empty() ? "" : FormatDiagnostic(l.diagnostics[0]));
  return l.lexicon->entries().at(0);
}

InterfaceRule Rule(std::string_view text) {
  InterfaceRuleLoad r = ParseInterfaceRules(text);
  EXPECT_TRUE(r.rules) << (r.diagnostics.empty() ? "" : FormatDiagnostic(r.diagnostics[0]));
  return r.rules->rules.at(0);
}

std::vector<std::string> Categories(const LexicalEvaluation& ev) {
  std::vector<std::string> out;
  for (const auto& c : ev.categories) out.push_back(FormatCategory({c.symbol, c.features}));
  return out;
}

TEST(LexiconTest, DemoLexiconLookup) {
  LexiconLoad l = LoadLexiconFile(kDemo + "demo.lex");
  ASSERT_TRUE(l.lexicon);
  EXPECT_TRUE(l.diagnostics.empty());
  EXPECT_GT(l.lexicon->size(), 80u);

  auto hund = l.lexicon->lookup("Hund");
  ASSERT_EQ(hund.size(), 3u);
  EXPECT_EQ(hund[0]->to_string(), "Hund : genus=mask, kasus=nom, numerus=sg, pos=noun");
  EXPECT_EQ(*hund[1]->feature("kasus"), "akk");
  EXPECT_TRUE(l.lexicon->lookup("Xyzzy").empty());
  EXPECT_TRUE(l.lexicon->lookup("hund").empty());
  EXPECT_EQ(l.lexicon->lookup("schläft").size(), 1u);
}

TEST(LexiconTest, AmbiguousFormsKeepFileOrder) {
  LexiconLoad l = ParseLexicon("die : pos=det, kasus=nom\ndie : pos=det, kasus=akk\n");
  auto die = l.lexicon->lookup("die");
  ASSERT_EQ(die.size(), 2u);
  EXPECT_EQ(*die[0]->feature("kasus"), "nom");
  EXPECT_EQ(*die[1]->feature("kasus"), "akk");
  EXPECT_EQ(die[1]->line, 2);
}

TEST(LexiconTest, LoadDiagnostics) {
  LexiconLoad l = ParseLexicon("Hund : pos=noun\nKatze : kasus=nom\n", "x.lex");
  EXPECT_FALSE(l.lexicon);
  ASSERT_EQ(l.diagnostics.size(), 1u);
  EXPECT_EQ(l.diagnostics[0].kind, "missing-pos");
  EXPECT_EQ(l.diagnostics[0].location.line, 2);

  EXPECT_EQ(ParseLexicon("Hund pos=noun").diagnostics[0].kind, "malformed-entry");
  EXPECT_EQ(ParseLexicon(" : pos=noun").diagnostics[0].kind, "empty-surface");
  EXPECT_EQ(ParseLexicon("a : pos=x, pos=y").diagnostics[0].kind, "duplicate-feature");
  EXPECT_EQ(ParseLexicon("a : pos=").diagnostics[0].kind, "malformed-entry");
  EXPECT_TRUE(ParseLexicon("// only a comment\n\n").lexicon);
}

TEST(InterfaceRuleTest, TestCriterion) {
  InterfaceRule r = Rule("if_in_lex (pos=verb, !tense, ~reflexive) then_in_gram (V).");
  EXPECT_TRUE(r.matches(Entry("geht : pos=verb, tense=pres")));
  EXPECT_FALSE(r.matches(Entry("freut : pos=verb, reflexive=yes, tense=pres")));
  EXPECT_FALSE(r.matches(Entry("gehen : pos=verb")));
  EXPECT_FALSE(r.matches(Entry("Hund : pos=noun, tense=pres")));
}

TEST(InterfaceRuleTest, SpecificationCopiesAndAdds) {
  InterfaceRule r = Rule(
      "if_in_lex (pos=noun, !kasus, !numerus) "
      "then_in_gram (N[case = #kasus, number = #numerus, person = 3]).");
  LexicalEvaluation ev = ApplyInterfaceRules(Entry("Hund : pos=noun, kasus=nom, numerus=sg"), {r});
  EXPECT_EQ(Categories(ev), std::vector<std::string>{"N[case=nom, number=sg, person=3]"});
  EXPECT_TRUE(ev.diagnostics.empty());
}

TEST(InterfaceRuleTest, EveryMatchingRuleEmits) {
  InterfaceRuleLoad load = ParseInterfaceRules(
      "v2: if_in_lex (pos=verb) then_in_gram (V).\n"
      "ve: if_in_lex (pos=verb) then_in_gram (VE).\n"
      "n: if_in_lex (pos=noun) then_in_gram (N).\n");
  ASSERT_TRUE(load.rules);
  LexEntry e = Entry("geht : pos=verb");
  LexicalEvaluation first = ApplyInterfaceRules(e, load.rules->rules);
  LexicalEvaluation second = ApplyInterfaceRules(e, load.rules->rules);
  EXPECT_EQ(Categories(first), (std::vector<std::string>{"V", "VE"}));
  EXPECT_EQ(Categories(first), Categories(second));
  EXPECT_EQ(first.categories[1].rule, "ve");
  EXPECT_EQ(load.rules->preterminals(), (std::set<std::string>{"N", "V", "VE"}));
}

TEST(InterfaceRuleTest, MissingCopySourceIsPositioned) {
  InterfaceRuleLoad load =
      ParseInterfaceRules("\nnoun: if_in_lex (pos=noun) then_in_gram (N[case = #kasus]).", "r.ifr");
  ASSERT_TRUE(load.rules);
  ASSERT_EQ(load.diagnostics.size(), 1u);
  EXPECT_EQ(load.diagnostics[0].kind, "unchecked-copy");
  EXPECT_EQ(load.diagnostics[0].severity, Severity::kWarning);
  EXPECT_NE(load.diagnostics[0].message.find("unchecked copy"), std::string::npos);

  LexicalEvaluation ev = ApplyInterfaceRules(Entry("Hund : pos=noun"), load.rules->rules);
  EXPECT_TRUE(ev.categories.empty());
  ASSERT_EQ(ev.diagnostics.size(), 1u);
  EXPECT_EQ(ev.diagnostics[0].kind, "missing-copy-source");
  EXPECT_EQ(ev.diagnostics[0].location.line, 2);
  EXPECT_NE(ev.diagnostics[0].message.find("'noun'"), std::string::npos);
  EXPECT_NE(ev.diagnostics[0].message.find("kasus"), std::string::npos);
}

TEST(InterfaceRuleTest, LoadErrors) {
  auto kind = [](std::string_view text) {
    InterfaceRuleLoad load = ParseInterfaceRules(text);
    EXPECT_FALSE(load.rules) << text;
    return load.diagnostics.empty() ? std::string() : load.diagnostics[0].kind;
  };
  EXPECT_EQ(kind("if_in_lex (!tense, ~tense) then_in_gram (V)."), "contradiction");
  EXPECT_EQ(kind("a: if_in_lex (pos=v) then_in_gram (V). a: if_in_lex (pos=n) then_in_gram (N)."),
            "duplicate-rule");
  EXPECT_EQ(kind("if_in_lex (pos=v) then_in_gram (v)."), "lowercase-category");
  EXPECT_EQ(kind("if_in_lex (Pos=v) then_in_gram (V)."), "uppercase-feature");
  EXPECT_EQ(kind("if_in_lex (pos=v) then_in_gram (V[a=1, a=2])."), "duplicate-feature");
  EXPECT_EQ(kind("if_in_lex (pos=v) then_gram (V)."), "syntax");
}

TEST(InterfaceRuleTest, FormatRoundTrips) {
  std::string text =
      "noun: if_in_lex (pos=noun, !kasus, ~reflexive) then_in_gram (N[case = #kasus, person = 3]).";
  InterfaceRule r = Rule(text);
  EXPECT_EQ(FormatInterfaceRule(r), text);
}

TEST(BoundLexiconTest, DemoAnalysisAndTrace) {
  auto lex = LoadLexiconFile(kDemo + "demo.lex");
  auto rules = LoadInterfaceRuleFile(kDemo + "demo.ifr", Formalism::kIdlp);
  ASSERT_TRUE(lex.lexicon && rules.rules);
  EXPECT_TRUE(rules.diagnostics.empty()) << FormatDiagnostic(rules.diagnostics[0]);
  BoundLexicon bound(std::make_shared<Lexicon>(*lex.lexicon),
                     std::make_shared<InterfaceRuleSet>(*rules.rules));

  LexicalAnalysis a = bound.analyze(SplitSentence("der Hund schläft laut"));
  ASSERT_EQ(a.items.size(), 4u);
  EXPECT_EQ(a.items[0].size(), 4u);  // four readings of "der"
  ASSERT_EQ(a.items[1].size(), 3u);
  EXPECT_EQ(FormatCategory({a.items[1][0].symbol, a.items[1][0].features}),
            "N[kas=nom, num=sg, person=3]");
  // schläft is both a second-position and a final verb.
  ASSERT_EQ(a.items[2].size(), 2u);
  EXPECT_EQ(a.items[2][0].symbol, "V");
  EXPECT_EQ(a.items[2][1].symbol, "VE");
  EXPECT_EQ(a.unknown_tokens(), std::vector<std::size_t>{3});

  // Each consumed category is the specification applied to one entry.
  for (const auto& ev : a.trace) {
    if (ev.category.empty()) continue;
    EXPECT_EQ(ev.category.rfind(ev.rule == "noun" ? "N[" : "", 0), 0u);
  }
  EXPECT_EQ(a.trace.back().word, "laut");
  EXPECT_TRUE(a.trace.back().entry.empty());

  LexicalAnalysis refl = bound.analyze({"freut"});
  EXPECT_TRUE(refl.items[0].empty());
  ASSERT_EQ(refl.trace.size(), 1u);
  EXPECT_FALSE(refl.trace[0].entry.empty());
}

TEST(SplitSentenceTest, Whitespace) {
  EXPECT_EQ(SplitSentence("  der  Hund\tschläft "),
            (std::vector<std::string>{"der", "Hund", "schläft"}));
  EXPECT_TRUE(SplitSentence("   ").empty());
}

}  // namespace
}  // namespace gramwb
