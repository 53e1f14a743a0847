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

#include "gramwb/grammar.h"

#include <gtest/gtest.h>

#include <random>

namespace gramwb {
namespace {

constexpr std::string_view kRules12 = R"(
(1) S          -> NP[X],
                  VP[X] | X = [kas=nom].
(2) NP[kas=K]  -> Det[kas=K, num=N],
                  (AdjP[kas=K, num=N]),
                  N[kas=K, num=N].
)";

Grammar MustParse(std::string_view text, Formalism f = Formalism::kDcg) {
  GrammarParse p = ParseGrammar(text, "test.gram", f);
  if (!p.grammar) {
    std::string msg;
    for (const auto& d : p.diagnostics) msg += FormatDiagnostic(d) + "\n";
    ADD_FAILURE() << msg;
    return Grammar{};
  }
  return *p.grammar;
}

std::vector<std::string> ErrorKinds(std::string_view text) {
  std::vector<std::string> kinds;
  for (const auto& d : ParseGrammar(text).diagnostics) {
    if (d.severity == Severity::kError) kinds.push_back(d.kind);
  }
  return kinds;
}

TEST(ParseGrammarTest, RuleOneVerbatim) {
  Grammar g = MustParse(kRules12);
  ASSERT_EQ(g.rules.size(), 2u);
  const GrammarRule& r1 = g.rules[0];
  EXPECT_EQ(r1.label, "1");
  EXPECT_EQ(r1.lhs.symbol, "S");
  ASSERT_EQ(r1.rhs.size(), 2u);
  EXPECT_EQ(r1.rhs[0].symbol, "NP");
  EXPECT_EQ(r1.rhs[1].symbol, "VP");
  EXPECT_EQ(r1.rhs[0].features, Value::Var("X"));
  EXPECT_EQ(r1.rhs[1].features, Value::Var("X"));
  ASSERT_EQ(r1.equations.size(), 1u);
  EXPECT_EQ(r1.equations[0].variable, "X");
  EXPECT_EQ(RenderRaw(r1.equations[0].value), "[kas=nom]");
  EXPECT_EQ(r1.location.line, 2);
}

TEST(ParseGrammarTest, RuleTwoVerbatim) {
  Grammar g = MustParse(kRules12);
  const GrammarRule& r2 = g.rules[1];
  EXPECT_EQ(RenderRaw(r2.lhs.features), "[kas=K]");
  ASSERT_EQ(r2.rhs.size(), 3u);
  EXPECT_FALSE(r2.rhs[0].optional);
  EXPECT_TRUE(r2.rhs[1].optional);
  EXPECT_EQ(r2.rhs[1].symbol, "AdjP");
  EXPECT_EQ(RenderRaw(r2.rhs[2].features), "[kas=K, num=N]");
}

TEST(ParseGrammarTest, LowercaseCategoryIsRejected) {
  GrammarParse p = ParseGrammar("np -> Det, N.");
  EXPECT_FALSE(p.grammar);
  ASSERT_FALSE(p.diagnostics.empty());
  EXPECT_EQ(p.diagnostics[0].kind, "lowercase-category");
  EXPECT_NE(p.diagnostics[0].message.find("category must start uppercase"), std::string::npos);
  EXPECT_EQ(p.diagnostics[0].location.line, 1);
  EXPECT_EQ(p.diagnostics[0].location.column, 1);
}

TEST(ParseGrammarTest, EmptyConstituent) {
  Grammar g = MustParse("NP -> EPSILON.");
  ASSERT_EQ(g.rules[0].rhs.size(), 1u);
  EXPECT_EQ(g.rules[0].rhs[0].kind, RhsItem::Kind::kEmpty);
  EXPECT_EQ(ErrorKinds("NP -> EPSILON[a=b]."), std::vector<std::string>{"empty-with-features"});
}

TEST(ParseGrammarTest, TerminalsAndSections) {
  Grammar g = MustParse(R"(
    %FORMALISM IDLP
    %START S
    %LP
    Det < AdjP, AdjP < N.
    %ALIAS
    NPnom = NP[kas=nom].
    %RULES
    S -> NPnom, V.
    V -> 'schläft'.
  )");
  EXPECT_EQ(g.formalism, Formalism::kIdlp);
  ASSERT_EQ(g.lp.size(), 2u);
  EXPECT_EQ(g.lp[1].left, "AdjP");
  ASSERT_EQ(g.aliases.size(), 1u);
  EXPECT_EQ(g.rules[1].rhs[0].kind, RhsItem::Kind::kTerminal);
  EXPECT_EQ(g.rules[1].rhs[0].symbol, "schläft");
}

TEST(ParseGrammarTest, ErrorKinds) {
  EXPECT_EQ(ErrorKinds("NP[kas=K -> Det."), std::vector<std::string>{"unbalanced-brackets"});
  EXPECT_EQ(ErrorKinds("NP -> (Det, N."), std::vector<std::string>{"unbalanced-brackets"});
  EXPECT_EQ(ErrorKinds("S -> NP ] ."), std::vector<std::string>{"unbalanced-brackets"});
  EXPECT_EQ(ErrorKinds("S -> NP[X] | Y = [kas=nom]."),
            std::vector<std::string>{"unknown-variable"});
  EXPECT_EQ(ErrorKinds("%GRAMMAR\nS -> NP."), std::vector<std::string>{"unknown-directive"});
  EXPECT_EQ(ErrorKinds("S -> NP : ^=!."), std::vector<std::string>{"annotation-outside-lfg"});
  EXPECT_EQ(ErrorKinds("S -> (A), (B), (C), (D), (E), (F), (G)."),
            std::vector<std::string>{"too-many-optionals"});
  EXPECT_EQ(ErrorKinds("%LP\nA < A."), std::vector<std::string>{"lp-self"});
}

TEST(ParseGrammarTest, ReportsEveryBrokenRuleAndLoadsNothing) {
  GrammarParse p = ParseGrammar("S -> NP, VP.\nnp -> Det.\nVP -> v.\nN -> 'x'.");
  EXPECT_FALSE(p.grammar);
  ASSERT_EQ(p.diagnostics.size(), 2u);
  EXPECT_EQ(p.diagnostics[0].location.line, 2);
  EXPECT_EQ(p.diagnostics[1].location.line, 3);
}

TEST(ParseGrammarTest, LfgAnnotations) {
  Grammar g = MustParse(R"(
    %FORMALISM LFG
    S -> NP : (^ subj)=!, (! kas)=nom, VP : ^=!.
  )");
  ASSERT_EQ(g.rules[0].rhs.size(), 2u);
  ASSERT_EQ(g.rules[0].rhs[0].annotations.size(), 2u);
  EXPECT_EQ(FormatFEquation(g.rules[0].rhs[0].annotations[0]), "(^ subj)=!");
  EXPECT_EQ(FormatFEquation(g.rules[0].rhs[0].annotations[1]), "(! kas)=nom");
  EXPECT_EQ(FormatFEquation(g.rules[0].rhs[1].annotations[0]), "^=!");
}

TEST(ParseGrammarTest, InlineBindingsBecomeEquations) {
  Grammar g = MustParse("S -> NP[agr=A:[num=sg]], VP[agr=A].");
  ASSERT_EQ(g.rules[0].equations.size(), 1u);
  EXPECT_EQ(g.rules[0].equations[0].variable, "A");
}

TEST(ParseGrammarTest, PrintParseRoundTrip) {
  const std::string sources[] = {
      std::string(kRules12),
      "%FORMALISM IDLP\n%LP\nDet < N.\n%ALIAS\nA = B[x=y].\n%RULES\n"
      "S -> A, 'w', EPSILON, (C[f=[g=H]]) | H = [q=r].",
      "%FORMALISM LFG\nS -> NP : (^ subj)=!, VP : ^=!, (Adv) : (^ adj)=(! pred).",
  };
  for (const auto& src : sources) {
    Grammar g = MustParse(src);
    const std::string printed = FormatGrammar(g);
    Grammar again = MustParse(printed);
    EXPECT_EQ(FormatGrammar(again), printed);
    ASSERT_EQ(again.rules.size(), g.rules.size());
    for (std::size_t i = 0; i < g.rules.size(); ++i) {
      EXPECT_EQ(again.rules[i].lhs.features, g.rules[i].lhs.features);
      ASSERT_EQ(again.rules[i].rhs.size(), g.rules[i].rhs.size());
      for (std::size_t k = 0; k < g.rules[i].rhs.size(); ++k) {
        EXPECT_EQ(again.rules[i].rhs[k].kind, g.rules[i].rhs[k].kind);
        EXPECT_EQ(again.rules[i].rhs[k].symbol, g.rules[i].rhs[k].symbol);
        EXPECT_EQ(again.rules[i].rhs[k].features, g.rules[i].rhs[k].features);
        EXPECT_EQ(again.rules[i].rhs[k].optional, g.rules[i].rhs[k].optional);
      }
    }
  }
}

TEST(ParseGrammarTest, TotalOnArbitraryInput) {
  std::mt19937 rng(7);
  const std::string alphabet = "SNPVabc[]()=,.|<:^!'%-> \n\tXY_#ä";
  for (int i = 0; i < 3000; ++i) {
    std::string text;
    const int len = std::uniform_int_distribution<int>(0, 40)(rng);
    for (int k = 0; k < len; ++k) {
      text += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
    }
    GrammarParse p = ParseGrammar(text);
    if (!p.grammar) {
      ASSERT_FALSE(p.diagnostics.empty()) << text;
      for (const auto& d : p.diagnostics) ASSERT_GT(d.location.line, 0) << text;
    }
  }
}

TEST(ResolveAliasTest, OneStep) {
  Grammar g = MustParse("%ALIAS\nNPnom = NP[kas=nom].");
  CategorySpec c = ResolveAlias("NPnom", g.aliases);
  EXPECT_EQ(FormatCategory(c), "NP[kas=nom]");
}

TEST(ResolveAliasTest, ChainMergesFeatures) {
  // A -> B -> C[num=sg] -> NP[kas=nom]: B contributes nothing, C adds
  // num=sg, the final expansion adds kas=nom.
  Grammar g = MustParse("%ALIAS\nA = B.\nB = C[num=sg].\nC = NP[kas=nom].");
  EXPECT_EQ(FormatCategory(ResolveAlias("A", g.aliases)), "NP[kas=nom, num=sg]");
}

TEST(ResolveAliasTest, Errors) {
  Grammar g = MustParse("%ALIAS\nA = A.\nB = C[kas=nom].\nC = NP[kas=akk].");
  try {
    ResolveAlias("Q", g.aliases);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "unknown-alias");
  }
  try {
    ResolveAlias("A", g.aliases);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "alias-cycle");
  }
  try {
    ResolveAlias("B", g.aliases);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "alias-clash");
  }
}

TEST(GrammarIndexTest, RulesOneAndTwo) {
  Grammar g = MustParse(kRules12);
  auto index = GrammarIndex(g);
  std::vector<std::string> keys;
  for (const auto& [k, v] : index) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"AdjP", "Det", "N", "NP", "S", "VP"}));
  EXPECT_EQ(index["NP"].defined_by, std::vector<std::size_t>{1});
  EXPECT_EQ(index["NP"].referenced_by, std::vector<std::size_t>{0});
  EXPECT_TRUE(index["VP"].defined_by.empty());
  EXPECT_TRUE(GrammarIndex(Grammar{}).empty());
}

TEST(CompileTest, OptionalsExpandToVariants) {
  CompiledGrammar c = Compile(MustParse(kRules12));
  ASSERT_EQ(c.rules.size(), 3u);
  EXPECT_EQ(c.rules[1].items.size(), 3u);
  EXPECT_EQ(c.rules[2].items.size(), 2u);
  EXPECT_EQ(c.rules[2].source_rule, 1u);
  EXPECT_EQ(c.fingerprint.size(), 16u);
}

TEST(CompileTest, DuplicateVariantsCollapse) {
  CompiledGrammar c = Compile(MustParse("A -> (B), (B)."));
  // {B,B}, {B}, {}: the two single-B variants are the same rule.
  EXPECT_EQ(c.rules.size(), 3u);
}

TEST(CompileTest, AliasesAndLpClosure) {
  CompiledGrammar c = Compile(MustParse(R"(
    %FORMALISM IDLP
    %LP
    Det < AdjP. AdjP < N.
    %ALIAS
    NPnom = NP[kas=nom].
    %RULES
    S -> NPnom[num=sg], VP.
    NPnom -> Det, N.
  )"));
  EXPECT_EQ(c.rules[0].items[0].symbol, "NP");
  EXPECT_EQ(RenderRaw(Resolve(c.rules[0].items[0].features, {})), "[kas=nom, num=sg]");
  EXPECT_EQ(c.rules[1].lhs.symbol, "NP");
  EXPECT_TRUE(c.precedes.contains({"Det", "N"}));
  EXPECT_FALSE(c.precedes.contains({"N", "Det"}));
}

TEST(CompileTest, FingerprintTracksContent) {
  CompiledGrammar a = Compile(MustParse("S -> NP, VP."));
  CompiledGrammar b = Compile(MustParse("// comment\nS   ->  NP,VP ."));
  CompiledGrammar c = Compile(MustParse("S -> VP, NP."));
  EXPECT_EQ(a.fingerprint, b.fingerprint);
  EXPECT_NE(a.fingerprint, c.fingerprint);
}

}  // namespace
}  // namespace gramwb
