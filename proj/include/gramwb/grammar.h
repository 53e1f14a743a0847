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

// Grammar files in the workbench notation.
//
//   %FORMALISM IDLP
//   %START S
//   %LP
//   Det < AdjP.  AdjP < N.
//   %ALIAS
//   NPnom = NP[kas=nom].
//   %RULES
//   (1) S -> NP[X], VP[X] | X = [kas=nom].
//   (2) NP[kas=K] -> Det[kas=K, num=N], (AdjP[kas=K, num=N]), N[kas=K, num=N].
//
// Rules end with '.', `//` starts a comment. Optional constituents are
// parenthesized, terminals are single-quoted, EPSILON is the empty
// constituent. LFG rules attach `^`/`!` equations after a category with ':'.

#ifndef GRAMWB_GRAMMAR_H_
#define GRAMWB_GRAMMAR_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gramwb/diagnostic.h"
#include "gramwb/featstruct.h"

namespace gramwb {

enum class Formalism { kDcg, kIdlp, kGpsg, kLfg };

std::string_view FormalismName(Formalism f);
std::optional<Formalism> ParseFormalism(std::string_view name);

// Rules with unordered right-hand sides (ID/LP semantics).
inline bool IsUnordered(Formalism f) {
  return f == Formalism::kIdlp || f == Formalism::kGpsg;
}

inline constexpr std::string_view kEmptyWord = "EPSILON";
inline constexpr int kMaxOptionals = 6;

struct CategorySpec {
  std::string symbol;
  Value features;  // [] when the category is written without brackets
};

// (^ subj kas) or ! style path in an LFG annotation.
struct FPath {
  enum class Root { kUp, kDown };
  Root root = Root::kUp;
  std::vector<std::string> attributes;
};

struct FEquation {
  FPath lhs;
  std::variant<FPath, Value> rhs;
};

std::string FormatFEquation(const FEquation& eq);
// Parses one annotation as written after ':' in an LFG rule.
std::optional<FEquation> ParseFEquationText(std::string_view text);

struct RhsItem {
  enum class Kind { kCategory, kTerminal, kEmpty };
  Kind kind = Kind::kCategory;
  std::string symbol;  // category symbol or terminal text
  Value features;
  bool optional = false;
  std::vector<FEquation> annotations;
};

// `X = value` behind the '|' of a rule.
struct Equation {
  std::string variable;
  Value value;
};

struct GrammarRule {
  std::string label;  // "(1)" labels, without parentheses; may be empty
  CategorySpec lhs;
  std::vector<RhsItem> rhs;
  std::vector<Equation> equations;
  Formalism formalism = Formalism::kDcg;
  SourceLocation location;
};

struct LPConstraint {
  std::string left;
  std::string right;
  SourceLocation location;
};

struct AliasDef {
  std::string name;
  CategorySpec expansion;
  SourceLocation location;
};

class Grammar {
 public:
  Formalism formalism = Formalism::kDcg;
  std::string start_symbol = "S";
  std::string file;
  std::vector<GrammarRule> rules;
  std::vector<LPConstraint> lp;
  std::vector<AliasDef> aliases;

  const AliasDef* find_alias(std::string_view name) const;

  // Every category symbol in order of first appearance (rules, then LP,
  // then aliases). Terminals are not included.
  std::vector<std::string> symbols() const;
};

struct GrammarParse {
  std::optional<Grammar> grammar;  // empty when any error was reported
  std::vector<Diagnostic> diagnostics;
};

// Parses a grammar file. `default_formalism` applies when the text has no
// %FORMALISM header. Any error makes the whole load fail.
GrammarParse ParseGrammar(std::string_view text, std::string_view file = "",
                          Formalism default_formalism = Formalism::kDcg);
GrammarParse LoadGrammarFile(const std::string& path);

// Fully expands an alias: the expansion symbol is resolved recursively and
// feature structures are merged by unification. Throws Error with kind
// "unknown-alias", "alias-clash" or "alias-cycle".
CategorySpec ResolveAlias(std::string_view name, const std::vector<AliasDef>& aliases);

// Resolves `symbol` through alias names only (features ignored).
std::string ResolveSymbol(const std::string& symbol, const Grammar& g);

struct IndexEntry {
  std::vector<std::size_t> defined_by;     // rule indices with this LHS
  std::vector<std::size_t> referenced_by;  // rule indices using it on the RHS
};

// Category symbol -> defining and referencing rules. Every symbol occurring
// in a rule appears exactly once.
std::map<std::string, IndexEntry> GrammarIndex(const Grammar& g);

std::string FormatCategory(const CategorySpec& c);
std::string FormatRule(const GrammarRule& r);
// Prints a whole grammar in loadable form.
std::string FormatGrammar(const Grammar& g);

// ---------------------------------------------------------------------------
// Compiled form consumed by both parsing engines.

struct CompiledRule {
  std::size_t id = 0;           // index into CompiledGrammar::rules
  std::size_t source_rule = 0;  // index into Grammar::rules
  std::string label;
  CategorySpec lhs;
  std::vector<RhsItem> items;  // categories and terminals only
  std::vector<Equation> equations;
};

struct CompiledGrammar {
  Formalism formalism = Formalism::kDcg;
  std::string start_symbol = "S";
  std::vector<CompiledRule> rules;
  // Transitive closure of the LP relation over alias-resolved symbols.
  std::set<std::pair<std::string, std::string>> precedes;
  std::string fingerprint;

  std::vector<const CompiledRule*> rules_for(std::string_view lhs) const;
};

// Resolves aliases and expands optional constituents into rule variants
// (all-present variant first). EPSILON items are dropped. Throws Error if
// an alias cannot be resolved.
CompiledGrammar Compile(const Grammar& g);

// Hex FNV-1a 64 over the canonical text of the alias-resolved rules.
std::string Fingerprint(const CompiledGrammar& g);
std::string Fnv1aHex(std::string_view text);

}  // namespace gramwb

#endif  // GRAMWB_GRAMMAR_H_
