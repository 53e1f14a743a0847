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

// Full-form lexicon and the lexicon interface rules that map entries to
// grammar categories.
//
// Lexicon files hold one entry per line:
//
//   Hund : pos=noun, kasus=nom, numerus=sg, genus=mask
//
// Interface rule files hold rules of the form
//
//   noun: if_in_lex (pos=noun, !kasus)
//         then_in_gram (N[case = #kasus, number = #numerus, person = 3]).
//
// `!f` requires a value for f, `~f` forbids one, `#f` copies the entry's
// value of f.

#ifndef GRAMWB_LEXICON_H_
#define GRAMWB_LEXICON_H_

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gramwb/diagnostic.h"
#include "gramwb/featstruct.h"
#include "gramwb/grammar.h"

namespace gramwb {

struct LexEntry {
  std::string surface;
  std::map<std::string, std::string, std::less<>> features;  // always has "pos"
  std::string source;  // lexicon id
  int line = 0;

  const std::string* feature(std::string_view name) const;
  std::string to_string() const;  // "Hund : genus=mask, kasus=nom, ..."
};

class Lexicon {
 public:
  Lexicon() = default;
  Lexicon(std::string id, std::vector<LexEntry> entries);

  const std::string& id() const { return id_; }
  const std::vector<LexEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  // Exact, case-sensitive match in file order. Unknown words give [].
  std::vector<const LexEntry*> lookup(std::string_view word) const;

 private:
  std::string id_;
  std::vector<LexEntry> entries_;
  std::unordered_map<std::string, std::vector<std::size_t>> index_;
};

struct LexiconLoad {
  std::optional<Lexicon> lexicon;
  std::vector<Diagnostic> diagnostics;
};

LexiconLoad ParseLexicon(std::string_view text, std::string_view id = "");
LexiconLoad LoadLexiconFile(const std::string& path);

struct Criterion {
  enum class Kind { kEquals, kMustHave, kMustLack };
  Kind kind = Kind::kEquals;
  std::string feature;
  std::string value;  // kEquals only

  bool holds(const LexEntry& e) const;
};

struct SpecItem {
  std::string target;
  bool copy = false;  // `#name`
  std::string value;  // atom, or the copied feature name when copy is set
};

struct InterfaceRule {
  std::string name;
  std::vector<Criterion> test;
  std::string category;
  std::vector<SpecItem> spec;
  SourceLocation location;

  bool matches(const LexEntry& e) const;
};

std::string FormatInterfaceRule(const InterfaceRule& r);

struct InterfaceRuleSet {
  Formalism formalism = Formalism::kDcg;
  std::vector<InterfaceRule> rules;

  // Categories the rules can introduce; they count as defined symbols.
  std::set<std::string> preterminals() const;
};

struct InterfaceRuleLoad {
  std::optional<InterfaceRuleSet> rules;
  std::vector<Diagnostic> diagnostics;  // may hold warnings on success
};

InterfaceRuleLoad ParseInterfaceRules(std::string_view text, std::string_view file = "",
                                      Formalism formalism = Formalism::kDcg);
InterfaceRuleLoad LoadInterfaceRuleFile(const std::string& path,
                                        Formalism formalism = Formalism::kDcg);

// One category handed to a parser for one token.
struct LexicalItem {
  std::string symbol;
  Value features;
  const LexEntry* entry = nullptr;
  std::string rule;
};

struct LexicalEvaluation {
  std::vector<LexicalItem> categories;
  std::vector<Diagnostic> diagnostics;  // failed `#` copies
};

// Every rule whose test passes emits one category. A copy from a feature
// the entry lacks drops that category and yields a positioned error.
LexicalEvaluation ApplyInterfaceRules(const LexEntry& entry,
                                      const std::vector<InterfaceRule>& rules);

struct LexTraceEvent {
  std::size_t token = 0;
  std::string word;
  std::string entry;     // LexEntry::to_string(), empty for unknown words
  std::string rule;      // empty when no rule matched
  std::string category;  // formatted category, empty when none
};

struct LexicalAnalysis {
  std::vector<std::string> tokens;
  std::vector<std::vector<LexicalItem>> items;  // per token; empty if unknown
  std::vector<LexTraceEvent> trace;
  std::vector<Diagnostic> diagnostics;

  std::vector<std::size_t> unknown_tokens() const;
};

// The lexicon selected for a session together with its interface rules.
class BoundLexicon {
 public:
  BoundLexicon() = default;
  BoundLexicon(std::shared_ptr<const Lexicon> lexicon,
               std::shared_ptr<const InterfaceRuleSet> rules);

  const Lexicon& lexicon() const { return *lexicon_; }
  const InterfaceRuleSet& rules() const { return *rules_; }
  bool empty() const { return !lexicon_ || !rules_; }

  LexicalAnalysis analyze(const std::vector<std::string>& tokens) const;

 private:
  std::shared_ptr<const Lexicon> lexicon_;
  std::shared_ptr<const InterfaceRuleSet> rules_;
};

// Whitespace tokenization of an input sentence.
std::vector<std::string> SplitSentence(std::string_view sentence);

}  // namespace gramwb

#endif  // GRAMWB_LEXICON_H_
