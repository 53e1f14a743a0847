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

#include <algorithm>
#include <sstream>

#include "gramwb/lexer.h"
#include "gramwb/textio.h"

namespace gramwb {
namespace {

bool IsSpace(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::string_view Trim(std::string_view s) {
  while (!s.empty() && IsSpace(s.front())) s.remove_prefix(1);
  while (!s.empty() && IsSpace(s.back())) s.remove_suffix(1);
  return s;
}

std::string QuoteIfNeeded(const std::string& atom) {
  return IsPlainLowerIdent(atom) ? atom : RenderRaw(Value::Atom(atom));
}

// ---------------------------------------------------------------------------
// Interface rule parser

class RuleParser {
 public:
  RuleParser(std::string_view text, std::string file, Formalism formalism)
      : cursor_(Tokenize(text)), file_(std::move(file)) {
    set_.formalism = formalism;
  }

  InterfaceRuleLoad Run() {
    while (!cursor_.at_end()) {
      std::size_t errors_before = error_count();
      std::optional<InterfaceRule> rule = ParseRule();
      if (rule && error_count() == errors_before) {
        Validate(*rule);
        set_.rules.push_back(std::move(*rule));
      } else {
        Recover();
      }
    }
    InterfaceRuleLoad out;
    if (error_count() == 0) out.rules = std::move(set_);
    out.diagnostics = std::move(diagnostics_);
    return out;
  }

 private:
  std::size_t error_count() const {
    return static_cast<std::size_t>(std::count_if(
        diagnostics_.begin(), diagnostics_.end(),
        [](const Diagnostic& d) { return d.severity == Severity::kError; }));
  }

  void Report(const Token& at, std::string kind, std::string message,
              Severity severity = Severity::kError) {
    diagnostics_.push_back(Diagnostic{severity, std::move(kind), std::move(message),
                                      SourceLocation{file_, at.line, at.column}});
  }
  void Report(const SourceLocation& at, std::string kind, std::string message,
              Severity severity = Severity::kError) {
    diagnostics_.push_back(Diagnostic{severity, std::move(kind), std::move(message), at});
  }

  void Recover() {
    while (!cursor_.at_end()) {
      if (cursor_.next().is(".")) return;
    }
  }

  bool Expect(std::string_view punct, const char* what) {
    if (cursor_.accept(punct)) return true;
    const Token& t = cursor_.peek();
    Report(t, "syntax", std::string("expected ") + what + ", found '" + t.text + "'");
    return false;
  }

  bool ExpectKeyword(std::string_view word) {
    const Token& t = cursor_.peek();
    if (t.kind == TokenKind::kLowerIdent && t.text == word) {
      cursor_.next();
      return true;
    }
    Report(t, "syntax", "expected '" + std::string(word) + "', found '" + t.text + "'");
    return false;
  }

  std::optional<std::string> FeatureName() {
    const Token& t = cursor_.peek();
    if (t.kind == TokenKind::kLowerIdent) return cursor_.next().text;
    if (t.kind == TokenKind::kUpperIdent) {
      Report(t, "uppercase-feature", "feature names must be lowercase: '" + t.text + "'");
    } else {
      Report(t, "expected-feature", "expected a feature name, found '" + t.text + "'");
    }
    return std::nullopt;
  }

  std::optional<std::string> AtomValue() {
    const Token& t = cursor_.peek();
    if (t.kind == TokenKind::kLowerIdent || t.kind == TokenKind::kQuoted ||
        t.kind == TokenKind::kUpperIdent) {
      return cursor_.next().text;
    }
    Report(t, "expected-value", "expected a value, found '" + t.text + "'");
    return std::nullopt;
  }

  std::optional<InterfaceRule> ParseRule() {
    InterfaceRule rule;
    const Token& first = cursor_.peek();
    rule.location = SourceLocation{file_, first.line, first.column};
    if ((first.kind == TokenKind::kLowerIdent || first.kind == TokenKind::kUpperIdent) &&
        cursor_.peek(1).is(":")) {
      rule.name = cursor_.next().text;
      cursor_.next();
    }
    if (!ExpectKeyword("if_in_lex") || !Expect("(", "'('")) return std::nullopt;
    if (!cursor_.peek().is(")")) {
      do {
        std::optional<Criterion> c = ParseCriterion();
        if (!c) return std::nullopt;
        rule.test.push_back(std::move(*c));
      } while (cursor_.accept(","));
    }
    if (!Expect(")", "')'") || !ExpectKeyword("then_in_gram") || !Expect("(", "'('")) {
      return std::nullopt;
    }
    const Token& cat = cursor_.peek();
    if (cat.kind != TokenKind::kUpperIdent) {
      Report(cat, cat.kind == TokenKind::kLowerIdent ? "lowercase-category" : "syntax",
             "expected an uppercase category symbol, found '" + cat.text + "'");
      return std::nullopt;
    }
    rule.category = cursor_.next().text;
    if (cursor_.accept("[")) {
      if (!cursor_.peek().is("]")) {
        do {
          std::optional<SpecItem> s = ParseSpec();
          if (!s) return std::nullopt;
          rule.spec.push_back(std::move(*s));
        } while (cursor_.accept(","));
      }
      if (!Expect("]", "']'")) return std::nullopt;
    }
    if (!Expect(")", "')'") || !Expect(".", "'.'")) return std::nullopt;
    return rule;
  }

  std::optional<Criterion> ParseCriterion() {
    Criterion c;
    if (cursor_.accept("!")) {
      c.kind = Criterion::Kind::kMustHave;
    } else if (cursor_.accept("~")) {
      c.kind = Criterion::Kind::kMustLack;
    }
    std::optional<std::string> f = FeatureName();
    if (!f) return std::nullopt;
    c.feature = *f;
    if (c.kind == Criterion::Kind::kEquals) {
      if (!Expect("=", "'='")) return std::nullopt;
      std::optional<std::string> v = AtomValue();
      if (!v) return std::nullopt;
      c.value = *v;
    }
    return c;
  }

  std::optional<SpecItem> ParseSpec() {
    SpecItem s;
    std::optional<std::string> f = FeatureName();
    if (!f) return std::nullopt;
    s.target = *f;
    if (!Expect("=", "'='")) return std::nullopt;
    if (cursor_.accept("#")) {
      s.copy = true;
      std::optional<std::string> src = FeatureName();
      if (!src) return std::nullopt;
      s.value = *src;
    } else {
      std::optional<std::string> v = AtomValue();
      if (!v) return std::nullopt;
      s.value = *v;
    }
    return s;
  }

  void Validate(InterfaceRule& rule) {
    const std::size_t index = set_.rules.size() + 1;
    if (rule.name.empty()) rule.name = "rule" + std::to_string(index);
    if (!names_.insert(rule.name).second) {
      Report(rule.location, "duplicate-rule", "duplicate interface rule name '" + rule.name + "'");
    }
    std::set<std::string> guaranteed, forbidden;
    for (const auto& c : rule.test) {
      if (c.kind == Criterion::Kind::kMustLack) {
        forbidden.insert(c.feature);
      } else {
        guaranteed.insert(c.feature);
      }
    }
    for (const auto& f : forbidden) {
      if (guaranteed.count(f)) {
        Report(rule.location, "contradiction",
               "rule '" + rule.name + "' both requires and forbids feature '" + f + "'");
      }
    }
    std::set<std::string> targets;
    for (const auto& s : rule.spec) {
      if (!targets.insert(s.target).second) {
        Report(rule.location, "duplicate-feature",
               "rule '" + rule.name + "' specifies '" + s.target + "' twice");
      }
      if (!s.copy) continue;
      if (forbidden.count(s.value)) {
        Report(rule.location, "contradiction",
               "rule '" + rule.name + "' copies '#" + s.value + "' which its test forbids");
      } else if (!guaranteed.count(s.value)) {
        Report(rule.location, "unchecked-copy",
               "unchecked copy: rule '" + rule.name + "' copies '#" + s.value +
                   "' but its test does not guarantee that feature",
               Severity::kWarning);
      }
    }
  }

  TokenCursor cursor_;
  std::string file_;
  InterfaceRuleSet set_;
  std::set<std::string> names_;
  std::vector<Diagnostic> diagnostics_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Entries and lexicon

const std::string* LexEntry::feature(std::string_view name) const {
  auto it = features.find(name);
  return it == features.end() ? nullptr : &it->second;
}

std::string LexEntry::to_string() const {
  std::string out = surface + " :";
  bool first = true;
  for (const auto& [f, v] : features) {
    out += first ? " " : ", ";
    out += f + "=" + v;
    first = false;
  }
  return out;
}

Lexicon::Lexicon(std::string id, std::vector<LexEntry> entries)
    : id_(std::move(id)), entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) index_[entries_[i].surface].push_back(i);
}

std::vector<const LexEntry*> Lexicon::lookup(std::string_view word) const {
  std::vector<const LexEntry*> out;
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return out;
  for (std::size_t i : it->second) out.push_back(&entries_[i]);
  return out;
}

LexiconLoad ParseLexicon(std::string_view text, std::string_view id) {
  LexiconLoad out;
  std::vector<LexEntry> entries;
  const std::string file(id);
  auto report = [&](int line, int column, std::string kind, std::string message) {
    out.diagnostics.push_back(
        Diagnostic{Severity::kError, std::move(kind), std::move(message), {file, line, column}});
  };

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (std::size_t c = raw.find("//"); c != std::string_view::npos) raw = raw.substr(0, c);
    std::string_view line = Trim(raw);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const int column = static_cast<int>(line.data() - raw.data()) + 1;

    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) {
      report(line_no, column, "malformed-entry", "expected 'surface : features'");
      continue;
    }
    LexEntry e;
    e.surface = std::string(Trim(line.substr(0, colon)));
    e.source = file;
    e.line = line_no;
    if (e.surface.empty()) {
      report(line_no, column, "empty-surface", "entry has no surface form");
      continue;
    }
    if (std::any_of(e.surface.begin(), e.surface.end(), IsSpace)) {
      report(line_no, column, "malformed-entry", "surface form contains whitespace");
      continue;
    }
    bool ok = true;
    std::string_view rest = line.substr(colon + 1);
    while (ok) {
      std::size_t comma = rest.find(',');
      std::string_view pair = Trim(rest.substr(0, comma));
      std::size_t eq = pair.find('=');
      std::string name(Trim(pair.substr(0, eq)));
      std::string value(eq == std::string_view::npos ? "" : Trim(pair.substr(eq + 1)));
      if (pair.empty() || eq == std::string_view::npos || value.empty() ||
          !IsPlainLowerIdent(name) ||
          std::any_of(value.begin(), value.end(), IsSpace)) {
        report(line_no, column, "malformed-entry",
               "expected 'feature=value', found '" + std::string(pair) + "'");
        ok = false;
        break;
      }
      if (!e.features.emplace(name, value).second) {
        report(line_no, column, "duplicate-feature", "feature '" + name + "' given twice");
        ok = false;
        break;
      }
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (!ok) continue;
    if (!e.features.count("pos")) {
      report(line_no, column, "missing-pos", "entry '" + e.surface + "' has no 'pos' feature");
      continue;
    }
    entries.push_back(std::move(e));
    if (end == text.size()) break;
  }
  if (!HasErrors(out.diagnostics)) out.lexicon = Lexicon(file, std::move(entries));
  return out;
}

LexiconLoad LoadLexiconFile(const std::string& path) {
  std::optional<std::string> text = ReadTextFile(path);
  if (!text) {
    LexiconLoad out;
    out.diagnostics.push_back(
        Diagnostic{Severity::kError, "io", "cannot read lexicon file", {path, 0, 0}});
    return out;
  }
  return ParseLexicon(*text, path);
}

// ---------------------------------------------------------------------------
// Interface rules

bool Criterion::holds(const LexEntry& e) const {
  const std::string* v = e.feature(feature);
  switch (kind) {
    case Kind::kEquals:
      return v != nullptr && *v == value;
    case Kind::kMustHave:
      return v != nullptr;
    case Kind::kMustLack:
      return v == nullptr;
  }
  return false;
}

bool InterfaceRule::matches(const LexEntry& e) const {
  return std::all_of(test.begin(), test.end(), [&](const Criterion& c) { return c.holds(e); });
}

std::string FormatInterfaceRule(const InterfaceRule& r) {
  std::string out = r.name + ": if_in_lex (";
  for (std::size_t i = 0; i < r.test.size(); ++i) {
    const Criterion& c = r.test[i];
    if (i) out += ", ";
    switch (c.kind) {
      case Criterion::Kind::kEquals:
        out += c.feature + "=" + QuoteIfNeeded(c.value);
        break;
      case Criterion::Kind::kMustHave:
        out += "!" + c.feature;
        break;
      case Criterion::Kind::kMustLack:
        out += "~" + c.feature;
        break;
    }
  }
  out += ") then_in_gram (" + r.category;
  if (!r.spec.empty()) {
    out += "[";
    for (std::size_t i = 0; i < r.spec.size(); ++i) {
      if (i) out += ", ";
      out += r.spec[i].target + " = " +
             (r.spec[i].copy ? "#" + r.spec[i].value : QuoteIfNeeded(r.spec[i].value));
    }
    out += "]";
  }
  return out + ").";
}

std::set<std::string> InterfaceRuleSet::preterminals() const {
  std::set<std::string> out;
  for (const auto& r : rules) out.insert(r.category);
  return out;
}

InterfaceRuleLoad ParseInterfaceRules(std::string_view text, std::string_view file,
                                      Formalism formalism) {
  return RuleParser(text, std::string(file), formalism).Run();
}

InterfaceRuleLoad LoadInterfaceRuleFile(const std::string& path, Formalism formalism) {
  std::optional<std::string> text = ReadTextFile(path);
  if (!text) {
    InterfaceRuleLoad out;
    out.diagnostics.push_back(
        Diagnostic{Severity::kError, "io", "cannot read interface rule file", {path, 0, 0}});
    return out;
  }
  return ParseInterfaceRules(*text, path, formalism);
}

LexicalEvaluation ApplyInterfaceRules(const LexEntry& entry,
                                      const std::vector<InterfaceRule>& rules) {
  LexicalEvaluation out;
  for (const auto& rule : rules) {
    if (!rule.matches(entry)) continue;
    FeatureStructure fs;
    bool ok = true;
    for (const auto& s : rule.spec) {
      if (!s.copy) {
        fs.set(s.target, Value::Atom(s.value));
        continue;
      }
      const std::string* v = entry.feature(s.value);
      if (v == nullptr) {
        out.diagnostics.push_back(Diagnostic{
            Severity::kError, "missing-copy-source",
            "interface rule '" + rule.name + "' copies '#" + s.value + "' but entry '" +
                entry.surface + "' has no feature '" + s.value + "'",
            rule.location});
        ok = false;
        break;
      }
      fs.set(s.target, Value::Atom(*v));
    }
    if (!ok) continue;
    out.categories.push_back(LexicalItem{rule.category, Value::Fs(std::move(fs)), &entry, rule.name});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bound lexicon

BoundLexicon::BoundLexicon(std::shared_ptr<const Lexicon> lexicon,
                           std::shared_ptr<const InterfaceRuleSet> rules)
    : lexicon_(std::move(lexicon)), rules_(std::move(rules)) {}

std::vector<std::size_t> LexicalAnalysis::unknown_tokens() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].empty()) out.push_back(i);
  }
  return out;
}

LexicalAnalysis BoundLexicon::analyze(const std::vector<std::string>& tokens) const {
  LexicalAnalysis out;
  out.tokens = tokens;
  out.items.resize(tokens.size());
  std::set<std::pair<std::size_t, std::string>> seen;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::vector<const LexEntry*> entries;
    if (lexicon_) entries = lexicon_->lookup(tokens[i]);
    if (entries.empty()) {
      out.trace.push_back(LexTraceEvent{i, tokens[i], "", "", ""});
      continue;
    }
    for (const LexEntry* e : entries) {
      LexicalEvaluation ev =
          rules_ ? ApplyInterfaceRules(*e, rules_->rules) : LexicalEvaluation{};
      for (auto& d : ev.diagnostics) out.diagnostics.push_back(std::move(d));
      if (ev.categories.empty()) {
        out.trace.push_back(LexTraceEvent{i, tokens[i], e->to_string(), "", ""});
      }
      for (auto& item : ev.categories) {
        std::string category = FormatCategory(CategorySpec{item.symbol, item.features});
        out.trace.push_back(LexTraceEvent{i, tokens[i], e->to_string(), item.rule, category});
        // Entries differing only in features no rule passes on (genus, say)
        // yield the same category; parsers see it once.
        if (seen.insert({i, category}).second) out.items[i].push_back(std::move(item));
      }
    }
  }
  return out;
}

std::vector<std::string> SplitSentence(std::string_view sentence) {
  std::vector<std::string> out;
  std::istringstream in{std::string(sentence)};
  std::string word;
  while (in >> word) out.push_back(word);
  return out;
}

}  // namespace gramwb
