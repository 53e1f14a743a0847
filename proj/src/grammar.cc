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

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "gramwb/lexer.h"
#include "gramwb/value_syntax.h"

namespace gramwb {
namespace {

enum class Section { kRules, kLp, kAlias };

class GrammarParser {
 public:
  GrammarParser(std::string_view text, std::string file, Formalism formalism)
      : cursor_(Tokenize(text)), file_(std::move(file)) {
    grammar_.file = file_;
    grammar_.formalism = formalism;
  }

  GrammarParse Run() {
    Section section = Section::kRules;
    while (!cursor_.at_end()) {
      const Token& t = cursor_.peek();
      if (t.kind == TokenKind::kDirective) {
        Token d = cursor_.next();
        if (d.text == "FORMALISM") {
          const Token& f = cursor_.next();
          std::optional<Formalism> parsed = ParseFormalism(f.text);
          if (!parsed) {
            Error(f, "unknown-formalism", "unknown formalism '" + f.text +
                                              "' (expected DCG, IDLP, GPSG or LFG)");
          } else {
            grammar_.formalism = *parsed;
          }
        } else if (d.text == "START") {
          const Token& s = cursor_.next();
          if (s.kind != TokenKind::kUpperIdent) {
            Error(s, "lowercase-category", "start symbol must start uppercase");
          } else {
            grammar_.start_symbol = s.text;
          }
        } else if (d.text == "RULES") {
          section = Section::kRules;
        } else if (d.text == "LP") {
          section = Section::kLp;
        } else if (d.text == "ALIAS") {
          section = Section::kAlias;
        } else {
          Error(d, "unknown-directive", "unknown directive '%" + d.text + "'");
          Recover();
        }
        continue;
      }
      bool ok = false;
      switch (section) {
        case Section::kRules:
          ok = ParseRule();
          break;
        case Section::kLp:
          ok = ParseLp();
          break;
        case Section::kAlias:
          ok = ParseAlias();
          break;
      }
      if (!ok) Recover();
    }
    Validate();
    GrammarParse out;
    out.diagnostics = std::move(diagnostics_);
    if (!HasErrors(out.diagnostics)) out.grammar = std::move(grammar_);
    return out;
  }

 private:
  ValueSyntaxContext Context(Binding* inline_env, std::vector<std::string>* vars) {
    return ValueSyntaxContext{file_, inline_env, &diagnostics_, vars};
  }

  void Error(const Token& at, std::string kind, std::string message) {
    diagnostics_.push_back(Diagnostic{Severity::kError, std::move(kind), std::move(message),
                                      SourceLocation{file_, at.line, at.column}});
  }

  // Skips to just after the next '.', or to the next directive.
  void Recover() {
    while (!cursor_.at_end()) {
      if (cursor_.peek().kind == TokenKind::kDirective) return;
      if (cursor_.next().is(".")) return;
    }
  }

  bool Expect(std::string_view punct, std::string_view what) {
    if (cursor_.accept(punct)) return true;
    const Token& t = cursor_.peek();
    std::string found = t.kind == TokenKind::kEnd ? "end of input" : "'" + t.text + "'";
    if (t.is("]") || t.is(")") || (punct == ")" || punct == "]")) {
      Error(t, "unbalanced-brackets",
            "unbalanced brackets: expected '" + std::string(punct) + "' but found " + found);
    } else {
      Error(t, "syntax", "expected " + std::string(what) + " but found " + found);
    }
    return false;
  }

  bool CheckSymbol(const Token& t) {
    if (t.kind == TokenKind::kUpperIdent) return true;
    if (t.kind == TokenKind::kLowerIdent) {
      Error(t, "lowercase-category", "category must start uppercase: '" + t.text + "'");
    } else if (t.is("]") || t.is(")")) {
      Error(t, "unbalanced-brackets", "unbalanced brackets: unexpected '" + t.text + "'");
    } else if (t.kind == TokenKind::kBad) {
      Error(t, "bad-token", t.text);
    } else {
      Error(t, "syntax", "expected a category but found " +
                             (t.kind == TokenKind::kEnd ? std::string("end of input")
                                                        : "'" + t.text + "'"));
    }
    return false;
  }

  std::optional<CategorySpec> ParseCategory(Binding& inline_env,
                                            std::vector<std::string>& vars) {
    const Token& t = cursor_.peek();
    if (!CheckSymbol(t)) return std::nullopt;
    CategorySpec c;
    c.symbol = cursor_.next().text;
    if (cursor_.accept("[")) {
      std::optional<Value> v = ParseBracketBody(cursor_, Context(&inline_env, &vars));
      if (!v) return std::nullopt;
      c.features = std::move(*v);
    }
    return c;
  }

  std::optional<FPath> ParsePath() {
    FPath p;
    auto root = [&](const Token& t) -> bool {
      if (t.is("^")) {
        p.root = FPath::Root::kUp;
      } else if (t.is("!")) {
        p.root = FPath::Root::kDown;
      } else {
        Error(t, "syntax", "expected '^' or '!' in annotation");
        return false;
      }
      return true;
    };
    if (cursor_.accept("(")) {
      if (!root(cursor_.next())) return std::nullopt;
      while (cursor_.peek().kind == TokenKind::kLowerIdent) {
        p.attributes.push_back(cursor_.next().text);
      }
      if (p.attributes.empty()) {
        Error(cursor_.peek(), "syntax", "annotation path needs at least one attribute");
        return std::nullopt;
      }
      if (!Expect(")", "')'")) return std::nullopt;
      return p;
    }
    if (!root(cursor_.next())) return std::nullopt;
    return p;
  }

  bool StartsEquation(std::size_t ahead) const {
    const Token& t = cursor_.peek(ahead);
    if (t.is("^") || t.is("!")) return true;
    return t.is("(") && (cursor_.peek(ahead + 1).is("^") || cursor_.peek(ahead + 1).is("!"));
  }

  std::optional<FEquation> ParseFEquation(Binding& inline_env,
                                          std::vector<std::string>& vars) {
    std::optional<FPath> lhs = ParsePath();
    if (!lhs || !Expect("=", "'='")) return std::nullopt;
    FEquation eq{*lhs, Value()};
    if (StartsEquation(0)) {
      std::optional<FPath> rhs = ParsePath();
      if (!rhs) return std::nullopt;
      eq.rhs = *rhs;
    } else {
      std::optional<Value> v = ParseValue(cursor_, Context(&inline_env, &vars));
      if (!v) return std::nullopt;
      eq.rhs = std::move(*v);
    }
    return eq;
  }

  std::optional<RhsItem> ParseRhsItem(Binding& inline_env, std::vector<std::string>& vars,
                                      int& optionals) {
    RhsItem item;
    const Token& t = cursor_.peek();
    if (t.kind == TokenKind::kQuoted) {
      item.kind = RhsItem::Kind::kTerminal;
      item.symbol = cursor_.next().text;
    } else if (t.kind == TokenKind::kUpperIdent && t.text == kEmptyWord) {
      item.kind = RhsItem::Kind::kEmpty;
      item.symbol = std::string(kEmptyWord);
      cursor_.next();
      if (cursor_.peek().is("[")) {
        Error(cursor_.peek(), "empty-with-features", "EPSILON carries no features");
        return std::nullopt;
      }
    } else if (t.is("(")) {
      Token open = cursor_.next();
      if (cursor_.peek().kind == TokenKind::kQuoted ||
          (cursor_.peek().kind == TokenKind::kUpperIdent &&
           cursor_.peek().text == kEmptyWord)) {
        Error(open, "optional-non-category", "only categories can be optional");
        return std::nullopt;
      }
      std::optional<CategorySpec> c = ParseCategory(inline_env, vars);
      if (!c || !Expect(")", "')'")) return std::nullopt;
      item.symbol = std::move(c->symbol);
      item.features = std::move(c->features);
      item.optional = true;
      ++optionals;
    } else {
      std::optional<CategorySpec> c = ParseCategory(inline_env, vars);
      if (!c) return std::nullopt;
      item.symbol = std::move(c->symbol);
      item.features = std::move(c->features);
    }
    if (cursor_.accept(":")) {
      while (true) {
        std::optional<FEquation> eq = ParseFEquation(inline_env, vars);
        if (!eq) return std::nullopt;
        item.annotations.push_back(std::move(*eq));
        if (cursor_.peek().is(",") && StartsEquation(1)) {
          cursor_.next();
          continue;
        }
        break;
      }
    }
    return item;
  }

  bool ParseRule() {
    GrammarRule rule;
    const Token& first = cursor_.peek();
    rule.location = SourceLocation{file_, first.line, first.column};
    if (first.is("(") && cursor_.peek(2).is(")") &&
        (cursor_.peek(1).kind == TokenKind::kLowerIdent ||
         cursor_.peek(1).kind == TokenKind::kUpperIdent)) {
      cursor_.next();
      rule.label = cursor_.next().text;
      cursor_.next();
    }
    Binding inline_env;
    std::vector<std::string> vars;
    std::optional<CategorySpec> lhs = ParseCategory(inline_env, vars);
    if (!lhs) return false;
    rule.lhs = std::move(*lhs);
    if (!Expect("->", "'->'")) return false;
    int optionals = 0;
    const Token rhs_start = cursor_.peek();
    while (true) {
      std::optional<RhsItem> item = ParseRhsItem(inline_env, vars, optionals);
      if (!item) return false;
      rule.rhs.push_back(std::move(*item));
      if (!cursor_.accept(",")) break;
    }
    if (optionals > kMaxOptionals) {
      Error(rhs_start, "too-many-optionals",
            "rule has " + std::to_string(optionals) + " optional constituents; at most " +
                std::to_string(kMaxOptionals) + " are supported");
      return false;
    }
    std::unordered_set<std::string> rule_vars(vars.begin(), vars.end());
    if (cursor_.accept("|")) {
      while (true) {
        const Token& v = cursor_.peek();
        if (v.kind != TokenKind::kUpperIdent) {
          Error(v, "syntax", "expected a variable after '|'");
          return false;
        }
        Token var = cursor_.next();
        if (!rule_vars.contains(var.text)) {
          Error(var, "unknown-variable",
                "equation references variable " + var.text + " which does not occur in the rule");
          return false;
        }
        if (!Expect("=", "'='")) return false;
        std::vector<std::string> eq_vars;
        std::optional<Value> value = ParseValue(cursor_, Context(&inline_env, &eq_vars));
        if (!value) return false;
        rule.equations.push_back(Equation{var.text, std::move(*value)});
        if (!cursor_.accept(",")) break;
      }
    }
    if (!Expect(".", "'.' at the end of the rule")) return false;
    for (const auto& [var, value] : inline_env.cells()) {
      rule.equations.push_back(Equation{var, value});
    }
    grammar_.rules.push_back(std::move(rule));
    return true;
  }

  bool ParseLp() {
    while (true) {
      const Token& l = cursor_.peek();
      if (!CheckSymbol(l)) return false;
      Token left = cursor_.next();
      if (!Expect("<", "'<'")) return false;
      const Token& r = cursor_.peek();
      if (!CheckSymbol(r)) return false;
      Token right = cursor_.next();
      if (left.text == right.text) {
        Error(left, "lp-self", "LP constraint relates '" + left.text + "' to itself");
        return false;
      }
      grammar_.lp.push_back(
          LPConstraint{left.text, right.text, SourceLocation{file_, left.line, left.column}});
      if (!cursor_.accept(",")) break;
    }
    return Expect(".", "'.' after LP constraint");
  }

  bool ParseAlias() {
    const Token& n = cursor_.peek();
    if (!CheckSymbol(n)) return false;
    Token name = cursor_.next();
    if (!Expect("=", "'='")) return false;
    Binding inline_env;
    std::vector<std::string> vars;
    std::optional<CategorySpec> c = ParseCategory(inline_env, vars);
    if (!c) return false;
    if (!inline_env.empty()) {
      Error(name, "syntax", "inline variable bindings are not allowed in alias definitions");
      return false;
    }
    if (!Expect(".", "'.' after alias definition")) return false;
    if (grammar_.find_alias(name.text) != nullptr) {
      Error(name, "duplicate-alias", "alias '" + name.text + "' is defined twice");
      return false;
    }
    grammar_.aliases.push_back(
        AliasDef{name.text, std::move(*c), SourceLocation{file_, name.line, name.column}});
    return true;
  }

  void Validate() {
    for (auto& rule : grammar_.rules) {
      rule.formalism = grammar_.formalism;
      if (grammar_.formalism == Formalism::kLfg) continue;
      for (const auto& item : rule.rhs) {
        if (!item.annotations.empty()) {
          diagnostics_.push_back(Diagnostic{
              Severity::kError, "annotation-outside-lfg",
              "functional annotations are only allowed in %FORMALISM LFG grammars",
              rule.location});
          break;
        }
      }
    }
  }

  TokenCursor cursor_;
  std::string file_;
  Grammar grammar_;
  std::vector<Diagnostic> diagnostics_;
};

std::string FormatPath(const FPath& p) {
  const char* root = p.root == FPath::Root::kUp ? "^" : "!";
  if (p.attributes.empty()) return root;
  std::string out = std::string("(") + root;
  for (const auto& a : p.attributes) out += " " + a;
  return out + ")";
}

std::string FormatFeatures(const Value& v) {
  if (v.is_var()) return "[" + v.name() + "]";
  if (v.is_fs() && v.fs().empty()) return "";
  return RenderRaw(v);
}

std::string FormatItem(const RhsItem& item) {
  std::string out;
  switch (item.kind) {
    case RhsItem::Kind::kTerminal:
      out = RenderRaw(Value::Atom(item.symbol));
      if (out.front() != '\'') out = "'" + out + "'";
      break;
    case RhsItem::Kind::kEmpty:
      out = std::string(kEmptyWord);
      break;
    case RhsItem::Kind::kCategory:
      out = item.symbol + FormatFeatures(item.features);
      if (item.optional) out = "(" + out + ")";
      break;
  }
  for (std::size_t i = 0; i < item.annotations.size(); ++i) {
    out += (i == 0 ? " : " : ", ") + FormatFEquation(item.annotations[i]);
  }
  return out;
}

// Renames alias-local variables so that several alias uses in one rule
// never share variables by accident.
Value FreshAliasVars(const Value& v, std::size_t& counter) {
  const std::string prefix = "Alias" + std::to_string(counter++) + "_";
  return RenameVars(v, [&](const std::string& n) { return prefix + n; });
}

}  // namespace

std::string_view FormalismName(Formalism f) {
  switch (f) {
    case Formalism::kDcg:
      return "DCG";
    case Formalism::kIdlp:
      return "IDLP";
    case Formalism::kGpsg:
      return "GPSG";
    case Formalism::kLfg:
      return "LFG";
  }
  return "DCG";
}

std::optional<Formalism> ParseFormalism(std::string_view name) {
  std::string up(name);
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) {
    return static_cast<char>(std::toupper(c));
  });
  if (up == "DCG") return Formalism::kDcg;
  if (up == "IDLP" || up == "ID/LP") return Formalism::kIdlp;
  if (up == "GPSG") return Formalism::kGpsg;
  if (up == "LFG") return Formalism::kLfg;
  return std::nullopt;
}

std::string FormatFEquation(const FEquation& eq) {
  std::string out = FormatPath(eq.lhs) + "=";
  if (const auto* p = std::get_if<FPath>(&eq.rhs)) return out + FormatPath(*p);
  return out + RenderRaw(std::get<Value>(eq.rhs));
}

std::optional<FEquation> ParseFEquationText(std::string_view text) {
  GrammarParse p = ParseGrammar("%FORMALISM LFG\nX -> Y : " + std::string(text) + ".");
  if (!p.grammar || p.grammar->rules.size() != 1) return std::nullopt;
  const GrammarRule& r = p.grammar->rules[0];
  if (r.rhs.size() != 1 || r.rhs[0].annotations.size() != 1 || !r.equations.empty()) {
    return std::nullopt;
  }
  return r.rhs[0].annotations[0];
}

const AliasDef* Grammar::find_alias(std::string_view name) const {
  for (const auto& a : aliases) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

std::vector<std::string> Grammar::symbols() const {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  auto add = [&](const std::string& s) {
    if (seen.insert(s).second) out.push_back(s);
  };
  for (const auto& r : rules) {
    add(r.lhs.symbol);
    for (const auto& item : r.rhs) {
      if (item.kind == RhsItem::Kind::kCategory) add(item.symbol);
    }
  }
  for (const auto& c : lp) {
    add(c.left);
    add(c.right);
  }
  for (const auto& a : aliases) add(a.expansion.symbol);
  return out;
}

GrammarParse ParseGrammar(std::string_view text, std::string_view file,
                          Formalism default_formalism) {
  return GrammarParser(text, std::string(file), default_formalism).Run();
}

GrammarParse LoadGrammarFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    GrammarParse out;
    out.diagnostics.push_back(
        Diagnostic{Severity::kError, "io", "cannot read grammar file", {path, 0, 0}});
    return out;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseGrammar(ss.str(), path);
}

CategorySpec ResolveAlias(std::string_view name, const std::vector<AliasDef>& aliases) {
  auto find = [&](std::string_view n) -> const AliasDef* {
    for (const auto& a : aliases) {
      if (a.name == n) return &a;
    }
    return nullptr;
  };
  const AliasDef* current = find(name);
  if (current == nullptr) {
    throw Error("unknown-alias", "unknown alias '" + std::string(name) + "'");
  }
  std::unordered_set<std::string> visited{std::string(name)};
  Binding env;
  Value acc;
  std::size_t counter = 0;
  while (true) {
    UnifyOutcome u = Unify(acc, FreshAliasVars(current->expansion.features, counter), env);
    if (!u) {
      throw Error("alias-clash", "alias '" + std::string(name) + "' merges conflicting values at " +
                                     JoinPath(u.path));
    }
    acc = u.result;
    env = std::move(u.env);
    const std::string& next = current->expansion.symbol;
    const AliasDef* next_alias = find(next);
    if (next_alias == nullptr) {
      return CategorySpec{next, Resolve(acc, env)};
    }
    if (!visited.insert(next).second) {
      throw Error("alias-cycle", "alias '" + std::string(name) + "' expands cyclically");
    }
    current = next_alias;
  }
}

std::string ResolveSymbol(const std::string& symbol, const Grammar& g) {
  std::string current = symbol;
  std::unordered_set<std::string> visited;
  while (const AliasDef* a = g.find_alias(current)) {
    if (!visited.insert(current).second) return symbol;
    current = a->expansion.symbol;
  }
  return current;
}

std::map<std::string, IndexEntry> GrammarIndex(const Grammar& g) {
  std::map<std::string, IndexEntry> index;
  for (std::size_t i = 0; i < g.rules.size(); ++i) {
    const GrammarRule& r = g.rules[i];
    index[r.lhs.symbol].defined_by.push_back(i);
    for (const auto& item : r.rhs) {
      if (item.kind != RhsItem::Kind::kCategory) continue;
      auto& refs = index[item.symbol].referenced_by;
      if (refs.empty() || refs.back() != i) refs.push_back(i);
    }
  }
  for (const auto& c : g.lp) {
    index.try_emplace(c.left);
    index.try_emplace(c.right);
  }
  for (const auto& a : g.aliases) index.try_emplace(a.expansion.symbol);
  return index;
}

std::string FormatCategory(const CategorySpec& c) { return c.symbol + FormatFeatures(c.features); }

std::string FormatRule(const GrammarRule& r) {
  std::string out;
  if (!r.label.empty()) out += "(" + r.label + ") ";
  out += FormatCategory(r.lhs) + " -> ";
  for (std::size_t i = 0; i < r.rhs.size(); ++i) {
    if (i > 0) out += ", ";
    out += FormatItem(r.rhs[i]);
  }
  for (std::size_t i = 0; i < r.equations.size(); ++i) {
    out += (i == 0 ? " | " : ", ") + r.equations[i].variable + " = " +
           RenderRaw(r.equations[i].value);
  }
  return out + ".";
}

std::string FormatGrammar(const Grammar& g) {
  std::string out = "%FORMALISM " + std::string(FormalismName(g.formalism)) + "\n";
  if (g.start_symbol != "S") out += "%START " + g.start_symbol + "\n";
  if (!g.lp.empty()) {
    out += "%LP\n";
    for (const auto& c : g.lp) out += c.left + " < " + c.right + ".\n";
  }
  if (!g.aliases.empty()) {
    out += "%ALIAS\n";
    for (const auto& a : g.aliases) out += a.name + " = " + FormatCategory(a.expansion) + ".\n";
  }
  out += "%RULES\n";
  for (const auto& r : g.rules) out += FormatRule(r) + "\n";
  return out;
}

std::vector<const CompiledRule*> CompiledGrammar::rules_for(std::string_view lhs) const {
  std::vector<const CompiledRule*> out;
  for (const auto& r : rules) {
    if (r.lhs.symbol == lhs) out.push_back(&r);
  }
  return out;
}

CompiledGrammar Compile(const Grammar& g) {
  CompiledGrammar out;
  out.formalism = g.formalism;
  out.start_symbol = ResolveSymbol(g.start_symbol, g);
  std::size_t alias_counter = 0;

  // Replaces an alias symbol by its expansion, merging the written
  // features. Bindings produced by the merge become rule equations.
  auto resolve = [&](const std::string& symbol, const Value& written,
                     std::vector<Equation>& equations) -> CategorySpec {
    if (g.find_alias(symbol) == nullptr) return CategorySpec{symbol, written};
    CategorySpec spec = ResolveAlias(symbol, g.aliases);
    Binding env;
    UnifyOutcome u = Unify(FreshAliasVars(spec.features, alias_counter), written, env);
    if (!u) {
      throw Error("alias-clash", "features written on alias '" + symbol +
                                     "' conflict with its expansion at " + JoinPath(u.path));
    }
    for (const auto& [var, value] : u.env.cells()) equations.push_back(Equation{var, value});
    return CategorySpec{spec.symbol, u.result};
  };

  for (std::size_t ri = 0; ri < g.rules.size(); ++ri) {
    const GrammarRule& rule = g.rules[ri];
    std::vector<Equation> equations = rule.equations;
    CategorySpec lhs = resolve(rule.lhs.symbol, rule.lhs.features, equations);
    std::vector<RhsItem> items;
    std::vector<std::size_t> optional_positions;
    for (const auto& item : rule.rhs) {
      if (item.kind == RhsItem::Kind::kEmpty) continue;
      RhsItem copy = item;
      if (item.kind == RhsItem::Kind::kCategory) {
        CategorySpec c = resolve(item.symbol, item.features, equations);
        copy.symbol = std::move(c.symbol);
        copy.features = std::move(c.features);
      }
      if (copy.optional) optional_positions.push_back(items.size());
      items.push_back(std::move(copy));
    }
    const std::size_t k = optional_positions.size();
    std::vector<std::string> seen_variants;
    for (std::size_t mask = (std::size_t{1} << k); mask-- > 0;) {
      std::vector<RhsItem> variant;
      std::size_t opt = 0;
      std::string key;
      for (std::size_t i = 0; i < items.size(); ++i) {
        const bool is_opt = opt < k && optional_positions[opt] == i;
        if (is_opt) {
          const bool keep = (mask >> (k - 1 - opt)) & 1U;
          ++opt;
          if (!keep) continue;
        }
        RhsItem copy = items[i];
        copy.optional = false;
        key += FormatItem(copy) + ",";
        variant.push_back(std::move(copy));
      }
      if (std::find(seen_variants.begin(), seen_variants.end(), key) != seen_variants.end()) {
        continue;
      }
      seen_variants.push_back(key);
      CompiledRule cr;
      cr.id = out.rules.size();
      cr.source_rule = ri;
      cr.label = rule.label;
      cr.lhs = lhs;
      cr.items = std::move(variant);
      cr.equations = equations;
      out.rules.push_back(std::move(cr));
    }
  }

  std::set<std::string> nodes;
  for (const auto& c : g.lp) {
    const std::string l = ResolveSymbol(c.left, g);
    const std::string r = ResolveSymbol(c.right, g);
    out.precedes.emplace(l, r);
    nodes.insert(l);
    nodes.insert(r);
  }
  for (const auto& via : nodes) {
    for (const auto& from : nodes) {
      if (!out.precedes.contains({from, via})) continue;
      for (const auto& to : nodes) {
        if (out.precedes.contains({via, to})) out.precedes.emplace(from, to);
      }
    }
  }
  out.fingerprint = Fingerprint(out);
  return out;
}

std::string Fnv1aHex(std::string_view text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  static const char* kHex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = kHex[h & 0xF];
    h >>= 4;
  }
  return out;
}

std::string Fingerprint(const CompiledGrammar& g) {
  std::string text = std::string(FormalismName(g.formalism)) + "\n" + g.start_symbol + "\n";
  for (const auto& r : g.rules) {
    GrammarRule printable;
    printable.lhs = r.lhs;
    for (const auto& item : r.items) printable.rhs.push_back(item);
    printable.equations = r.equations;
    text += FormatRule(printable) + "\n";
  }
  for (const auto& [l, r] : g.precedes) text += l + "<" + r + "\n";
  return Fnv1aHex(text);
}

}  // namespace gramwb
