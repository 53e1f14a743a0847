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

#include "gramwb/chart_parser.h"

#include <algorithm>
#include <map>

#include "derivation.h"

namespace gramwb {

using internal::DerivNode;
using internal::FreshNames;
using internal::RuleTemplate;

std::string_view EdgeOriginName(EdgeOrigin o) {
  switch (o) {
    case EdgeOrigin::kLexical: return "lexical";
    case EdgeOrigin::kWord: return "word";
    case EdgeOrigin::kRule: return "rule";
  }
  return "rule";
}

// Derivation state behind an edge. For active edges `tree` is the mother
// with the children consumed so far and `items` are the rule's item values.
struct Chart::State {
  DerivNode tree;
  std::vector<Value> items;
  Binding env;
};

Chart::Chart() = default;
Chart::~Chart() = default;
Chart::Chart(Chart&&) noexcept = default;
Chart& Chart::operator=(Chart&&) noexcept = default;

std::vector<const ChartEdge*> Chart::starting_at(std::size_t from) const {
  std::vector<const ChartEdge*> out;
  for (const auto& e : edges_) {
    if (e.from == from) out.push_back(&e);
  }
  return out;
}

std::vector<const ChartEdge*> Chart::labeled(std::string_view label) const {
  std::vector<const ChartEdge*> out;
  for (const auto& e : edges_) {
    if (e.label == label) out.push_back(&e);
  }
  return out;
}

ParseTree Chart::tree(std::size_t id) const {
  const State& s = *states_.at(id);
  return internal::ToParseTree(s.tree, s.env);
}

class ChartBuilder {
 public:
  ChartBuilder(const CompiledGrammar& g, Chart& chart, const ChartOptions& options)
      : g_(g), chart_(chart), options_(options), unordered_(IsUnordered(g.formalism)) {
    for (const auto& rule : g.rules) {
      templates_.push_back(internal::PrepareRule(rule));
      std::vector<std::size_t> canon(rule.items.size());
      for (std::size_t j = 0; j < rule.items.size(); ++j) {
        canon[j] = j;
        for (std::size_t k = 0; k < j; ++k) {
          if (SameItem(rule.items[k], rule.items[j])) {
            canon[j] = k;
            break;
          }
        }
      }
      canonical_.push_back(std::move(canon));
      for (std::size_t j = 0; j < rule.items.size(); ++j) {
        if (!unordered_ && j > 0) break;
        const RhsItem& item = rule.items[j];
        auto& index = item.kind == RhsItem::Kind::kTerminal ? by_terminal_ : by_category_;
        index[item.symbol].push_back({rule.id, j});
        if (item.kind == RhsItem::Kind::kTerminal) has_terminals_ = true;
      }
    }
    // Rebuild position indexes for edges already processed in a reused chart.
    for (const auto& e : chart_.edges_) {
      if (chart_.processed_[e.id]) Index(e);
    }
  }

  void Seed(const LexicalAnalysis& analysis) {
    const auto& tokens = analysis.tokens;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      for (const auto& item : analysis.items[i]) {
        auto state = std::make_shared<Chart::State>();
        state->tree.label = item.symbol;
        state->tree.features = internal::Rooted(item.features, state->env, names_);
        state->tree.word = tokens[i];
        state->tree.from = i;
        state->tree.to = i + 1;
        names_.rename_apart(state->tree, state->env);
        ChartEdge e;
        e.from = i;
        e.to = i + 1;
        e.label = item.symbol;
        e.origin = EdgeOrigin::kLexical;
        e.word = tokens[i];
        e.lexical_rule = item.rule;
        Insert(std::move(e), std::move(state));
      }
    }
    if (has_terminals_) {
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        auto state = std::make_shared<Chart::State>();
        state->tree.label = tokens[i];
        state->tree.word = tokens[i];
        state->tree.terminal = true;
        state->tree.features = internal::Rooted(Value(), state->env, names_);
        state->tree.from = i;
        state->tree.to = i + 1;
        ChartEdge e;
        e.from = i;
        e.to = i + 1;
        e.label = tokens[i];
        e.origin = EdgeOrigin::kWord;
        e.word = tokens[i];
        Insert(std::move(e), std::move(state));
      }
    }
    for (std::size_t pos = 0; pos <= tokens.size(); ++pos) {
      for (const auto& rule : g_.rules) {
        if (rule.items.empty() && templates_[rule.id].valid) {
          RuleTemplate t = internal::Instantiate(templates_[rule.id], names_);
          auto state = std::make_shared<Chart::State>();
          state->tree.label = rule.lhs.symbol;
          state->tree.features = t.lhs;
          state->tree.from = pos;
          state->tree.to = pos;
          state->env = std::move(t.env);
          Complete(rule, {}, {}, pos, std::move(state));
        }
      }
    }
  }

  static void ResetUnlessSame(Chart& chart, const std::vector<std::string>& tokens,
                              const std::string& fingerprint) {
    if (chart.tokens_ == tokens && chart.fingerprint_ == fingerprint) return;
    chart = Chart();
    chart.tokens_ = tokens;
    chart.fingerprint_ = fingerprint;
  }

  // Returns false when aborted.
  bool Run() {
    while (chart_.agenda_head_ < chart_.agenda_.size()) {
      if (options_.cancel && options_.cancel->load()) return false;
      if (chart_.truncated_) return true;
      std::size_t id = chart_.agenda_[chart_.agenda_head_++];
      chart_.processed_[id] = true;
      // Edges are copied before use: Insert may reallocate the edge vector.
      ChartEdge e = chart_.edges_[id];
      Index(e);
      if (e.passive) {
        StartRules(e);
        std::vector<std::size_t> actives = active_ending_[e.from];
        for (std::size_t a : actives) Extend(ChartEdge(chart_.edges_[a]), e);
      } else {
        std::vector<std::size_t> passives = passive_starting_[e.to];
        for (std::size_t p : passives) Extend(e, ChartEdge(chart_.edges_[p]));
      }
    }
    return true;
  }

 private:
  struct Start {
    std::size_t rule;
    std::size_t item;
  };

  static bool SameItem(const RhsItem& a, const RhsItem& b) {
    return a.kind == b.kind && a.symbol == b.symbol && RenderRaw(a.features) == RenderRaw(b.features);
  }

  void Index(const ChartEdge& e) {
    if (e.passive) {
      passive_starting_[e.from].push_back(e.id);
    } else {
      active_ending_[e.to].push_back(e.id);
    }
  }

  bool ItemMatches(const RhsItem& item, const ChartEdge& p) const {
    if (item.kind == RhsItem::Kind::kTerminal) return p.origin == EdgeOrigin::kWord && p.word == item.symbol;
    return p.origin != EdgeOrigin::kWord && p.label == item.symbol;
  }

  void StartRules(const ChartEdge& p) {
    const auto& index = p.origin == EdgeOrigin::kWord ? by_terminal_ : by_category_;
    auto it = index.find(p.origin == EdgeOrigin::kWord ? p.word : p.label);
    if (it == index.end()) return;
    for (const Start& s : it->second) {
      if (canonical_[s.rule][s.item] != s.item) continue;
      const CompiledRule& rule = g_.rules[s.rule];
      if (!templates_[s.rule].valid) continue;
      RuleTemplate t = internal::Instantiate(templates_[s.rule], names_);
      Chart::State state;
      state.tree.label = rule.lhs.symbol;
      state.tree.features = std::move(t.lhs);
      state.tree.from = p.from;
      state.tree.to = p.from;
      state.items = std::move(t.items);
      state.env = std::move(t.env);
      std::vector<std::size_t> needed(rule.items.size());
      for (std::size_t j = 0; j < needed.size(); ++j) needed[j] = j;
      Advance(rule, state, needed, {}, {}, p, s.item);
    }
  }

  void Extend(const ChartEdge& a, const ChartEdge& p) {
    if (a.to != p.from || !a.rule) return;
    const CompiledRule& rule = g_.rules[*a.rule];
    if (unordered_ && p.origin != EdgeOrigin::kWord) {
      for (std::size_t c : a.children) {
        const ChartEdge& done = chart_.edges_[c];
        if (done.origin == EdgeOrigin::kWord) continue;
        if (g_.precedes.count({p.label, done.label})) return;
      }
    }
    std::vector<std::size_t> tried;
    for (std::size_t j : a.needed) {
      if (!unordered_ && j != a.needed.front()) break;
      if (!ItemMatches(rule.items[j], p)) continue;
      std::size_t canon = canonical_[rule.id][j];
      if (std::find(tried.begin(), tried.end(), canon) != tried.end()) continue;
      tried.push_back(canon);
      Chart::State state = *chart_.states_[a.id];
      Advance(rule, state, a.needed, a.children, a.child_items, p, j);
    }
  }

  // Consumes passive `p` as item `j` of the partial state.
  void Advance(const CompiledRule& rule, Chart::State state, std::vector<std::size_t> needed,
               std::vector<std::size_t> children, std::vector<std::size_t> child_items,
               const ChartEdge& p, std::size_t j) {
    const Chart::State& ps = *chart_.states_[p.id];
    DerivNode child = ps.tree;
    Binding child_env = ps.env;
    names_.rename_apart(child, child_env);
    state.env.merge_disjoint(child_env);
    if (!UnifyInto(state.items[j], child.features, state.env)) return;
    child.annotations = rule.items[j].annotations;
    state.tree.children.push_back(std::move(child));
    state.tree.to = p.to;
    needed.erase(std::find(needed.begin(), needed.end(), j));
    children.push_back(p.id);
    child_items.push_back(j);
    auto next = std::make_shared<Chart::State>(std::move(state));
    if (needed.empty()) {
      next->items.clear();
      std::size_t from = next->tree.from;
      Complete(rule, std::move(children), std::move(child_items), from, std::move(next));
      return;
    }
    next->env = internal::CloseOver(next->tree, next->items, next->env);
    ChartEdge e;
    e.from = next->tree.from;
    e.to = next->tree.to;
    e.label = rule.lhs.symbol;
    e.passive = false;
    e.rule = rule.id;
    e.rule_label = rule.label;
    e.children = std::move(children);
    e.child_items = std::move(child_items);
    for (std::size_t k : needed) e.needed_symbols.push_back(rule.items[k].symbol);
    e.needed = std::move(needed);
    Insert(std::move(e), std::move(next));
  }

  void Complete(const CompiledRule& rule, std::vector<std::size_t> children,
                std::vector<std::size_t> child_items, std::size_t from,
                std::shared_ptr<Chart::State> state) {
    // A same-span chain that returns to its own label adds nothing new.
    if (internal::SameSpanLabelBelow(state->tree, state->tree.label)) return;
    state->env = internal::CloseOver(state->tree, {}, state->env);
    ChartEdge e;
    e.from = from;
    e.to = state->tree.to;
    e.label = rule.lhs.symbol;
    e.rule = rule.id;
    e.rule_label = rule.label;
    e.children = std::move(children);
    e.child_items = std::move(child_items);
    Insert(std::move(e), std::move(state));
  }

  void Insert(ChartEdge e, std::shared_ptr<Chart::State> state) {
    if (chart_.truncated_) return;
    std::string key = std::to_string(e.from) + "," + std::to_string(e.to) + "," + e.label + ",";
    if (e.passive) {
      key += "p" + std::string(EdgeOriginName(e.origin)) + "," + e.lexical_rule + "," +
             internal::TreeKey(state->tree, state->env);
    } else {
      key += "a" + std::to_string(*e.rule) + ",";
      for (std::size_t n : e.needed) key += std::to_string(n) + ".";
      key += ",";
      for (std::size_t c : e.children) key += std::to_string(c) + ".";
      key += "," + internal::TreeKey(state->tree, state->env, state->items);
    }
    if (!chart_.keys_.insert(std::move(key)).second) {
      ++chart_.duplicates_;
      return;
    }
    if (chart_.edges_.size() >= options_.max_edges) {
      chart_.truncated_ = true;
      return;
    }
    e.id = chart_.edges_.size();
    e.features = Close(Deref(state->tree.features, state->env), state->env);
    chart_.edges_.push_back(std::move(e));
    chart_.states_.push_back(std::move(state));
    chart_.processed_.push_back(false);
    chart_.agenda_.push_back(chart_.edges_.back().id);
    if (options_.on_edge) options_.on_edge(chart_.edges_.back());
  }

  const CompiledGrammar& g_;
  Chart& chart_;
  const ChartOptions& options_;
  bool unordered_;
  bool has_terminals_ = false;
  FreshNames names_;
  std::vector<RuleTemplate> templates_;
  std::vector<std::vector<std::size_t>> canonical_;
  std::map<std::string, std::vector<Start>, std::less<>> by_category_;
  std::map<std::string, std::vector<Start>, std::less<>> by_terminal_;
  std::map<std::size_t, std::vector<std::size_t>> passive_starting_;
  std::map<std::size_t, std::vector<std::size_t>> active_ending_;
};

namespace {

std::string JoinTokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

}  // namespace

ParseResult ParseChart(const CompiledGrammar& g, const LexicalAnalysis& analysis, Chart& chart,
                       const ChartOptions& options) {
  if (analysis.tokens.empty()) throw Error("empty-input", "cannot parse an empty token list");
  if (g.formalism == Formalism::kLfg) {
    throw Error("formalism-mismatch", "the chart parser does not accept LFG grammars");
  }
  ChartBuilder::ResetUnlessSame(chart, analysis.tokens, g.fingerprint);

  ParseResult result;
  result.tokens = analysis.tokens;
  result.sentence = JoinTokens(analysis.tokens);
  result.engine = "chart";
  result.fingerprint = g.fingerprint;
  result.timestamp = UtcTimestamp();
  result.diagnostics = analysis.diagnostics;
  for (std::size_t i : analysis.unknown_tokens()) {
    result.diagnostics.push_back({Severity::kWarning, "unknown-word",
                                  "no lexical category for \"" + analysis.tokens[i] + "\" (token " +
                                      std::to_string(i + 1) + ")",
                                  {}});
  }

  ChartBuilder builder(g, chart, options);
  builder.Seed(analysis);
  bool finished = builder.Run();
  if (!finished) {
    result.status = "aborted";
  } else if (chart.truncated()) {
    result.status = "edge-limit";
    result.diagnostics.push_back({Severity::kError, "edge-limit",
                                  "chart exceeded " + std::to_string(options.max_edges) + " edges",
                                  {}});
  }

  const std::size_t n = analysis.tokens.size();
  for (const auto& e : chart.edges()) {
    if (e.passive && e.origin == EdgeOrigin::kRule && e.from == 0 && e.to == n &&
        e.label == g.start_symbol) {
      result.readings.push_back({chart.tree(e.id), std::nullopt});
    }
  }
  return result;
}

bool ChartTraceFilter::matches(const ChartEdge& e) const {
  if (!labels.empty() && !labels.count(e.label)) return false;
  if (span && (e.from != span->first || e.to != span->second)) return false;
  return true;
}

std::vector<const ChartEdge*> ChartTrace(const Chart& chart, const ChartTraceFilter& filter) {
  std::vector<const ChartEdge*> out;
  for (const auto& e : chart.edges()) {
    if (filter.matches(e)) out.push_back(&e);
  }
  return out;
}

std::string FormatEdge(const ChartEdge& e, const Chart& chart) {
  std::string out = "#" + std::to_string(e.id) + " [" + std::to_string(e.from) + "," +
                    std::to_string(e.to) + "] " + e.label;
  if (e.origin != EdgeOrigin::kRule) {
    out += " \"" + e.word + "\"";
    if (e.origin == EdgeOrigin::kLexical) out += " " + Render(e.features);
    return out;
  }
  out += " ->";
  for (std::size_t c : e.children) out += " " + chart.edge(c).label;
  out += " .";
  for (const auto& s : e.needed_symbols) out += " " + s;
  if (!e.rule_label.empty()) out += " (" + e.rule_label + ")";
  if (e.passive) out += " " + Render(e.features);
  return out;
}

nlohmann::json EdgeToJson(const ChartEdge& e) {
  nlohmann::json j = {
      {"id", e.id},
      {"span", {e.from, e.to}},
      {"label", e.label},
      {"state", e.passive ? "passive" : "active"},
      {"origin", EdgeOriginName(e.origin)},
      {"features", Render(e.features)},
      {"children", e.children},
  };
  if (!e.word.empty()) j["word"] = e.word;
  if (!e.lexical_rule.empty()) j["lexical_rule"] = e.lexical_rule;
  if (e.rule) {
    j["rule"] = *e.rule;
    j["rule_label"] = e.rule_label;
  }
  if (!e.passive) j["needed"] = e.needed_symbols;
  return j;
}

nlohmann::json ChartToJson(const Chart& chart) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : chart.edges()) edges.push_back(EdgeToJson(e));
  return {{"tokens", chart.tokens()},
          {"fingerprint", chart.fingerprint()},
          {"truncated", chart.truncated()},
          {"edges", std::move(edges)}};
}

}  // namespace gramwb
