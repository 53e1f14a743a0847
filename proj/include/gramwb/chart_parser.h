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

// Bottom-up chart parser. ID rules are read with an unordered right-hand
// side; an active edge may consume any still-needed item that starts where
// it ends, provided no LP constraint puts the new child before one already
// consumed. DCG grammars run in ordered mode (items strictly left to right).

#ifndef GRAMWB_CHART_PARSER_H_
#define GRAMWB_CHART_PARSER_H_

#include <atomic>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gramwb/featstruct.h"
#include "gramwb/grammar.h"
#include "gramwb/lexicon.h"
#include "gramwb/results.h"

namespace gramwb {

enum class EdgeOrigin { kLexical, kWord, kRule };

std::string_view EdgeOriginName(EdgeOrigin o);

struct ChartEdge {
  std::size_t id = 0;  // equals the insertion index
  std::size_t from = 0;
  std::size_t to = 0;
  std::string label;  // category symbol, or the token for word edges
  bool passive = true;
  EdgeOrigin origin = EdgeOrigin::kRule;
  Term features;      // passive: the node; active: the mother so far
  std::string word;   // lexical and word edges
  std::string lexical_rule;  // interface rule of a lexical edge

  // Rule edges only.
  std::optional<std::size_t> rule;  // CompiledRule::id
  std::string rule_label;
  std::vector<std::size_t> children;     // child edge ids, left to right
  std::vector<std::size_t> child_items;  // rule item consumed by each child
  std::vector<std::size_t> needed;       // unconsumed rule items; empty iff passive
  std::vector<std::string> needed_symbols;
};

struct ChartOptions {
  std::size_t max_edges = 200000;
  // Called after each insertion, in insertion order.
  std::function<void(const ChartEdge&)> on_edge;
  // Polled between agenda steps; setting it aborts the parse.
  const std::atomic<bool>* cancel = nullptr;
};

class Chart {
 public:
  Chart();
  ~Chart();
  Chart(Chart&&) noexcept;
  Chart& operator=(Chart&&) noexcept;

  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& fingerprint() const { return fingerprint_; }
  // The insertion log: edges in id order.
  const std::vector<ChartEdge>& edges() const { return edges_; }
  const ChartEdge& edge(std::size_t id) const { return edges_.at(id); }

  std::vector<const ChartEdge*> starting_at(std::size_t from) const;
  std::vector<const ChartEdge*> labeled(std::string_view label) const;

  // Full derivation tree below a passive edge.
  ParseTree tree(std::size_t id) const;

  // Insertions that were dropped as duplicates, over the chart's lifetime.
  std::size_t duplicates_ignored() const { return duplicates_; }
  bool truncated() const { return truncated_; }

 private:
  friend class ChartBuilder;
  struct State;

  std::vector<std::string> tokens_;
  std::string fingerprint_;
  std::vector<ChartEdge> edges_;
  std::vector<std::shared_ptr<const State>> states_;
  std::unordered_set<std::string> keys_;
  std::vector<bool> processed_;
  std::vector<std::size_t> agenda_;  // pending ids, FIFO
  std::size_t agenda_head_ = 0;
  std::size_t duplicates_ = 0;
  bool truncated_ = false;
};

// Parses into `chart`. A chart holding the same tokens and grammar is
// extended in place, so reparsing adds nothing; otherwise it is reset.
// Throws Error("empty-input") or Error("formalism-mismatch") (LFG).
ParseResult ParseChart(const CompiledGrammar& g, const LexicalAnalysis& analysis, Chart& chart,
                       const ChartOptions& options = {});

struct ChartTraceFilter {
  std::set<std::string> labels;  // empty: every label
  std::optional<std::pair<std::size_t, std::size_t>> span;

  bool matches(const ChartEdge& e) const;
};

// Insertion events that pass `filter`, in insertion order.
std::vector<const ChartEdge*> ChartTrace(const Chart& chart, const ChartTraceFilter& filter = {});

// One line per edge, e.g. "#7 [0,2] NP -> Det N . (2)".
std::string FormatEdge(const ChartEdge& e, const Chart& chart);

nlohmann::json EdgeToJson(const ChartEdge& e);
nlohmann::json ChartToJson(const Chart& chart);

}  // namespace gramwb

#endif  // GRAMWB_CHART_PARSER_H_
