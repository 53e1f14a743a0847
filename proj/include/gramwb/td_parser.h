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

// Top-down depth-first parser for DCG and LFG grammars. Goals are solved
// in textual rule order, then lexicon entry order, with full backtracking.
// Each goal reports Prolog-style ports: ENTRY (EXIT | FAIL) (REDO (EXIT | FAIL))*.

#ifndef GRAMWB_TD_PARSER_H_
#define GRAMWB_TD_PARSER_H_

#include <chrono>
#include <condition_variable>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gramwb/checks.h"
#include "gramwb/featstruct.h"
#include "gramwb/grammar.h"
#include "gramwb/lexicon.h"
#include "gramwb/results.h"

namespace gramwb {

enum class Port { kEntry, kExit, kFail, kRedo };

std::string_view PortName(Port p);

struct TraceEvent {
  Port port = Port::kEntry;
  std::string label;
  std::string features;  // goal features rendered at the time of the event
  std::size_t depth = 0;
  std::size_t position = 0;         // start token of the goal
  std::optional<std::size_t> end;   // EXIT only
  std::size_t goal = 0;             // identifies one goal invocation
};

// "ENTRY NP[kas=nom] @0", indented by depth.
std::string FormatTraceEvent(const TraceEvent& e);
nlohmann::json TraceEventToJson(const TraceEvent& e);

// Which goals produce trace events. The default selects none.
struct TraceFilter {
  bool all = false;
  std::set<std::string> labels;

  static TraceFilter All() { return {true, {}}; }
  bool matches(std::string_view label) const { return all || labels.count(std::string(label)) > 0; }
};

enum class TraceMode { kRun, kStep };

// Channel between a running parse and its controller (CLI, service, UI).
// Run mode pauses at ENTRY of breakpoint categories; step mode pauses at
// every ENTRY that passes the filter. All members are thread-safe.
class TraceController {
 public:
  TraceController() = default;
  TraceController(TraceFilter filter, std::set<std::string> breakpoints,
                  TraceMode mode = TraceMode::kRun);

  void set_filter(TraceFilter filter);
  void set_breakpoints(std::set<std::string> breakpoints);
  TraceFilter filter() const;
  std::set<std::string> breakpoints() const;

  // Continues a paused parse in `mode`.
  void resume(TraceMode mode = TraceMode::kRun);
  // Ends the parse at its next event; readings found so far are kept.
  void abort();
  bool aborted() const;

  std::optional<TraceEvent> paused_at() const;
  // Waits until the parse pauses or finishes; true if paused.
  bool wait_for_pause(std::chrono::milliseconds timeout);
  bool finished() const;

  // Parser side. Returns false when the parse must stop.
  bool on_event(const TraceEvent& e, const std::function<void(const TraceEvent&)>& sink);
  void start();
  void finish();

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  TraceFilter filter_;
  std::set<std::string> breakpoints_;
  TraceMode mode_ = TraceMode::kRun;
  bool aborted_ = false;
  bool finished_ = false;
  bool resume_requested_ = false;
  std::optional<TraceEvent> paused_;
};

// Well-formed substring table: (category, start) -> derivations.
struct WfstSolution {
  std::size_t end = 0;
  std::size_t seq = 0;  // discovery order across the whole table

  Term features;
  ParseTree tree;
};

struct WfstEntry {
  bool complete = false;  // every derivation is recorded
  std::vector<WfstSolution> solutions;
};

using Wfst = std::map<std::pair<std::string, std::size_t>, WfstEntry>;

struct TdOptions {
  bool memo = true;
  // Used when no controller is given.
  TraceFilter filter;
  TraceController* controller = nullptr;
  std::function<void(const TraceEvent&)> on_event;
  bool record_trace = true;
};

struct TdParse {
  ParseResult result;
  Wfst wfst;
  std::vector<TraceEvent> trace;  // filtered events, in order
};

// Throws Error("left-recursion") when `checks` blocks top-down parsing,
// Error("formalism-mismatch") for ID/LP grammars and Error("empty-input").
// LFG readings carry their f-structure; readings whose equations clash are
// dropped with an "fstructure-clash" warning.
TdParse ParseTopDown(const CompiledGrammar& g, const CheckReport& checks,
                     const LexicalAnalysis& analysis, const TdOptions& options = {});

// ---------------------------------------------------------------------------
// F-structures

struct FStructureSolution {
  std::optional<Term> fstructure;
  // On a clash: the tree node whose equation failed and the feature path.
  std::vector<std::size_t> node_path;
  std::vector<std::string> feature_path;
  std::string message;

  bool ok() const { return fstructure.has_value(); }
};

// Collects the annotations top-down; a daughter without annotations is
// taken as ^=!. Lexical nodes contribute their features, and every `pred`
// value is a distinct instance, so two uses never unify.
FStructureSolution SolveFStructure(const ParseTree& tree);

}  // namespace gramwb

#endif  // GRAMWB_TD_PARSER_H_
