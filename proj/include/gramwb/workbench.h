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

// Sessions, configuration and background jobs shared by the command line
// tool, the JSON service and the Python module. Everything here is
// plumbing over the module operations; no parsing logic lives here.

#ifndef GRAMWB_WORKBENCH_H_
#define GRAMWB_WORKBENCH_H_

#include <chrono>
#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "gramwb/chart_parser.h"
#include "gramwb/checks.h"
#include "gramwb/diagnostics.h"
#include "gramwb/grammar.h"
#include "gramwb/lexicon.h"
#include "gramwb/results.h"
#include "gramwb/td_parser.h"
#include "gramwb/testsuite.h"

namespace gramwb {

enum class EngineKind { kChart, kTopDown };

std::string_view EngineName(EngineKind e);  // "chart" | "td"
std::optional<EngineKind> ParseEngine(std::string_view name);
// Chart: DCG, IDLP, GPSG. Top-down: DCG, LFG.
bool EngineSupports(EngineKind e, Formalism f);

// ---------------------------------------------------------------------------
// Configuration

inline constexpr std::string_view kConfigEnvVar = "GRAMWB_CONFIG";

// key=value lines, `#` comments:
//   store_dir = baselines
//   suite_dirs = data/demo/suite, more/suites
//   engine = chart
//   workers = 4
//   port = 8080
//   session_idle_minutes = 30
struct Config {
  std::string store_dir = "gramwb-baselines";
  std::vector<std::string> suite_dirs;
  EngineKind engine = EngineKind::kChart;
  std::size_t workers = 0;  // 0: hardware concurrency
  int port = 8080;
  std::chrono::minutes session_idle{30};
};

struct ConfigLoad {
  std::optional<Config> config;
  std::vector<Diagnostic> diagnostics;
};

ConfigLoad ParseConfig(std::string_view text, std::string_view file = "");
ConfigLoad LoadConfigFile(const std::string& path);
// The file named by GRAMWB_CONFIG, or defaults when it is unset.
ConfigLoad ConfigFromEnvironment();
// Creates the store directory; false with a diagnostic when impossible.
bool PrepareConfig(const Config& c, std::vector<Diagnostic>& diagnostics);

nlohmann::json ConfigToJson(const Config& c);

// ---------------------------------------------------------------------------
// Sessions

// Immutable once loaded; parses share it without locking.
struct LoadedGrammar {
  Grammar grammar;
  CompiledGrammar compiled;
  std::string source;  // file name or label
};

struct LoadReport {
  bool ok = false;
  std::vector<Diagnostic> diagnostics;
  std::optional<CheckReport> checks;  // grammar loads only
  std::string fingerprint;
};

struct ParseOptions {
  std::optional<EngineKind> engine;  // default: the session engine
  bool memo = true;                  // top-down only
  // Top-down tracing; ignored by the chart. Absent: the session filter.
  std::optional<TraceFilter> trace;
  TraceController* controller = nullptr;
  std::function<void(const TraceEvent&)> on_event;
  const std::atomic<bool>* cancel = nullptr;  // chart only
  std::size_t max_edges = ChartOptions{}.max_edges;
};

struct ParseOutcome {
  EngineKind engine = EngineKind::kChart;
  ParseResult result;
  LexicalAnalysis lexical;
  std::vector<TraceEvent> trace;
  // Set whenever the parse found no reading.
  std::optional<FailureReport> failure;
  std::shared_ptr<const Chart> chart;  // chart engine
  std::shared_ptr<const Wfst> wfst;    // top-down engine

  std::vector<Span> spans() const;
};

// One grammar developer's state. All members are thread-safe; parses run
// on a snapshot and never hold the session lock.
class Session {
 public:
  explicit Session(std::string id, EngineKind engine = EngineKind::kChart);

  const std::string& id() const { return id_; }

  LoadReport load_grammar(std::string_view text, std::string_view source = "");
  LoadReport load_grammar_file(const std::string& path);
  LoadReport load_lexicon(std::string_view text, std::string_view source = "");
  LoadReport load_lexicon_file(const std::string& path);
  LoadReport load_interface_rules(std::string_view text, std::string_view source = "");
  LoadReport load_interface_rules_file(const std::string& path);

  std::shared_ptr<const LoadedGrammar> grammar() const;
  BoundLexicon lexicon() const;
  std::string fingerprint() const;  // empty before a grammar is loaded

  // Throws Error("formalism-mismatch") when the loaded grammar's formalism
  // is not supported.
  void set_engine(EngineKind e);
  EngineKind engine() const;

  void set_trace(TraceFilter filter, std::set<std::string> breakpoints = {});
  TraceFilter trace_filter() const;
  std::set<std::string> breakpoints() const;

  // Checks with the interface rules' categories counted as defined.
  CheckReport check() const;
  std::map<std::string, IndexEntry> index() const;

  // Throws Error("no-grammar"), Error("no-lexicon") and the engines' errors.
  ParseOutcome parse(const std::string& sentence, const ParseOptions& options = {}) const;
  // Keeps `outcome` as the session's current result.
  std::shared_ptr<const ParseOutcome> parse_and_keep(const std::string& sentence,
                                                     const ParseOptions& options = {});
  std::shared_ptr<const ParseOutcome> last() const;

  // A thread-safe parser over the current snapshot, for suite sweeps.
  SentenceParser sentence_parser(std::optional<EngineKind> engine = std::nullopt) const;

  std::chrono::steady_clock::time_point last_used() const;
  void touch();

 private:
  struct Snapshot {
    std::shared_ptr<const LoadedGrammar> grammar;
    CheckReport checks;
    BoundLexicon lexicon;
    EngineKind engine;
    TraceFilter filter;
  };
  Snapshot snapshot() const;
  void recheck_locked();

  const std::string id_;
  mutable std::mutex mu_;
  std::shared_ptr<const LoadedGrammar> grammar_;
  CheckReport checks_;
  std::shared_ptr<const Lexicon> lexicon_;
  std::shared_ptr<const InterfaceRuleSet> rules_;
  EngineKind engine_;
  TraceFilter filter_;
  std::set<std::string> breakpoints_;
  std::shared_ptr<const ParseOutcome> last_;
  std::chrono::steady_clock::time_point last_used_;
};

class SessionManager {
 public:
  explicit SessionManager(Config config = {});

  const Config& config() const { return config_; }
  std::shared_ptr<Session> create();
  // Throws Error("session-not-found").
  std::shared_ptr<Session> get(const std::string& id);
  bool remove(const std::string& id);
  // Drops sessions idle for longer than the configured time.
  std::size_t expire(std::chrono::steady_clock::time_point now = std::chrono::steady_clock::now());
  std::size_t size() const;

 private:
  Config config_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
};

// ---------------------------------------------------------------------------
// Background jobs

// A parse on its own thread, steerable through its trace controller. Trace
// events are buffered so that several readers can follow them.
class ParseJob {
 public:
  static std::shared_ptr<ParseJob> Start(std::shared_ptr<Session> session, std::string sentence,
                                         ParseOptions options, TraceFilter filter,
                                         std::set<std::string> breakpoints,
                                         TraceMode mode = TraceMode::kRun);
  ~ParseJob();

  TraceController& controller() { return controller_; }
  bool done() const;
  // Events from index `from` on; waits up to `timeout` for new ones.
  std::vector<TraceEvent> events(std::size_t from, std::chrono::milliseconds timeout) const;
  std::size_t event_count() const;
  // Blocks until the parse ends.
  std::shared_ptr<const ParseOutcome> wait() const;
  std::shared_ptr<const ParseOutcome> outcome() const;  // null while running
  std::string error() const;                            // set if the parse threw

 private:
  ParseJob() = default;

  TraceController controller_;
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::vector<TraceEvent> events_;
  bool done_ = false;
  std::shared_ptr<const ParseOutcome> outcome_;
  std::string error_;
  std::thread thread_;
};

class SuiteJob {
 public:
  static std::shared_ptr<SuiteJob> Start(std::vector<SelectedCase> cases, SentenceParser parser,
                                         SuiteOptions options);
  ~SuiteJob();

  void cancel() { cancel_ = true; }
  bool done() const;
  // Rows finished since `from`, in completion order.
  std::vector<SuiteRow> progress(std::size_t from, std::chrono::milliseconds timeout) const;
  std::size_t total() const { return total_; }
  const SuiteRunTable& wait() const;

 private:
  SuiteJob() = default;

  std::atomic<bool> cancel_{false};
  std::size_t total_ = 0;
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::vector<SuiteRow> progress_;
  bool done_ = false;
  SuiteRunTable table_;
  std::thread thread_;
};

// ---------------------------------------------------------------------------
// Output shared by the command line and the service

enum class OutputFormat { kTree, kFeatures, kJson };

std::optional<OutputFormat> ParseOutputFormat(std::string_view name);

// Tree and feature formats list every reading (and f-structures), then
// warnings; a failed parse prints its fragments and shortest paths. The
// JSON format is ParseOutcomeToJson without the timestamp.
std::string RenderParse(const ParseOutcome& o, OutputFormat format);

nlohmann::json ParseOutcomeToJson(const ParseOutcome& o);
nlohmann::json CheckReportToJson(const CheckReport& r);
nlohmann::json FindingToJson(const Finding& f);
nlohmann::json LoadReportToJson(const LoadReport& r);
nlohmann::json GrammarIndexToJson(const Grammar& g);
std::string FormatGrammarIndex(const Grammar& g);

}  // namespace gramwb

#endif  // GRAMWB_WORKBENCH_H_
