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

#include "gramwb/workbench.h"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>

#include "gramwb/textio.h"

namespace gramwb {
namespace {

using json = nlohmann::json;

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

template <typename T>
std::optional<T> ParseNumber(std::string_view s) {
  T value{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return value;
}

LoadReport Unreadable(const std::string& path) {
  LoadReport r;
  r.diagnostics.push_back({Severity::kError, "unreadable", "cannot read file", {path, 0, 0}});
  return r;
}

json LocationToJson(const SourceLocation& l) {
  return {{"file", l.file}, {"line", l.line}, {"column", l.column}};
}

}  // namespace

std::string_view EngineName(EngineKind e) { return e == EngineKind::kChart ? "chart" : "td"; }

std::optional<EngineKind> ParseEngine(std::string_view name) {
  if (name == "chart") return EngineKind::kChart;
  if (name == "td" || name == "topdown") return EngineKind::kTopDown;
  return std::nullopt;
}

bool EngineSupports(EngineKind e, Formalism f) {
  if (e == EngineKind::kChart) return f != Formalism::kLfg;
  return f == Formalism::kDcg || f == Formalism::kLfg;
}

// ---------------------------------------------------------------------------
// Configuration

ConfigLoad ParseConfig(std::string_view text, std::string_view file) {
  ConfigLoad out;
  Config c;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  auto report = [&](std::string kind, std::string message) {
    out.diagnostics.push_back(
        {Severity::kError, std::move(kind), std::move(message), {std::string(file), line_no, 1}});
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      report("syntax", "expected key = value");
      continue;
    }
    std::string key(Trim(line.substr(0, eq)));
    std::string_view value = Trim(line.substr(eq + 1));
    if (key == "store_dir") {
      c.store_dir = std::string(value);
    } else if (key == "suite_dirs") {
      c.suite_dirs.clear();
      std::size_t start = 0;
      while (start <= value.size()) {
        std::size_t comma = value.find(',', start);
        if (comma == std::string_view::npos) comma = value.size();
        std::string_view part = Trim(value.substr(start, comma - start));
        if (!part.empty()) c.suite_dirs.emplace_back(part);
        start = comma + 1;
      }
    } else if (key == "engine") {
      auto e = ParseEngine(value);
      if (!e) report("bad-value", "engine must be chart or td");
      else c.engine = *e;
    } else if (key == "workers") {
      auto n = ParseNumber<std::size_t>(value);
      if (!n) report("bad-value", "workers must be a non-negative integer");
      else c.workers = *n;
    } else if (key == "port") {
      auto n = ParseNumber<int>(value);
      if (!n || *n < 0 || *n > 65535) report("bad-value", "port must be in 0..65535");
      else c.port = *n;
    } else if (key == "session_idle_minutes") {
      auto n = ParseNumber<int>(value);
      if (!n || *n <= 0) report("bad-value", "session_idle_minutes must be positive");
      else c.session_idle = std::chrono::minutes(*n);
    } else {
      report("unknown-key", "unknown configuration key '" + key + "'");
    }
  }
  if (!HasErrors(out.diagnostics)) out.config = std::move(c);
  return out;
}

ConfigLoad LoadConfigFile(const std::string& path) {
  std::optional<std::string> text = ReadTextFile(path);
  if (!text) {
    ConfigLoad out;
    out.diagnostics.push_back({Severity::kError, "unreadable", "cannot read config", {path, 0, 0}});
    return out;
  }
  return ParseConfig(*text, path);
}

ConfigLoad ConfigFromEnvironment() {
  const char* path = std::getenv(std::string(kConfigEnvVar).c_str());
  if (!path || !*path) return {Config{}, {}};
  return LoadConfigFile(path);
}

bool PrepareConfig(const Config& c, std::vector<Diagnostic>& diagnostics) {
  std::error_code ec;
  std::filesystem::create_directories(c.store_dir, ec);
  if (ec || !std::filesystem::is_directory(c.store_dir)) {
    diagnostics.push_back({Severity::kError, "store-dir", "cannot create store directory: " + ec.message(),
                           {c.store_dir, 0, 0}});
    return false;
  }
  return true;
}

json ConfigToJson(const Config& c) {
  return {{"store_dir", c.store_dir},
          {"suite_dirs", c.suite_dirs},
          {"engine", EngineName(c.engine)},
          {"workers", c.workers},
          {"port", c.port},
          {"session_idle_minutes", c.session_idle.count()}};
}

// ---------------------------------------------------------------------------
// Session

std::vector<Span> ParseOutcome::spans() const {
  if (chart) return PassiveSpans(*chart);
  if (wfst) return PassiveSpans(*wfst);
  return {};
}

Session::Session(std::string id, EngineKind engine)
    : id_(std::move(id)), engine_(engine), last_used_(std::chrono::steady_clock::now()) {}

LoadReport Session::load_grammar(std::string_view text, std::string_view source) {
  LoadReport r;
  GrammarParse p = ParseGrammar(text, source, Formalism::kDcg);
  r.diagnostics = std::move(p.diagnostics);
  if (!p.grammar) return r;
  auto loaded = std::make_shared<LoadedGrammar>();
  loaded->grammar = std::move(*p.grammar);
  loaded->source = std::string(source);
  try {
    loaded->compiled = Compile(loaded->grammar);
  } catch (const Error& e) {
    // Alias cycles and clashes: still report the findings that explain them.
    r.diagnostics.push_back({Severity::kError, e.kind(), e.what(), {std::string(source), 0, 0}});
    r.checks = RunChecks(loaded->grammar);
    return r;
  }
  std::lock_guard<std::mutex> lock(mu_);
  grammar_ = std::move(loaded);
  recheck_locked();
  if (!EngineSupports(engine_, grammar_->grammar.formalism)) {
    EngineKind other = engine_ == EngineKind::kChart ? EngineKind::kTopDown : EngineKind::kChart;
    r.diagnostics.push_back({Severity::kWarning, "engine-switched",
                             std::string(EngineName(engine_)) + " engine cannot parse " +
                                 std::string(FormalismName(grammar_->grammar.formalism)) +
                                 " grammars; switched to " + std::string(EngineName(other)),
                             {std::string(source), 0, 0}});
    engine_ = other;
  }
  last_.reset();
  r.ok = true;
  r.checks = checks_;
  r.fingerprint = grammar_->compiled.fingerprint;
  return r;
}

LoadReport Session::load_grammar_file(const std::string& path) {
  std::optional<std::string> text = ReadTextFile(path);
  if (!text) return Unreadable(path);
  return load_grammar(*text, path);
}

LoadReport Session::load_lexicon(std::string_view text, std::string_view source) {
  LoadReport r;
  LexiconLoad l = ParseLexicon(text, source);
  r.diagnostics = std::move(l.diagnostics);
  if (!l.lexicon) return r;
  std::lock_guard<std::mutex> lock(mu_);
  lexicon_ = std::make_shared<const Lexicon>(std::move(*l.lexicon));
  last_.reset();
  r.ok = true;
  if (grammar_) r.fingerprint = grammar_->compiled.fingerprint;
  return r;
}

LoadReport Session::load_lexicon_file(const std::string& path) {
  std::optional<std::string> text = ReadTextFile(path);
  if (!text) return Unreadable(path);
  return load_lexicon(*text, path);
}

LoadReport Session::load_interface_rules(std::string_view text, std::string_view source) {
  LoadReport r;
  Formalism f = Formalism::kDcg;
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (grammar_) f = grammar_->grammar.formalism;
  }
  InterfaceRuleLoad l = ParseInterfaceRules(text, source, f);
  r.diagnostics = std::move(l.diagnostics);
  if (!l.rules) return r;
  std::lock_guard<std::mutex> lock(mu_);
  rules_ = std::make_shared<const InterfaceRuleSet>(std::move(*l.rules));
  recheck_locked();
  last_.reset();
  r.ok = true;
  if (grammar_) {
    r.checks = checks_;
    r.fingerprint = grammar_->compiled.fingerprint;
  }
  return r;
}

LoadReport Session::load_interface_rules_file(const std::string& path) {
  std::optional<std::string> text = ReadTextFile(path);
  if (!text) return Unreadable(path);
  return load_interface_rules(*text, path);
}

void Session::recheck_locked() {
  if (!grammar_) return;
  checks_ = RunChecks(grammar_->grammar, rules_ ? rules_->preterminals() : std::set<std::string>{});
}

std::shared_ptr<const LoadedGrammar> Session::grammar() const {
  std::lock_guard<std::mutex> lock(mu_);
  return grammar_;
}

BoundLexicon Session::lexicon() const {
  std::lock_guard<std::mutex> lock(mu_);
  if (!lexicon_ || !rules_) return {};
  return BoundLexicon(lexicon_, rules_);
}

std::string Session::fingerprint() const {
  std::lock_guard<std::mutex> lock(mu_);
  return grammar_ ? grammar_->compiled.fingerprint : "";
}

void Session::set_engine(EngineKind e) {
  std::lock_guard<std::mutex> lock(mu_);
  if (grammar_ && !EngineSupports(e, grammar_->grammar.formalism)) {
    throw Error("formalism-mismatch", std::string(EngineName(e)) + " engine cannot parse " +
                                          std::string(FormalismName(grammar_->grammar.formalism)) +
                                          " grammars");
  }
  engine_ = e;
}

EngineKind Session::engine() const {
  std::lock_guard<std::mutex> lock(mu_);
  return engine_;
}

void Session::set_trace(TraceFilter filter, std::set<std::string> breakpoints) {
  std::lock_guard<std::mutex> lock(mu_);
  filter_ = std::move(filter);
  breakpoints_ = std::move(breakpoints);
}

TraceFilter Session::trace_filter() const {
  std::lock_guard<std::mutex> lock(mu_);
  return filter_;
}

std::set<std::string> Session::breakpoints() const {
  std::lock_guard<std::mutex> lock(mu_);
  return breakpoints_;
}

CheckReport Session::check() const {
  std::lock_guard<std::mutex> lock(mu_);
  if (!grammar_) throw Error("no-grammar", "no grammar loaded");
  return checks_;
}

std::map<std::string, IndexEntry> Session::index() const {
  std::lock_guard<std::mutex> lock(mu_);
  if (!grammar_) throw Error("no-grammar", "no grammar loaded");
  return GrammarIndex(grammar_->grammar);
}

Session::Snapshot Session::snapshot() const {
  std::lock_guard<std::mutex> lock(mu_);
  if (!grammar_) throw Error("no-grammar", "no grammar loaded");
  if (!lexicon_ || !rules_) throw Error("no-lexicon", "lexicon and interface rules must be loaded");
  return {grammar_, checks_, BoundLexicon(lexicon_, rules_), engine_, filter_};
}

namespace {

ParseOutcome RunParse(const LoadedGrammar& g, const CheckReport& checks, const BoundLexicon& lex,
                      EngineKind engine, const TraceFilter& session_filter,
                      const std::string& sentence, const ParseOptions& options) {
  if (!EngineSupports(engine, g.grammar.formalism)) {
    throw Error("formalism-mismatch", std::string(EngineName(engine)) + " engine cannot parse " +
                                          std::string(FormalismName(g.grammar.formalism)) +
                                          " grammars");
  }
  ParseOutcome o;
  o.engine = engine;
  o.lexical = lex.analyze(SplitSentence(sentence));
  if (engine == EngineKind::kChart) {
    auto chart = std::make_shared<Chart>();
    ChartOptions co;
    co.cancel = options.cancel;
    co.max_edges = options.max_edges;
    o.result = ParseChart(g.compiled, o.lexical, *chart, co);
    o.chart = std::move(chart);
  } else {
    TdOptions to;
    to.memo = options.memo;
    to.filter = options.trace.value_or(session_filter);
    to.controller = options.controller;
    to.on_event = options.on_event;
    TdParse p = ParseTopDown(g.compiled, checks, o.lexical, to);
    o.result = std::move(p.result);
    o.trace = std::move(p.trace);
    o.wfst = std::make_shared<const Wfst>(std::move(p.wfst));
  }
  // Lexical problems (failed copies) belong to the result as well.
  o.result.diagnostics.insert(o.result.diagnostics.begin(), o.lexical.diagnostics.begin(),
                              o.lexical.diagnostics.end());
  if (o.result.readings.empty()) o.failure = DiagnoseFailure(o.spans(), o.lexical.tokens);
  return o;
}

}  // namespace

ParseOutcome Session::parse(const std::string& sentence, const ParseOptions& options) const {
  Snapshot s = snapshot();
  return RunParse(*s.grammar, s.checks, s.lexicon, options.engine.value_or(s.engine), s.filter,
                  sentence, options);
}

std::shared_ptr<const ParseOutcome> Session::parse_and_keep(const std::string& sentence,
                                                            const ParseOptions& options) {
  auto o = std::make_shared<const ParseOutcome>(parse(sentence, options));
  std::lock_guard<std::mutex> lock(mu_);
  last_ = o;
  return o;
}

std::shared_ptr<const ParseOutcome> Session::last() const {
  std::lock_guard<std::mutex> lock(mu_);
  return last_;
}

SentenceParser Session::sentence_parser(std::optional<EngineKind> engine) const {
  auto s = std::make_shared<const Snapshot>(snapshot());
  EngineKind e = engine.value_or(s->engine);
  return [s, e](const std::string& sentence) {
    ParseOptions quiet;
    quiet.trace = TraceFilter{};
    return RunParse(*s->grammar, s->checks, s->lexicon, e, s->filter, sentence, quiet).result;
  };
}

std::chrono::steady_clock::time_point Session::last_used() const {
  std::lock_guard<std::mutex> lock(mu_);
  return last_used_;
}

void Session::touch() {
  std::lock_guard<std::mutex> lock(mu_);
  last_used_ = std::chrono::steady_clock::now();
}

// ---------------------------------------------------------------------------
// SessionManager

SessionManager::SessionManager(Config config) : config_(std::move(config)) {}

std::shared_ptr<Session> SessionManager::create() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard<std::mutex> lock(mu_);
  std::ostringstream id;
  id << std::hex << (rng() & 0xffffffffffULL) << "-" << ++counter_;
  auto s = std::make_shared<Session>(id.str(), config_.engine);
  sessions_[s->id()] = s;
  return s;
}

std::shared_ptr<Session> SessionManager::get(const std::string& id) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error("session-not-found", "no session '" + id + "'");
  it->second->touch();
  return it->second;
}

bool SessionManager::remove(const std::string& id) {
  std::lock_guard<std::mutex> lock(mu_);
  return sessions_.erase(id) > 0;
}

std::size_t SessionManager::expire(std::chrono::steady_clock::time_point now) {
  std::lock_guard<std::mutex> lock(mu_);
  std::size_t n = 0;
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    if (now - it->second->last_used() > config_.session_idle) {
      it = sessions_.erase(it);
      ++n;
    } else {
      ++it;
    }
  }
  return n;
}

std::size_t SessionManager::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return sessions_.size();
}

// ---------------------------------------------------------------------------
// Jobs

std::shared_ptr<ParseJob> ParseJob::Start(std::shared_ptr<Session> session, std::string sentence,
                                          ParseOptions options, TraceFilter filter,
                                          std::set<std::string> breakpoints, TraceMode mode) {
  std::shared_ptr<ParseJob> job(new ParseJob());
  job->controller_.set_filter(filter);
  job->controller_.set_breakpoints(std::move(breakpoints));
  if (mode == TraceMode::kStep) job->controller_.resume(TraceMode::kStep);
  options.trace = std::move(filter);
  options.controller = &job->controller_;
  ParseJob* self = job.get();
  options.on_event = [self](const TraceEvent& e) {
    std::lock_guard<std::mutex> lock(self->mu_);
    self->events_.push_back(e);
    self->cv_.notify_all();
  };
  // The thread only touches members; the destructor joins it.
  job->thread_ = std::thread([self, session, sentence = std::move(sentence),
                              options = std::move(options)] {
    std::shared_ptr<const ParseOutcome> outcome;
    std::string error;
    try {
      outcome = session->parse_and_keep(sentence, options);
    } catch (const std::exception& e) {
      error = e.what();
    }
    std::lock_guard<std::mutex> lock(self->mu_);
    self->outcome_ = std::move(outcome);
    self->error_ = std::move(error);
    self->done_ = true;
    self->cv_.notify_all();
  });
  return job;
}

ParseJob::~ParseJob() {
  controller_.abort();
  if (thread_.joinable()) thread_.join();
}

bool ParseJob::done() const {
  std::lock_guard<std::mutex> lock(mu_);
  return done_;
}

std::vector<TraceEvent> ParseJob::events(std::size_t from, std::chrono::milliseconds timeout) const {
  std::unique_lock<std::mutex> lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return events_.size() > from || done_; });
  if (from >= events_.size()) return {};
  return {events_.begin() + static_cast<std::ptrdiff_t>(from), events_.end()};
}

std::size_t ParseJob::event_count() const {
  std::lock_guard<std::mutex> lock(mu_);
  return events_.size();
}

std::shared_ptr<const ParseOutcome> ParseJob::wait() const {
  std::unique_lock<std::mutex> lock(mu_);
  cv_.wait(lock, [&] { return done_; });
  return outcome_;
}

std::shared_ptr<const ParseOutcome> ParseJob::outcome() const {
  std::lock_guard<std::mutex> lock(mu_);
  return outcome_;
}

std::string ParseJob::error() const {
  std::lock_guard<std::mutex> lock(mu_);
  return error_;
}

std::shared_ptr<SuiteJob> SuiteJob::Start(std::vector<SelectedCase> cases, SentenceParser parser,
                                          SuiteOptions options) {
  std::shared_ptr<SuiteJob> job(new SuiteJob());
  job->total_ = cases.size();
  SuiteJob* self = job.get();
  options.cancel = &job->cancel_;
  auto user = std::move(options.on_progress);
  options.on_progress = [self, user](const SuiteProgress& p) {
    if (user) user(p);
    std::lock_guard<std::mutex> lock(self->mu_);
    self->progress_.push_back(*p.row);
    self->cv_.notify_all();
  };
  job->thread_ = std::thread([self, cases = std::move(cases), parser = std::move(parser),
                              options = std::move(options)] {
    SuiteRunTable t = RunSuite(cases, parser, options);
    std::lock_guard<std::mutex> lock(self->mu_);
    self->table_ = std::move(t);
    self->done_ = true;
    self->cv_.notify_all();
  });
  return job;
}

SuiteJob::~SuiteJob() {
  cancel_ = true;
  if (thread_.joinable()) thread_.join();
}

bool SuiteJob::done() const {
  std::lock_guard<std::mutex> lock(mu_);
  return done_;
}

std::vector<SuiteRow> SuiteJob::progress(std::size_t from, std::chrono::milliseconds timeout) const {
  std::unique_lock<std::mutex> lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return progress_.size() > from || done_; });
  if (from >= progress_.size()) return {};
  return {progress_.begin() + static_cast<std::ptrdiff_t>(from), progress_.end()};
}

const SuiteRunTable& SuiteJob::wait() const {
  std::unique_lock<std::mutex> lock(mu_);
  cv_.wait(lock, [&] { return done_; });
  return table_;
}

// ---------------------------------------------------------------------------
// Output

std::optional<OutputFormat> ParseOutputFormat(std::string_view name) {
  if (name == "tree") return OutputFormat::kTree;
  if (name == "features") return OutputFormat::kFeatures;
  if (name == "json") return OutputFormat::kJson;
  return std::nullopt;
}

std::string RenderParse(const ParseOutcome& o, OutputFormat format) {
  if (format == OutputFormat::kJson) {
    json j = ParseOutcomeToJson(o);
    j["result"].erase("timestamp");
    return j.dump(2) + "\n";
  }
  const ParseResult& r = o.result;
  std::ostringstream out;
  const std::size_t n = r.readings.size();
  out << n << (n == 1 ? " reading" : " readings") << " (" << EngineName(o.engine);
  if (r.status != "complete") out << ", " << r.status;
  out << ")\n";
  for (std::size_t i = 0; i < n; ++i) {
    const Reading& reading = r.readings[i];
    out << "\nreading " << i + 1 << ":\n";
    out << RenderTree(reading.tree, format == OutputFormat::kTree ? TreeFormat::kAsciiTree
                                                                  : TreeFormat::kIndentedFeatures);
    if (reading.fstructure) {
      out << "f-structure:\n" << Render(*reading.fstructure, RenderStyle::kIndented) << "\n";
    }
  }
  for (const auto& d : r.diagnostics) out << FormatDiagnostic(d) << "\n";
  if (o.failure) out << "\n" << FormatFailure(*o.failure);
  return out.str();
}

json ParseOutcomeToJson(const ParseOutcome& o) {
  json trace = json::array();
  for (const auto& e : o.trace) trace.push_back(TraceEventToJson(e));
  json lexical = json::array();
  for (const auto& e : o.lexical.trace) {
    lexical.push_back({{"token", e.token},
                       {"word", e.word},
                       {"entry", e.entry},
                       {"rule", e.rule},
                       {"category", e.category}});
  }
  json j = {{"engine", EngineName(o.engine)},
            {"result", ResultToJson(o.result)},
            {"trace", std::move(trace)},
            {"lexical", std::move(lexical)},
            {"unknown_tokens", o.lexical.unknown_tokens()}};
  j["failure"] = o.failure ? FailureToJson(*o.failure) : json(nullptr);
  return j;
}

json FindingToJson(const Finding& f) {
  json locations = json::array();
  for (const auto& l : f.locations) locations.push_back(LocationToJson(l));
  return {{"severity", f.severity == Severity::kError ? "error" : "warning"},
          {"kind", f.kind},
          {"witness", f.witness},
          {"locations", std::move(locations)},
          {"message", f.message}};
}

json CheckReportToJson(const CheckReport& r) {
  json findings = json::array();
  for (const auto& f : r.findings) findings.push_back(FindingToJson(f));
  return {{"findings", std::move(findings)},
          {"has_errors", r.has_errors()},
          {"blocks_topdown", r.blocks_topdown()}};
}

json LoadReportToJson(const LoadReport& r) {
  json diagnostics = json::array();
  for (const auto& d : r.diagnostics) diagnostics.push_back(DiagnosticToJson(d));
  json j = {{"ok", r.ok}, {"diagnostics", std::move(diagnostics)}, {"fingerprint", r.fingerprint}};
  j["checks"] = r.checks ? CheckReportToJson(*r.checks) : json(nullptr);
  return j;
}

json GrammarIndexToJson(const Grammar& g) {
  json out = json::object();
  auto rules = [&](const std::vector<std::size_t>& ids) {
    json a = json::array();
    for (std::size_t i : ids) {
      const GrammarRule& r = g.rules[i];
      a.push_back({{"index", i},
                   {"label", r.label},
                   {"text", FormatRule(r)},
                   {"location", LocationToJson(r.location)}});
    }
    return a;
  };
  for (const auto& [symbol, entry] : GrammarIndex(g)) {
    out[symbol] = {{"defined_by", rules(entry.defined_by)},
                   {"referenced_by", rules(entry.referenced_by)}};
  }
  return out;
}

std::string FormatGrammarIndex(const Grammar& g) {
  std::ostringstream out;
  auto list = [&](const char* title, const std::vector<std::size_t>& ids) {
    if (ids.empty()) return;
    out << "  " << title << ":\n";
    for (std::size_t i : ids) {
      const GrammarRule& r = g.rules[i];
      out << "    " << r.location.file << ":" << r.location.line << ": " << FormatRule(r) << "\n";
    }
  };
  for (const auto& [symbol, entry] : GrammarIndex(g)) {
    out << symbol;
    if (entry.defined_by.empty()) out << " (undefined)";
    out << "\n";
    list("defined by", entry.defined_by);
    list("referenced by", entry.referenced_by);
  }
  return out.str();
}

}  // namespace gramwb
