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

#include "gramwb/td_parser.h"

#include <unordered_set>

#include "derivation.h"

namespace gramwb {

using internal::DerivNode;
using internal::FreshNames;
using internal::RuleTemplate;

std::string_view PortName(Port p) {
  switch (p) {
    case Port::kEntry: return "ENTRY";
    case Port::kExit: return "EXIT";
    case Port::kFail: return "FAIL";
    case Port::kRedo: return "REDO";
  }
  return "ENTRY";
}

std::string FormatTraceEvent(const TraceEvent& e) {
  std::string out(2 * e.depth, ' ');
  out += std::string(PortName(e.port)) + " " + e.label + e.features + " @" + std::to_string(e.position);
  if (e.end) out += "-" + std::to_string(*e.end);
  return out;
}

nlohmann::json TraceEventToJson(const TraceEvent& e) {
  nlohmann::json j = {{"port", PortName(e.port)}, {"label", e.label},
                      {"features", e.features}, {"depth", e.depth},
                      {"position", e.position}, {"goal", e.goal}};
  if (e.end) j["end"] = *e.end;
  return j;
}

// ---------------------------------------------------------------------------
// TraceController

TraceController::TraceController(TraceFilter filter, std::set<std::string> breakpoints,
                                 TraceMode mode)
    : filter_(std::move(filter)), breakpoints_(std::move(breakpoints)), mode_(mode) {}

void TraceController::set_filter(TraceFilter filter) {
  std::lock_guard<std::mutex> lock(mu_);
  filter_ = std::move(filter);
}

void TraceController::set_breakpoints(std::set<std::string> breakpoints) {
  std::lock_guard<std::mutex> lock(mu_);
  breakpoints_ = std::move(breakpoints);
}

TraceFilter TraceController::filter() const {
  std::lock_guard<std::mutex> lock(mu_);
  return filter_;
}

std::set<std::string> TraceController::breakpoints() const {
  std::lock_guard<std::mutex> lock(mu_);
  return breakpoints_;
}

void TraceController::resume(TraceMode mode) {
  std::lock_guard<std::mutex> lock(mu_);
  mode_ = mode;
  resume_requested_ = true;
  // Cleared here so a waiter never sees the pause it just released.
  paused_.reset();
  cv_.notify_all();
}

void TraceController::abort() {
  std::lock_guard<std::mutex> lock(mu_);
  aborted_ = true;
  cv_.notify_all();
}

bool TraceController::aborted() const {
  std::lock_guard<std::mutex> lock(mu_);
  return aborted_;
}

std::optional<TraceEvent> TraceController::paused_at() const {
  std::lock_guard<std::mutex> lock(mu_);
  return paused_;
}

bool TraceController::wait_for_pause(std::chrono::milliseconds timeout) {
  std::unique_lock<std::mutex> lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return paused_.has_value() || finished_; });
  return paused_.has_value();
}

bool TraceController::finished() const {
  std::lock_guard<std::mutex> lock(mu_);
  return finished_;
}

void TraceController::start() {
  std::lock_guard<std::mutex> lock(mu_);
  finished_ = false;
  paused_.reset();
}

void TraceController::finish() {
  std::lock_guard<std::mutex> lock(mu_);
  finished_ = true;
  paused_.reset();
  cv_.notify_all();
}

bool TraceController::on_event(const TraceEvent& e,
                               const std::function<void(const TraceEvent&)>& sink) {
  std::unique_lock<std::mutex> lock(mu_);
  if (aborted_) return false;
  bool passes = filter_.matches(e.label);
  if (passes && sink) {
    // The sink may call back into the controller.
    lock.unlock();
    sink(e);
    lock.lock();
    if (aborted_) return false;
  }
  bool pause = e.port == Port::kEntry &&
               (breakpoints_.count(e.label) > 0 || (mode_ == TraceMode::kStep && passes));
  if (!pause) return true;
  paused_ = e;
  resume_requested_ = false;
  cv_.notify_all();
  cv_.wait(lock, [&] { return resume_requested_ || aborted_; });
  paused_.reset();
  resume_requested_ = false;
  return !aborted_;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Aborted {};
struct DepthExceeded {};

using Continuation = std::function<void(const Binding&, std::size_t, DerivNode)>;

struct MemoSolution {
  std::size_t end;
  std::size_t seq;
  DerivNode tree;
  Binding env;  // closed over `tree`
};

struct MemoEntry {
  bool complete = false;
  bool in_progress = false;
  std::vector<MemoSolution> solutions;
  std::unordered_set<std::string> keys;
};

class TopDown {
 public:
  TopDown(const CompiledGrammar& g, const LexicalAnalysis& analysis, const TdOptions& options,
          std::vector<TraceEvent>& trace)
      : g_(g), analysis_(analysis), options_(options), trace_(trace) {
    for (const auto& rule : g.rules) templates_.push_back(internal::PrepareRule(rule));
    depth_limit_ = 10 * (g.rules.size() + analysis.tokens.size());
    sink_ = [this](const TraceEvent& e) {
      if (options_.record_trace) trace_.push_back(e);
      if (options_.on_event) options_.on_event(e);
    };
  }

  // Appends readings in the order they are found, without duplicates.
  void Run(std::vector<Reading>& readings) {
    Binding env;
    Value call = internal::Rooted(Value(), env, names_);
    const std::size_t n = analysis_.tokens.size();
    std::unordered_set<std::string> seen;
    Goal(g_.start_symbol, call, 0, env, 0, [&](const Binding& e, std::size_t end, DerivNode node) {
      if (end != n) return;
      if (!seen.insert(internal::TreeKey(node, e)).second) return;
      readings.push_back({internal::ToParseTree(node, e), std::nullopt});
    });
  }

  Wfst Table() const {
    Wfst out;
    for (const auto& [key, entry] : memo_) {
      WfstEntry& w = out[key];
      w.complete = entry.complete;
      for (const auto& s : entry.solutions) {
        w.solutions.push_back({s.end, s.seq, Close(Deref(s.tree.features, s.env), s.env),
                               internal::ToParseTree(s.tree, s.env)});
      }
    }
    return out;
  }

  std::size_t depth_limit() const { return depth_limit_; }

 private:
  void Emit(Port port, const std::string& label, const Value& call, const Binding& env,
            std::size_t depth, std::size_t pos, std::size_t goal,
            std::optional<std::size_t> end = std::nullopt) {
    TraceController* c = options_.controller;
    if (!c && !options_.filter.matches(label)) return;
    TraceEvent e{port, label, Render(call, env), depth, pos, end, goal};
    if (c) {
      if (!c->on_event(e, sink_)) throw Aborted();
    } else {
      sink_(e);
    }
  }

  void Record(MemoEntry& entry, std::size_t end, const DerivNode& node, const Binding& env) {
    std::string key = std::to_string(end) + "#" + internal::TreeKey(node, env);
    if (!entry.keys.insert(std::move(key)).second) return;
    entry.solutions.push_back({end, next_seq_++, node, internal::CloseOver(node, {}, env)});
  }

  void Goal(const std::string& label, const Value& call, std::size_t pos, const Binding& env,
            std::size_t depth, const Continuation& k) {
    if (depth > depth_limit_) throw DepthExceeded();
    const std::size_t id = next_goal_++;
    Emit(Port::kEntry, label, call, env, depth, pos, id);
    auto on_solution = [&](const Binding& e, std::size_t end, DerivNode node) {
      Emit(Port::kExit, label, call, e, depth, pos, id, end);
      k(e, end, std::move(node));
      Emit(Port::kRedo, label, call, env, depth, pos, id);
    };

    MemoEntry& entry = memo_[{label, pos}];
    if (options_.memo && !entry.in_progress) {
      if (!entry.complete) {
        // Solve once under an unrestricted call so the entry covers every
        // later call of this category at this position.
        entry.in_progress = true;
        Binding fresh;
        Value open = internal::Rooted(Value(), fresh, names_);
        Alternatives(label, open, pos, fresh, depth, [&](const Binding& e, std::size_t end, DerivNode node) {
          Record(memo_[{label, pos}], end, node, e);
        });
        MemoEntry& done = memo_[{label, pos}];
        done.in_progress = false;
        done.complete = true;
      }
      // Copy: continuations may add entries to the table.
      std::vector<MemoSolution> solutions = memo_[{label, pos}].solutions;
      for (auto& s : solutions) {
        Binding e = env;
        names_.rename_apart(s.tree, s.env);
        e.merge_disjoint(s.env);
        if (!UnifyInto(call, s.tree.features, e)) continue;
        on_solution(e, s.end, std::move(s.tree));
      }
    } else {
      Alternatives(label, call, pos, env, depth, [&](const Binding& e, std::size_t end, DerivNode node) {
        Record(memo_[{label, pos}], end, node, e);
        on_solution(e, end, std::move(node));
      });
    }
    Emit(Port::kFail, label, call, env, depth, pos, id);
  }

  void Alternatives(const std::string& label, const Value& call, std::size_t pos,
                    const Binding& env, std::size_t depth, const Continuation& k) {
    for (const CompiledRule* rule : g_.rules_for(label)) {
      const RuleTemplate& tmpl = templates_[rule->id];
      if (!tmpl.valid) continue;
      RuleTemplate t = internal::Instantiate(tmpl, names_);
      Binding e = env;
      e.merge_disjoint(t.env);
      if (!UnifyInto(call, t.lhs, e)) continue;
      DerivNode mother;
      mother.label = rule->lhs.symbol;
      mother.features = t.lhs;
      mother.from = pos;
      Items(*rule, t.items, 0, pos, e, mother, depth, k);
    }
    if (pos >= analysis_.tokens.size()) return;
    for (const auto& item : analysis_.items[pos]) {
      if (item.symbol != label) continue;
      DerivNode leaf;
      leaf.label = item.symbol;
      leaf.word = analysis_.tokens[pos];
      leaf.from = pos;
      leaf.to = pos + 1;
      Binding leaf_env;
      leaf.features = internal::Rooted(item.features, leaf_env, names_);
      names_.rename_apart(leaf, leaf_env);
      Binding e = env;
      e.merge_disjoint(leaf_env);
      if (!UnifyInto(call, leaf.features, e)) continue;
      k(e, pos + 1, std::move(leaf));
    }
  }

  void Items(const CompiledRule& rule, const std::vector<Value>& items, std::size_t j,
             std::size_t pos, const Binding& env, const DerivNode& mother, std::size_t depth,
             const Continuation& k) {
    if (j == rule.items.size()) {
      DerivNode done = mother;
      done.to = pos;
      k(env, pos, std::move(done));
      return;
    }
    const RhsItem& item = rule.items[j];
    if (item.kind == RhsItem::Kind::kTerminal) {
      if (pos >= analysis_.tokens.size() || analysis_.tokens[pos] != item.symbol) return;
      DerivNode leaf;
      leaf.label = item.symbol;
      leaf.word = item.symbol;
      leaf.terminal = true;
      leaf.from = pos;
      leaf.to = pos + 1;
      leaf.annotations = item.annotations;
      Binding e = env;
      leaf.features = internal::Rooted(Value(), e, names_);
      if (!UnifyInto(items[j], leaf.features, e)) return;
      DerivNode next = mother;
      next.children.push_back(std::move(leaf));
      Items(rule, items, j + 1, pos + 1, e, next, depth, k);
      return;
    }
    Goal(item.symbol, items[j], pos, env, depth + 1,
         [&](const Binding& e, std::size_t end, DerivNode child) {
           child.annotations = item.annotations;
           DerivNode next = mother;
           next.children.push_back(std::move(child));
           Items(rule, items, j + 1, end, e, next, depth, k);
         });
  }

  const CompiledGrammar& g_;
  const LexicalAnalysis& analysis_;
  const TdOptions& options_;
  std::vector<TraceEvent>& trace_;
  std::function<void(const TraceEvent&)> sink_;
  std::vector<RuleTemplate> templates_;
  std::map<std::pair<std::string, std::size_t>, MemoEntry> memo_;
  FreshNames names_;
  std::size_t depth_limit_ = 0;
  std::size_t next_goal_ = 0;
  std::size_t next_seq_ = 0;
};

std::string JoinTokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::string JoinPathOrRoot(const std::vector<std::string>& path) {
  return path.empty() ? "(root)" : JoinPath(path);
}

}  // namespace

TdParse ParseTopDown(const CompiledGrammar& g, const CheckReport& checks,
                     const LexicalAnalysis& analysis, const TdOptions& options) {
  if (IsUnordered(g.formalism)) {
    throw Error("formalism-mismatch", "the top-down parser accepts DCG and LFG grammars only");
  }
  if (checks.blocks_topdown()) {
    std::string detail;
    for (const auto& f : checks.findings) {
      if (f.kind == "left-recursion" || f.kind == "alias-cycle") {
        detail = f.message;
        break;
      }
    }
    throw Error("left-recursion", "top-down parsing refused: " + detail);
  }
  if (analysis.tokens.empty()) throw Error("empty-input", "cannot parse an empty token list");

  TdParse out;
  ParseResult& result = out.result;
  result.tokens = analysis.tokens;
  result.sentence = JoinTokens(analysis.tokens);
  result.engine = "td";
  result.fingerprint = g.fingerprint;
  result.timestamp = UtcTimestamp();
  result.diagnostics = analysis.diagnostics;
  for (std::size_t i : analysis.unknown_tokens()) {
    result.diagnostics.push_back({Severity::kWarning, "unknown-word",
                                  "no lexical category for \"" + analysis.tokens[i] + "\" (token " +
                                      std::to_string(i + 1) + ")",
                                  {}});
  }

  TraceController* controller = options.controller;
  if (controller) {
    std::set<std::string> known;
    for (const auto& r : g.rules) known.insert(r.lhs.symbol);
    for (const auto& r : g.rules) {
      for (const auto& item : r.items) known.insert(item.symbol);
    }
    for (const auto& items : analysis.items) {
      for (const auto& item : items) known.insert(item.symbol);
    }
    std::set<std::string> named = controller->breakpoints();
    for (const auto& l : controller->filter().labels) named.insert(l);
    for (const auto& l : named) {
      if (!known.count(l)) {
        result.diagnostics.push_back({Severity::kWarning, "unknown-trace-category",
                                      "trace category " + l + " does not occur in the grammar", {}});
      }
    }
    controller->start();
  }

  TopDown parser(g, analysis, options, out.trace);
  try {
    parser.Run(result.readings);
  } catch (const Aborted&) {
    result.status = "aborted";
  } catch (const DepthExceeded&) {
    result.status = "depth-limit";
    result.diagnostics.push_back({Severity::kError, "depth-limit",
                                  "goal depth exceeded " + std::to_string(parser.depth_limit()),
                                  {}});
  }
  if (controller) controller->finish();
  out.wfst = parser.Table();

  if (g.formalism == Formalism::kLfg) {
    std::vector<Reading> kept;
    for (auto& r : result.readings) {
      FStructureSolution s = SolveFStructure(r.tree);
      if (!s.ok()) {
        result.diagnostics.push_back({Severity::kWarning, "fstructure-clash", s.message, {}});
        continue;
      }
      r.fstructure = std::move(s.fstructure);
      kept.push_back(std::move(r));
    }
    result.readings = std::move(kept);
  }
  return out;
}

// ---------------------------------------------------------------------------
// F-structures

namespace {

constexpr char kInstanceMark = '\x1f';

// Gives every pred atom a per-use identity.
Value InstantiatePreds(const Value& v, std::size_t& counter) {
  if (!v.is_fs()) return v;
  FeatureStructure out;
  for (const auto& [name, value] : v.fs().features()) {
    if (name == "pred" && value.is_atom()) {
      out.set(name, Value::Atom(value.name() + kInstanceMark + std::to_string(counter++)));
    } else {
      out.set(name, InstantiatePreds(value, counter));
    }
  }
  return Value::Fs(std::move(out));
}

std::string StripMark(const std::string& atom) {
  std::size_t at = atom.find(kInstanceMark);
  return at == std::string::npos ? atom : atom.substr(0, at);
}

Value StripInstances(const Value& v) {
  if (v.is_atom()) return Value::Atom(StripMark(v.name()));
  if (!v.is_fs()) return v;
  FeatureStructure out;
  for (const auto& [name, value] : v.fs().features()) out.set(name, StripInstances(value));
  return Value::Fs(std::move(out));
}

std::string StripText(std::string text) {
  std::string out;
  bool skipping = false;
  for (char c : text) {
    if (c == kInstanceMark) {
      skipping = true;
      continue;
    }
    if (skipping && c >= '0' && c <= '9') continue;
    skipping = false;
    out += c;
  }
  return out;
}

class FSolver {
 public:
  FStructureSolution Solve(const ParseTree& tree) {
    Value root = Fresh();
    std::vector<std::size_t> path;
    if (!Node(tree, root, path)) return std::move(failure_);
    Term t = Close(Deref(root, env_), env_);
    Binding stripped;
    for (const auto& [var, value] : t.env.cells()) stripped.bind(var, StripInstances(value));
    FStructureSolution ok;
    ok.fstructure = Term{StripInstances(t.value), std::move(stripped)};
    return ok;
  }

 private:
  Value Fresh() { return Value::Var("_F" + std::to_string(counter_++)); }

  bool Fail(const std::vector<std::size_t>& node, std::vector<std::string> features,
            const std::string& what) {
    failure_.node_path = node;
    failure_.feature_path = std::move(features);
    std::string where = "[";
    for (std::size_t i = 0; i < node.size(); ++i) where += (i ? "," : "") + std::to_string(node[i]);
    where += "]";
    failure_.message = "f-structure clash at node " + where + ", path " +
                       JoinPathOrRoot(failure_.feature_path) + ": " + StripText(what);
    return false;
  }

  // Unifies, reporting the failing path relative to `a`.
  bool Unify2(const Value& a, const Value& b, std::vector<std::string>& fail_path,
              std::string& detail) {
    UnifyOutcome u = gramwb::Unify(a, b, env_);
    if (!u) {
      fail_path = u.path;
      detail = u.detail;
      return false;
    }
    env_ = std::move(u.env);
    return true;
  }

  // Value at `p`, creating the path below its root as needed.
  bool PathValue(const FPath& p, const Value& up, const Value& down, Value& out,
                 std::vector<std::string>& fail_path, std::string& detail) {
    const Value& root = p.root == FPath::Root::kUp ? up : down;
    if (p.attributes.empty()) {
      out = root;
      return true;
    }
    out = Fresh();
    Value nested = out;
    for (auto it = p.attributes.rbegin(); it != p.attributes.rend(); ++it) {
      FeatureStructure fs;
      fs.set(*it, nested);
      nested = Value::Fs(std::move(fs));
    }
    return Unify2(root, nested, fail_path, detail);
  }

  bool Equation(const FEquation& eq, const Value& up, const Value& down,
                const std::vector<std::size_t>& node) {
    std::vector<std::string> fail_path;
    std::string detail;
    Value lhs;
    if (!PathValue(eq.lhs, up, down, lhs, fail_path, detail)) return Fail(node, fail_path, detail);
    Value rhs;
    if (const auto* p = std::get_if<FPath>(&eq.rhs)) {
      if (!PathValue(*p, up, down, rhs, fail_path, detail)) return Fail(node, fail_path, detail);
    } else {
      rhs = InstantiatePreds(std::get<Value>(eq.rhs), preds_);
    }
    if (!Unify2(lhs, rhs, fail_path, detail)) {
      std::vector<std::string> full = eq.lhs.attributes;
      full.insert(full.end(), fail_path.begin(), fail_path.end());
      return Fail(node, full, detail);
    }
    return true;
  }

  bool Node(const ParseTree& t, const Value& f, std::vector<std::size_t>& path) {
    if (t.children.empty() && !t.terminal) {
      std::string prefix = "_L" + std::to_string(counter_++) + "_";
      Term own = RenameVars(t.features, [&](const std::string& v) { return prefix + v; });
      env_.merge_disjoint(own.env);
      std::vector<std::string> fail_path;
      std::string detail;
      if (!Unify2(f, InstantiatePreds(own.value, preds_), fail_path, detail)) {
        return Fail(path, fail_path, detail);
      }
      return true;
    }
    for (std::size_t i = 0; i < t.children.size(); ++i) {
      const ParseTree& c = t.children[i];
      if (c.terminal) continue;
      path.push_back(i);
      Value fc = Fresh();
      if (c.annotations.empty()) {
        if (!Equation(FEquation{{FPath::Root::kUp, {}}, FPath{FPath::Root::kDown, {}}}, f, fc, path)) {
          return false;
        }
      }
      for (const auto& text : c.annotations) {
        std::optional<FEquation> eq = ParseFEquationText(text);
        if (!eq) return Fail(path, {}, "unreadable annotation " + text);
        if (!Equation(*eq, f, fc, path)) return false;
      }
      if (!Node(c, fc, path)) return false;
      path.pop_back();
    }
    return true;
  }

  Binding env_;
  std::size_t counter_ = 0;
  std::size_t preds_ = 0;
  FStructureSolution failure_;
};

}  // namespace

FStructureSolution SolveFStructure(const ParseTree& tree) { return FSolver().Solve(tree); }

}  // namespace gramwb
