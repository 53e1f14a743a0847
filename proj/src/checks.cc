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

#include "gramwb/checks.h"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_map>

namespace gramwb {
namespace {

// Tarjan's algorithm restricted to nodes with allowed[v]. Returns the
// component id per node (npos for disallowed nodes).
std::vector<std::size_t> Components(const std::vector<std::set<std::size_t>>& succ,
                                    const std::vector<bool>& allowed) {
  const std::size_t n = succ.size();
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kNone), low(n, 0), comp(n, kNone);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t counter = 0, components = 0;

  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w : succ[v]) {
      if (!allowed[w]) continue;
      if (index[w] == kNone) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] != index[v]) return;
    std::size_t w;
    do {
      w = stack.back();
      stack.pop_back();
      on_stack[w] = false;
      comp[w] = components;
    } while (w != v);
    ++components;
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (allowed[v] && index[v] == kNone) visit(v);
  }
  return comp;
}

class CircuitSearch {
 public:
  CircuitSearch(const std::vector<std::set<std::size_t>>& succ, std::size_t cap,
                std::vector<std::vector<std::size_t>>& out)
      : succ_(succ), cap_(cap), out_(out),
        allowed_(succ.size()), blocked_(succ.size()), b_(succ.size()) {}

  void run_from(std::size_t s, const std::vector<bool>& allowed) {
    allowed_ = allowed;
    std::fill(blocked_.begin(), blocked_.end(), false);
    for (auto& b : b_) b.clear();
    s_ = s;
    circuit(s);
  }

 private:
  void unblock(std::size_t u) {
    blocked_[u] = false;
    std::set<std::size_t> waiting;
    waiting.swap(b_[u]);
    for (std::size_t w : waiting) {
      if (blocked_[w]) unblock(w);
    }
  }

  bool circuit(std::size_t v) {
    bool found = false;
    stack_.push_back(v);
    blocked_[v] = true;
    for (std::size_t w : succ_[v]) {
      if (!allowed_[w]) continue;
      if (out_.size() >= cap_) break;
      if (w == s_) {
        out_.push_back(stack_);
        found = true;
      } else if (!blocked_[w] && circuit(w)) {
        found = true;
      }
    }
    if (found) {
      unblock(v);
    } else {
      for (std::size_t w : succ_[v]) {
        if (allowed_[w]) b_[w].insert(v);
      }
    }
    stack_.pop_back();
    return found;
  }

  const std::vector<std::set<std::size_t>>& succ_;
  std::size_t cap_;
  std::vector<std::vector<std::size_t>>& out_;
  std::vector<bool> allowed_;
  std::vector<bool> blocked_;
  std::vector<std::set<std::size_t>> b_;
  std::vector<std::size_t> stack_;
  std::size_t s_ = 0;
};

std::string JoinCycle(const std::vector<std::string>& witness) {
  std::string out;
  for (const auto& s : witness) out += s + " -> ";
  return out + witness.front();
}

bool FindingLess(const Finding& a, const Finding& b) {
  if (a.kind != b.kind) return a.kind < b.kind;
  return a.witness < b.witness;
}

// LHS symbol -> location of its first defining rule.
std::map<std::string, SourceLocation> FirstDefinitions(const Grammar& g) {
  std::map<std::string, SourceLocation> out;
  for (const auto& r : g.rules) out.try_emplace(ResolveSymbol(r.lhs.symbol, g), r.location);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// SymbolGraph

std::size_t SymbolGraph::add_node(const std::string& symbol) {
  auto it = std::find(nodes_.begin(), nodes_.end(), symbol);
  if (it != nodes_.end()) return static_cast<std::size_t>(it - nodes_.begin());
  nodes_.push_back(symbol);
  succ_.emplace_back();
  return nodes_.size() - 1;
}

void SymbolGraph::add_edge(const std::string& from, const std::string& to) {
  std::size_t f = add_node(from);
  std::size_t t = add_node(to);
  succ_[f].insert(t);
}

bool SymbolGraph::has_edge(const std::string& from, const std::string& to) const {
  auto f = std::find(nodes_.begin(), nodes_.end(), from);
  auto t = std::find(nodes_.begin(), nodes_.end(), to);
  if (f == nodes_.end() || t == nodes_.end()) return false;
  return succ_[f - nodes_.begin()].count(static_cast<std::size_t>(t - nodes_.begin())) > 0;
}

std::size_t SymbolGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& s : succ_) n += s.size();
  return n;
}

std::vector<std::vector<std::string>> SymbolGraph::elementary_cycles(std::size_t cap) const {
  const std::size_t n = nodes_.size();
  std::vector<std::vector<std::size_t>> raw;
  CircuitSearch search(succ_, cap, raw);
  for (std::size_t s = 0; s < n && raw.size() < cap; ++s) {
    // Strongly connected component of s within the subgraph of nodes >= s.
    std::vector<bool> allowed(n, false);
    for (std::size_t v = s; v < n; ++v) allowed[v] = true;
    std::vector<std::size_t> comp = Components(succ_, allowed);
    std::vector<bool> in_scc(n, false);
    std::size_t members = 0;
    for (std::size_t v = s; v < n; ++v) {
      if (comp[v] == comp[s]) {
        in_scc[v] = true;
        ++members;
      }
    }
    if (members == 1 && succ_[s].count(s) == 0) continue;
    search.run_from(s, in_scc);
  }
  std::vector<std::vector<std::string>> out;
  out.reserve(raw.size());
  for (const auto& cycle : raw) {
    std::vector<std::string> names;
    for (std::size_t v : cycle) names.push_back(nodes_[v]);
    out.push_back(std::move(names));
  }
  return out;
}

std::set<std::string> SymbolGraph::cyclic_nodes() const {
  const std::size_t n = nodes_.size();
  std::vector<std::size_t> comp = Components(succ_, std::vector<bool>(n, true));
  std::unordered_map<std::size_t, std::size_t> sizes;
  for (std::size_t c : comp) ++sizes[c];
  std::set<std::string> out;
  for (std::size_t v = 0; v < n; ++v) {
    if (sizes[comp[v]] > 1 || succ_[v].count(v) > 0) out.insert(nodes_[v]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Left corners

std::set<std::string> NullableSymbols(const Grammar& g) {
  std::set<std::string> nullable;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : g.rules) {
      std::string lhs = ResolveSymbol(r.lhs.symbol, g);
      if (nullable.count(lhs)) continue;
      bool all = std::all_of(r.rhs.begin(), r.rhs.end(), [&](const RhsItem& item) {
        switch (item.kind) {
          case RhsItem::Kind::kEmpty:
            return true;
          case RhsItem::Kind::kTerminal:
            return item.optional;
          case RhsItem::Kind::kCategory:
            return item.optional || nullable.count(ResolveSymbol(item.symbol, g)) > 0;
        }
        return false;
      });
      if (all) {
        nullable.insert(lhs);
        changed = true;
      }
    }
  }
  return nullable;
}

SymbolGraph BuildLeftCornerGraph(const Grammar& g) {
  SymbolGraph graph;
  for (const auto& s : g.symbols()) graph.add_node(ResolveSymbol(s, g));
  std::set<std::string> nullable = NullableSymbols(g);
  for (const auto& r : g.rules) {
    std::string lhs = ResolveSymbol(r.lhs.symbol, g);
    for (const auto& item : r.rhs) {
      if (item.kind == RhsItem::Kind::kEmpty) continue;
      if (item.kind == RhsItem::Kind::kTerminal) {
        if (item.optional) continue;
        break;
      }
      std::string sym = ResolveSymbol(item.symbol, g);
      graph.add_edge(lhs, sym);
      if (!item.optional && nullable.count(sym) == 0) break;
    }
  }
  return graph;
}

// ---------------------------------------------------------------------------
// Checks

std::vector<Finding> CheckLeftRecursion(const Grammar& g) {
  SymbolGraph graph = BuildLeftCornerGraph(g);
  auto defs = FirstDefinitions(g);
  std::vector<Finding> out;
  for (auto& cycle : graph.elementary_cycles(kMaxCycleFindings)) {
    Finding f;
    f.severity = Severity::kError;
    f.kind = "left-recursion";
    for (const auto& s : cycle) {
      auto it = defs.find(s);
      if (it != defs.end()) f.locations.push_back(it->second);
    }
    f.message = "possible left recursion: " + JoinCycle(cycle);
    f.witness = std::move(cycle);
    out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end(), FindingLess);
  return out;
}

std::set<std::string> LeftRecursiveSymbols(const Grammar& g) {
  return BuildLeftCornerGraph(g).cyclic_nodes();
}

std::vector<Finding> CheckLpCycles(const std::vector<LPConstraint>& lp) {
  SymbolGraph graph;
  std::map<std::pair<std::string, std::string>, SourceLocation> where;
  for (const auto& c : lp) {
    graph.add_edge(c.left, c.right);
    where.try_emplace({c.left, c.right}, c.location);
  }
  std::vector<Finding> out;
  for (auto& cycle : graph.elementary_cycles(kMaxCycleFindings)) {
    Finding f;
    f.severity = Severity::kError;
    f.kind = "lp-cycle";
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      f.locations.push_back(where[{cycle[i], cycle[(i + 1) % cycle.size()]}]);
    }
    std::string text;
    for (const auto& s : cycle) text += s + " < ";
    f.message = "cyclic linear precedence: " + text + cycle.front();
    f.witness = std::move(cycle);
    out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end(), FindingLess);
  return out;
}

std::vector<Finding> CheckAliasCycles(const std::vector<AliasDef>& aliases) {
  SymbolGraph graph;
  std::map<std::string, SourceLocation> where;
  for (const auto& a : aliases) {
    graph.add_node(a.name);
    where.try_emplace(a.name, a.location);
  }
  for (const auto& a : aliases) {
    if (where.count(a.expansion.symbol)) graph.add_edge(a.name, a.expansion.symbol);
  }
  std::vector<Finding> out;
  for (auto& cycle : graph.elementary_cycles(kMaxCycleFindings)) {
    Finding f;
    f.severity = Severity::kError;
    f.kind = "alias-cycle";
    for (const auto& s : cycle) f.locations.push_back(where[s]);
    f.message = "cyclic alias definition: " + JoinCycle(cycle);
    f.witness = std::move(cycle);
    out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end(), FindingLess);
  return out;
}

std::vector<Finding> CheckWellformedness(const Grammar& g,
                                         const std::set<std::string>& preterminals) {
  std::set<std::string> defined(preterminals.begin(), preterminals.end());
  std::map<std::string, SourceLocation> first_reference;
  std::map<std::string, std::set<std::string>> uses;
  for (const auto& r : g.rules) {
    std::string lhs = ResolveSymbol(r.lhs.symbol, g);
    defined.insert(lhs);
    for (const auto& item : r.rhs) {
      if (item.kind != RhsItem::Kind::kCategory) continue;
      std::string sym = ResolveSymbol(item.symbol, g);
      first_reference.try_emplace(sym, r.location);
      uses[lhs].insert(sym);
    }
  }

  std::vector<Finding> out;
  std::string start = ResolveSymbol(g.start_symbol, g);
  if (!g.rules.empty() && !first_reference.count(start) && !defined.count(start)) {
    first_reference.try_emplace(start, SourceLocation{g.file, 0, 0});
  }
  for (const auto& [sym, loc] : first_reference) {
    if (defined.count(sym)) continue;
    Finding f;
    f.kind = "undefined-nonterminal";
    f.witness = {sym};
    f.locations = {loc};
    f.message = "nonterminal '" + sym + "' is used but never defined";
    out.push_back(std::move(f));
  }

  std::set<std::string> reachable{start};
  std::vector<std::string> todo{start};
  while (!todo.empty()) {
    std::string s = todo.back();
    todo.pop_back();
    for (const auto& t : uses[s]) {
      if (reachable.insert(t).second) todo.push_back(t);
    }
  }
  auto defs = FirstDefinitions(g);
  for (const auto& [sym, loc] : defs) {
    if (reachable.count(sym)) continue;
    Finding f;
    f.kind = "unreachable-nonterminal";
    f.witness = {sym};
    f.locations = {loc};
    f.message = "nonterminal '" + sym + "' is not reachable from '" + start + "'";
    out.push_back(std::move(f));
  }
  std::sort(out.begin(), out.end(), FindingLess);
  return out;
}

bool CheckReport::has_errors() const {
  return std::any_of(findings.begin(), findings.end(),
                     [](const Finding& f) { return f.severity == Severity::kError; });
}

bool CheckReport::blocks_topdown() const {
  return std::any_of(findings.begin(), findings.end(), [](const Finding& f) {
    return f.kind == "left-recursion" || f.kind == "alias-cycle";
  });
}

std::vector<const Finding*> CheckReport::of_kind(std::string_view kind) const {
  std::vector<const Finding*> out;
  for (const auto& f : findings) {
    if (f.kind == kind) out.push_back(&f);
  }
  return out;
}

CheckReport RunChecks(const Grammar& g, const std::set<std::string>& preterminals) {
  CheckReport report;
  auto append = [&](std::vector<Finding> v) {
    for (auto& f : v) report.findings.push_back(std::move(f));
  };
  append(CheckAliasCycles(g.aliases));
  append(CheckLeftRecursion(g));
  append(CheckLpCycles(g.lp));
  append(CheckWellformedness(g, preterminals));
  std::stable_sort(report.findings.begin(), report.findings.end(), FindingLess);
  return report;
}

std::string FormatReport(const CheckReport& report) {
  if (report.findings.empty()) return "no findings\n";
  std::ostringstream out;
  for (const auto& f : report.findings) {
    Diagnostic d;
    d.severity = f.severity;
    d.kind = f.kind;
    d.message = f.message;
    if (!f.locations.empty()) d.location = f.locations.front();
    out << FormatDiagnostic(d) << "\n";
  }
  return out.str();
}

}  // namespace gramwb
