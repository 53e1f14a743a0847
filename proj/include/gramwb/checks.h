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

// Static grammar analyses, run on every load.

#ifndef GRAMWB_CHECKS_H_
#define GRAMWB_CHECKS_H_

#include <set>
#include <string>
#include <vector>

#include "gramwb/diagnostic.h"
#include "gramwb/grammar.h"

namespace gramwb {

inline constexpr std::size_t kMaxCycleFindings = 100;

// Directed graph over category symbols. Node order is first appearance,
// which is also the order cycles are rotated to start from.
class SymbolGraph {
 public:
  std::size_t add_node(const std::string& symbol);
  void add_edge(const std::string& from, const std::string& to);

  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<std::set<std::size_t>>& successors() const { return succ_; }
  bool has_edge(const std::string& from, const std::string& to) const;
  std::size_t edge_count() const;

  // Johnson-style enumeration of elementary cycles, at most `cap` of them.
  // Each cycle starts at its earliest node.
  std::vector<std::vector<std::string>> elementary_cycles(std::size_t cap) const;

  // Nodes lying on some cycle (nontrivial SCC member or self loop).
  std::set<std::string> cyclic_nodes() const;

 private:
  std::vector<std::string> nodes_;
  std::vector<std::set<std::size_t>> succ_;
};

// Edges lhs -> c for every c that can begin lhs: each leading optional or
// nullable category, up to and including the first category that must
// consume input. EPSILON items are transparent, terminals stop the scan.
// Symbols are compared by (alias-resolved) name only.
SymbolGraph BuildLeftCornerGraph(const Grammar& g);

// Symbols that can derive the empty string.
std::set<std::string> NullableSymbols(const Grammar& g);

struct Finding {
  Severity severity = Severity::kWarning;
  std::string kind;  // alias-cycle | left-recursion | lp-cycle |
                     // undefined-nonterminal | unreachable-nonterminal
  std::vector<std::string> witness;
  std::vector<SourceLocation> locations;
  std::string message;
};

struct CheckReport {
  std::vector<Finding> findings;  // sorted by kind, then witness

  bool has_errors() const;
  // Left recursion makes a top-down depth-first parser loop.
  bool blocks_topdown() const;
  std::vector<const Finding*> of_kind(std::string_view kind) const;
};

std::vector<Finding> CheckLeftRecursion(const Grammar& g);
std::set<std::string> LeftRecursiveSymbols(const Grammar& g);
std::vector<Finding> CheckLpCycles(const std::vector<LPConstraint>& lp);
std::vector<Finding> CheckAliasCycles(const std::vector<AliasDef>& aliases);

// Undefined and unreachable nonterminals. `preterminals` are categories the
// lexicon interface introduces; they count as defined.
std::vector<Finding> CheckWellformedness(const Grammar& g,
                                         const std::set<std::string>& preterminals = {});

CheckReport RunChecks(const Grammar& g, const std::set<std::string>& preterminals = {});

// Human-readable report; "no findings" when empty.
std::string FormatReport(const CheckReport& report);

}  // namespace gramwb

#endif  // GRAMWB_CHECKS_H_
