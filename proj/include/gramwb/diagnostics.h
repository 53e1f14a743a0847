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

// Feedback for sentences without a reading: the largest recognized
// fragments and the shortest paths through the passive edges.

#ifndef GRAMWB_DIAGNOSTICS_H_
#define GRAMWB_DIAGNOSTICS_H_

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gramwb/chart_parser.h"
#include "gramwb/td_parser.h"

namespace gramwb {

// A passive constituent over [from, to). Inserted word units carry no id.
struct Span {
  std::size_t from = 0;
  std::size_t to = 0;
  std::string label;
  std::optional<std::size_t> id;

  std::size_t length() const { return to - from; }
  bool operator==(const Span&) const = default;
};

// Non-empty passive edges. Chart ids are edge ids; WFST ids follow
// discovery order.
std::vector<Span> PassiveSpans(const Chart& chart);
std::vector<Span> PassiveSpans(const Wfst& wfst);

struct FragmentReport {
  std::vector<Span> fragments;  // left to right, non-overlapping, covering
  std::size_t covered = 0;      // tokens inside real edges
  std::size_t total = 0;

  double coverage() const { return total == 0 ? 1.0 : double(covered) / double(total); }
};

// Greedy from the left: the longest span starting at the current position,
// highest id on ties; a position without spans becomes a word unit.
FragmentReport LargestFragments(const std::vector<Span>& spans,
                                const std::vector<std::string>& tokens);

struct ChartPath {
  std::vector<Span> edges;
  std::size_t length() const { return edges.size(); }
};

inline constexpr std::size_t kMaxShortestPaths = 10;

// Every path from 0 to n with the fewest edges, at most `cap`. Positions
// without an outgoing span get a word unit, so a path always exists.
// Paths are listed in lexicographic order of their edge choices, where a
// real span precedes word units and lower ids come first.
std::vector<ChartPath> ShortestPaths(const std::vector<Span>& spans,
                                     const std::vector<std::string>& tokens,
                                     std::size_t cap = kMaxShortestPaths);

struct FailureReport {
  FragmentReport fragments;
  std::vector<ChartPath> paths;
};

FailureReport DiagnoseFailure(const std::vector<Span>& spans,
                              const std::vector<std::string>& tokens);

// "NP[0,2]#5" or "'schläft'[2,3]" for word units.
std::string FormatSpan(const Span& s);
std::string FormatFailure(const FailureReport& r);

nlohmann::json SpanToJson(const Span& s);
nlohmann::json FailureToJson(const FailureReport& r);

}  // namespace gramwb

#endif  // GRAMWB_DIAGNOSTICS_H_
