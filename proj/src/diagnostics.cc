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

#include "gramwb/diagnostics.h"

#include <algorithm>
#include <limits>
#include <sstream>

namespace gramwb {
namespace {

// Outgoing spans per position, plus a word unit where there are none.
// Each list is sorted: real spans by id, then the word unit.
std::vector<std::vector<Span>> Augment(const std::vector<Span>& spans,
                                       const std::vector<std::string>& tokens) {
  const std::size_t n = tokens.size();
  std::vector<std::vector<Span>> out(n);
  for (const Span& s : spans) {
    if (s.from < s.to && s.to <= n) out[s.from].push_back(s);
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(out[i].begin(), out[i].end(),
              [](const Span& a, const Span& b) { return a.id < b.id; });
    if (out[i].empty()) out[i].push_back({i, i + 1, tokens[i], std::nullopt});
  }
  return out;
}

void Collect(const std::vector<std::vector<Span>>& next, const std::vector<std::size_t>& dist,
             std::size_t pos, std::vector<Span>& prefix, std::vector<ChartPath>& out,
             std::size_t cap) {
  if (out.size() >= cap) return;
  if (pos == next.size()) {
    out.push_back({prefix});
    return;
  }
  for (const Span& s : next[pos]) {
    if (dist[s.to] + 1 != dist[pos]) continue;
    prefix.push_back(s);
    Collect(next, dist, s.to, prefix, out, cap);
    prefix.pop_back();
    if (out.size() >= cap) return;
  }
}

}  // namespace

std::vector<Span> PassiveSpans(const Chart& chart) {
  std::vector<Span> out;
  for (const ChartEdge& e : chart.edges()) {
    if (e.passive && e.from < e.to) out.push_back({e.from, e.to, e.label, e.id});
  }
  return out;
}

std::vector<Span> PassiveSpans(const Wfst& wfst) {
  std::vector<Span> out;
  for (const auto& [key, entry] : wfst) {
    for (const WfstSolution& s : entry.solutions) {
      if (key.second < s.end) out.push_back({key.second, s.end, key.first, s.seq});
    }
  }
  std::sort(out.begin(), out.end(), [](const Span& a, const Span& b) { return a.id < b.id; });
  return out;
}

FragmentReport LargestFragments(const std::vector<Span>& spans,
                                const std::vector<std::string>& tokens) {
  FragmentReport r;
  r.total = tokens.size();
  auto next = Augment(spans, tokens);
  std::size_t pos = 0;
  while (pos < tokens.size()) {
    const Span* best = nullptr;
    for (const Span& s : next[pos]) {
      if (!best || s.length() > best->length() ||
          (s.length() == best->length() && s.id > best->id)) {
        best = &s;
      }
    }
    r.fragments.push_back(*best);
    if (best->id) r.covered += best->length();
    pos = best->to;
  }
  return r;
}

std::vector<ChartPath> ShortestPaths(const std::vector<Span>& spans,
                                     const std::vector<std::string>& tokens, std::size_t cap) {
  const std::size_t n = tokens.size();
  std::vector<ChartPath> out;
  if (n == 0 || cap == 0) return out;
  auto next = Augment(spans, tokens);
  // Spans only move right, so fewest edges to the end is a backward sweep.
  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 2;
  std::vector<std::size_t> dist(n + 1, kInf);
  dist[n] = 0;
  for (std::size_t i = n; i-- > 0;) {
    for (const Span& s : next[i]) dist[i] = std::min(dist[i], dist[s.to] + 1);
  }
  std::vector<Span> prefix;
  Collect(next, dist, 0, prefix, out, cap);
  return out;
}

FailureReport DiagnoseFailure(const std::vector<Span>& spans,
                              const std::vector<std::string>& tokens) {
  return {LargestFragments(spans, tokens), ShortestPaths(spans, tokens)};
}

std::string FormatSpan(const Span& s) {
  std::ostringstream out;
  if (s.id) {
    out << s.label << "[" << s.from << "," << s.to << "]#" << *s.id;
  } else {
    out << "'" << s.label << "'[" << s.from << "," << s.to << "]";
  }
  return out.str();
}

std::string FormatFailure(const FailureReport& r) {
  std::ostringstream out;
  out << "largest fragments (" << r.fragments.covered << "/" << r.fragments.total
      << " tokens covered):";
  for (const Span& s : r.fragments.fragments) out << " " << FormatSpan(s);
  out << "\n";
  out << "shortest paths";
  if (!r.paths.empty()) out << " (" << r.paths.front().length() << " edges)";
  out << ":\n";
  for (const ChartPath& p : r.paths) {
    out << " ";
    for (const Span& s : p.edges) out << " " << FormatSpan(s);
    out << "\n";
  }
  return out.str();
}

nlohmann::json SpanToJson(const Span& s) {
  nlohmann::json j = {{"from", s.from}, {"to", s.to}, {"label", s.label}};
  j["id"] = s.id ? nlohmann::json(*s.id) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json FailureToJson(const FailureReport& r) {
  nlohmann::json fragments = nlohmann::json::array();
  for (const Span& s : r.fragments.fragments) fragments.push_back(SpanToJson(s));
  nlohmann::json paths = nlohmann::json::array();
  for (const ChartPath& p : r.paths) {
    nlohmann::json path = nlohmann::json::array();
    for (const Span& s : p.edges) path.push_back(SpanToJson(s));
    paths.push_back(std::move(path));
  }
  return {{"fragments", std::move(fragments)},
          {"covered", r.fragments.covered},
          {"total", r.fragments.total},
          {"coverage", r.fragments.coverage()},
          {"paths", std::move(paths)}};
}

}  // namespace gramwb
