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


// Exhaustive segmentation oracle for shortest chart paths.

#ifndef GRAMWB_TESTS_FRAGMENT_ORACLE_H_
#define GRAMWB_TESTS_FRAGMENT_ORACLE_H_

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gramwb/diagnostics.h"

namespace gramwb::testing {

// Every segmentation of [0, n) into spans, where a position no span
// starts at may be crossed by one token.
inline void EnumerateSegmentations(const std::vector<Span>& spans,
                                   const std::vector<std::string>& tokens, std::size_t pos,
                                   std::vector<Span>& prefix, std::vector<std::vector<Span>>& out) {
  if (pos == tokens.size()) {
    out.push_back(prefix);
    return;
  }
  bool any = false;
  for (const Span& s : spans) {
    if (s.from != pos) continue;
    any = true;
    prefix.push_back(s);
    EnumerateSegmentations(spans, tokens, s.to, prefix, out);
    prefix.pop_back();
  }
  if (!any) {
    prefix.push_back({pos, pos + 1, tokens[pos], std::nullopt});
    EnumerateSegmentations(spans, tokens, pos + 1, prefix, out);
    prefix.pop_back();
  }
}

// The segmentations with the fewest units, as FormatSpan label lists.
inline std::set<std::vector<std::string>> MinimalSegmentations(const std::vector<Span>& spans,
                                                               const std::vector<std::string>& tokens,
                                                               std::size_t* best_length) {
  std::vector<std::vector<Span>> all;
  std::vector<Span> prefix;
  EnumerateSegmentations(spans, tokens, 0, prefix, all);
  std::size_t best = tokens.size() + 1;
  for (const auto& p : all) best = std::min(best, p.size());
  std::set<std::vector<std::string>> minimal;
  for (const auto& p : all) {
    if (p.size() != best) continue;
    std::vector<std::string> labels;
    for (const Span& s : p) labels.push_back(FormatSpan(s));
    minimal.insert(std::move(labels));
  }
  if (best_length) *best_length = best;
  return minimal;
}

}  // namespace gramwb::testing

#endif  // GRAMWB_TESTS_FRAGMENT_ORACLE_H_
