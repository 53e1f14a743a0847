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

// Parse results, the three-level tree comparison and the baseline store.

#ifndef GRAMWB_RESULTS_H_
#define GRAMWB_RESULTS_H_

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "gramwb/diagnostic.h"
#include "gramwb/featstruct.h"

namespace gramwb {

struct ParseTree {
  std::string label;
  Term features;
  std::string word;       // surface word of a lexical node
  bool terminal = false;  // literal terminal leaf; label == word
  std::size_t from = 0;
  std::size_t to = 0;
  std::vector<ParseTree> children;
  std::vector<std::string> annotations;  // LFG equations, display only

  std::size_t node_count() const;
  // Node at a child-index path, or nullptr.
  const ParseTree* at(const std::vector<std::size_t>& path) const;
};

struct Reading {
  ParseTree tree;
  std::optional<Term> fstructure;
};

struct ParseResult {
  std::string sentence;
  std::vector<std::string> tokens;
  std::vector<Reading> readings;
  std::string engine;       // "chart" | "td"
  std::string fingerprint;  // grammar fingerprint
  std::string timestamp;    // ISO 8601, UTC
  std::string status = "complete";  // complete | aborted | depth-limit | error
  std::vector<Diagnostic> diagnostics;
};

// Current time as "YYYY-MM-DDTHH:MM:SSZ".
std::string UtcTimestamp();

// Byte-stable text identifying a tree up to variable renaming. Engines use
// it to collapse identical derivations.
std::string CanonicalTreeKey(const ParseTree& t);

// ---------------------------------------------------------------------------
// Comparison

enum class Verdict { kEqual, kShapeDiff, kLabelDiff, kFeatureDiff, kReadingCountDiff };

std::string_view VerdictName(Verdict v);

struct ComparisonReport {
  Verdict verdict = Verdict::kEqual;
  std::vector<std::size_t> node_path;      // child indices from the root
  std::vector<std::string> feature_path;   // feature_diff only
  std::string left;   // left-side detail (arity, label or structure)
  std::string right;
};

// Work done per level, for checking that later levels are never inspected
// once an earlier one differs.
struct CompareProbe {
  std::size_t shape_visits = 0;
  std::size_t label_visits = 0;
  std::size_t feature_visits = 0;
};

// Shape (arity in preorder), then labels, then features (mutual
// subsumption per node); stops at the first level that differs.
ComparisonReport CompareTrees(const ParseTree& a, const ParseTree& b,
                              CompareProbe* probe = nullptr);

struct ResultComparison {
  std::vector<ComparisonReport> pairs;  // first min(n, m) readings by position
  std::size_t old_count = 0;
  std::size_t new_count = 0;
  Verdict overall = Verdict::kEqual;
  std::string summary;  // "equal", "+1 additional reading", "-2 missing readings"

  int count_delta() const {
    return static_cast<int>(new_count) - static_cast<int>(old_count);
  }
};

// Throws Error("sentence-mismatch") when the sentences differ.
ResultComparison CompareResults(const ParseResult& old_result, const ParseResult& new_result);

// Deterministic multi-line text of a comparison.
std::string FormatComparison(const ResultComparison& c);
std::string FormatReport(const ComparisonReport& r);

// ---------------------------------------------------------------------------
// Serialization and rendering

nlohmann::json TreeToJson(const ParseTree& t);
ParseTree TreeFromJson(const nlohmann::json& j);
nlohmann::json ResultToJson(const ParseResult& r);
ParseResult ResultFromJson(const nlohmann::json& j);
nlohmann::json ComparisonToJson(const ResultComparison& c);
nlohmann::json ReportToJson(const ComparisonReport& r);
nlohmann::json DiagnosticToJson(const Diagnostic& d);
Diagnostic DiagnosticFromJson(const nlohmann::json& j);

enum class TreeFormat { kAsciiTree, kIndentedFeatures, kJson };

std::optional<TreeFormat> ParseTreeFormat(std::string_view name);
std::string RenderTree(const ParseTree& t, TreeFormat format);

// ---------------------------------------------------------------------------
// Baselines

inline constexpr std::string_view kBaselineMagic = "GRAMWB-BASELINE 1";

struct LoadedBaseline {
  ParseResult result;
  std::vector<std::string> warnings;  // e.g. grammar fingerprint mismatch
};

// One canonical file per sentence, named after the hash of the sentence.
// Writes are serialized per sentence key; readers never see partial files.
class BaselineStore {
 public:
  explicit BaselineStore(std::string directory);

  const std::string& directory() const { return directory_; }
  std::string path_for(std::string_view sentence) const;

  void save(const ParseResult& r);
  bool contains(std::string_view sentence) const;
  // Throws Error("no-baseline") or Error("baseline-format").
  LoadedBaseline load(std::string_view sentence,
                      std::string_view current_fingerprint = "") const;

  // Canonical file contents for `r`.
  static std::string Serialize(const ParseResult& r);
  static ParseResult Deserialize(std::string_view text);

 private:
  std::mutex& lock_for(std::string_view sentence) const;

  std::string directory_;
  mutable std::mutex locks_guard_;
  mutable std::unordered_map<std::string, std::unique_ptr<std::mutex>> locks_;
};

}  // namespace gramwb

#endif  // GRAMWB_RESULTS_H_
