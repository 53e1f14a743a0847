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

#include "gramwb/results.h"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <sstream>

#include "gramwb/grammar.h"
#include "gramwb/textio.h"

namespace gramwb {
namespace {

using json = nlohmann::json;

std::string FormatNodePath(const std::vector<std::size_t>& path) {
  std::string out = "[";
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(path[i]);
  }
  return out + "]";
}

std::string NodeLabel(const ParseTree& t) {
  if (t.terminal) return "'" + t.label + "'";
  if (t.word.empty()) return t.label;
  return t.label + " \"" + t.word + "\"";
}

// Preorder walk over both trees in lockstep, calling `visit` until it
// returns a report.
template <typename Visit>
std::optional<ComparisonReport> Lockstep(const ParseTree& a, const ParseTree& b,
                                         std::vector<std::size_t>& path, Visit&& visit) {
  if (auto r = visit(a, b, path)) return r;
  for (std::size_t i = 0; i < a.children.size() && i < b.children.size(); ++i) {
    path.push_back(i);
    auto r = Lockstep(a.children[i], b.children[i], path, visit);
    path.pop_back();
    if (r) return r;
  }
  return std::nullopt;
}

std::string Plural(std::size_t n, const char* word) {
  return std::to_string(n) + " " + word + (n == 1 ? "" : "s");
}

}  // namespace

std::size_t ParseTree::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.node_count();
  return n;
}

const ParseTree* ParseTree::at(const std::vector<std::size_t>& path) const {
  const ParseTree* node = this;
  for (std::size_t i : path) {
    if (i >= node->children.size()) return nullptr;
    node = &node->children[i];
  }
  return node;
}

std::string UtcTimestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string CanonicalTreeKey(const ParseTree& t) {
  std::string out = t.label;
  out += t.terminal ? "'" : "|";
  out += t.word + "|" + std::to_string(t.from) + "-" + std::to_string(t.to) + "|" +
         Render(t.features);
  if (!t.children.empty()) {
    out += "(";
    for (std::size_t i = 0; i < t.children.size(); ++i) {
      if (i) out += ";";
      out += CanonicalTreeKey(t.children[i]);
    }
    out += ")";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Comparison

std::string_view VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kEqual:
      return "equal";
    case Verdict::kShapeDiff:
      return "shape_diff";
    case Verdict::kLabelDiff:
      return "label_diff";
    case Verdict::kFeatureDiff:
      return "feature_diff";
    case Verdict::kReadingCountDiff:
      return "reading_count_diff";
  }
  return "equal";
}

ComparisonReport CompareTrees(const ParseTree& a, const ParseTree& b, CompareProbe* probe) {
  CompareProbe local;
  CompareProbe& p = probe ? *probe : local;
  std::vector<std::size_t> path;

  auto shape = Lockstep(a, b, path, [&](const ParseTree& x, const ParseTree& y,
                                        const std::vector<std::size_t>& at)
                                        -> std::optional<ComparisonReport> {
    ++p.shape_visits;
    if (x.children.size() == y.children.size()) return std::nullopt;
    return ComparisonReport{Verdict::kShapeDiff, at, {},
                            Plural(x.children.size(), "child"),
                            Plural(y.children.size(), "child")};
  });
  if (shape) return *shape;

  auto labels = Lockstep(a, b, path, [&](const ParseTree& x, const ParseTree& y,
                                         const std::vector<std::size_t>& at)
                                         -> std::optional<ComparisonReport> {
    ++p.label_visits;
    if (x.label == y.label && x.word == y.word && x.terminal == y.terminal) return std::nullopt;
    return ComparisonReport{Verdict::kLabelDiff, at, {}, NodeLabel(x), NodeLabel(y)};
  });
  if (labels) return *labels;

  auto features = Lockstep(a, b, path, [&](const ParseTree& x, const ParseTree& y,
                                           const std::vector<std::size_t>& at)
                                           -> std::optional<ComparisonReport> {
    ++p.feature_visits;
    if (Subsumes(x.features, y.features) && Subsumes(y.features, x.features)) {
      return std::nullopt;
    }
    std::vector<std::string> fpath = FirstDifference(x.features, y.features).value_or(
        std::vector<std::string>{});
    return ComparisonReport{Verdict::kFeatureDiff, at, fpath, Render(x.features),
                            Render(y.features)};
  });
  if (features) return *features;
  return ComparisonReport{};
}

ResultComparison CompareResults(const ParseResult& old_result, const ParseResult& new_result) {
  if (old_result.sentence != new_result.sentence) {
    throw Error("sentence-mismatch", "cannot compare results for different sentences: '" +
                                         old_result.sentence + "' and '" +
                                         new_result.sentence + "'");
  }
  ResultComparison c;
  c.old_count = old_result.readings.size();
  c.new_count = new_result.readings.size();
  const std::size_t n = std::min(c.old_count, c.new_count);
  for (std::size_t i = 0; i < n; ++i) {
    c.pairs.push_back(CompareTrees(old_result.readings[i].tree, new_result.readings[i].tree));
  }
  for (const auto& r : c.pairs) {
    if (r.verdict != Verdict::kEqual) {
      c.overall = r.verdict;
      break;
    }
  }
  if (c.overall == Verdict::kEqual && c.old_count != c.new_count) {
    c.overall = Verdict::kReadingCountDiff;
  }
  if (c.new_count > c.old_count) {
    c.summary = "+" + Plural(c.new_count - c.old_count, "additional reading");
  } else if (c.new_count < c.old_count) {
    c.summary = "-" + Plural(c.old_count - c.new_count, "missing reading");
  } else {
    c.summary = c.overall == Verdict::kEqual ? "equal" : "same number of readings";
  }
  return c;
}

std::string FormatReport(const ComparisonReport& r) {
  std::string out(VerdictName(r.verdict));
  if (r.verdict == Verdict::kEqual || r.verdict == Verdict::kReadingCountDiff) return out;
  out += " at " + FormatNodePath(r.node_path);
  if (r.verdict == Verdict::kFeatureDiff && !r.feature_path.empty()) {
    out += " (" + JoinPath(r.feature_path) + ")";
  }
  return out + ": " + r.left + " vs " + r.right;
}

std::string FormatComparison(const ResultComparison& c) {
  std::string out;
  for (std::size_t i = 0; i < c.pairs.size(); ++i) {
    out += "reading " + std::to_string(i + 1) + ": " + FormatReport(c.pairs[i]) + "\n";
  }
  out += "readings: " + std::to_string(c.old_count) + " saved, " +
         std::to_string(c.new_count) + " now\n";
  out += "summary: " + c.summary + "\n";
  out += "verdict: " + std::string(VerdictName(c.overall)) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// JSON

json TreeToJson(const ParseTree& t) {
  json j;
  j["label"] = t.label;
  j["features"] = Render(t.features);
  j["span"] = {t.from, t.to};
  if (!t.word.empty()) j["word"] = t.word;
  if (t.terminal) j["terminal"] = true;
  json children = json::array();
  for (const auto& c : t.children) children.push_back(TreeToJson(c));
  j["children"] = std::move(children);
  if (!t.annotations.empty()) j["annotations"] = t.annotations;
  return j;
}

ParseTree TreeFromJson(const json& j) {
  ParseTree t;
  t.label = j.at("label").get<std::string>();
  t.features = MustParseTerm(j.at("features").get<std::string>());
  t.from = j.at("span").at(0).get<std::size_t>();
  t.to = j.at("span").at(1).get<std::size_t>();
  t.word = j.value("word", "");
  t.terminal = j.value("terminal", false);
  for (const auto& c : j.at("children")) t.children.push_back(TreeFromJson(c));
  if (j.contains("annotations")) t.annotations = j["annotations"].get<std::vector<std::string>>();
  return t;
}

json DiagnosticToJson(const Diagnostic& d) {
  return json{{"severity", d.severity == Severity::kError ? "error" : "warning"},
              {"kind", d.kind},
              {"message", d.message},
              {"file", d.location.file},
              {"line", d.location.line},
              {"column", d.location.column}};
}

Diagnostic DiagnosticFromJson(const json& j) {
  Diagnostic d;
  d.severity = j.value("severity", "error") == "error" ? Severity::kError : Severity::kWarning;
  d.kind = j.value("kind", "");
  d.message = j.value("message", "");
  d.location.file = j.value("file", "");
  d.location.line = j.value("line", 0);
  d.location.column = j.value("column", 0);
  return d;
}

json ResultToJson(const ParseResult& r) {
  json readings = json::array();
  for (const auto& reading : r.readings) {
    json rj{{"tree", TreeToJson(reading.tree)}};
    if (reading.fstructure) rj["fstructure"] = Render(*reading.fstructure);
    readings.push_back(std::move(rj));
  }
  json diagnostics = json::array();
  for (const auto& d : r.diagnostics) diagnostics.push_back(DiagnosticToJson(d));
  return json{{"sentence", r.sentence},   {"tokens", r.tokens},
              {"readings", readings},     {"engine", r.engine},
              {"fingerprint", r.fingerprint}, {"timestamp", r.timestamp},
              {"status", r.status},       {"diagnostics", diagnostics}};
}

ParseResult ResultFromJson(const json& j) {
  ParseResult r;
  r.sentence = j.at("sentence").get<std::string>();
  r.tokens = j.at("tokens").get<std::vector<std::string>>();
  for (const auto& rj : j.at("readings")) {
    Reading reading{TreeFromJson(rj.at("tree")), std::nullopt};
    if (rj.contains("fstructure")) {
      reading.fstructure = MustParseTerm(rj["fstructure"].get<std::string>());
    }
    r.readings.push_back(std::move(reading));
  }
  r.engine = j.value("engine", "");
  r.fingerprint = j.value("fingerprint", "");
  r.timestamp = j.value("timestamp", "");
  r.status = j.value("status", "complete");
  if (j.contains("diagnostics")) {
    for (const auto& d : j["diagnostics"]) r.diagnostics.push_back(DiagnosticFromJson(d));
  }
  return r;
}

json ReportToJson(const ComparisonReport& r) {
  json j{{"verdict", VerdictName(r.verdict)}, {"text", FormatReport(r)}};
  if (r.verdict != Verdict::kEqual && r.verdict != Verdict::kReadingCountDiff) {
    j["node_path"] = r.node_path;
    j["left"] = r.left;
    j["right"] = r.right;
  }
  if (r.verdict == Verdict::kFeatureDiff) j["feature_path"] = r.feature_path;
  return j;
}

json ComparisonToJson(const ResultComparison& c) {
  json pairs = json::array();
  for (const auto& p : c.pairs) pairs.push_back(ReportToJson(p));
  return json{{"pairs", pairs},
              {"old_count", c.old_count},
              {"new_count", c.new_count},
              {"count_delta", c.count_delta()},
              {"verdict", VerdictName(c.overall)},
              {"summary", c.summary}};
}

// ---------------------------------------------------------------------------
// Rendering

std::optional<TreeFormat> ParseTreeFormat(std::string_view name) {
  if (name == "tree" || name == "ascii" || name == "ascii_tree") return TreeFormat::kAsciiTree;
  if (name == "features" || name == "indented_features") return TreeFormat::kIndentedFeatures;
  if (name == "json") return TreeFormat::kJson;
  return std::nullopt;
}

namespace {

void RenderAscii(const ParseTree& t, const std::string& prefix, bool last, bool root,
                 std::string& out) {
  if (root) {
    out += NodeLabel(t) + "\n";
  } else {
    out += prefix + (last ? "`-- " : "+-- ") + NodeLabel(t) + "\n";
  }
  std::string child_prefix = root ? "" : prefix + (last ? "    " : "|   ");
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    RenderAscii(t.children[i], child_prefix, i + 1 == t.children.size(), false, out);
  }
}

void RenderIndented(const ParseTree& t, std::size_t depth, std::string& out) {
  out += std::string(2 * depth, ' ') + NodeLabel(t);
  if (!t.terminal) out += " " + Render(t.features);
  out += "\n";
  for (const auto& c : t.children) RenderIndented(c, depth + 1, out);
}

}  // namespace

std::string RenderTree(const ParseTree& t, TreeFormat format) {
  std::string out;
  switch (format) {
    case TreeFormat::kAsciiTree:
      RenderAscii(t, "", true, true, out);
      break;
    case TreeFormat::kIndentedFeatures:
      RenderIndented(t, 0, out);
      break;
    case TreeFormat::kJson:
      out = TreeToJson(t).dump(2) + "\n";
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Baseline store

BaselineStore::BaselineStore(std::string directory) : directory_(std::move(directory)) {}

std::string BaselineStore::path_for(std::string_view sentence) const {
  return (std::filesystem::path(directory_) / (Fnv1aHex(sentence) + ".json")).string();
}

std::mutex& BaselineStore::lock_for(std::string_view sentence) const {
  std::lock_guard<std::mutex> guard(locks_guard_);
  auto& slot = locks_[std::string(sentence)];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

std::string BaselineStore::Serialize(const ParseResult& r) {
  return std::string(kBaselineMagic) + "\n" + ResultToJson(r).dump(2) + "\n";
}

ParseResult BaselineStore::Deserialize(std::string_view text) {
  std::size_t eol = text.find('\n');
  std::string_view first = text.substr(0, eol);
  if (first != kBaselineMagic) {
    if (first.rfind("GRAMWB-BASELINE ", 0) == 0) {
      throw Error("baseline-version", "unsupported baseline format version: '" +
                                          std::string(first) + "'");
    }
    throw Error("baseline-format", "not a baseline file");
  }
  try {
    return ResultFromJson(json::parse(text.substr(eol + 1)));
  } catch (const json::exception& e) {
    throw Error("baseline-format", std::string("malformed baseline: ") + e.what());
  }
}

void BaselineStore::save(const ParseResult& r) {
  std::lock_guard<std::mutex> guard(lock_for(r.sentence));
  if (!WriteTextFileAtomic(path_for(r.sentence), Serialize(r))) {
    throw Error("io", "cannot write baseline to " + path_for(r.sentence));
  }
}

bool BaselineStore::contains(std::string_view sentence) const {
  return std::filesystem::exists(path_for(sentence));
}

LoadedBaseline BaselineStore::load(std::string_view sentence,
                                   std::string_view current_fingerprint) const {
  std::optional<std::string> text;
  {
    std::lock_guard<std::mutex> guard(lock_for(sentence));
    text = ReadTextFile(path_for(sentence));
  }
  if (!text) {
    throw Error("no-baseline", "no baseline for sentence '" + std::string(sentence) + "'");
  }
  LoadedBaseline out{Deserialize(*text), {}};
  if (out.result.sentence != sentence) {
    throw Error("baseline-format", "baseline file belongs to another sentence");
  }
  if (!current_fingerprint.empty() && out.result.fingerprint != current_fingerprint) {
    out.warnings.push_back("fingerprint-mismatch: baseline was saved under grammar " +
                           out.result.fingerprint + ", current grammar is " +
                           std::string(current_fingerprint));
  }
  return out;
}

}  // namespace gramwb
