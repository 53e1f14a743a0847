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

// Phenomenon-class test suites and batch sweeps.
//
// A suite file holds one class:
//
//   %PHENOMENON verb group syntax
//   der Hund schläft | 1 @intransitive
//   * Hund der schläft | 0 @order
//
// A leading `*` marks an ungrammatical sentence, `| n` the expected reading
// count and `@tag` the annotations. `//` starts a comment line.

#ifndef GRAMWB_TESTSUITE_H_
#define GRAMWB_TESTSUITE_H_

#include <atomic>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gramwb/diagnostic.h"
#include "gramwb/results.h"

namespace gramwb {

struct TestCase {
  std::string sentence;
  bool good = true;
  std::optional<std::size_t> expected;  // 0 whenever given for a bad case
  std::vector<std::string> tags;        // without '@', in file order
  SourceLocation location;
};

struct TestClass {
  std::string name;
  std::string path;
  std::vector<TestCase> cases;
};

struct ClassLoad {
  std::optional<TestClass> test_class;  // absent iff an error was reported
  std::vector<Diagnostic> diagnostics;
};

// `path` names the class when the header is missing (file stem).
ClassLoad ParseClass(std::string_view text, std::string_view path);
ClassLoad LoadClassFile(const std::string& path);

struct SuiteLoad {
  std::vector<TestClass> classes;  // classes that loaded, by file name
  std::vector<Diagnostic> diagnostics;
};

// Every *.suite file of a directory.
SuiteLoad LoadSuiteDirectory(const std::string& directory);

struct SelectedCase {
  std::string phenomenon;
  TestCase test;
};

// Cases whose tags include every requested tag, in suite order. An unknown
// tag selects nothing and adds an "unknown-tag" warning.
std::vector<SelectedCase> SelectCases(const std::vector<TestClass>& classes,
                                      const std::set<std::string>& tags,
                                      std::vector<Diagnostic>* warnings = nullptr);

std::vector<SelectedCase> AllCases(const std::vector<TestClass>& classes);

// ---------------------------------------------------------------------------
// Sweeps

enum class Outcome { kPass, kFail, kError };

std::string_view OutcomeName(Outcome o);

struct SuiteRow {
  std::size_t index = 0;  // position in the sweep
  std::string phenomenon;
  TestCase test;
  Outcome outcome = Outcome::kError;
  std::size_t readings = 0;
  std::string status;  // engine status, or the error kind
  std::string reason;  // why the row failed or errored
  // Against the stored baseline; absent when none was compared.
  std::optional<Verdict> verdict;
  std::string comparison;  // summary, "no baseline", or the load warning
  double elapsed_ms = 0;
  ParseResult result;
};

struct SuiteRunTable {
  std::vector<SuiteRow> rows;  // one per case, in case order

  std::size_t count(Outcome o) const;
  std::size_t passed() const { return count(Outcome::kPass); }
  std::size_t failed() const { return count(Outcome::kFail); }
  std::size_t errors() const { return count(Outcome::kError); }
  // True when every compared row is equal to its baseline.
  bool all_equal() const;
};

struct SuiteProgress {
  std::size_t done = 0;
  std::size_t total = 0;
  const SuiteRow* row = nullptr;  // the row that just finished
};

// Parses one sentence. Must be safe to call from several threads; thrown
// exceptions become error rows.
using SentenceParser = std::function<ParseResult(const std::string& sentence)>;

struct SuiteOptions {
  std::size_t workers = 0;  // 0: hardware concurrency
  const BaselineStore* compare_to = nullptr;
  BaselineStore* save_to = nullptr;
  std::string fingerprint;  // current grammar, for baseline warnings
  // Called once per finished row, serialized, in completion order.
  std::function<void(const SuiteProgress&)> on_progress;
  const std::atomic<bool>* cancel = nullptr;  // unstarted rows become errors
};

// Parses every case independently; one failing sentence never stops the
// sweep.
SuiteRunTable RunSuite(const std::vector<SelectedCase>& cases, const SentenceParser& parse,
                       const SuiteOptions& options = {});

// Pass/fail of a finished parse against its expectation.
Outcome Judge(const TestCase& c, const ParseResult& r, std::string* reason = nullptr);

std::string FormatSuiteTable(const SuiteRunTable& t);
std::string SuiteTableToTsv(const SuiteRunTable& t);
nlohmann::json SuiteRowToJson(const SuiteRow& r);
nlohmann::json SuiteTableToJson(const SuiteRunTable& t);

}  // namespace gramwb

#endif  // GRAMWB_TESTSUITE_H_
