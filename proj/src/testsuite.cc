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

#include "gramwb/testsuite.h"

#include <algorithm>
#include <chrono>
#include <charconv>
#include <filesystem>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "gramwb/lexicon.h"
#include "gramwb/textio.h"

namespace gramwb {
namespace {

namespace fs = std::filesystem;

constexpr std::string_view kHeader = "%PHENOMENON";

bool IsSpace(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string_view Trim(std::string_view s) {
  while (!s.empty() && IsSpace(s.front())) s.remove_prefix(1);
  while (!s.empty() && IsSpace(s.back())) s.remove_suffix(1);
  return s;
}

// Columns are 1-based byte offsets.
class ClassParser {
 public:
  explicit ClassParser(std::string_view path) : path_(path) {}

  ClassLoad Parse(std::string_view text) {
    TestClass c;
    c.path = path_;
    bool header = false;
    std::map<std::string, int> seen;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(start, end - start);
      ++line_no;
      start = end + 1;

      std::string_view body = Trim(line);
      if (body.empty() || body.substr(0, 2) == "//") continue;
      const int col = static_cast<int>(body.data() - line.data()) + 1;
      if (body.substr(0, kHeader.size()) == kHeader) {
        std::string name(Trim(body.substr(kHeader.size())));
        if (header) {
          Report(line_no, col, "duplicate-header", "second %PHENOMENON header ignored",
                 Severity::kWarning);
        } else if (!c.cases.empty()) {
          Report(line_no, col, "late-header", "%PHENOMENON must precede the sentences");
        } else if (name.empty()) {
          Report(line_no, col, "empty-phenomenon", "%PHENOMENON needs a name");
        } else {
          c.name = std::move(name);
        }
        header = true;
        continue;
      }
      if (body.front() == '%') {
        Report(line_no, col, "unknown-directive",
               "unknown directive '" + std::string(body.substr(0, body.find(' '))) + "'");
        continue;
      }
      std::optional<TestCase> tc = Case(body, line_no, col);
      if (!tc) continue;
      auto [it, fresh] = seen.emplace(tc->sentence, line_no);
      if (!fresh) {
        Report(line_no, col, "duplicate-sentence",
               "sentence repeats line " + std::to_string(it->second), Severity::kWarning);
      }
      c.cases.push_back(std::move(*tc));
    }
    if (c.cases.empty() && !HasErrors(diagnostics_)) {
      Report(1, 1, "empty-class", "suite file has no sentences", Severity::kWarning);
    }
    if (!header) {
      c.name = fs::path(path_).stem().string();
      Report(1, 1, "missing-header",
             "no %PHENOMENON header; class named '" + c.name + "' after the file",
             Severity::kWarning);
    }
    ClassLoad out;
    out.diagnostics = std::move(diagnostics_);
    if (!HasErrors(out.diagnostics)) out.test_class = std::move(c);
    return out;
  }

 private:
  std::optional<TestCase> Case(std::string_view body, int line_no, int col) {
    TestCase tc;
    tc.location = {path_, line_no, col};
    std::string_view rest = body;
    if (rest.front() == '*') {
      tc.good = false;
      rest = Trim(rest.substr(1));
    }
    // Tags run from the first word starting with '@' to the end.
    std::size_t at = std::string_view::npos;
    for (std::size_t i = 0; i < rest.size(); ++i) {
      if (rest[i] == '@' && (i == 0 || IsSpace(rest[i - 1]))) {
        at = i;
        break;
      }
    }
    if (at != std::string_view::npos) {
      for (const std::string& word : SplitSentence(rest.substr(at))) {
        if (word.size() < 2 || word[0] != '@') {
          Report(line_no, Column(body, word, col), "bad-tag", "tags are written @name, found '" + word + "'");
          return std::nullopt;
        }
        tc.tags.push_back(word.substr(1));
      }
      rest = Trim(rest.substr(0, at));
    }
    std::size_t bar = rest.find('|');
    if (bar != std::string_view::npos) {
      std::string_view count = Trim(rest.substr(bar + 1));
      std::size_t n = 0;
      auto [p, ec] = std::from_chars(count.data(), count.data() + count.size(), n);
      if (count.empty() || ec != std::errc() || p != count.data() + count.size()) {
        Report(line_no, col + static_cast<int>(rest.data() - body.data() + bar),
               "bad-count", "expected a reading count after '|', found '" + std::string(count) + "'");
        return std::nullopt;
      }
      tc.expected = n;
      rest = Trim(rest.substr(0, bar));
    }
    std::vector<std::string> words = SplitSentence(rest);
    if (words.empty()) {
      Report(line_no, col, "empty-sentence", "line has no sentence");
      return std::nullopt;
    }
    if (!tc.good && tc.expected && *tc.expected != 0) {
      Report(line_no, col, "bad-expectation",
             "an ungrammatical sentence cannot expect " + std::to_string(*tc.expected) + " readings");
      return std::nullopt;
    }
    // Normalize inner whitespace so sentences compare by tokens.
    for (const std::string& w : words) {
      if (!tc.sentence.empty()) tc.sentence += ' ';
      tc.sentence += w;
    }
    return tc;
  }

  static int Column(std::string_view body, const std::string& word, int col) {
    std::size_t i = body.find(word);
    return i == std::string_view::npos ? col : col + static_cast<int>(i);
  }

  void Report(int line, int col, std::string kind, std::string message,
              Severity severity = Severity::kError) {
    diagnostics_.push_back({severity, std::move(kind), std::move(message), {path_, line, col}});
  }

  std::string path_;
  std::vector<Diagnostic> diagnostics_;
};

std::string Pad(const std::string& s, std::size_t width) {
  // Width counts code points so umlauts do not shift columns.
  std::size_t cps = 0;
  for (unsigned char c : s) cps += (c & 0xC0) != 0x80;
  return cps >= width ? s : s + std::string(width - cps, ' ');
}

std::string Expectation(const TestCase& c) {
  std::string out = c.good ? "" : "*";
  if (c.expected) {
    out += std::to_string(*c.expected);
  } else if (c.good) {
    out += ">0";
  } else {
    out += "0";
  }
  return out;
}

std::string Baseline(const SuiteRow& r) {
  if (!r.verdict) return r.comparison.empty() ? "-" : r.comparison;
  if (*r.verdict == Verdict::kEqual) return "equal";
  return std::string(VerdictName(*r.verdict)) + " " + r.comparison;
}

std::string Millis(double ms) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(1) << ms;
  return out.str();
}

}  // namespace

ClassLoad ParseClass(std::string_view text, std::string_view path) {
  return ClassParser(path).Parse(text);
}

ClassLoad LoadClassFile(const std::string& path) {
  std::optional<std::string> text = ReadTextFile(path);
  if (!text) {
    ClassLoad out;
    out.diagnostics.push_back({Severity::kError, "unreadable", "cannot read suite file", {path, 0, 0}});
    return out;
  }
  return ParseClass(*text, path);
}

SuiteLoad LoadSuiteDirectory(const std::string& directory) {
  SuiteLoad out;
  std::error_code ec;
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(directory, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".suite") {
      files.push_back(entry.path().string());
    }
  }
  if (ec) {
    out.diagnostics.push_back(
        {Severity::kError, "unreadable", "cannot list suite directory", {directory, 0, 0}});
    return out;
  }
  std::sort(files.begin(), files.end());
  for (const std::string& f : files) {
    ClassLoad c = LoadClassFile(f);
    out.diagnostics.insert(out.diagnostics.end(), c.diagnostics.begin(), c.diagnostics.end());
    if (c.test_class) out.classes.push_back(std::move(*c.test_class));
  }
  return out;
}

std::vector<SelectedCase> AllCases(const std::vector<TestClass>& classes) {
  return SelectCases(classes, {});
}

std::vector<SelectedCase> SelectCases(const std::vector<TestClass>& classes,
                                      const std::set<std::string>& tags,
                                      std::vector<Diagnostic>* warnings) {
  std::set<std::string> known;
  for (const auto& c : classes) {
    for (const auto& tc : c.cases) known.insert(tc.tags.begin(), tc.tags.end());
  }
  std::vector<SelectedCase> out;
  for (const std::string& t : tags) {
    if (known.count(t)) continue;
    if (warnings) {
      warnings->push_back({Severity::kWarning, "unknown-tag", "no case is tagged @" + t, {}});
    }
    return out;
  }
  for (const auto& c : classes) {
    for (const auto& tc : c.cases) {
      bool all = std::all_of(tags.begin(), tags.end(), [&](const std::string& t) {
        return std::find(tc.tags.begin(), tc.tags.end(), t) != tc.tags.end();
      });
      if (all) out.push_back({c.name, tc});
    }
  }
  return out;
}

std::string_view OutcomeName(Outcome o) {
  switch (o) {
    case Outcome::kPass: return "pass";
    case Outcome::kFail: return "fail";
    case Outcome::kError: return "error";
  }
  return "error";
}

std::size_t SuiteRunTable::count(Outcome o) const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [o](const SuiteRow& r) { return r.outcome == o; }));
}

bool SuiteRunTable::all_equal() const {
  return std::all_of(rows.begin(), rows.end(), [](const SuiteRow& r) {
    return r.verdict && *r.verdict == Verdict::kEqual;
  });
}

Outcome Judge(const TestCase& c, const ParseResult& r, std::string* reason) {
  auto fail = [&](std::string why) {
    if (reason) *reason = std::move(why);
    return Outcome::kFail;
  };
  if (r.status != "complete") {
    if (reason) *reason = "parse ended with status " + r.status;
    return Outcome::kError;
  }
  const std::size_t n = r.readings.size();
  if (!c.good && n > 0) return fail("ungrammatical sentence has " + std::to_string(n) + " readings");
  if (c.good && !c.expected && n == 0) return fail("grammatical sentence has no reading");
  if (c.expected && n != *c.expected) {
    return fail("expected " + std::to_string(*c.expected) + " readings, got " + std::to_string(n));
  }
  if (reason) reason->clear();
  return Outcome::kPass;
}

SuiteRunTable RunSuite(const std::vector<SelectedCase>& cases, const SentenceParser& parse,
                       const SuiteOptions& options) {
  SuiteRunTable table;
  table.rows.resize(cases.size());
  std::size_t workers = options.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(1, cases.size()));

  std::atomic<std::size_t> next{0};
  std::mutex progress_mu;
  std::size_t done = 0;

  auto run_one = [&](std::size_t i) {
    SuiteRow& row = table.rows[i];
    row.index = i;
    row.phenomenon = cases[i].phenomenon;
    row.test = cases[i].test;
    auto t0 = std::chrono::steady_clock::now();
    bool parsed = false;
    if (options.cancel && options.cancel->load()) {
      row.status = "cancelled";
      row.reason = "sweep cancelled before this sentence";
    } else {
      try {
        row.result = parse(row.test.sentence);
        row.readings = row.result.readings.size();
        row.status = row.result.status;
        row.outcome = Judge(row.test, row.result, &row.reason);
        parsed = true;
      } catch (const Error& e) {
        row.status = e.kind();
        row.reason = e.what();
      } catch (const std::exception& e) {
        row.status = "exception";
        row.reason = e.what();
      }
    }
    row.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    if (parsed && options.compare_to) {
      if (!options.compare_to->contains(row.test.sentence)) {
        row.comparison = "no baseline";
      } else {
        try {
          LoadedBaseline b = options.compare_to->load(row.test.sentence, options.fingerprint);
          ResultComparison c = CompareResults(b.result, row.result);
          row.verdict = c.overall;
          row.comparison = c.summary;
          for (const auto& w : b.warnings) row.comparison += "; " + w;
        } catch (const Error& e) {
          row.comparison = e.what();
        }
      }
    }
    if (parsed && options.save_to) options.save_to->save(row.result);

    std::lock_guard<std::mutex> lock(progress_mu);
    ++done;
    if (options.on_progress) options.on_progress({done, cases.size(), &row});
  };

  auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) run_one(i);
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return table;
}

std::string FormatSuiteTable(const SuiteRunTable& t) {
  std::size_t width = 8;
  for (const auto& r : t.rows) {
    std::size_t cps = 0;
    for (unsigned char c : r.test.sentence) cps += (c & 0xC0) != 0x80;
    width = std::max(width, cps + (r.test.good ? 0 : 2));
  }
  std::ostringstream out;
  out << Pad("#", 4) << Pad("sentence", width + 2) << Pad("exp", 5) << Pad("got", 5)
      << Pad("result", 8) << Pad("ms", 8) << "baseline\n";
  std::string phenomenon;
  for (const auto& r : t.rows) {
    if (r.phenomenon != phenomenon) {
      phenomenon = r.phenomenon;
      out << "-- " << phenomenon << "\n";
    }
    std::string sentence = (r.test.good ? "" : "* ") + r.test.sentence;
    out << Pad(std::to_string(r.index + 1), 4) << Pad(sentence, width + 2)
        << Pad(Expectation(r.test), 5)
        << Pad(r.outcome == Outcome::kError ? "-" : std::to_string(r.readings), 5)
        << Pad(std::string(OutcomeName(r.outcome)), 8) << Pad(Millis(r.elapsed_ms), 8)
        << Baseline(r);
    if (!r.reason.empty()) out << "  (" << r.reason << ")";
    out << "\n";
  }
  out << "total " << t.rows.size() << ": " << t.passed() << " pass, " << t.failed() << " fail, "
      << t.errors() << " error\n";
  return out.str();
}

std::string SuiteTableToTsv(const SuiteRunTable& t) {
  auto clean = [](std::string s) {
    std::replace(s.begin(), s.end(), '\t', ' ');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
  };
  std::ostringstream out;
  out << "index\tphenomenon\tsentence\tgood\texpected\treadings\toutcome\tstatus\tverdict\t"
         "comparison\telapsed_ms\treason\n";
  for (const auto& r : t.rows) {
    out << r.index + 1 << '\t' << clean(r.phenomenon) << '\t' << r.test.sentence << '\t'
        << (r.test.good ? "good" : "bad") << '\t'
        << (r.test.expected ? std::to_string(*r.test.expected) : "") << '\t' << r.readings << '\t'
        << OutcomeName(r.outcome) << '\t' << r.status << '\t'
        << (r.verdict ? std::string(VerdictName(*r.verdict)) : "") << '\t' << clean(r.comparison)
        << '\t' << Millis(r.elapsed_ms) << '\t' << clean(r.reason) << '\n';
  }
  return out.str();
}

nlohmann::json SuiteRowToJson(const SuiteRow& r) {
  nlohmann::json j = {{"index", r.index},
                      {"phenomenon", r.phenomenon},
                      {"sentence", r.test.sentence},
                      {"good", r.test.good},
                      {"tags", r.test.tags},
                      {"readings", r.readings},
                      {"outcome", OutcomeName(r.outcome)},
                      {"status", r.status},
                      {"reason", r.reason},
                      {"comparison", r.comparison},
                      {"elapsed_ms", r.elapsed_ms}};
  j["expected"] = r.test.expected ? nlohmann::json(*r.test.expected) : nlohmann::json(nullptr);
  j["verdict"] = r.verdict ? nlohmann::json(VerdictName(*r.verdict)) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json SuiteTableToJson(const SuiteRunTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) rows.push_back(SuiteRowToJson(r));
  return {{"rows", std::move(rows)},
          {"totals",
           {{"cases", t.rows.size()},
            {"pass", t.passed()},
            {"fail", t.failed()},
            {"error", t.errors()}}},
          {"all_equal", t.all_equal()}};
}

}  // namespace gramwb
