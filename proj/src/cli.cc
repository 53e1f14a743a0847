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


#include "gramwb/cli.h"

#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gramwb/service.h"
#include "gramwb/workbench.h"

namespace gramwb {
namespace {

struct Inputs {
  std::string grammar;
  std::string lexicon;
  std::string rules;
};

struct Options {
  std::string config_path;
  Inputs in;
  std::string rules_only;  // check --rules
  bool no_rules = false;
  std::vector<std::string> sentences;
  std::string engine;
  std::vector<std::string> trace;
  std::string format = "tree";
  bool no_memo = false;
  std::vector<std::string> dirs;
  std::vector<std::string> tags;
  bool compare = false;
  bool save = false;
  bool progress = false;
  std::string store;
  std::size_t workers = 0;
  std::vector<std::size_t> readings{1, 2};
  std::string host = "127.0.0.1";
  int port = -1;
};

// Prints load diagnostics; false when any is an error.
bool Report(const LoadReport& r, std::ostream& err) {
  for (const auto& d : r.diagnostics) err << FormatDiagnostic(d) << "\n";
  return r.ok;
}

class Runner {
 public:
  Runner(Options& o, std::ostream& out, std::ostream& err) : o_(o), out_(out), err_(err) {}

  // Domain errors become diagnostics on the error stream.
  int Guard(const std::function<int()>& body) {
    try {
      return body();
    } catch (const Error& e) {
      err_ << "error: " << e.what() << " [" << e.kind() << "]\n";
      return kExitDiagnostics;
    }
  }

  bool LoadConfig() {
    ConfigLoad load = o_.config_path.empty() ? ConfigFromEnvironment() : LoadConfigFile(o_.config_path);
    for (const auto& d : load.diagnostics) err_ << FormatDiagnostic(d) << "\n";
    if (!load.config) return false;
    config_ = *load.config;
    if (!o_.store.empty()) config_.store_dir = o_.store;
    if (o_.workers > 0) config_.workers = o_.workers;
    return true;
  }

  // Grammar, lexicon and rules into a fresh session.
  std::shared_ptr<Session> Open(bool need_lexicon) {
    auto s = std::make_shared<Session>("cli", config_.engine);
    LoadReport g = s->load_grammar_file(o_.in.grammar);
    for (const auto& d : g.diagnostics) {
      // Without --engine the engine silently follows the formalism.
      if (d.kind != "engine-switched" || !o_.engine.empty()) err_ << FormatDiagnostic(d) << "\n";
    }
    if (!g.ok) return nullptr;
    if (need_lexicon) {
      if (!Report(s->load_lexicon_file(o_.in.lexicon), err_)) return nullptr;
      if (!Report(s->load_interface_rules_file(o_.in.rules), err_)) return nullptr;
    }
    if (!o_.engine.empty()) s->set_engine(*ParseEngine(o_.engine));
    return s;
  }

  int Check() {
    auto s = std::make_shared<Session>("cli", config_.engine);
    LoadReport r = s->load_grammar_file(o_.in.grammar);
    // Findings are printed below; only the syntax diagnostics here.
    for (const auto& d : r.diagnostics) {
      if (d.kind != "engine-switched") err_ << FormatDiagnostic(d) << "\n";
    }
    if (!s->grammar()) return kExitDiagnostics;
    std::string rules = o_.rules_only;
    if (rules.empty() && !o_.no_rules) {
      // A sibling `<stem>.ifr` supplies the preterminals by default.
      auto sibling = std::filesystem::path(o_.in.grammar).replace_extension(".ifr");
      if (std::filesystem::is_regular_file(sibling)) {
        rules = sibling.string();
        err_ << "note: preterminals from " << rules << "\n";
      }
    }
    if (!rules.empty() && !Report(s->load_interface_rules_file(rules), err_)) {
      return kExitDiagnostics;
    }
    CheckReport report = s->check();
    if (o_.format == "json") {
      out_ << CheckReportToJson(report).dump(2) << "\n";
    } else {
      out_ << FormatReport(report);
    }
    return report.has_errors() ? kExitDiagnostics : kExitOk;
  }

  int Index() {
    auto s = std::make_shared<Session>("cli", config_.engine);
    if (!Report(s->load_grammar_file(o_.in.grammar), err_) || !s->grammar()) return kExitDiagnostics;
    if (o_.format == "json") {
      out_ << GrammarIndexToJson(s->grammar()->grammar).dump(2) << "\n";
    } else {
      out_ << FormatGrammarIndex(s->grammar()->grammar);
    }
    return kExitOk;
  }

  int Parse() {
    auto s = Open(true);
    if (!s) return kExitDiagnostics;
    ParseOptions options;
    options.memo = !o_.no_memo;
    TraceFilter filter = Filter();
    options.trace = filter;
    ParseOutcome o = s->parse(o_.sentences.front(), options);
    auto format = *ParseOutputFormat(o_.format);
    if (format != OutputFormat::kJson) PrintTrace(o, filter);
    out_ << RenderParse(o, format);
    return o.result.readings.empty() ? kExitDiagnostics : kExitOk;
  }

  int CompareReadings() {
    auto s = Open(true);
    if (!s) return kExitDiagnostics;
    ParseOutcome o = s->parse(o_.sentences.front());
    const auto& rs = o.result.readings;
    std::size_t a = o_.readings[0], b = o_.readings[1];
    if (a < 1 || b < 1 || a > rs.size() || b > rs.size()) {
      err_ << "error: the sentence has " << rs.size() << " reading(s); cannot compare " << a << " and "
           << b << "\n";
      return kExitDiagnostics;
    }
    ComparisonReport r = CompareTrees(rs[a - 1].tree, rs[b - 1].tree);
    if (o_.format == "json") {
      out_ << ReportToJson(r).dump(2) << "\n";
    } else {
      out_ << "reading " << a << " vs reading " << b << ": " << FormatReport(r);
    }
    return kExitOk;
  }

  int SuiteRun() {
    auto s = Open(true);
    if (!s) return kExitDiagnostics;
    std::vector<std::string> dirs = o_.dirs.empty() ? config_.suite_dirs : o_.dirs;
    if (dirs.empty()) {
      err_ << "error: no suite directory given (--dir) or configured (suite_dirs)\n";
      return kExitUsage;
    }
    std::vector<TestClass> classes;
    bool ok = true;
    for (const auto& d : dirs) {
      SuiteLoad load = LoadSuiteDirectory(d);
      for (const auto& diag : load.diagnostics) {
        err_ << FormatDiagnostic(diag) << "\n";
        ok = ok && diag.severity != Severity::kError;
      }
      for (auto& c : load.classes) classes.push_back(std::move(c));
    }
    std::vector<Diagnostic> warnings;
    std::set<std::string> tags(o_.tags.begin(), o_.tags.end());
    auto cases = SelectCases(classes, tags, &warnings);
    for (const auto& w : warnings) err_ << FormatDiagnostic(w) << "\n";

    std::optional<BaselineStore> store;
    SuiteOptions options;
    options.workers = config_.workers;
    options.fingerprint = s->fingerprint();
    if (o_.compare || o_.save) {
      if (!Prepare()) return kExitDiagnostics;
      store.emplace(config_.store_dir);
      if (o_.compare) options.compare_to = &*store;
      if (o_.save) options.save_to = &*store;
    }
    if (o_.progress) {
      options.on_progress = [this](const SuiteProgress& p) {
        err_ << "[" << p.done << "/" << p.total << "] " << OutcomeName(p.row->outcome) << "  "
             << p.row->test.sentence << "\n";
      };
    }
    SuiteRunTable t = RunSuite(cases, s->sentence_parser(), options);
    if (o_.format == "json") {
      out_ << SuiteTableToJson(t).dump(2) << "\n";
    } else if (o_.format == "tsv") {
      out_ << SuiteTableToTsv(t);
    } else {
      out_ << FormatSuiteTable(t);
    }
    bool clean = ok && t.failed() == 0 && t.errors() == 0 && (!o_.compare || t.all_equal());
    return clean ? kExitOk : kExitDiagnostics;
  }

  int BaselineSave() {
    auto s = Open(true);
    if (!s || !Prepare()) return kExitDiagnostics;
    BaselineStore store(config_.store_dir);
    for (const auto& sentence : o_.sentences) {
      ParseOutcome o = s->parse(sentence);
      store.save(o.result);
      out_ << "saved " << o.result.readings.size() << " reading(s)  " << store.path_for(sentence) << "\n";
    }
    return kExitOk;
  }

  // Exit 1 when any sentence differs from its baseline.
  int BaselineCompare() {
    auto s = Open(true);
    if (!s) return kExitDiagnostics;
    BaselineStore store(config_.store_dir);
    bool all_equal = true;
    json rows = json::array();
    for (const auto& sentence : o_.sentences) {
      LoadedBaseline b = store.load(sentence, s->fingerprint());
      for (const auto& w : b.warnings) err_ << "warning: " << w << "\n";
      ParseOutcome o = s->parse(sentence);
      ResultComparison c = CompareResults(b.result, o.result);
      all_equal = all_equal && c.overall == Verdict::kEqual && c.count_delta() == 0;
      if (o_.format == "json") {
        json j = ComparisonToJson(c);
        j["sentence"] = sentence;
        rows.push_back(std::move(j));
      } else {
        out_ << "== " << sentence << "\n" << FormatComparison(c);
      }
    }
    if (o_.format == "json") out_ << rows.dump(2) << "\n";
    return all_equal ? kExitOk : kExitDiagnostics;
  }

  int Serve() {
    if (!Prepare()) return kExitDiagnostics;
    Service service(config_);
    int port = o_.port >= 0 ? o_.port : config_.port;
    out_ << "serving " << kApiPrefix << " on http://" << o_.host << ":" << port << std::endl;
    if (!service.run(o_.host, port)) {
      err_ << "error: cannot listen on " << o_.host << ":" << port << "\n";
      return kExitDiagnostics;
    }
    return kExitOk;
  }

 private:
  using json = nlohmann::json;

  TraceFilter Filter() const {
    TraceFilter f;
    for (const auto& label : o_.trace) {
      if (label == "*") return TraceFilter::All();
      f.labels.insert(label);
    }
    return f;
  }

  void PrintTrace(const ParseOutcome& o, const TraceFilter& filter) {
    if (o_.trace.empty()) return;
    if (o.chart) {
      ChartTraceFilter cf;
      if (!filter.all) cf.labels = filter.labels;
      for (const ChartEdge* e : ChartTrace(*o.chart, cf)) out_ << FormatEdge(*e, *o.chart) << "\n";
    }
    for (const auto& e : o.trace) out_ << FormatTraceEvent(e) << "\n";
    out_ << "\n";
  }

  bool Prepare() {
    std::vector<Diagnostic> diagnostics;
    bool ok = PrepareConfig(config_, diagnostics);
    for (const auto& d : diagnostics) err_ << FormatDiagnostic(d) << "\n";
    return ok;
  }

  Options& o_;
  std::ostream& out_;
  std::ostream& err_;
  Config config_;
};

void AddInputs(CLI::App* cmd, Options& o) {
  cmd->add_option("grammar", o.in.grammar, "grammar file (.idlp, .dcg, .lfg, .gpsg)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("lexicon", o.in.lexicon, "lexicon file")->required()->check(CLI::ExistingFile);
  cmd->add_option("rules", o.in.rules, "interface rules file")->required()->check(CLI::ExistingFile);
}

void AddEngine(CLI::App* cmd, Options& o) {
  cmd->add_option("--engine", o.engine, "parser engine")
      ->check(CLI::IsMember({"chart", "td", "topdown"}));
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"gramwb: grammar development workbench", "gramwb"};
  app.require_subcommand(1, 1);
  app.add_option("--config", o.config_path, "key=value configuration file (default: $GRAMWB_CONFIG)");

  auto* check = app.add_subcommand("check", "statically check a grammar");
  check->add_option("grammar", o.in.grammar, "grammar file")->required()->check(CLI::ExistingFile);
  check->add_option("--rules", o.rules_only, "interface rules whose categories count as defined")
      ->check(CLI::ExistingFile);
  check->add_flag("--no-rules", o.no_rules, "ignore a sibling .ifr file");
  check->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* index = app.add_subcommand("index", "list rule heads with defining and referencing rules");
  index->add_option("grammar", o.in.grammar, "grammar file")->required()->check(CLI::ExistingFile);
  index->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* parse = app.add_subcommand("parse", "parse one sentence");
  AddInputs(parse, o);
  parse->add_option("sentence", o.sentences, "sentence")->required()->expected(1);
  AddEngine(parse, o);
  parse->add_option("--trace", o.trace, "categories to trace, or *")->delimiter(',');
  parse->add_option("--format", o.format, "tree, features or json")
      ->check(CLI::IsMember({"tree", "features", "json"}));
  parse->add_flag("--no-memo", o.no_memo, "top-down parser without the substring table");

  auto* compare = app.add_subcommand("compare", "compare two readings of one sentence");
  AddInputs(compare, o);
  compare->add_option("sentence", o.sentences, "sentence")->required()->expected(1);
  AddEngine(compare, o);
  compare->add_option("--readings", o.readings, "two reading numbers, from 1")
      ->delimiter(',')
      ->expected(2);
  compare->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* suite = app.add_subcommand("suite", "test suites");
  suite->require_subcommand(1, 1);
  auto* suite_run = suite->add_subcommand("run", "parse every selected test case");
  AddInputs(suite_run, o);
  AddEngine(suite_run, o);
  suite_run->add_option("--dir", o.dirs, "suite directory (repeatable)");
  suite_run->add_option("--tag", o.tags, "select phenomena by tag (repeatable)")->delimiter(',');
  suite_run->add_flag("--compare", o.compare, "compare each result with its baseline");
  suite_run->add_flag("--save", o.save, "store each result as the new baseline");
  suite_run->add_option("--store", o.store, "baseline directory");
  suite_run->add_option("--workers", o.workers, "parallel parses");
  suite_run->add_flag("--progress", o.progress, "report each finished case on stderr");
  suite_run->add_option("--format", o.format, "table, tsv or json")
      ->check(CLI::IsMember({"table", "tsv", "json"}));

  auto* baseline = app.add_subcommand("baseline", "stored reference results");
  baseline->require_subcommand(1, 1);
  auto* save = baseline->add_subcommand("save", "parse and store results");
  auto* bcompare = baseline->add_subcommand("compare", "parse and compare with stored results");
  for (auto* cmd : {save, bcompare}) {
    AddInputs(cmd, o);
    AddEngine(cmd, o);
    cmd->add_option("sentences", o.sentences, "sentences")->required();
    cmd->add_option("--store", o.store, "baseline directory");
  }
  bcompare->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* serve = app.add_subcommand("serve", "run the local JSON service");
  serve->add_option("--port", o.port, "port (default: config, 8080)");
  serve->add_option("--host", o.host, "interface to bind");
  serve->add_option("--store", o.store, "baseline directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }
  if (o.format == "text" || o.format == "table") o.format = "tree";

  Runner run(o, out, err);
  if (!run.LoadConfig()) return kExitDiagnostics;
  return run.Guard([&]() -> int {
    if (*check) return run.Check();
    if (*index) return run.Index();
    if (*parse) return run.Parse();
    if (*compare) return run.CompareReadings();
    if (*suite_run) return run.SuiteRun();
    if (*save) return run.BaselineSave();
    if (*bcompare) return run.BaselineCompare();
    if (*serve) return run.Serve();
    return kExitUsage;
  });
}

}  // namespace gramwb
