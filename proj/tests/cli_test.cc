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

#include <gtest/gtest.h>
#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "demo_fixture.h"
#include "gramwb/service.h"

namespace gramwb {
namespace {

namespace fs = std::filesystem;
using testing::DemoPath;

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gramwb");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("gramwb_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Write(const std::string& name, const std::string& text) {
    std::ofstream(dir_ / name) << text;
    return (dir_ / name).string();
  }

  std::vector<std::string> Demo(std::vector<std::string> rest) {
    std::vector<std::string> a = {DemoPath("demo.idlp"), DemoPath("demo.lex"), DemoPath("demo.ifr")};
    a.insert(a.end(), rest.begin(), rest.end());
    return a;
  }

  std::vector<std::string> Cmd(std::vector<std::string> head, std::vector<std::string> rest) {
    auto tail = Demo(std::move(rest));
    head.insert(head.end(), tail.begin(), tail.end());
    return head;
  }

  fs::path dir_;
};

TEST_F(CliTest, CheckDemoHasNoFindings) {
  CliRun r = Cli({"check", DemoPath("demo.idlp")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "no findings\n");
}

TEST_F(CliTest, CheckWarningsKeepExitZero) {
  std::string g = Write("rule1.idlp", "(1) S -> NP[X], VP[X] | X = [kas=nom].\n");
  CliRun r = Cli({"check", g});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("nonterminal 'NP' is used but never defined"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("nonterminal 'VP' is used but never defined"), std::string::npos);
  EXPECT_NE(r.out.find("rule1.idlp:1:"), std::string::npos);
}

TEST_F(CliTest, CheckErrorsExitOne) {
  std::string g = Write("lr.dcg", "S -> S, A.\nS -> A.\n");
  CliRun r = Cli({"check", g});
  EXPECT_EQ(r.code, kExitDiagnostics);
  EXPECT_NE(r.out.find("left-recursion"), std::string::npos) << r.out;

  CliRun syntax = Cli({"check", Write("bad.dcg", "S -> .\n")});
  EXPECT_EQ(syntax.code, kExitDiagnostics);
  EXPECT_NE(syntax.err.find("bad.dcg:1:"), std::string::npos) << syntax.err;
}

TEST_F(CliTest, ParseFeaturesMatchesGolden) {
  CliRun r = Cli(Cmd({"parse"}, {"der Hund schläft", "--format", "features"}));
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, ReadFile(fs::path(GRAMWB_TEST_DIR) / "golden" / "cli_parse_features.txt"));
  EXPECT_EQ(r.err, "");
}

TEST_F(CliTest, FailedParsePrintsFragments) {
  CliRun r = Cli(Cmd({"parse"}, {"Hund der schläft"}));
  EXPECT_EQ(r.code, kExitDiagnostics);
  EXPECT_NE(r.out.find("0 readings (chart)"), std::string::npos);
  EXPECT_NE(r.out.find("largest fragments (3/3 tokens covered): N[0,1]"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("shortest paths (3 edges):"), std::string::npos);
}

TEST_F(CliTest, TopDownTrace) {
  CliRun r = Cli({"parse", DemoPath("demo.dcg"), DemoPath("demo.lex"), DemoPath("demo.ifr"),
               "der Hund schläft", "--engine", "td", "--trace", "VP"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.rfind("  ENTRY VP[kas=nom] @2\n  EXIT VP[kas=nom] @2-3\n", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("1 reading (td)"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(Cli({}).code, kExitUsage);
  EXPECT_EQ(Cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(Cli({"check"}).code, kExitUsage);
  EXPECT_EQ(Cli({"check", DemoPath("demo.idlp"), "--colour"}).code, kExitUsage);
  EXPECT_EQ(Cli(Cmd({"parse"}, {"der Hund schläft", "--engine", "earley"})).code, kExitUsage);
  EXPECT_EQ(Cli(Cmd({"parse"}, {"der Hund schläft", "--format", "xml"})).code, kExitUsage);
  EXPECT_EQ(Cli({"check", DemoPath("absent.idlp")}).code, kExitUsage);
  CliRun help = Cli({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("parse"), std::string::npos);
}

TEST_F(CliTest, DomainErrorsGoToStderr) {
  CliRun r = Cli(Cmd({"parse"}, {"der Hund schläft", "--engine", "td"}));
  EXPECT_EQ(r.code, kExitDiagnostics);
  EXPECT_EQ(r.out, "");
  EXPECT_NE(r.err.find("formalism-mismatch"), std::string::npos) << r.err;

  std::string lex = Write("broken.lex", "der pos=det\n");
  CliRun bad = Cli({"parse", DemoPath("demo.idlp"), lex, DemoPath("demo.ifr"), "der"});
  EXPECT_EQ(bad.code, kExitDiagnostics);
  EXPECT_NE(bad.err.find("broken.lex:1:"), std::string::npos) << bad.err;
}

TEST_F(CliTest, Index) {
  CliRun r = Cli({"index", DemoPath("demo.idlp")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("AdjP (undefined)"), std::string::npos);
  EXPECT_NE(r.out.find("(1) S -> NP[X], VP[X]"), std::string::npos) << r.out;
}

TEST_F(CliTest, SuiteAndBaselines) {
  std::string store = (dir_ / "store").string();
  CliRun run = Cli(Cmd({"suite", "run"}, {"--dir", DemoPath("suite"), "--save", "--store", store}));
  EXPECT_EQ(run.code, kExitOk) << run.err;
  EXPECT_NE(run.out.find("total 40: 40 pass, 0 fail, 0 error"), std::string::npos) << run.out;

  CliRun again = Cli(Cmd({"suite", "run"},
                      {"--dir", DemoPath("suite"), "--compare", "--store", store, "--format", "json"}));
  EXPECT_EQ(again.code, kExitOk);
  EXPECT_TRUE(nlohmann::json::parse(again.out)["all_equal"].get<bool>());

  CliRun cmp = Cli(Cmd({"baseline", "compare"}, {"der Hund schläft", "--store", store}));
  EXPECT_EQ(cmp.code, kExitOk) << cmp.err;
  EXPECT_EQ(cmp.out.rfind("== der Hund schläft\n", 0), 0u);
  EXPECT_NE(cmp.out.find("summary: equal\n"), std::string::npos) << cmp.out;

  // A grammar that loses the PP attachment to the verb phrase.
  std::string text = ReadFile(DemoPath("demo.idlp"));
  std::size_t pos = text.find("(6) VP[kas=nom] -> V[val=trans], NPakk, PP.\n");
  ASSERT_NE(pos, std::string::npos);
  text.erase(pos, std::string("(6) VP[kas=nom] -> V[val=trans], NPakk, PP.\n").size());
  std::string g = Write("less.idlp", text);
  CliRun worse = Cli({"baseline", "compare", g, DemoPath("demo.lex"), DemoPath("demo.ifr"),
                   "der Mann sieht den Hund mit dem Fernglas", "--store", store});
  EXPECT_EQ(worse.code, kExitDiagnostics);
  EXPECT_NE(worse.out.find("-1 missing reading"), std::string::npos) << worse.out;
  EXPECT_NE(worse.err.find("fingerprint"), std::string::npos) << worse.err;

  CliRun absent = Cli(Cmd({"baseline", "compare"}, {"niemand schläft", "--store", store}));
  EXPECT_EQ(absent.code, kExitDiagnostics);
  EXPECT_NE(absent.err.find("no-baseline"), std::string::npos);
}

TEST_F(CliTest, CompareReadings) {
  CliRun r = Cli(Cmd({"compare"}, {"der Mann sieht den Hund mit dem Fernglas"}));
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.rfind("reading 1 vs reading 2: shape_diff", 0), 0u) << r.out;
  CliRun out_of_range = Cli(Cmd({"compare"}, {"der Hund schläft"}));
  EXPECT_EQ(out_of_range.code, kExitDiagnostics);
}

TEST_F(CliTest, ConfigFileSetsDefaults) {
  std::string conf = Write("wb.conf", "engine = td\nstore_dir = " + (dir_ / "s").string() + "\n");
  CliRun r = Cli({"--config", conf, "parse", DemoPath("demo.dcg"), DemoPath("demo.lex"),
               DemoPath("demo.ifr"), "der Hund schläft"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("(td)"), std::string::npos);
  CliRun bad = Cli({"--config", Write("bad.conf", "colour = red\n"), "check", DemoPath("demo.idlp")});
  EXPECT_EQ(bad.code, kExitDiagnostics);
  EXPECT_NE(bad.err.find("unknown-key"), std::string::npos);
}

// The command line and the service render a parse identically.
TEST_F(CliTest, ParseOutputEqualsServiceOutput) {
  Config c;
  c.store_dir = (dir_ / "store").string();
  Service service(c);
  int port = service.start("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  httplib::Client client("127.0.0.1", port);
  auto post = [&](const std::string& path, const nlohmann::json& body) {
    auto res = client.Post(std::string(kApiPrefix) + path, body.dump(), "application/json");
    EXPECT_TRUE(res && res->status == 200) << (res ? res->body : "no response");
    return res ? nlohmann::json::parse(res->body) : nlohmann::json();
  };

  struct Setup {
    std::string grammar, lexicon, rules, engine;
  };
  std::size_t compared = 0;
  for (const Setup& s : {Setup{"demo.idlp", "demo.lex", "demo.ifr", "chart"},
                         Setup{"demo.dcg", "demo.lex", "demo.ifr", "td"},
                         Setup{"demo.lfg", "lfg.lex", "lfg.ifr", "td"}}) {
    std::string sid = post("/sessions", nlohmann::json::object())["session"];
    post("/sessions/" + sid + "/grammar", {{"path", DemoPath(s.grammar)}});
    post("/sessions/" + sid + "/lexicon", {{"path", DemoPath(s.lexicon)}});
    post("/sessions/" + sid + "/rules", {{"path", DemoPath(s.rules)}});
    std::vector<std::string> sentences = testing::DemoSentences();
    if (s.grammar == "demo.lfg") sentences = {"der Hund sieht den Mann", "der Hund schläft"};
    for (const auto& sentence : sentences) {
      for (const char* format : {"tree", "features", "json"}) {
        CliRun cli = Cli({"parse", DemoPath(s.grammar), DemoPath(s.lexicon), DemoPath(s.rules), sentence,
                       "--engine", s.engine, "--format", format});
        nlohmann::json svc = post("/sessions/" + sid + "/parse",
                                  {{"sentence", sentence}, {"engine", s.engine}, {"format", format}});
        ASSERT_EQ(cli.out, svc["output"].get<std::string>()) << s.grammar << ": " << sentence << " " << format;
        EXPECT_EQ(cli.code == kExitOk, !svc["result"]["readings"].empty());
        ++compared;
      }
    }
  }
  EXPECT_GE(compared, 3u * 40 + 3u * 40 + 6);
}

}  // namespace
}  // namespace gramwb
