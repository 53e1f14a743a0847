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

// Loads the demo grammars and lexicon for engine tests.

#ifndef GRAMWB_TESTS_DEMO_FIXTURE_H_
#define GRAMWB_TESTS_DEMO_FIXTURE_H_

#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "gramwb/grammar.h"
#include "gramwb/lexicon.h"

namespace gramwb::testing {

inline std::string DemoPath(const std::string& name) {
  return std::string(GRAMWB_DATA_DIR) + "/demo/" + name;
}

inline Grammar MustGrammar(std::string_view text, Formalism formalism = Formalism::kIdlp) {
  GrammarParse p = ParseGrammar(text, "test.gr", formalism);
  if (!p.grammar) {
    throw std::runtime_error(p.diagnostics.empty() ? "grammar" : FormatDiagnostic(p.diagnostics[0]));
  }
  return *p.grammar;
}

inline Grammar DemoGrammar(const std::string& file = "demo.idlp") {
  GrammarParse p = LoadGrammarFile(DemoPath(file));
  if (!p.grammar) throw std::runtime_error("demo grammar does not load");
  return *p.grammar;
}

inline BoundLexicon DemoLexicon(const std::string& lexicon = "demo.lex",
                                const std::string& interface_rules = "demo.ifr") {
  LexiconLoad lex = LoadLexiconFile(DemoPath(lexicon));
  InterfaceRuleLoad rules = LoadInterfaceRuleFile(DemoPath(interface_rules));
  if (!lex.lexicon || !rules.rules) throw std::runtime_error("demo lexicon does not load");
  return BoundLexicon(std::make_shared<const Lexicon>(std::move(*lex.lexicon)),
                      std::make_shared<const InterfaceRuleSet>(std::move(*rules.rules)));
}

// Every sentence of the demo suite, without the star and expectations.
inline std::vector<std::string> DemoSentences() {
  std::vector<std::string> out;
  for (const char* file : {"01_intransitive", "02_transitive", "03_adjectives", "04_case",
                           "05_order", "06_pp", "07_passive", "08_subordinate"}) {
    std::ifstream in(DemoPath(std::string("suite/") + file + ".suite"));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '%' || line[0] == '/') continue;
      std::string s = line.substr(0, line.find('|'));
      if (s[0] == '*') s = s.substr(1);
      out.push_back(s);
    }
  }
  return out;
}

}  // namespace gramwb::testing

#endif  // GRAMWB_TESTS_DEMO_FIXTURE_H_
