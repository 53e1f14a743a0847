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

#ifndef GRAMWB_VALUE_SYNTAX_H_
#define GRAMWB_VALUE_SYNTAX_H_

#include <optional>
#include <string>
#include <vector>

#include "gramwb/diagnostic.h"
#include "gramwb/featstruct.h"
#include "gramwb/lexer.h"

namespace gramwb {

// Shared by every text format that embeds bracketed feature structures.
struct ValueSyntaxContext {
  std::string file;
  Binding* inline_bindings = nullptr;      // receives `V:value` bindings
  std::vector<Diagnostic>* diagnostics = nullptr;
  std::vector<std::string>* variables = nullptr;  // every variable seen
};

void AddDiagnostic(const ValueSyntaxContext& ctx, const Token& at,
                   std::string kind, std::string message,
                   Severity severity = Severity::kError);

// value := '[' body ']' | Var [':' value] | atom | 'quoted'
std::optional<Value> ParseValue(TokenCursor& cursor, const ValueSyntaxContext& ctx);

// Parses the part after an opening '['. The body is either a single value
// starting with a variable (`[X]`) or a feature list.
std::optional<Value> ParseBracketBody(TokenCursor& cursor,
                                      const ValueSyntaxContext& ctx);

}  // namespace gramwb

#endif  // GRAMWB_VALUE_SYNTAX_H_
