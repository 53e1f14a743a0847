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

#ifndef GRAMWB_DIAGNOSTIC_H_
#define GRAMWB_DIAGNOSTIC_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace gramwb {

enum class Severity { kError, kWarning };

struct SourceLocation {
  std::string file;
  int line = 0;
  int column = 0;
};

// A positioned message produced by any loader or evaluator.
struct Diagnostic {
  Severity severity = Severity::kError;
  std::string kind;  // short machine-readable tag, e.g. "lowercase-category"
  std::string message;
  SourceLocation location;
};

// "file:line:col: error: message"
std::string FormatDiagnostic(const Diagnostic& d);

bool HasErrors(const std::vector<Diagnostic>& diagnostics);

// Thrown for domain errors that have no natural "outcome" return value
// (unknown alias, engine/formalism mismatch, missing baseline, ...).
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

}  // namespace gramwb

#endif  // GRAMWB_DIAGNOSTIC_H_
