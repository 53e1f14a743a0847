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

// Feature structures with shared variables.
//
// A structure is an immutable tree of Values: atoms, variable references,
// or nested FeatureStructures. Variables get their values from an explicit
// Binding environment, so unification never mutates a published structure;
// it returns an extended environment instead. Two references to the same
// variable denote one shared value cell.

#ifndef GRAMWB_FEATSTRUCT_H_
#define GRAMWB_FEATSTRUCT_H_

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gramwb/diagnostic.h"

namespace gramwb {

class FeatureStructure;

class Value {
 public:
  // The empty structure [].
  Value();

  static Value Atom(std::string name);
  static Value Var(std::string name);
  static Value Fs(FeatureStructure fs);

  bool is_atom() const { return rep_.index() == 0; }
  bool is_var() const { return rep_.index() == 1; }
  bool is_fs() const { return rep_.index() == 2; }

  // Atom text or variable name. Empty for structures.
  const std::string& name() const;
  const FeatureStructure& fs() const;

  // Structural identity (variable names compared literally).
  friend bool operator==(const Value& a, const Value& b);

 private:
  struct AtomRep {
    std::string name;
  };
  struct VarRep {
    std::string name;
  };
  std::variant<AtomRep, VarRep, std::shared_ptr<const FeatureStructure>> rep_;
};

class FeatureStructure {
 public:
  using Map = std::map<std::string, Value, std::less<>>;

  FeatureStructure() = default;
  explicit FeatureStructure(Map features) : features_(std::move(features)) {}

  const Map& features() const { return features_; }
  bool empty() const { return features_.empty(); }
  std::size_t size() const { return features_.size(); }
  const Value* find(std::string_view name) const;

  void set(std::string name, Value value);

  friend bool operator==(const FeatureStructure& a, const FeatureStructure& b) {
    return a.features_ == b.features_;
  }

 private:
  Map features_;
};

// Variable name -> value cell.
class Binding {
 public:
  using Map = std::map<std::string, Value, std::less<>>;

  const Value* lookup(std::string_view var) const;
  void bind(std::string var, Value value);
  bool empty() const { return cells_.empty(); }
  std::size_t size() const { return cells_.size(); }
  const Map& cells() const { return cells_; }

  // Adds every cell of `other`; names must be disjoint from this binding's.
  void merge_disjoint(const Binding& other);

 private:
  Map cells_;
};

// A structure together with the bindings of the variables it mentions.
// Parse results, lexical categories and saved baselines are Terms.
struct Term {
  Value value;
  Binding env;
};

// Follows variable chains. Returns the final non-variable value or the
// unbound variable at the end of the chain.
Value Deref(const Value& v, const Binding& env);

// Substitutes every bound variable; unbound variables remain.
Value Resolve(const Value& v, const Binding& env);

// Restricts `env` to the variables reachable from `v`, following chains.
Term Close(const Value& v, const Binding& env);

// Renames every variable in `v` through `rename`.
Value RenameVars(const Value& v,
                 const std::function<std::string(const std::string&)>& rename);
// Renames both the value and the binding cells consistently.
Term RenameVars(const Term& t,
                const std::function<std::string(const std::string&)>& rename);

// Collects variable names in first-occurrence (preorder, sorted features)
// order, without following bindings.
std::vector<std::string> CollectVars(const Value& v);

enum class UnifyStatus { kSuccess, kClash, kOccursCheck };

struct UnifyOutcome {
  UnifyStatus status = UnifyStatus::kSuccess;
  Value result;                    // valid on success
  Binding env;                     // extended env on success, input env otherwise
  std::vector<std::string> path;   // failing feature path on failure
  std::string detail;              // human-readable failure description

  explicit operator bool() const { return status == UnifyStatus::kSuccess; }
};

// Copying unification. On success the returned env extends `env`
// monotonically; on failure it equals `env`, and `path` is the first
// conflicting feature path in depth-first lexicographic order.
UnifyOutcome Unify(const Value& a, const Value& b, const Binding& env);

// In-place variant used by the parsers on scratch environments.
// On failure `env` is left in an unspecified state.
bool UnifyInto(const Value& a, const Value& b, Binding& env, Value* result = nullptr,
               std::vector<std::string>* failure_path = nullptr,
               UnifyStatus* status = nullptr);

// True iff every path/value (and every reentrancy) of `a` is present in `b`.
bool Subsumes(const Value& a, const Binding& env_a, const Value& b,
              const Binding& env_b);
inline bool Subsumes(const Term& a, const Term& b) {
  return Subsumes(a.value, a.env, b.value, b.env);
}
inline bool Subsumes(const Value& a, const Value& b) {
  return Subsumes(a, Binding{}, b, Binding{});
}

// Mutual subsumption, i.e. equality up to renaming of variables.
bool Isomorphic(const Term& a, const Term& b);

// First path (depth-first, lexicographic) at which the two structures
// differ, or nullopt when they are isomorphic.
std::optional<std::vector<std::string>> FirstDifference(const Term& a,
                                                        const Term& b);

enum class RenderStyle { kBracketed, kIndented };

// Canonical text. Features are sorted, variables are renamed V1, V2, ...
// in order of first appearance, and a variable bound to a structure and
// referenced more than once is written `Vn:[...]` at its first occurrence
// and `Vn` afterwards. Atom-valued sharing is not marked (atoms cannot be
// specialized further).
std::string Render(const Value& v, const Binding& env,
                   RenderStyle style = RenderStyle::kBracketed);
inline std::string Render(const Term& t,
                          RenderStyle style = RenderStyle::kBracketed) {
  return Render(t.value, t.env, style);
}

// Prints a value as written (variables keep their names, no resolution).
std::string RenderRaw(const Value& v);

// Parses the bracketed syntax `[f1=v1, f2=V, f3=V:[g=a]]`, a bare atom,
// or a variable. Inline `V:value` bindings go into the term's env.
struct TermParse {
  std::optional<Term> term;
  std::vector<Diagnostic> diagnostics;
};
TermParse ParseTerm(std::string_view text);

// Shorthand for tests and tools; throws Error on malformed input.
Term MustParseTerm(std::string_view text);

std::string JoinPath(const std::vector<std::string>& path);

}  // namespace gramwb

#endif  // GRAMWB_FEATSTRUCT_H_
