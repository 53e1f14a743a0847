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

// Derivation trees shared by both parsing engines. All node features of one
// tree live in a single binding environment, so instantiation made by a
// mother rule is visible on every daughter.

#ifndef GRAMWB_SRC_DERIVATION_H_
#define GRAMWB_SRC_DERIVATION_H_

#include <string>
#include <vector>

#include "gramwb/featstruct.h"
#include "gramwb/grammar.h"
#include "gramwb/results.h"

namespace gramwb::internal {

struct DerivNode {
  std::string label;
  Value features;  // a variable bound in the tree's env, so later unification shows here
  std::string word;
  bool terminal = false;
  std::size_t from = 0;
  std::size_t to = 0;
  std::vector<DerivNode> children;
  std::vector<FEquation> annotations;  // equations of the rule item this node filled
};

// Issues fresh variable names "_G<n>" for renaming apart.
class FreshNames {
 public:
  std::string next() { return "_G" + std::to_string(counter_++); }

  // Renames every variable of `values` and `env` consistently.
  void rename_apart(std::vector<Value*> values, Binding& env);
  void rename_apart(DerivNode& tree, Binding& env);

 private:
  std::size_t counter_ = 0;
};

// Closed environment over all features of `tree` plus `extra`.
Binding CloseOver(const DerivNode& tree, const std::vector<Value>& extra, const Binding& env);
Binding CloseOver(const std::vector<Value>& values, const Binding& env);

ParseTree ToParseTree(const DerivNode& tree, const Binding& env);

// Canonical text of several values rendered in one environment, so that
// sharing between them is part of the key.
std::string JointKey(const std::vector<Value>& values, const Binding& env);

// Skeleton (labels, words, spans) plus JointKey over all node features and
// `extra`.
std::string TreeKey(const DerivNode& tree, const Binding& env,
                    const std::vector<Value>& extra = {});

// True if a descendant with the same span as `tree` carries `label`.
bool SameSpanLabelBelow(const DerivNode& tree, const std::string& label);

// Wraps `v` in a variable bound in `env`. Node features are kept this way
// so that unification through a mother's item rebinds the node itself.
Value Rooted(Value v, Binding& env, FreshNames& names);

// A compiled rule with its equations applied, ready to be renamed apart for
// each use. `valid` is false when the equations themselves clash.
struct RuleTemplate {
  bool valid = true;
  Value lhs;
  std::vector<Value> items;
  Binding env;
};

RuleTemplate PrepareRule(const CompiledRule& rule);

// Fresh copy of `t` for one rule application.
RuleTemplate Instantiate(const RuleTemplate& t, FreshNames& names);

}  // namespace gramwb::internal

#endif  // GRAMWB_SRC_DERIVATION_H_
