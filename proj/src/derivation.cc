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

#include "derivation.h"

#include <cstdio>
#include <unordered_map>

namespace gramwb::internal {
namespace {

void CollectFeatures(const DerivNode& t, std::vector<Value>& out) {
  out.push_back(t.features);
  for (const auto& c : t.children) CollectFeatures(c, out);
}

void Skeleton(const DerivNode& t, std::string& out) {
  out += t.label;
  out += t.terminal ? "'" : "|";
  out += t.word + "|" + std::to_string(t.from) + "-" + std::to_string(t.to);
  if (t.children.empty()) return;
  out += "(";
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (i) out += ";";
    Skeleton(t.children[i], out);
  }
  out += ")";
}

std::string SlotName(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "n%06zu", i);
  return buf;
}

template <typename Fn>
void ForEachNode(DerivNode& t, Fn&& fn) {
  fn(t);
  for (auto& c : t.children) ForEachNode(c, fn);
}

}  // namespace

void FreshNames::rename_apart(std::vector<Value*> values, Binding& env) {
  std::unordered_map<std::string, std::string> mapping;
  auto rename = [&](const std::string& v) {
    auto [it, inserted] = mapping.emplace(v, "");
    if (inserted) it->second = next();
    return it->second;
  };
  for (Value* v : values) *v = RenameVars(*v, rename);
  Binding renamed;
  for (const auto& [var, value] : env.cells()) renamed.bind(rename(var), RenameVars(value, rename));
  env = std::move(renamed);
}

void FreshNames::rename_apart(DerivNode& tree, Binding& env) {
  std::vector<Value*> values;
  ForEachNode(tree, [&](DerivNode& n) { values.push_back(&n.features); });
  rename_apart(std::move(values), env);
}

Binding CloseOver(const std::vector<Value>& values, const Binding& env) {
  FeatureStructure all;
  for (std::size_t i = 0; i < values.size(); ++i) all.set(SlotName(i), values[i]);
  return Close(Value::Fs(std::move(all)), env).env;
}

Binding CloseOver(const DerivNode& tree, const std::vector<Value>& extra, const Binding& env) {
  std::vector<Value> values = extra;
  CollectFeatures(tree, values);
  return CloseOver(values, env);
}

ParseTree ToParseTree(const DerivNode& tree, const Binding& env) {
  ParseTree t;
  t.label = tree.label;
  t.features = Close(Deref(tree.features, env), env);
  t.word = tree.word;
  t.terminal = tree.terminal;
  t.from = tree.from;
  t.to = tree.to;
  for (const auto& eq : tree.annotations) t.annotations.push_back(FormatFEquation(eq));
  for (const auto& c : tree.children) t.children.push_back(ToParseTree(c, env));
  return t;
}

std::string JointKey(const std::vector<Value>& values, const Binding& env) {
  FeatureStructure all;
  for (std::size_t i = 0; i < values.size(); ++i) all.set(SlotName(i), values[i]);
  return Render(Value::Fs(std::move(all)), env);
}

std::string TreeKey(const DerivNode& tree, const Binding& env, const std::vector<Value>& extra) {
  std::string out;
  Skeleton(tree, out);
  std::vector<Value> values = extra;
  CollectFeatures(tree, values);
  return out + "#" + JointKey(values, env);
}

bool SameSpanLabelBelow(const DerivNode& tree, const std::string& label) {
  for (const auto& c : tree.children) {
    if (c.from != tree.from || c.to != tree.to) continue;
    if (c.label == label || SameSpanLabelBelow(c, label)) return true;
  }
  return false;
}

Value Rooted(Value v, Binding& env, FreshNames& names) {
  std::string var = names.next();
  env.bind(var, std::move(v));
  return Value::Var(std::move(var));
}

RuleTemplate PrepareRule(const CompiledRule& rule) {
  RuleTemplate t;
  // Grammar variables cannot start with '_', so the name is private.
  t.lhs = Value::Var("_M");
  t.env.bind("_M", rule.lhs.features);
  for (const auto& item : rule.items) t.items.push_back(item.features);
  for (const auto& eq : rule.equations) {
    if (!UnifyInto(Value::Var(eq.variable), eq.value, t.env)) {
      t.valid = false;
      return t;
    }
  }
  return t;
}

RuleTemplate Instantiate(const RuleTemplate& t, FreshNames& names) {
  RuleTemplate out = t;
  std::vector<Value*> values{&out.lhs};
  for (auto& v : out.items) values.push_back(&v);
  names.rename_apart(std::move(values), out.env);
  return out;
}

}  // namespace gramwb::internal
