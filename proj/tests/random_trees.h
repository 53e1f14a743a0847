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

// Random parse trees and single seeded mutations of them. The mutation
// record is the oracle for what a comparison must report.

#ifndef GRAMWB_TESTS_RANDOM_TREES_H_
#define GRAMWB_TESTS_RANDOM_TREES_H_

#include <random>
#include <string>
#include <vector>

#include "gramwb/results.h"
#include "random_structures.h"

namespace gramwb::testing {

struct Mutation {
  Verdict kind = Verdict::kEqual;
  std::vector<std::size_t> node_path;
  std::vector<std::string> feature_path;  // feature mutations only
};

class TreeGenerator {
 public:
  explicit TreeGenerator(std::uint64_t seed) : rng_(seed), structures_(seed ^ 0x9e3779b9u) {}

  ParseTree Tree(int max_depth) {
    ParseTree t;
    t.label = Pick(kLabels);
    t.features = Term{structures_.Structure(2), {}};
    int arity = max_depth > 0 ? Uniform(0, 3) : 0;
    for (int i = 0; i < arity; ++i) t.children.push_back(Tree(max_depth - 1));
    if (t.children.empty()) t.word = Pick(kWords);
    return t;
  }

  // Applies one mutation of a random kind at a random node.
  Mutation Mutate(ParseTree& t) {
    std::vector<std::vector<std::size_t>> nodes;
    std::vector<std::size_t> path;
    Collect(t, path, nodes);
    Mutation m;
    m.node_path = nodes[static_cast<std::size_t>(Uniform(0, static_cast<int>(nodes.size()) - 1))];
    ParseTree& node = NodeAt(t, m.node_path);
    switch (Uniform(0, 2)) {
      case 0: {
        m.kind = Verdict::kShapeDiff;
        if (!node.children.empty() && Uniform(0, 1) == 0) {
          node.children.erase(node.children.begin() + Uniform(0, static_cast<int>(node.children.size()) - 1));
        } else {
          ParseTree leaf;
          leaf.label = Pick(kLabels);
          leaf.word = Pick(kWords);
          node.children.insert(node.children.begin() + Uniform(0, static_cast<int>(node.children.size())),
                               leaf);
        }
        break;
      }
      case 1: {
        m.kind = Verdict::kLabelDiff;
        std::string label;
        do {
          label = Pick(kLabels);
        } while (label == node.label);
        node.label = label;
        break;
      }
      default: {
        m.kind = Verdict::kFeatureDiff;
        FeatureStructure fs = node.features.value.fs();
        std::vector<std::string> atomic;
        for (const auto& [name, v] : fs.features()) {
          if (v.is_atom()) atomic.push_back(name);
        }
        if (!atomic.empty() && Uniform(0, 1) == 0) {
          const std::string& f = atomic[static_cast<std::size_t>(Uniform(0, static_cast<int>(atomic.size()) - 1))];
          fs.set(f, Value::Atom(fs.find(f)->name() + "x"));
          m.feature_path = {f};
        } else {
          fs.set("mutated", Value::Atom("yes"));
          m.feature_path = {"mutated"};
        }
        node.features.value = Value::Fs(std::move(fs));
        break;
      }
    }
    return m;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  static constexpr const char* kLabels[] = {"S", "NP", "VP", "Det", "N", "V", "PP"};
  static constexpr const char* kWords[] = {"der", "Hund", "schläft", "mit"};

  static void Collect(const ParseTree& t, std::vector<std::size_t>& path,
                      std::vector<std::vector<std::size_t>>& out) {
    out.push_back(path);
    for (std::size_t i = 0; i < t.children.size(); ++i) {
      path.push_back(i);
      Collect(t.children[i], path, out);
      path.pop_back();
    }
  }

  static ParseTree& NodeAt(ParseTree& t, const std::vector<std::size_t>& path) {
    ParseTree* n = &t;
    for (std::size_t i : path) n = &n->children[i];
    return *n;
  }

  int Uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  template <std::size_t N>
  std::string Pick(const char* const (&arr)[N]) {
    return arr[Uniform(0, static_cast<int>(N) - 1)];
  }

  std::mt19937_64 rng_;
  StructureGenerator structures_;
};

}  // namespace gramwb::testing

#endif  // GRAMWB_TESTS_RANDOM_TREES_H_
