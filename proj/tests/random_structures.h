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

// Seeded generators for property tests over feature structures.

#ifndef GRAMWB_TESTS_RANDOM_STRUCTURES_H_
#define GRAMWB_TESTS_RANDOM_STRUCTURES_H_

#include <random>
#include <string>
#include <vector>

#include "gramwb/featstruct.h"

namespace gramwb::testing {

class StructureGenerator {
 public:
  explicit StructureGenerator(std::uint64_t seed) : rng_(seed) {}

  // Random structure of nesting depth <= max_depth over a small vocabulary,
  // so independently generated structures overlap often enough to clash,
  // share variables and occasionally need the occurs check.
  Value Structure(int max_depth) {
    FeatureStructure fs;
    const int n = Uniform(0, 3);
    for (int i = 0; i < n; ++i) {
      fs.set(Pick(kFeatures), Leaf(max_depth - 1));
    }
    return Value::Fs(std::move(fs));
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  static constexpr const char* kFeatures[] = {"agr", "kas", "num", "subj"};
  static constexpr const char* kAtoms[] = {"nom", "akk", "sg"};
  static constexpr const char* kVars[] = {"X", "Y", "Z"};

  Value Leaf(int depth) {
    const int roll = Uniform(0, 9);
    if (depth > 0 && roll < 4) return Structure(depth);
    if (roll < 7) return Value::Atom(Pick(kAtoms));
    return Value::Var(Pick(kVars));
  }

  int Uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  template <std::size_t N>
  std::string Pick(const char* const (&arr)[N]) {
    return arr[Uniform(0, static_cast<int>(N) - 1)];
  }

  std::mt19937_64 rng_;
};

}  // namespace gramwb::testing

#endif  // GRAMWB_TESTS_RANDOM_STRUCTURES_H_
