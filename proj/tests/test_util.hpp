// Copyright 2026 The mtdist Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Shared helpers for tests: fixture loading and random tree construction
// that does not go through the synth module.

#ifndef MTDIST_TESTS_TEST_UTIL_HPP_
#define MTDIST_TESTS_TEST_UTIL_HPP_

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "mtdist/core.hpp"
#include "mtdist/io.hpp"

namespace mtdist::testing {

inline std::string FixturePath(const std::string& name) {
  return std::string(MTDIST_FIXTURES) + "/" + name;
}

inline LabeledMergeTree Fixture(const std::string& name) {
  return load_mtree(FixturePath(name));
}

// Random rooted tree with n vertices; vertex i > 0 hangs below a uniformly
// chosen earlier vertex, `step` below it. Scalars are integers when
// `integral`, which keeps every derived quantity exact.
inline RawTree RandomRawTree(std::mt19937_64& rng, std::size_t n, bool integral = false) {
  RawTree raw;
  raw.vertices.resize(n);
  raw.vertices[0].scalar = integral ? 0.0 : std::uniform_real_distribution<double>(-1, 1)(rng);
  for (std::size_t i = 1; i < n; ++i) {
    const auto p = static_cast<std::uint32_t>(
        std::uniform_int_distribution<std::size_t>(0, i - 1)(rng));
    const double step = integral
                            ? static_cast<double>(std::uniform_int_distribution<int>(1, 4)(rng))
                            : std::uniform_real_distribution<double>(0.05, 1.0)(rng);
    raw.vertices[i] = {raw.vertices[p].scalar - step, p};
  }
  return raw;
}

inline std::vector<std::uint32_t> RawLeaves(const RawTree& raw) {
  std::vector<bool> has_child(raw.vertices.size(), false);
  for (const auto& v : raw.vertices) {
    if (v.parent) has_child[*v.parent] = true;
  }
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < raw.vertices.size(); ++i) {
    if (!has_child[i]) out.push_back(i);
  }
  return out;
}

// A pair of trees sharing `known` labels 1..known. Tree a gets `unknown_a`
// extra leaves labeled from 1000, tree b `unknown_b` extra leaves from 2000.
struct TreePair {
  LabeledMergeTree a;
  LabeledMergeTree b;
};

inline LabeledMergeTree RandomLabeled(std::mt19937_64& rng, std::size_t known,
                                      std::size_t unknown, Label unknown_base,
                                      bool integral = false) {
  // Grow until the tree has exactly known + unknown leaves.
  const std::size_t leaves_wanted = known + unknown;
  for (;;) {
    const std::size_t n =
        std::uniform_int_distribution<std::size_t>(leaves_wanted + 1, 3 * leaves_wanted + 2)(rng);
    auto raw = RandomRawTree(rng, n, integral);
    auto leaves = RawLeaves(raw);
    if (leaves.size() != leaves_wanted) continue;
    std::shuffle(leaves.begin(), leaves.end(), rng);
    std::vector<std::pair<std::uint32_t, Label>> labels;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      const Label l = i < known ? static_cast<Label>(i + 1)
                                : unknown_base + static_cast<Label>(i - known + 1);
      labels.emplace_back(leaves[i], l);
    }
    return LabeledMergeTree::Build(raw, labels);
  }
}

inline TreePair RandomPair(std::mt19937_64& rng, std::size_t known, std::size_t unknown_a,
                           std::size_t unknown_b, bool integral = false) {
  return {RandomLabeled(rng, known, unknown_a, 1000, integral),
          RandomLabeled(rng, known, unknown_b, 2000, integral)};
}

// Applies x -> scale * x + shift to every scalar.
inline LabeledMergeTree Transformed(const LabeledMergeTree& lt, double scale, double shift) {
  auto raw = lt.tree().ToRaw();
  for (auto& v : raw.vertices) v.scalar = scale * v.scalar + shift;
  std::vector<std::pair<std::uint32_t, Label>> labels;
  for (const auto& [label, v] : lt.labels().entries()) labels.emplace_back(v.index, label);
  return LabeledMergeTree::Build(raw, labels);
}

}  // namespace mtdist::testing

#endif  // MTDIST_TESTS_TEST_UTIL_HPP_
