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

#ifndef MTDIST_SYNTH_HPP_
#define MTDIST_SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mtdist/core.hpp"

namespace mtdist {

struct PerturbationSpec {
  std::size_t scalar_update_count = 0;
  double scalar_magnitude = 0.0;
  std::size_t rotation_count = 0;
  std::size_t deletion_count = 0;
  std::uint64_t seed = 0;
  // Labels in [1, protected_labels] are shared across an ensemble; deletions
  // only remove such leaves once no other leaf is left to remove.
  Label protected_labels = 0;
};

struct EnsembleSpec {
  std::size_t max_vertices = 49;
  std::size_t ensemble_size = 20;
  double label_fraction = 0.5;
  std::uint64_t seed = 0;
  // Optional, one entry per perturbed member (ensemble_size - 1 entries).
  // Empty selects the default escalating schedule.
  std::vector<PerturbationSpec> perturbation_schedule;
};

// Member m draws its unknown labels from (m + 1) * kUnknownLabelStride + 1 on,
// so unknown labels never collide across members.
inline constexpr Label kUnknownLabelStride = 1'000'000;

// Full binary tree grown from the root by expanding a uniformly chosen leaf
// into two children while the vertex budget allows. Edge lengths are uniform
// in (0, 1]; the scalar of a vertex is minus its distance to the root.
MergeTree random_base_tree(std::size_t max_vertices, std::uint64_t seed);

// Labels ceil(fraction * leaves) uniformly chosen leaves 1..k and every other
// leaf with a fresh label above `unknown_base`.
LabeledMergeTree assign_labels(const MergeTree& tree, double fraction,
                               std::uint64_t seed,
                               Label unknown_base = kUnknownLabelStride);

// Scalar updates, then rotations, then leaf deletions. Labels stay attached
// to their leaves.
LabeledMergeTree perturb(const LabeledMergeTree& lt, const PerturbationSpec& spec);

// Default schedule entry for member `member` (1-based) of a tree with
// `vertex_count` vertices and `leaf_count` leaves.
PerturbationSpec default_perturbation(std::size_t member, std::size_t vertex_count,
                                      std::size_t leaf_count, std::uint64_t seed);

// Base tree followed by ensemble_size - 1 perturbed copies with escalating
// perturbation. Deterministic in the spec.
std::vector<LabeledMergeTree> generate_ensemble(const EnsembleSpec& spec);

// "random_50", "random_100", "random_200", "random_500".
EnsembleSpec preset(const std::string& name, std::uint64_t seed);

}  // namespace mtdist

#endif  // MTDIST_SYNTH_HPP_
