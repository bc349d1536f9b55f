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

// Text and image formats.
//
// mtree (UTF-8, LF):
//
//   mtree 1
//   # comment
//   v <id> <scalar> [<label> ...]
//   e <child-id> <parent-id>
//
// Ids are arbitrary non-negative integers, remapped densely on load. A label
// of -1 marks an unknown leaf and is replaced by a fresh label.

#ifndef MTDIST_IO_HPP_
#define MTDIST_IO_HPP_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mtdist/core.hpp"

namespace mtdist {

// Fresh labels for "-1" entries are fresh_label_base + 1, + 2, ... Callers
// loading several files must give each its own base so that fresh labels
// never coincide across trees.
inline constexpr Label kDefaultFreshLabelBase = 1'000'000'000'000;

LabeledMergeTree parse_mtree(std::string_view text,
                             Label fresh_label_base = kDefaultFreshLabelBase);

// Canonical form: vertices in breadth-first order, scalars with 17
// significant digits.
std::string write_mtree(const LabeledMergeTree& lt);

LabeledMergeTree load_mtree(const std::string& path,
                            Label fresh_label_base = kDefaultFreshLabelBase);
void save_mtree(const LabeledMergeTree& lt, const std::string& path);

// Square matrix of pairwise values between named members. NaN marks a failed
// cell.
struct DistanceMatrix {
  std::vector<std::string> ids;
  std::vector<double> values;  // row major, ids.size()^2

  std::size_t size() const { return ids.size(); }
  double operator()(std::size_t i, std::size_t j) const {
    return values[i * ids.size() + j];
  }
  double& operator()(std::size_t i, std::size_t j) { return values[i * ids.size() + j]; }
};

// Shortest round-trip decimal form; "nan" for NaN. Locale independent.
std::string FormatDouble(double v);
// 17 significant digits.
std::string FormatDouble17(double v);

std::string matrix_csv(const DistanceMatrix& m);
void write_matrix_csv(const DistanceMatrix& m, const std::string& path);

struct Rgb {
  unsigned char r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

inline constexpr Rgb kHeuristicBetter{40, 90, 220};   // blue
inline constexpr Rgb kBaselineBetter{240, 200, 30};   // yellow
inline constexpr Rgb kEqual{150, 150, 150};           // gray
inline constexpr Rgb kFailedCell{200, 0, 0};          // red

struct Image {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<Rgb> pixels;  // row major

  Rgb at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }
};

// Linear grayscale, min -> white, max -> black. One pixel per cell.
Image heatmap(const DistanceMatrix& m);
// Blue where heuristic < baseline, yellow where heuristic > baseline, gray
// when equal within `tolerance`.
Image comparison_heatmap(const DistanceMatrix& heuristic,
                         const DistanceMatrix& baseline, double tolerance = 1e-9);

std::string encode_ppm(const Image& image);  // binary P6
void write_heatmap(const DistanceMatrix& m, const std::string& path);
void write_comparison_heatmap(const DistanceMatrix& heuristic,
                              const DistanceMatrix& baseline, const std::string& path);

void write_file(const std::string& path, std::string_view bytes);
std::string read_file(const std::string& path);

}  // namespace mtdist

#endif  // MTDIST_IO_HPP_
