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

#ifndef MTDIST_ASSIGNMENT_HPP_
#define MTDIST_ASSIGNMENT_HPP_

#include <cstddef>
#include <utility>
#include <vector>

namespace mtdist {

// Dense n x m cost matrix, row major.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), entries_(rows * cols, fill) {}
  CostMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }
  CostMatrix Transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

struct Assignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // sorted by row
  double total_cost = 0.0;
  std::vector<std::size_t> unmatched_rows;
  std::vector<std::size_t> unmatched_cols;
};

// Minimum-weight maximum matching on the complete bipartite graph given by
// `cost` (Hungarian method, O(max(n, m)^3)). Rectangular inputs are padded
// to square with a sentinel cost. Among optimal matchings the lexicographically
// smallest (row, col) pair list is returned. An empty side yields an empty
// assignment. Throws kNonFinite on NaN or infinite entries.
Assignment solve_assignment(const CostMatrix& cost);

}  // namespace mtdist

#endif  // MTDIST_ASSIGNMENT_HPP_
