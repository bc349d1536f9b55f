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

#include "mtdist/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mtdist/core.hpp"

namespace mtdist {

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols,
                       std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw Error(ErrorCode::kInvalidArgument, "cost matrix entry count mismatch");
  }
}

CostMatrix CostMatrix::Transposed() const {
  CostMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct Dual {
  std::vector<std::size_t> row_match;
  std::vector<double> u;
  std::vector<double> v;
};

// Shortest augmenting path Hungarian method on a square matrix. Returns a
// minimum cost perfect matching together with optimal dual potentials
// (reduced cost a(i,j) - u(i) - v(j) >= 0, zero on matched edges).
Dual Hungarian(const std::vector<double>& a, std::size_t n) {
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based with a virtual column 0, as in the classical formulation.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<bool> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = a[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  Dual dual;
  dual.row_match.assign(n, kNone);
  dual.u.assign(u.begin() + 1, u.end());
  dual.v.assign(v.begin() + 1, v.end());
  for (std::size_t j = 1; j <= n; ++j) dual.row_match[p[j] - 1] = j - 1;
  return dual;
}

// Walks the tight-edge subgraph to turn an optimal perfect matching into the
// lexicographically smallest optimal one. Every optimal matching uses only
// edges that are tight under an optimal dual, so it suffices to pick, row by
// row, the smallest tight column that still admits a perfect completion.
class LexRefiner {
 public:
  LexRefiner(std::vector<std::vector<std::size_t>> tight,
             std::vector<std::size_t> row_match)
      : tight_(std::move(tight)),
        row_match_(std::move(row_match)),
        col_match_(row_match_.size(), kNone),
        fixed_col_(row_match_.size(), false),
        visited_(row_match_.size(), false) {
    for (std::size_t i = 0; i < row_match_.size(); ++i) col_match_[row_match_[i]] = i;
  }

  std::vector<std::size_t> Run() {
    const auto n = row_match_.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (auto c : tight_[i]) {
        if (fixed_col_[c]) continue;
        if (row_match_[i] == c) break;
        if (Reroute(i, c)) break;
      }
      fixed_col_[row_match_[i]] = true;
    }
    return row_match_;
  }

 private:
  bool Reroute(std::size_t i, std::size_t c) {
    const auto r = col_match_[c];
    const auto c0 = row_match_[i];
    row_match_[i] = c;
    col_match_[c] = i;
    row_match_[r] = kNone;
    col_match_[c0] = kNone;
    fixed_col_[c] = true;
    std::fill(visited_.begin(), visited_.end(), false);
    if (Augment(r)) return true;
    fixed_col_[c] = false;
    row_match_[i] = c0;
    col_match_[c0] = i;
    row_match_[r] = c;
    col_match_[c] = r;
    return false;
  }

  bool Augment(std::size_t r) {
    for (auto c : tight_[r]) {
      if (fixed_col_[c] || visited_[c]) continue;
      visited_[c] = true;
      if (col_match_[c] == kNone || Augment(col_match_[c])) {
        row_match_[r] = c;
        col_match_[c] = r;
        return true;
      }
    }
    return false;
  }

  std::vector<std::vector<std::size_t>> tight_;
  std::vector<std::size_t> row_match_;
  std::vector<std::size_t> col_match_;
  std::vector<bool> fixed_col_;
  std::vector<bool> visited_;
};

}  // namespace

Assignment solve_assignment(const CostMatrix& cost) {
  const auto rows = cost.rows();
  const auto cols = cost.cols();
  Assignment out;
  double largest = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (!std::isfinite(cost(i, j))) {
        throw Error(ErrorCode::kNonFinite, "cost matrix has a non-finite entry");
      }
      largest = std::max(largest, std::abs(cost(i, j)));
    }
  }
  if (rows == 0 || cols == 0) {
    for (std::size_t i = 0; i < rows; ++i) out.unmatched_rows.push_back(i);
    for (std::size_t j = 0; j < cols; ++j) out.unmatched_cols.push_back(j);
    return out;
  }

  const auto n = std::max(rows, cols);
  const double sentinel = static_cast<double>(n) * largest + 1.0;
  std::vector<double> square(n * n, sentinel);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) square[i * n + j] = cost(i, j);
  }

  const auto dual = Hungarian(square, n);
  const double tol = 1e-9 * std::max(1.0, largest);
  std::vector<std::vector<std::size_t>> tight(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (square[i * n + j] - dual.u[i] - dual.v[j] <= tol) tight[i].push_back(j);
    }
    // The matched edge is tight by construction; keep it even if rounding
    // pushed its reduced cost past the tolerance.
    if (!std::binary_search(tight[i].begin(), tight[i].end(), dual.row_match[i])) {
      tight[i].insert(std::lower_bound(tight[i].begin(), tight[i].end(),
                                       dual.row_match[i]),
                      dual.row_match[i]);
    }
  }
  const auto match = LexRefiner(std::move(tight), dual.row_match).Run();

  std::vector<bool> col_used(cols, false);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto j = match[i];
    if (j < cols) {
      out.pairs.emplace_back(i, j);
      out.total_cost += cost(i, j);
      col_used[j] = true;
    } else {
      out.unmatched_rows.push_back(i);
    }
  }
  for (std::size_t j = 0; j < cols; ++j) {
    if (!col_used[j]) out.unmatched_cols.push_back(j);
  }
  return out;
}

}  // namespace mtdist
