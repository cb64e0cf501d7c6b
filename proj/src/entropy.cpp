// Copyright 2026 The itstruct Authors
//
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

#include "itstruct/entropy.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace itstruct {

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kBlock = 8;
  if (values.size() <= kBlock) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double surprisal_term(double p) {
  if (p <= 0.0) return 0.0;
  return -p * std::log2(p);
}

double entropy(std::span<const double> probs) {
  std::vector<double> terms;
  terms.reserve(probs.size());
  for (double p : probs) terms.push_back(surprisal_term(p));
  return pairwise_sum(terms);
}

double binary_entropy(double p) { return surprisal_term(p) + surprisal_term(1.0 - p); }

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  assert(p.size() == q.size());
  std::vector<double> terms;
  terms.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    terms.push_back(p[i] * std::log2(p[i] / q[i]));
  }
  return std::max(0.0, pairwise_sum(terms));
}

std::vector<double> row_marginal(std::span<const double> joint, std::size_t rows,
                                 std::size_t cols) {
  std::vector<double> out(rows, 0.0);
  for (std::size_t r = 0; r < rows; ++r) out[r] = pairwise_sum(joint.subspan(r * cols, cols));
  return out;
}

std::vector<double> col_marginal(std::span<const double> joint, std::size_t rows,
                                 std::size_t cols) {
  std::vector<double> out(cols, 0.0);
  std::vector<double> column(rows);
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) column[r] = joint[r * cols + c];
    out[c] = pairwise_sum(column);
  }
  return out;
}

double joint_entropy(std::span<const double> joint, [[maybe_unused]] std::size_t rows,
                     [[maybe_unused]] std::size_t cols) {
  assert(joint.size() == rows * cols);
  return entropy(joint);
}

double conditional_entropy_rows_given_cols(std::span<const double> joint, std::size_t rows,
                                           std::size_t cols) {
  // Sum over columns of P(col) * H(rows | col), evaluated term-wise so that
  // the result is exactly non-negative.
  std::vector<double> terms;
  terms.reserve(rows * cols);
  const auto pc = col_marginal(joint, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double pj = joint[r * cols + c];
      if (pj <= 0.0 || pc[c] <= 0.0) continue;
      terms.push_back(pj * std::log2(pc[c] / pj));
    }
  }
  return pairwise_sum(terms);
}

double conditional_entropy_cols_given_rows(std::span<const double> joint, std::size_t rows,
                                           std::size_t cols) {
  std::vector<double> terms;
  terms.reserve(rows * cols);
  const auto pr = row_marginal(joint, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double pj = joint[r * cols + c];
      if (pj <= 0.0 || pr[r] <= 0.0) continue;
      terms.push_back(pj * std::log2(pr[r] / pj));
    }
  }
  return pairwise_sum(terms);
}

double mutual_information(std::span<const double> joint, std::size_t rows, std::size_t cols) {
  const auto pr = row_marginal(joint, rows, cols);
  const auto pc = col_marginal(joint, rows, cols);
  std::vector<double> terms;
  terms.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double pj = joint[r * cols + c];
      if (pj <= 0.0) continue;
      terms.push_back(pj * std::log2(pj / (pr[r] * pc[c])));
    }
  }
  // Rounding can leave a tiny negative value for independent joints.
  return std::max(0.0, pairwise_sum(terms));
}

double bits_to_base(double base) {
  // H_b = H_2 * log_b(2)
  return std::log(2.0) / std::log(base);
}

}  // namespace itstruct
