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

#pragma once

// Classical information-theoretic kernels. All logarithms are base 2 and the
// conventions 0*log(0) = 0 and 0*log(0/q) = 0 apply throughout.

#include <cstddef>
#include <span>
#include <vector>

namespace itstruct {

/// Sum by recursive halving. Result depends only on the order of the input,
/// not on how the caller chunked the work.
double pairwise_sum(std::span<const double> values);

/// -p*log2(p), with 0 at p == 0.
double surprisal_term(double p);

/// Shannon entropy of a (not necessarily normalized) mass vector,
/// -sum p*log2(p).
double entropy(std::span<const double> probs);

/// h(p) = H(p, 1-p).
double binary_entropy(double p);

/// D(p || q). +infinity when some q[i] == 0 < p[i].
double kl_divergence(std::span<const double> p, std::span<const double> q);

// Joint kernels take a row-major rows x cols matrix.

double joint_entropy(std::span<const double> joint, std::size_t rows, std::size_t cols);

/// H(rows | cols) = H(joint) - H(col marginal). A zero-mass conditioning
/// column contributes 0.
double conditional_entropy_rows_given_cols(std::span<const double> joint, std::size_t rows,
                                           std::size_t cols);

/// H(cols | rows) = H(joint) - H(row marginal).
double conditional_entropy_cols_given_rows(std::span<const double> joint, std::size_t rows,
                                           std::size_t cols);

double mutual_information(std::span<const double> joint, std::size_t rows, std::size_t cols);

std::vector<double> row_marginal(std::span<const double> joint, std::size_t rows,
                                 std::size_t cols);
std::vector<double> col_marginal(std::span<const double> joint, std::size_t rows,
                                 std::size_t cols);

/// Conversion factor from bits to the given display base (2, e or 10).
double bits_to_base(double base);

}  // namespace itstruct
