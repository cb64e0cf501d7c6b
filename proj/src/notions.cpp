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

#include "itstruct/notions.hpp"

#include <cmath>
#include <limits>

namespace itstruct {

StructuredAlphabet::StructuredAlphabet(Distribution p, PartitionStructure structure)
    : p_(std::move(p)), structure_(std::move(structure)) {
  if (!(p_.alphabet() == structure_.alphabet())) {
    throw Error(ErrorKind::AlphabetMismatch, "distribution and structure alphabets differ");
  }
}

StructuredJoint::StructuredJoint(JointDistribution joint, PartitionStructure rows,
                                 PartitionStructure cols)
    : joint_(std::move(joint)), rows_(std::move(rows)), cols_(std::move(cols)) {
  if (!(joint_.rows() == rows_.alphabet()) || !(joint_.cols() == cols_.alphabet())) {
    throw Error(ErrorKind::AlphabetMismatch, "joint and structure alphabets differ");
  }
}

StructuredAlphabet StructuredJoint::row_marginal() const {
  return {joint_.row_marginal(), rows_};
}

StructuredAlphabet StructuredJoint::col_marginal() const {
  return {joint_.col_marginal(), cols_};
}

std::vector<double> StructuredJoint::reduced_joint(const Partition& s_a, const Partition& s_b) const {
  const std::size_t nb = s_b.size();
  std::vector<std::vector<double>> cells(s_a.size() * nb);
  for (Letter a = 0; a < joint_.row_count(); ++a) {
    for (Letter b = 0; b < joint_.col_count(); ++b) {
      cells[s_a.block_of(a) * nb + s_b.block_of(b)].push_back(joint_(a, b));
    }
  }
  std::vector<double> out;
  out.reserve(cells.size());
  for (const auto& c : cells) out.push_back(pairwise_sum(c));
  return out;
}

namespace {

template <class F>
double over_partition_pairs(const StructuredJoint& j, F&& term) {
  std::vector<double> terms;
  for (const auto& [s_a, m_a] : j.row_structure().entries()) {
    for (const auto& [s_b, m_b] : j.col_structure().entries()) {
      const double weight = m_a * m_b;
      if (weight == 0.0) continue;
      terms.push_back(weight * term(j.reduced_joint(s_a, s_b), s_a.size(), s_b.size()));
    }
  }
  return pairwise_sum(terms);
}

}  // namespace

double h_s_joint(const StructuredJoint& j) {
  return over_partition_pairs(j, [](const std::vector<double>& r, std::size_t rows, std::size_t cols) {
    return joint_entropy(r, rows, cols);
  });
}

double h_s_conditional(const StructuredJoint& j, Conditioning direction) {
  return over_partition_pairs(j, [&](const std::vector<double>& r, std::size_t rows, std::size_t cols) {
    return direction == Conditioning::AGivenB ? conditional_entropy_rows_given_cols(r, rows, cols)
                                              : conditional_entropy_cols_given_rows(r, rows, cols);
  });
}

double i_s(const StructuredJoint& j) {
  return over_partition_pairs(j, [](const std::vector<double>& r, std::size_t rows, std::size_t cols) {
    return mutual_information(r, rows, cols);
  });
}

double d_kl_s(const StructuredAlphabet& x, const Distribution& q) {
  if (!(x.distribution().alphabet() == q.alphabet())) {
    throw Error(ErrorKind::AlphabetMismatch, "relative entropy needs identical alphabets");
  }
  std::vector<double> terms;
  for (const auto& [s, measure] : x.structure().entries()) {
    if (measure == 0.0) continue;
    const double d = kl_divergence(reduced_masses(x.distribution(), s), reduced_masses(q, s));
    if (std::isinf(d)) return std::numeric_limits<double>::infinity();
    terms.push_back(measure * d);
  }
  return pairwise_sum(terms);
}

double h_s_via_q(const StructuredAlphabet& x) {
  if (!x.structure().is_normalized()) {
    throw Error(ErrorKind::NotNormalized, "Q is a probability only for a normalized structure");
  }
  const auto space = build_q(x.distribution(), x.structure());
  return entropy(space.masses()) - entropy(x.structure().measures());
}

}  // namespace itstruct
