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

// Structure-sensitive entropy, joint and conditional entropy, mutual
// information and relative entropy. Each is the measure-weighted sum of the
// classical quantity evaluated on reduced alphabets.

#include <vector>

#include "itstruct/alphabet.hpp"
#include "itstruct/entropy.hpp"

namespace itstruct {

/// A distribution together with a partition structure on the same alphabet.
/// The structure carries no probabilities.
class StructuredAlphabet {
 public:
  StructuredAlphabet(Distribution p, PartitionStructure structure);

  const Distribution& distribution() const noexcept { return p_; }
  const PartitionStructure& structure() const noexcept { return structure_; }

 private:
  Distribution p_;
  PartitionStructure structure_;
};

/// A joint distribution on A x B with a structure on each factor.
class StructuredJoint {
 public:
  StructuredJoint(JointDistribution joint, PartitionStructure rows, PartitionStructure cols);

  const JointDistribution& joint() const noexcept { return joint_; }
  const PartitionStructure& row_structure() const noexcept { return rows_; }
  const PartitionStructure& col_structure() const noexcept { return cols_; }

  StructuredAlphabet row_marginal() const;
  StructuredAlphabet col_marginal() const;

  /// P_AB(i x j) for i in s_A, j in s_B; row-major |s_A| x |s_B|.
  std::vector<double> reduced_joint(const Partition& s_a, const Partition& s_b) const;

 private:
  JointDistribution joint_;
  PartitionStructure rows_;
  PartitionStructure cols_;
};

/// sum_s S(s) * H(P^s). Accepts materialized or streamed product structures.
template <class Structure>
double h_s(const Distribution& p, const Structure& structure) {
  if (p.size() != structure.universe_size()) {
    throw Error(ErrorKind::AlphabetMismatch, "distribution and structure sizes differ");
  }
  std::vector<double> terms;
  structure.for_each([&](const Partition& s, double measure) {
    terms.push_back(measure * entropy(reduced_masses(p, s)));
  });
  return pairwise_sum(terms);
}

inline double h_s(const StructuredAlphabet& x) { return h_s(x.distribution(), x.structure()); }

/// sum over (s_A, s_B) of S_A(s_A) * S_B(s_B) * H(reduced joint).
double h_s_joint(const StructuredJoint& j);

enum class Conditioning { AGivenB, BGivenA };

/// sum over (s_A, s_B) of S_A(s_A) * S_B(s_B) * H(reduced conditional).
/// A zero-mass conditioning component contributes 0.
double h_s_conditional(const StructuredJoint& j, Conditioning direction);

/// sum over (s_A, s_B) of S_A(s_A) * S_B(s_B) * I(P_A^{s_A}; P_B^{s_B}).
double i_s(const StructuredJoint& j);

/// sum_s S(s) * D(P^s || Q^s); +infinity when some reduced component has
/// Q^s(i) = 0 < P^s(i).
double d_kl_s(const StructuredAlphabet& x, const Distribution& q);

/// H(Q) - H(S) over the structured space. Throws NotNormalized.
double h_s_via_q(const StructuredAlphabet& x);

}  // namespace itstruct
