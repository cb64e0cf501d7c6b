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

// Concordance between a binary split and a partition, the induced distance
// between complementary letter sets, the grouping decomposition of H_S, and
// the distance between states induced by a structure.

#include <array>

#include "itstruct/alphabet.hpp"
#include "itstruct/notions.hpp"
#include "itstruct/ultrametric.hpp"

namespace itstruct {

/// t = {left, right}: disjoint, non-empty letter sets. When they do not
/// cover the alphabet, P and the structure are conditioned on their union.
struct BinarySplit {
  LetterSet left;
  LetterSet right;

  /// Sorts both sides and checks they are non-empty and disjoint.
  static BinarySplit make(LetterSet left, LetterSet right, std::size_t universe);
};

/// C(t, s) = [H(P^s) - H(P^{s∩t}) + H(P^t)] / H(P^t), in [0, 1].
/// Throws DegenerateSplit when H(P^t) = 0. The split must cover the alphabet.
double concordance(const BinarySplit& t, const Partition& s, const Distribution& p);

/// d(A_1, A_2) = sum_s S(s) * C(t, s).
double d_hat(const BinarySplit& t, const PartitionStructure& structure, const Distribution& p);

/// [H_S - sum_j P(A_j) * H_S(A_j, P|A_j, S|A_j)] / H(P^t).
double d_hat_via_entropy_gap(const BinarySplit& t, const PartitionStructure& structure,
                             const Distribution& p);

struct GroupingDecomposition {
  double merit;                 // d(A_1, A_2)
  double split_entropy;         // H(P^t)
  std::array<double, 2> mass;   // P(A_1), P(A_2)
  std::array<double, 2> parts;  // H_S(A_j, P|A_j, S|A_j)
  double h_s;                   // H_S(A, P, S)
};

/// H_S = merit * H(P^t) + sum_j P(A_j) * parts[j].
GroupingDecomposition grouping_decompose(const BinarySplit& t, const StructuredAlphabet& x);

/// D_S(a, b) = sum of measures of partitions separating a from b; 0 if a = b.
double state_distance(Letter a, Letter b, const PartitionStructure& structure);

/// D_S over all letter pairs.
DistanceMatrix state_distance_matrix(const PartitionStructure& structure);

}  // namespace itstruct
