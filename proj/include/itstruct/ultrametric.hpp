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

// Ultrametric distances, the rooted trees they induce, banding, and four
// independent evaluations of ultrametric entropy H_U.

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "itstruct/alphabet.hpp"

namespace itstruct {

inline constexpr double kUltrametricTolerance = 1e-9;

class DistanceMatrix {
 public:
  /// Row-major n x n. Must be symmetric, non-negative, with zero diagonal.
  DistanceMatrix(AlphabetPtr alphabet, std::vector<double> values);

  /// D(a, b) = d for a != b.
  static DistanceMatrix uniform(AlphabetPtr alphabet, double d);

  const Alphabet& alphabet() const noexcept { return *alphabet_; }
  const AlphabetPtr& alphabet_ptr() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return alphabet_->size(); }
  double operator()(Letter a, Letter b) const { return values_[a * size() + b]; }
  const std::vector<double>& values() const noexcept { return values_; }

  double max_distance() const;
  bool is_normalized() const;

  /// A triple (a, b, c) with D(a,b) > max(D(a,c), D(b,c)) + tol, if any.
  std::optional<std::array<Letter, 3>> find_ultrametric_violation(
      double tol = kUltrametricTolerance) const;
  bool is_ultrametric(double tol = kUltrametricTolerance) const {
    return !find_ultrametric_violation(tol).has_value();
  }
  /// Triangle inequality violation, if any.
  std::optional<std::array<Letter, 3>> find_triangle_violation(double tol = 1e-9) const;

  DistanceMatrix restrict(const LetterSet& subset) const;

 private:
  AlphabetPtr alphabet_;
  std::vector<double> values_;
};

/// Expected distance between disjoint non-empty sets under P conditioned on
/// each set. A zero-mass set falls back to uniform weights over its letters.
double expected_distance(const DistanceMatrix& d, const Distribution& p, const LetterSet& b,
                         const LetterSet& c);

struct TreeNode {
  std::optional<std::size_t> parent;
  std::vector<std::size_t> children;
  double height = 0.0;
  /// Leaves under this node (A_i).
  LetterSet leaves;
  /// Set on leaf nodes only.
  std::optional<Letter> letter;

  bool is_leaf() const noexcept { return letter.has_value(); }
};

/// Rooted tree whose leaf-pair distance is the height of the least common
/// ancestor. Nodes are stored in preorder; the root is node 0.
class UltrametricTree {
 public:
  /// Validates heights (leaves 0, strictly decreasing towards the leaves
  /// except along pass-through chains) and the leaf/alphabet bijection.
  /// Single-child internal nodes are only accepted when `allow_pass_through`.
  UltrametricTree(AlphabetPtr alphabet, std::vector<TreeNode> nodes, std::size_t root,
                  bool allow_pass_through = false);

  const Alphabet& alphabet() const noexcept { return *alphabet_; }
  const AlphabetPtr& alphabet_ptr() const noexcept { return alphabet_; }
  std::size_t letter_count() const noexcept { return alphabet_->size(); }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  const TreeNode& node(std::size_t i) const { return nodes_.at(i); }
  static constexpr std::size_t root() noexcept { return 0; }
  std::size_t leaf_node(Letter a) const { return leaf_of_.at(a); }

  double root_height() const { return nodes_.front().height; }
  bool is_normalized() const;
  bool has_pass_through() const;

  /// L_i = height(parent(i)) - height(i); 0 for the root.
  double arc_length(std::size_t i) const;

  /// Leaf sets of the children of node i (the natural partition Y_i).
  std::vector<LetterSet> natural_partition(std::size_t i) const;

  /// Height of the least common ancestor of two leaves.
  double lca_height(Letter a, Letter b) const;
  DistanceMatrix distance_matrix() const;

  /// Every root-to-leaf path meets every internal height.
  bool is_banded() const;

  /// Distinct internal heights, descending.
  std::vector<double> internal_heights() const;

 private:
  AlphabetPtr alphabet_;
  std::vector<TreeNode> nodes_;
  std::vector<std::size_t> leaf_of_;
};

/// P_i for every node.
std::vector<double> node_masses(const UltrametricTree& tree, const Distribution& p);

/// The unique tree T_D. Distance levels within a relative 1e-9 share a level.
/// Letters at distance 0 stay distinct leaves under a height-0 node. Throws
/// NotUltrametric naming the violating triple.
UltrametricTree tree_from_distance(const DistanceMatrix& d);

/// Subtree over a letter subset, rebuilt from the restricted distances.
UltrametricTree restrict_tree(const UltrametricTree& tree, const LetterSet& subset);

/// Inserts pass-through nodes so every root-to-leaf path has a node at every
/// internal height. Idempotent.
UltrametricTree band(const UltrametricTree& tree);

/// Recursive definition: homogeneous base case d*H(P), otherwise the natural
/// partition's term plus the probability-weighted subtree terms.
double hu_recursive(const UltrametricTree& tree, const Distribution& p);

/// Sum over non-leaf nodes of P_i * height(i) * H(P^{Y_i}).
double hu_nodewise(const UltrametricTree& tree, const Distribution& p);

/// -sum over non-root nodes of L_i * P_i * log2(P_i).
double hu_arcwise(const UltrametricTree& tree, const Distribution& p);

struct Band {
  double height;   // t
  double measure;  // band thickness
  Partition partition;
};

/// Bands of the banded tree, lowest first. Zero-thickness bands are omitted.
std::vector<Band> bands(const UltrametricTree& tree);

/// Sum over bands of thickness * H(band partition).
double hu_bandwise(const UltrametricTree& tree, const Distribution& p);

/// Default evaluation (arc form).
inline double hu(const UltrametricTree& tree, const Distribution& p) {
  return hu_arcwise(tree, p);
}

/// The band stack as a partition structure. Throws NotNormalized unless the
/// root height is 1.
PartitionStructure to_partition_structure(const UltrametricTree& tree);

struct MinimalityCheck {
  double lhs;  // H_U(P, D)
  double rhs;  // H_U(P^Y, D^Y) + sum_j P(A_j) * H_U(P|A_j, D|A_j)
  double between_distance;  // D(A_1, A_2)
};

/// Both sides of the minimality inequality for a binary partition {A_1, A_2}.
/// Throws ZeroMassSide when either side carries no probability.
MinimalityCheck check_binary_partition_minimality(const UltrametricTree& tree,
                                                  const Distribution& p,
                                                  const LetterSet& first,
                                                  const LetterSet& second);

}  // namespace itstruct
