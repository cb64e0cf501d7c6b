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

#include "itstruct/ultrametric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "itstruct/entropy.hpp"

namespace itstruct {

namespace {

bool nearly_equal(double a, double b, double scale) {
  return std::abs(a - b) <= 1e-12 * std::max(1.0, scale);
}

struct UnionFind {
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
  std::vector<std::size_t> parent;
};

}  // namespace

// --- DistanceMatrix -------------------------------------------------------

DistanceMatrix::DistanceMatrix(AlphabetPtr alphabet, std::vector<double> values)
    : alphabet_(std::move(alphabet)), values_(std::move(values)) {
  if (!alphabet_) throw Error(ErrorKind::InvalidAlphabet, "missing alphabet");
  const std::size_t n = alphabet_->size();
  if (values_.size() != n * n) throw Error(ErrorKind::AlphabetMismatch, "distance matrix has wrong shape");
  for (std::size_t a = 0; a < n; ++a) {
    if (std::abs(values_[a * n + a]) > 1e-12) {
      throw Error(ErrorKind::NotUltrametric, "non-zero self distance at '" + alphabet_->name(a) + "'");
    }
    values_[a * n + a] = 0.0;
    for (std::size_t b = a + 1; b < n; ++b) {
      const double ab = values_[a * n + b];
      const double ba = values_[b * n + a];
      if (!std::isfinite(ab) || ab < 0.0 || !std::isfinite(ba) || ba < 0.0) {
        throw Error(ErrorKind::NotUltrametric, "distances must be finite and non-negative");
      }
      if (std::abs(ab - ba) > 1e-9) {
        throw Error(ErrorKind::NotUltrametric, "distance matrix is not symmetric at ('" +
                                                   alphabet_->name(a) + "','" +
                                                   alphabet_->name(b) + "')");
      }
      values_[b * n + a] = ab;
    }
  }
}

DistanceMatrix DistanceMatrix::uniform(AlphabetPtr alphabet, double d) {
  const std::size_t n = alphabet->size();
  std::vector<double> values(n * n, d);
  for (std::size_t a = 0; a < n; ++a) values[a * n + a] = 0.0;
  return DistanceMatrix(std::move(alphabet), std::move(values));
}

double DistanceMatrix::max_distance() const {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

bool DistanceMatrix::is_normalized() const {
  return std::abs(max_distance() - 1.0) <= kUltrametricTolerance;
}

std::optional<std::array<Letter, 3>> DistanceMatrix::find_ultrametric_violation(double tol) const {
  const std::size_t n = size();
  for (Letter a = 0; a < n; ++a) {
    for (Letter b = a + 1; b < n; ++b) {
      for (Letter c = 0; c < n; ++c) {
        if (c == a || c == b) continue;
        if ((*this)(a, b) > std::max((*this)(a, c), (*this)(b, c)) + tol) {
          return std::array<Letter, 3>{a, b, c};
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<std::array<Letter, 3>> DistanceMatrix::find_triangle_violation(double tol) const {
  const std::size_t n = size();
  for (Letter a = 0; a < n; ++a) {
    for (Letter b = a + 1; b < n; ++b) {
      for (Letter c = 0; c < n; ++c) {
        if ((*this)(a, b) > (*this)(a, c) + (*this)(c, b) + tol) return std::array<Letter, 3>{a, b, c};
      }
    }
  }
  return std::nullopt;
}

DistanceMatrix DistanceMatrix::restrict(const LetterSet& subset) const {
  const auto letters = make_letter_set(subset, size());
  std::vector<double> values;
  values.reserve(letters.size() * letters.size());
  for (Letter a : letters) {
    for (Letter b : letters) values.push_back((*this)(a, b));
  }
  return DistanceMatrix(sub_alphabet(*alphabet_, letters), std::move(values));
}

double expected_distance(const DistanceMatrix& d, const Distribution& p, const LetterSet& b,
                         const LetterSet& c) {
  if (b.empty() || c.empty()) throw Error(ErrorKind::EmptySubset, "expected distance needs non-empty sets");
  auto weights = [&](const LetterSet& set) {
    std::vector<double> w;
    w.reserve(set.size());
    const double total = p.mass(set);
    for (Letter a : set) {
      w.push_back(total > 0.0 ? p[a] / total : 1.0 / static_cast<double>(set.size()));
    }
    return w;
  };
  const auto wb = weights(b);
  const auto wc = weights(c);
  std::vector<double> terms;
  terms.reserve(b.size() * c.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t j = 0; j < c.size(); ++j) terms.push_back(wb[i] * wc[j] * d(b[i], c[j]));
  }
  return pairwise_sum(terms);
}

// --- UltrametricTree ------------------------------------------------------

UltrametricTree::UltrametricTree(AlphabetPtr alphabet, std::vector<TreeNode> nodes,
                                 std::size_t root, bool allow_pass_through)
    : alphabet_(std::move(alphabet)) {
  if (!alphabet_) throw Error(ErrorKind::InvalidAlphabet, "missing alphabet");
  if (root >= nodes.size()) throw Error(ErrorKind::NotUltrametric, "root index out of range");
  const std::size_t n = alphabet_->size();

  // Leaf sets, computed bottom-up from the child links.
  std::vector<LetterSet> leaves(nodes.size());
  std::vector<int> state(nodes.size(), 0);
  std::function<void(std::size_t)> collect = [&](std::size_t i) {
    if (state[i] == 1) throw Error(ErrorKind::NotUltrametric, "cycle in tree");
    if (state[i] == 2) throw Error(ErrorKind::NotUltrametric, "node reachable twice");
    state[i] = 1;
    const auto& node = nodes[i];
    if (node.letter) {
      if (!node.children.empty()) throw Error(ErrorKind::NotUltrametric, "leaf with children");
      if (*node.letter >= n) throw Error(ErrorKind::AlphabetMismatch, "leaf letter outside alphabet");
      leaves[i] = {*node.letter};
    } else {
      if (node.children.empty()) throw Error(ErrorKind::NotUltrametric, "internal node without children");
      if (node.children.size() == 1 && !allow_pass_through && !(i == root && n == 1)) {
        throw Error(ErrorKind::NotUltrametric, "internal node with a single child");
      }
      for (auto c : node.children) {
        collect(c);
        leaves[i].insert(leaves[i].end(), leaves[c].begin(), leaves[c].end());
      }
      std::sort(leaves[i].begin(), leaves[i].end());
    }
    state[i] = 2;
  };
  collect(root);
  const auto& all = leaves[root];
  if (all.size() != n || std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw Error(ErrorKind::AlphabetMismatch, "tree leaves must match the alphabet one-to-one");
  }

  // Re-emit in preorder with children ordered by their smallest letter.
  std::vector<std::size_t> order;
  std::function<void(std::size_t)> visit = [&](std::size_t i) {
    order.push_back(i);
    auto children = nodes[i].children;
    std::sort(children.begin(), children.end(),
              [&](std::size_t x, std::size_t y) { return leaves[x].front() < leaves[y].front(); });
    nodes[i].children = children;
    for (auto c : children) visit(c);
  };
  visit(root);
  std::vector<std::size_t> new_index(nodes.size());
  for (std::size_t k = 0; k < order.size(); ++k) new_index[order[k]] = k;

  nodes_.resize(order.size());
  leaf_of_.assign(n, 0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& src = nodes[order[k]];
    auto& dst = nodes_[k];
    dst.height = src.height;
    dst.letter = src.letter;
    dst.leaves = leaves[order[k]];
    for (auto c : src.children) dst.children.push_back(new_index[c]);
    if (dst.letter) leaf_of_[*dst.letter] = k;
  }
  // Parent links are rebuilt from the children so callers may leave them unset.
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    for (auto c : nodes_[k].children) nodes_[c].parent = k;
  }

  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const auto& node = nodes_[k];
    if (!std::isfinite(node.height) || node.height < 0.0) {
      throw Error(ErrorKind::NotUltrametric, "heights must be finite and non-negative");
    }
    if (node.is_leaf() && std::abs(node.height) > 1e-12) {
      throw Error(ErrorKind::NotUltrametric, "leaves must have height 0");
    }
    for (auto c : node.children) {
      const auto& child = nodes_[c];
      const bool ok = child.is_leaf() ? child.height <= node.height : child.height < node.height;
      if (!ok) throw Error(ErrorKind::NotUltrametric, "heights must decrease towards the leaves");
    }
  }
  for (auto& node : nodes_) {
    if (node.is_leaf()) node.height = 0.0;
  }
}

bool UltrametricTree::is_normalized() const {
  return std::abs(root_height() - 1.0) <= kUltrametricTolerance;
}

bool UltrametricTree::has_pass_through() const {
  return std::any_of(nodes_.begin(), nodes_.end(),
                     [](const TreeNode& n) { return !n.is_leaf() && n.children.size() == 1; });
}

double UltrametricTree::arc_length(std::size_t i) const {
  const auto& node = nodes_.at(i);
  if (!node.parent) return 0.0;
  return nodes_[*node.parent].height - node.height;
}

std::vector<LetterSet> UltrametricTree::natural_partition(std::size_t i) const {
  std::vector<LetterSet> out;
  for (auto c : nodes_.at(i).children) out.push_back(nodes_[c].leaves);
  return out;
}

double UltrametricTree::lca_height(Letter a, Letter b) const {
  if (a == b) return 0.0;
  std::size_t x = leaf_of_.at(a);
  (void)leaf_of_.at(b);
  while (true) {
    const auto& leaves = nodes_[x].leaves;
    if (std::binary_search(leaves.begin(), leaves.end(), b)) return nodes_[x].height;
    x = *nodes_[x].parent;
  }
}

DistanceMatrix UltrametricTree::distance_matrix() const {
  const std::size_t n = letter_count();
  std::vector<double> values(n * n, 0.0);
  for (Letter a = 0; a < n; ++a) {
    for (Letter b = a + 1; b < n; ++b) values[a * n + b] = values[b * n + a] = lca_height(a, b);
  }
  return DistanceMatrix(alphabet_, std::move(values));
}

std::vector<double> UltrametricTree::internal_heights() const {
  std::vector<double> heights;
  for (const auto& node : nodes_) {
    if (!node.is_leaf()) heights.push_back(node.height);
  }
  std::sort(heights.begin(), heights.end(), std::greater<>());
  std::vector<double> distinct;
  for (double h : heights) {
    if (distinct.empty() || !nearly_equal(distinct.back(), h, root_height())) distinct.push_back(h);
  }
  return distinct;
}

bool UltrametricTree::is_banded() const {
  const auto heights = internal_heights();
  for (Letter a = 0; a < letter_count(); ++a) {
    std::vector<double> path;
    std::optional<std::size_t> x = leaf_of_[a];
    while (x) {
      path.push_back(nodes_[*x].height);
      x = nodes_[*x].parent;
    }
    for (double h : heights) {
      const bool found = std::any_of(path.begin(), path.end(),
                                     [&](double v) { return nearly_equal(v, h, root_height()); });
      if (!found) return false;
    }
  }
  return true;
}

std::vector<double> node_masses(const UltrametricTree& tree, const Distribution& p) {
  if (p.size() != tree.letter_count()) {
    throw Error(ErrorKind::AlphabetMismatch, "distribution size differs from tree leaves");
  }
  std::vector<double> mass(tree.node_count(), 0.0);
  for (std::size_t k = tree.node_count(); k-- > 0;) {
    const auto& node = tree.node(k);
    if (node.is_leaf()) {
      mass[k] = p[*node.letter];
    } else {
      std::vector<double> parts;
      for (auto c : node.children) parts.push_back(mass[c]);
      mass[k] = pairwise_sum(parts);
    }
  }
  return mass;
}

// --- construction ---------------------------------------------------------

UltrametricTree tree_from_distance(const DistanceMatrix& d) {
  if (auto bad = d.find_ultrametric_violation()) {
    const auto& A = d.alphabet();
    auto [a, b, c] = *bad;
    throw Error(ErrorKind::NotUltrametric,
                "D(" + A.name(a) + "," + A.name(b) + ") exceeds max(D(" + A.name(a) + "," +
                    A.name(c) + "), D(" + A.name(b) + "," + A.name(c) + "))");
  }
  const std::size_t n = d.size();
  std::vector<TreeNode> nodes;
  for (Letter a = 0; a < n; ++a) {
    TreeNode leaf;
    leaf.letter = a;
    nodes.push_back(std::move(leaf));
  }
  if (n == 1) return UltrametricTree(d.alphabet_ptr(), std::move(nodes), 0);

  struct Pair {
    double distance;
    Letter a, b;
  };
  std::vector<Pair> pairs;
  for (Letter a = 0; a < n; ++a) {
    for (Letter b = a + 1; b < n; ++b) pairs.push_back({d(a, b), a, b});
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Pair& x, const Pair& y) { return x.distance < y.distance; });

  const double level_tol = 1e-9 * d.max_distance();
  UnionFind uf(n);
  std::vector<std::size_t> cluster_node(n);
  std::iota(cluster_node.begin(), cluster_node.end(), 0);

  std::size_t start = 0;
  while (start < pairs.size()) {
    std::size_t end = start;
    while (end < pairs.size() && pairs[end].distance - pairs[start].distance <= level_tol) ++end;
    const double level = pairs[start].distance;

    std::vector<std::size_t> old_root(n);
    for (Letter a = 0; a < n; ++a) old_root[a] = uf.find(a);
    for (std::size_t k = start; k < end; ++k) uf.unite(pairs[k].a, pairs[k].b);

    std::map<std::size_t, std::vector<std::size_t>> merged;  // new root -> old roots
    for (Letter a = 0; a < n; ++a) {
      auto& olds = merged[uf.find(a)];
      if (std::find(olds.begin(), olds.end(), old_root[a]) == olds.end()) olds.push_back(old_root[a]);
    }
    for (auto& [new_root, olds] : merged) {
      if (olds.size() < 2) continue;
      TreeNode node;
      node.height = level;
      for (auto r : olds) node.children.push_back(cluster_node[r]);
      nodes.push_back(std::move(node));
      cluster_node[new_root] = nodes.size() - 1;
    }
    start = end;
  }
  const std::size_t root = cluster_node[uf.find(0)];
  return UltrametricTree(d.alphabet_ptr(), std::move(nodes), root);
}

UltrametricTree restrict_tree(const UltrametricTree& tree, const LetterSet& subset) {
  if (subset.empty()) throw Error(ErrorKind::EmptySubset, "cannot restrict a tree to no letters");
  return tree_from_distance(tree.distance_matrix().restrict(subset));
}

UltrametricTree band(const UltrametricTree& tree) {
  const auto heights = tree.internal_heights();
  std::vector<TreeNode> nodes = tree.nodes();
  const double scale = tree.root_height();
  const std::size_t original = nodes.size();
  for (std::size_t k = 1; k < original; ++k) {
    const std::size_t parent = *tree.node(k).parent;
    const double lo = tree.node(k).height;
    const double hi = tree.node(parent).height;
    // Heights strictly between the node and its parent, descending.
    std::vector<double> cuts;
    for (double h : heights) {
      if (h > lo && h < hi && !nearly_equal(h, lo, scale) && !nearly_equal(h, hi, scale)) {
        cuts.push_back(h);
      }
    }
    if (cuts.empty()) continue;
    std::size_t above = parent;
    const auto& siblings = nodes[parent].children;
    const auto slot = static_cast<std::size_t>(
        std::find(siblings.begin(), siblings.end(), k) - siblings.begin());
    for (std::size_t c = 0; c < cuts.size(); ++c) {
      TreeNode pass;
      pass.height = cuts[c];
      pass.parent = above;
      nodes.push_back(std::move(pass));
      const std::size_t id = nodes.size() - 1;
      if (c == 0) {
        nodes[parent].children[slot] = id;
      } else {
        nodes[above].children.push_back(id);
      }
      above = id;
    }
    nodes[above].children.push_back(k);
    nodes[k].parent = above;
  }
  return UltrametricTree(tree.alphabet_ptr(), std::move(nodes), 0, true);
}

// --- H_U evaluations ------------------------------------------------------

double hu_recursive(const UltrametricTree& tree, const Distribution& p) {
  if (p.size() != tree.letter_count()) {
    throw Error(ErrorKind::AlphabetMismatch, "distribution size differs from tree leaves");
  }
  const auto distance = [&](Letter a, Letter b) { return tree.lca_height(a, b); };

  // `weights` holds P conditioned on the node's leaf set, aligned with leaves.
  std::function<double(std::size_t, const std::vector<double>&)> recurse =
      [&](std::size_t i, const std::vector<double>& weights) -> double {
    const auto& node = tree.node(i);
    if (node.is_leaf()) return 0.0;
    const auto& leaves = node.leaves;
    auto weight_of = [&](Letter a) {
      return weights[std::lower_bound(leaves.begin(), leaves.end(), a) - leaves.begin()];
    };

    const bool homogeneous = std::all_of(node.children.begin(), node.children.end(),
                                         [&](std::size_t c) { return tree.node(c).is_leaf(); });
    if (homogeneous) {
      // D restricted to these letters is constant: the height of the node.
      return node.height * entropy(weights);
    }

    // Reduced alphabet Y over the children, with the inter-set distance D^Y.
    std::vector<double> reduced;
    std::vector<std::vector<double>> conditional;
    for (auto c : node.children) {
      const auto& child_leaves = tree.node(c).leaves;
      std::vector<double> w;
      for (Letter a : child_leaves) w.push_back(weight_of(a));
      const double m = pairwise_sum(w);
      for (double& x : w) x = m > 0.0 ? x / m : 1.0 / static_cast<double>(w.size());
      reduced.push_back(m);
      conditional.push_back(std::move(w));
    }
    double reduced_distance = 0.0;
    if (node.children.size() > 1) {
      const auto& left = tree.node(node.children[0]).leaves;
      const auto& right = tree.node(node.children[1]).leaves;
      std::vector<double> terms;
      for (std::size_t x = 0; x < left.size(); ++x) {
        for (std::size_t y = 0; y < right.size(); ++y) {
          terms.push_back(conditional[0][x] * conditional[1][y] * distance(left[x], right[y]));
        }
      }
      reduced_distance = pairwise_sum(terms);
    }
    double total = reduced_distance * entropy(reduced);
    for (std::size_t k = 0; k < node.children.size(); ++k) {
      if (reduced[k] > 0.0) total += reduced[k] * recurse(node.children[k], conditional[k]);
    }
    return total;
  };

  std::vector<double> root_weights(p.probs().begin(), p.probs().end());
  return recurse(UltrametricTree::root(), root_weights);
}

double hu_nodewise(const UltrametricTree& tree, const Distribution& p) {
  const auto mass = node_masses(tree, p);
  std::vector<double> terms;
  for (std::size_t k = 0; k < tree.node_count(); ++k) {
    const auto& node = tree.node(k);
    if (node.is_leaf() || !(mass[k] > 0.0)) continue;
    std::vector<double> y;
    for (auto c : node.children) y.push_back(mass[c] / mass[k]);
    terms.push_back(mass[k] * node.height * entropy(y));
  }
  return pairwise_sum(terms);
}

double hu_arcwise(const UltrametricTree& tree, const Distribution& p) {
  const auto mass = node_masses(tree, p);
  std::vector<double> terms;
  for (std::size_t k = 1; k < tree.node_count(); ++k) {
    terms.push_back(tree.arc_length(k) * surprisal_term(mass[k]));
  }
  return pairwise_sum(terms);
}

std::vector<Band> bands(const UltrametricTree& tree) {
  const UltrametricTree banded = tree.is_banded() ? tree : band(tree);
  const double scale = banded.root_height();
  struct Group {
    double height;
    double measure;
    std::vector<std::size_t> nodes;
  };
  std::vector<Group> groups;
  for (std::size_t k = 1; k < banded.node_count(); ++k) {
    const double length = banded.arc_length(k);
    if (!(length > 0.0)) continue;
    const double h = banded.node(k).height;
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const Group& g) { return nearly_equal(g.height, h, scale); });
    if (it == groups.end()) {
      groups.push_back({h, length, {k}});
    } else {
      it->nodes.push_back(k);
    }
  }
  std::sort(groups.begin(), groups.end(),
            [](const Group& a, const Group& b) { return a.height < b.height; });
  std::vector<Band> out;
  for (const auto& g : groups) {
    std::vector<LetterSet> components;
    for (auto k : g.nodes) components.push_back(banded.node(k).leaves);
    out.push_back({g.height, g.measure, Partition(banded.letter_count(), std::move(components))});
  }
  return out;
}

double hu_bandwise(const UltrametricTree& tree, const Distribution& p) {
  if (p.size() != tree.letter_count()) {
    throw Error(ErrorKind::AlphabetMismatch, "distribution size differs from tree leaves");
  }
  std::vector<double> terms;
  for (const auto& b : bands(tree)) terms.push_back(b.measure * entropy(reduced_masses(p, b.partition)));
  return pairwise_sum(terms);
}

PartitionStructure to_partition_structure(const UltrametricTree& tree) {
  if (!tree.is_normalized()) {
    throw Error(ErrorKind::NotNormalized,
                "root height is " + std::to_string(tree.root_height()) + ", expected 1");
  }
  std::vector<PartitionStructure::Entry> entries;
  for (auto& b : bands(tree)) entries.emplace_back(std::move(b.partition), b.measure);
  return PartitionStructure(tree.alphabet_ptr(), std::move(entries));
}

MinimalityCheck check_binary_partition_minimality(const UltrametricTree& tree,
                                                  const Distribution& p,
                                                  const LetterSet& first,
                                                  const LetterSet& second) {
  const std::size_t n = tree.letter_count();
  const auto a1 = make_letter_set(first, n);
  const auto a2 = make_letter_set(second, n);
  if (a1.empty() || a2.empty()) throw Error(ErrorKind::EmptySubset, "both sides must be non-empty");
  LetterSet all;
  std::set_union(a1.begin(), a1.end(), a2.begin(), a2.end(), std::back_inserter(all));
  if (all.size() != n || a1.size() + a2.size() != n) {
    throw Error(ErrorKind::PartitionMismatch, "sides must be disjoint and cover the alphabet");
  }
  const double p1 = p.mass(a1);
  const double p2 = p.mass(a2);
  if (!(p1 > 0.0) || !(p2 > 0.0)) throw Error(ErrorKind::ZeroMassSide, "a side carries no probability");

  const auto distances = tree.distance_matrix();
  const double between = expected_distance(distances, p, a1, a2);
  double rhs = between * binary_entropy(p1 / (p1 + p2));
  for (const auto* side : {&a1, &a2}) {
    if (side->size() < 2) continue;
    const auto sub = restrict_tree(tree, *side);
    rhs += p.mass(*side) * hu(sub, restrict_distribution(p, *side));
  }
  return {hu(tree, p), rhs, between};
}

}  // namespace itstruct
