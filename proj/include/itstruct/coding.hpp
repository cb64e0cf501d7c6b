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

// Binary code trees and their structure-sensitive lengths: the expected
// resolution power mu_U and its companion lambda_U for ultrametric
// alphabets, the expected structure-sensitive code length for general
// partition structures, the Optimize rewrite, and a bound-trial harness.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "itstruct/alphabet.hpp"
#include "itstruct/notions.hpp"
#include "itstruct/ultrametric.hpp"

namespace itstruct {

struct CodeNode;
using CodeNodePtr = std::shared_ptr<const CodeNode>;

/// Immutable binary code tree node. Subtrees are shared between trees.
struct CodeNode {
  std::optional<Letter> letter;
  CodeNodePtr zero;
  CodeNodePtr one;
  LetterSet leaves;

  bool is_leaf() const noexcept { return letter.has_value(); }
};

CodeNodePtr code_leaf(Letter a);
/// Internal node; the two sides must have disjoint leaves.
CodeNodePtr code_join(CodeNodePtr zero, CodeNodePtr one);

class CodeTree {
 public:
  /// Leaves must match the alphabet one-to-one.
  CodeTree(AlphabetPtr alphabet, CodeNodePtr root);

  const Alphabet& alphabet() const noexcept { return *alphabet_; }
  const AlphabetPtr& alphabet_ptr() const noexcept { return alphabet_; }
  const CodeNodePtr& root() const noexcept { return root_; }
  std::size_t letter_count() const noexcept { return alphabet_->size(); }

  /// Internal nodes in preorder.
  std::vector<const CodeNode*> internal_nodes() const;
  /// Codeword per letter (left = '0', right = '1'); "" for a one-letter tree.
  std::vector<std::string> codewords() const;
  /// Nested form such as "((a,b),c)".
  std::string to_string() const;
  /// Parses the nested form; every letter must appear exactly once.
  static CodeTree parse(AlphabetPtr alphabet, const std::string& text);

 private:
  AlphabetPtr alphabet_;
  CodeNodePtr root_;
};

/// Per-internal-node costs (preorder, matching internal_nodes()) and their
/// per-letter path sums.
struct CodeLengths {
  double expected;                   // sum over nodes of P(node) * cost
  std::vector<double> node_cost;     // D(A0, A1) or merit d^i
  std::vector<double> letter_length; // CL(a)
};

/// sum over internal nodes c of P(A^c) * D(A^{c0}, A^{c1}).
double mu_u(const CodeTree& c, const Distribution& p, const DistanceMatrix& d);
/// The recursive form D(A0, A1) + sum_i P(A_i) * mu_U(A_i, P|A_i, D|A_i).
double mu_u_recursive(const CodeTree& c, const Distribution& p, const DistanceMatrix& d);
/// Node costs D(A^{c0}, A^{c1}) with per-letter sums.
CodeLengths mu_u_lengths(const CodeTree& c, const Distribution& p, const DistanceMatrix& d);

/// sum over internal nodes c of P(A^c) * D(A^{c0}, A^{c1}) * h(P(A^{c0} | A^c)).
double lambda_u(const CodeTree& c, const Distribution& p, const DistanceMatrix& d);
double lambda_u_recursive(const CodeTree& c, const Distribution& p, const DistanceMatrix& d);

/// Expected structure-sensitive code length: sum over internal nodes of
/// P(A_i) * d^i, where d^i is the split distance conditioned on A_i. Nodes
/// with zero mass or a zero-mass side get merit 0.
CodeLengths esscl(const CodeTree& c, const StructuredAlphabet& x);
CodeLengths esscl(const CodeTree& c, const Distribution& p, const ProductStructure& structure);

/// Binarizes each multi-way node of the ultrametric tree by repeatedly
/// merging its two lightest children (ties: smallest first letter).
CodeTree initial_code_tree(const UltrametricTree& tree, const Distribution& p);

struct OptimizeResult {
  CodeTree tree;
  /// mu_U of the initial tree, then after every accepted rewrite.
  std::vector<double> trace;
  std::size_t restarts = 0;
};

/// Recursive optimize-children-then-recombine rewrite of the initial code
/// tree. Throws TooFewLetters below 2 letters and IterationCap after
/// 10 * n^2 restarts.
OptimizeResult optimize(const UltrametricTree& tree, const Distribution& p);

struct TrialInstance {
  std::size_t index;
  std::uint64_t seed;
  std::size_t n;
  double hu;
  double mu;
  double gap;  // mu - hu
};

/// Full description of a generated instance, enough to replay it.
struct TrialCase {
  TrialInstance summary;
  std::vector<double> distances;  // n x n
  std::vector<double> probs;
  std::string code;               // nested form of the optimized tree
};

struct TrialReport {
  std::uint64_t seed;
  std::size_t count;
  std::size_t min_letters;
  std::size_t max_letters;
  std::vector<TrialInstance> instances;
  double max_gap;
  std::size_t max_gap_index;
  std::size_t violations;  // instances with mu > hu + 1 + 1e-9
  std::vector<TrialCase> violating;
};

inline constexpr double kBoundSlack = 1e-9;

/// Per-instance seed, a splitmix64 step from the run seed and index.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t index);

/// The random normalized binary ultrametric instance for one trial seed.
TrialCase generate_trial(std::uint64_t instance_seed, std::size_t min_letters,
                         std::size_t max_letters);

/// Runs `count` seeded instances across `threads` workers (0: hardware).
/// The report is identical for any thread count.
TrialReport run_bound_trials(std::size_t count, std::size_t min_letters, std::size_t max_letters,
                             std::uint64_t seed, unsigned threads = 0);

struct TypicalCompression {
  double esscl_per_symbol;
  double h_s;
  double esscl_total;
  std::size_t block_length;
};

/// Balanced lexicographic code over A^m under the product structure S^m.
/// Requires uniform P on a power-of-two alphabet (UnsupportedRegime) and a
/// normalized structure (NotNormalized).
TypicalCompression typical_compression_check(const StructuredAlphabet& x, std::size_t m);

}  // namespace itstruct
