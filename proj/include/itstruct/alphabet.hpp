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

// Finite alphabets, probability vectors, partitions and partition structures
// (a set of partitions of the alphabet carrying a non-negative measure).

#include <compare>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "itstruct/error.hpp"

namespace itstruct {

inline constexpr double kProbabilityTolerance = 1e-9;

/// |total - 1| <= kProbabilityTolerance, allowing rounding in the decimal
/// inputs that sit exactly on the boundary.
inline bool sums_to_one(double total) noexcept {
  return (total - 1.0 <= kProbabilityTolerance * (1.0 + 1e-6)) && (1.0 - total <= kProbabilityTolerance * (1.0 + 1e-6));
}

/// Index of a letter inside its alphabet.
using Letter = std::size_t;

/// Sorted, duplicate-free list of letters.
using LetterSet = std::vector<Letter>;

/// Sorts and deduplicates; throws if a letter is >= universe.
LetterSet make_letter_set(std::vector<Letter> letters, std::size_t universe);

class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> letters);

  std::size_t size() const noexcept { return letters_.size(); }
  const std::string& name(Letter a) const { return letters_.at(a); }
  const std::vector<std::string>& names() const noexcept { return letters_; }

  std::optional<Letter> find(const std::string& name) const;
  /// Throws AlphabetMismatch when the name is unknown.
  Letter index_of(const std::string& name) const;

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.letters_ == b.letters_; }

 private:
  std::vector<std::string> letters_;
  std::unordered_map<std::string, Letter> index_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

AlphabetPtr make_alphabet(std::vector<std::string> letters);

/// Alphabet named a0, a1, ... for generated instances.
AlphabetPtr indexed_alphabet(std::size_t n, const std::string& prefix = "a");

/// Letters of `base` restricted to `subset`, in subset order.
AlphabetPtr sub_alphabet(const Alphabet& base, const LetterSet& subset);

/// Letters named "(x,y)" in row-major order.
AlphabetPtr product_alphabet(const Alphabet& a, const Alphabet& b);

class Distribution {
 public:
  /// Entries must be >= 0 and sum to 1 within kProbabilityTolerance unless
  /// `renormalize` is set, in which case any positive total is rescaled.
  Distribution(AlphabetPtr alphabet, std::vector<double> probs, bool renormalize = false);

  static Distribution uniform(AlphabetPtr alphabet);

  const Alphabet& alphabet() const noexcept { return *alphabet_; }
  const AlphabetPtr& alphabet_ptr() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return probs_.size(); }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](Letter a) const { return probs_[a]; }

  /// P(B).
  double mass(const LetterSet& subset) const;

 private:
  AlphabetPtr alphabet_;
  std::vector<double> probs_;
};

class Partition {
 public:
  /// Components must be non-empty, pairwise disjoint and cover 0..universe-1.
  /// Stored in canonical form: each component sorted, components ordered by
  /// their smallest letter.
  Partition(std::size_t universe, std::vector<LetterSet> components);

  /// Builds a partition from an arbitrary block label per letter.
  static Partition from_labels(std::span<const std::size_t> labels);
  static Partition singletons(std::size_t universe);
  /// The one-component partition; only meaningful as an intermediate value.
  static Partition whole(std::size_t universe);

  std::size_t universe_size() const noexcept { return labels_.size(); }
  std::size_t size() const noexcept { return components_.size(); }
  const std::vector<LetterSet>& components() const noexcept { return components_; }
  const LetterSet& component(std::size_t i) const { return components_.at(i); }
  std::size_t block_of(Letter a) const { return labels_.at(a); }
  std::span<const std::size_t> labels() const noexcept { return labels_; }
  bool separates(Letter a, Letter b) const { return labels_.at(a) != labels_.at(b); }

  friend bool operator==(const Partition& a, const Partition& b) { return a.labels_ == b.labels_; }
  friend auto operator<=>(const Partition& a, const Partition& b) { return a.labels_ <=> b.labels_; }

 private:
  Partition() = default;
  void rebuild_components();

  std::vector<std::size_t> labels_;
  std::vector<LetterSet> components_;
};

/// A finite set of partitions with a non-negative measure on it.
class PartitionStructure {
 public:
  using Entry = std::pair<Partition, double>;

  /// Structurally equal partitions are merged and their measures summed.
  /// Insertion order of first occurrence is preserved.
  PartitionStructure(AlphabetPtr alphabet, std::vector<Entry> entries);

  /// Empty structure (total measure 0).
  explicit PartitionStructure(AlphabetPtr alphabet);

  /// The single partition into singletons with measure 1.
  static PartitionStructure traditional(AlphabetPtr alphabet);

  const Alphabet& alphabet() const noexcept { return *alphabet_; }
  const AlphabetPtr& alphabet_ptr() const noexcept { return alphabet_; }
  std::size_t universe_size() const noexcept { return alphabet_->size(); }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  const Partition& partition(std::size_t i) const { return entries_.at(i).first; }
  double measure(std::size_t i) const { return entries_.at(i).second; }
  std::vector<double> measures() const;

  /// Measure of `s`, 0 when absent.
  double measure_of(const Partition& s) const;

  double total_measure() const;
  bool is_normalized() const;
  /// Every letter pair is split by some partition of positive measure.
  bool is_separating() const;

  template <class F>
  void for_each(F&& visit) const {
    for (const auto& [partition, measure] : entries_) visit(partition, measure);
  }

 private:
  AlphabetPtr alphabet_;
  std::vector<Entry> entries_;
};

/// Lazily evaluated product of partition structures. Small products (three
/// factors or fewer) are materialized on construction; larger ones stream
/// partitions on demand so the |S|^m blowup is never stored.
class ProductStructure {
 public:
  explicit ProductStructure(std::vector<PartitionStructure> factors);

  static constexpr std::size_t kEagerFactorLimit = 3;

  const Alphabet& alphabet() const noexcept { return *alphabet_; }
  const AlphabetPtr& alphabet_ptr() const noexcept { return alphabet_; }
  std::size_t universe_size() const noexcept { return alphabet_->size(); }
  const std::vector<PartitionStructure>& factors() const noexcept { return factors_; }
  bool is_materialized() const noexcept { return materialized_.has_value(); }

  /// Number of product partitions, prod |S_k|.
  std::size_t size() const;
  double total_measure() const;

  PartitionStructure materialize() const;

  template <class F>
  void for_each(F&& visit) const {
    if (materialized_) {
      materialized_->for_each(visit);
      return;
    }
    stream([&](const Partition& s, double m) { visit(s, m); });
  }

 private:
  void stream(const std::function<void(const Partition&, double)>& visit) const;

  std::vector<PartitionStructure> factors_;
  AlphabetPtr alphabet_;
  std::optional<PartitionStructure> materialized_;
};

/// Joint probability on rows x cols, stored row-major.
class JointDistribution {
 public:
  JointDistribution(AlphabetPtr rows, AlphabetPtr cols, std::vector<double> values);

  static JointDistribution independent(const Distribution& rows, const Distribution& cols);

  const Alphabet& rows() const noexcept { return *rows_; }
  const Alphabet& cols() const noexcept { return *cols_; }
  const AlphabetPtr& rows_ptr() const noexcept { return rows_; }
  const AlphabetPtr& cols_ptr() const noexcept { return cols_; }
  std::size_t row_count() const noexcept { return rows_->size(); }
  std::size_t col_count() const noexcept { return cols_->size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator()(Letter a, Letter b) const { return values_[a * cols_->size() + b]; }

  Distribution row_marginal() const;
  Distribution col_marginal() const;
  /// The same probability read as a distribution on the product alphabet.
  Distribution flatten() const;

 private:
  AlphabetPtr rows_;
  AlphabetPtr cols_;
  std::vector<double> values_;
};

/// Q(i, s) = P(i) * S(s) over all (component, partition) pairs.
struct StructuredSpace {
  struct Cell {
    std::size_t partition;
    std::size_t component;
    double q;
  };
  std::vector<Cell> cells;
  double total_mass = 0.0;
  /// True iff the structure is normalized, i.e. Q sums to 1.
  bool is_probability = false;

  std::vector<double> masses() const;
};

// --- operations -----------------------------------------------------------

/// P(. | B) on the sub-alphabet B. Throws ZeroMassSubset when P(B) = 0.
Distribution restrict_distribution(const Distribution& p, const LetterSet& subset);

/// Component masses P^s(i) = sum_{a in i} P(a), ordered as s.components().
std::vector<double> reduced_masses(const Distribution& p, const Partition& s);

/// The reduced alphabet: one letter per component of s.
Distribution reduce(const Distribution& p, const Partition& s);

/// s ∩ t = {i ∩ j : non-empty}.
Partition join(const Partition& s, const Partition& t);

/// True iff every component of s lies inside a component of t.
bool refines(const Partition& s, const Partition& t);

/// s|B relabelled onto 0..|B|-1 (subset order). Components that become empty
/// are dropped; the result may have a single component.
Partition restrict_partition(const Partition& s, const LetterSet& subset);

/// The structure restricted to B. Restrictions with at most one component are
/// dropped and structurally equal restrictions merged with measures summed.
PartitionStructure restrict_structure(const PartitionStructure& structure,
                                      const LetterSet& subset);
PartitionStructure restrict_structure(const ProductStructure& structure,
                                      const LetterSet& subset);

/// Pointwise sum of measures over the union of partition sets.
PartitionStructure combine(const PartitionStructure& a, const PartitionStructure& b);

/// Partitions s_A x s_B of A x B with measure S_A(s_A) * S_B(s_B).
PartitionStructure product_structure(const PartitionStructure& a, const PartitionStructure& b);

/// The m-fold product S x ... x S.
ProductStructure power_structure(const PartitionStructure& structure, std::size_t m);

/// The m-fold IID product P^m on A^m.
Distribution power_distribution(const Distribution& p, std::size_t m);

StructuredSpace build_q(const Distribution& p, const PartitionStructure& structure);

struct InseparableMerge {
  PartitionStructure structure;
  /// Letters of the original alphabet behind each merged letter.
  std::vector<LetterSet> groups;
};

/// Unites letters that no positive-measure partition separates. Never applied
/// implicitly by any other operation.
InseparableMerge merge_inseparable(const PartitionStructure& structure);

/// Carries a distribution over to the merged alphabet.
Distribution merge_distribution(const Distribution& p, const InseparableMerge& merge);

/// Renders a component as "{a,b}" using the alphabet's names.
std::string component_label(const Alphabet& alphabet, const LetterSet& component);

}  // namespace itstruct
