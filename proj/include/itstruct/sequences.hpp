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

// Exact enumeration of IID sequence spaces over letters, partitions,
// (component, partition) cells or the components of one partition, with
// weak-typicality counts and the equivalence classes induced by projecting
// cell sequences onto their partition sequences.

#include <cstdint>
#include <string>
#include <vector>

#include "itstruct/alphabet.hpp"

namespace itstruct {

enum class SequenceKind { Letters, Partitions, Cells, Components };

/// One symbol of a cell sequence: component `component` of partition
/// `partition` (indices into the structure's entries).
struct CellSymbol {
  std::size_t partition;
  std::size_t component;

  friend bool operator==(const CellSymbol&, const CellSymbol&) = default;
};

/// Symbol probabilities of an IID space of length-N sequences.
class SequenceSpace {
 public:
  /// Sequences of letters drawn from P.
  static SequenceSpace letters(const Distribution& p, std::size_t length);
  /// Sequences of partitions drawn from the measure (NotNormalized).
  static SequenceSpace partitions(const PartitionStructure& structure, std::size_t length);
  /// Sequences of cells drawn from Q(i, s) = P(i) * S(s) (NotNormalized).
  static SequenceSpace cells(const Distribution& p, const PartitionStructure& structure, std::size_t length);
  /// Sequences of components of `s` drawn from the reduced distribution.
  static SequenceSpace components(const Distribution& p, const Partition& s, std::size_t length);

  SequenceKind kind() const noexcept { return kind_; }
  std::size_t length() const noexcept { return length_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }
  /// Per-symbol cell for Cells spaces; empty otherwise.
  const std::vector<CellSymbol>& cell_symbols() const noexcept { return cells_; }
  /// Entropy of one symbol, in bits.
  double entropy() const;
  /// log2 of the number of sequences, counting every symbol.
  double log2_size() const;

 private:
  SequenceSpace(SequenceKind kind, std::size_t length, std::vector<double> probs,
                std::vector<std::string> symbols, std::vector<CellSymbol> cells = {});

  SequenceKind kind_;
  std::size_t length_;
  std::vector<double> probs_;
  std::vector<std::string> symbols_;
  std::vector<CellSymbol> cells_;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 24;

/// Sequences with | -(1/N) log2 prob - H | <= epsilon, counted exactly.
struct TypicalSet {
  std::size_t length;
  double epsilon;
  double entropy;
  std::uint64_t count;
  double mass;
  double log2_count;        // -inf when empty
  double rate;              // log2_count / N
  /// Weak-typicality bounds on log2_count: N(H - eps) + log2(mass) and
  /// N(H + eps); `types_correction` = |support| * log2(N + 1).
  double log2_lower;
  double log2_upper;
  double types_correction;
  bool within_envelope;
};

/// Throws SpaceTooLarge when support^N exceeds `cap`, UnsupportedRegime
/// for N = 0. `threads` = 0 uses the hardware concurrency.
TypicalSet typical_set(const SequenceSpace& space, double epsilon,
                       std::uint64_t cap = kDefaultEnumerationCap, unsigned threads = 0);

struct EquivalenceClasses {
  TypicalSet typical;       // over the cell space
  std::uint64_t class_count;
  std::uint64_t min_class;
  std::uint64_t max_class;
  double structure_entropy; // H(S)
  double h_s;
  double class_rate;        // log2(class_count) / N
  double min_class_rate;    // log2(min_class) / N
  double max_class_rate;
};

/// Groups the typical cell sequences by their partition projection.
/// Requires a normalized structure.
EquivalenceClasses equivalence_class_stats(const Distribution& p, const PartitionStructure& structure,
                                           std::size_t length, double epsilon,
                                           std::uint64_t cap = kDefaultEnumerationCap, unsigned threads = 0);

/// Drops the component, keeping the partition of each symbol.
std::vector<std::size_t> project(const std::vector<CellSymbol>& sequence);

/// prod_j P(component_j), reading each symbol's component as a subset of A.
double subset_probability(const std::vector<CellSymbol>& sequence, const PartitionStructure& structure,
                          const Distribution& p);

/// Approximate: fraction of `samples` drawn sequences that are typical and
/// the mean -(1/N) log2 prob over them. For spaces too large to enumerate.
struct SampledTypicality {
  double typical_fraction;
  double mean_rate;
};
SampledTypicality sample_typicality(const SequenceSpace& space, double epsilon, std::size_t samples,
                                    std::uint64_t seed);

/// Draws one cell sequence from Q, deterministic under `seed`.
std::vector<CellSymbol> sample_cells(const Distribution& p, const PartitionStructure& structure,
                                     std::size_t length, std::uint64_t seed);

}  // namespace itstruct
