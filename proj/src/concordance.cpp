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

#include "itstruct/concordance.hpp"

#include <algorithm>
#include <iterator>

namespace itstruct {

namespace {

/// The split, distribution and structure conditioned on left ∪ right, with
/// the split re-expressed in the conditioned alphabet's indices.
struct Conditioned {
  BinarySplit split;
  Distribution p;
  PartitionStructure structure;
};

Conditioned condition_on_union(const BinarySplit& t, const PartitionStructure& structure,
                               const Distribution& p) {
  LetterSet u;
  std::set_union(t.left.begin(), t.left.end(), t.right.begin(), t.right.end(), std::back_inserter(u));
  if (u.size() == p.size()) return {t, p, structure};
  auto relabel = [&](const LetterSet& side) {
    LetterSet out;
    for (Letter a : side) out.push_back(std::lower_bound(u.begin(), u.end(), a) - u.begin());
    return out;
  };
  if (!(p.mass(u) > 0.0)) throw Error(ErrorKind::DegenerateSplit, "split carries no probability");
  return {BinarySplit{relabel(t.left), relabel(t.right)}, restrict_distribution(p, u),
          restrict_structure(structure, u)};
}

Partition split_partition(const BinarySplit& t, std::size_t universe) {
  return Partition(universe, {t.left, t.right});
}

double split_entropy_or_throw(const BinarySplit& t, const Distribution& p) {
  const double h = binary_entropy(p.mass(t.left) / (p.mass(t.left) + p.mass(t.right)));
  if (!(h > 0.0)) throw Error(ErrorKind::DegenerateSplit, "H(P^t) = 0: a side carries no probability");
  return h;
}

void check_universe(const PartitionStructure& structure, const Distribution& p) {
  if (p.size() != structure.universe_size()) {
    throw Error(ErrorKind::AlphabetMismatch, "distribution and structure sizes differ");
  }
}

}  // namespace

BinarySplit BinarySplit::make(LetterSet left, LetterSet right, std::size_t universe) {
  const auto l = make_letter_set(std::move(left), universe);
  const auto r = make_letter_set(std::move(right), universe);
  if (l.empty() || r.empty()) throw Error(ErrorKind::EmptySubset, "both sides of a split must be non-empty");
  LetterSet common;
  std::set_intersection(l.begin(), l.end(), r.begin(), r.end(), std::back_inserter(common));
  if (!common.empty()) throw Error(ErrorKind::InvalidPartition, "split sides overlap");
  return {l, r};
}

double concordance(const BinarySplit& t, const Partition& s, const Distribution& p) {
  if (t.left.size() + t.right.size() != p.size() || s.universe_size() != p.size()) {
    throw Error(ErrorKind::PartitionMismatch, "split and partition must cover the alphabet");
  }
  const double ht = split_entropy_or_throw(t, p);
  const auto tp = split_partition(t, p.size());
  const double hs = entropy(reduced_masses(p, s));
  const double hst = entropy(reduced_masses(p, join(s, tp)));
  return std::clamp((hs - hst + ht) / ht, 0.0, 1.0);
}

double d_hat(const BinarySplit& t, const PartitionStructure& structure, const Distribution& p) {
  check_universe(structure, p);
  const auto c = condition_on_union(t, structure, p);
  split_entropy_or_throw(c.split, c.p);
  std::vector<double> terms;
  for (const auto& [s, measure] : c.structure.entries()) {
    terms.push_back(measure * concordance(c.split, s, c.p));
  }
  return pairwise_sum(terms);
}

double d_hat_via_entropy_gap(const BinarySplit& t, const PartitionStructure& structure,
                             const Distribution& p) {
  check_universe(structure, p);
  const auto c = condition_on_union(t, structure, p);
  const double ht = split_entropy_or_throw(c.split, c.p);
  double inner = 0.0;
  for (const auto* side : {&c.split.left, &c.split.right}) {
    inner += c.p.mass(*side) *
             h_s(restrict_distribution(c.p, *side), restrict_structure(c.structure, *side));
  }
  return (h_s(c.p, c.structure) - inner) / ht;
}

GroupingDecomposition grouping_decompose(const BinarySplit& t, const StructuredAlphabet& x) {
  const auto& p = x.distribution();
  if (t.left.size() + t.right.size() != p.size()) {
    throw Error(ErrorKind::PartitionMismatch, "grouping needs a split of the whole alphabet");
  }
  GroupingDecomposition g{};
  g.split_entropy = split_entropy_or_throw(t, p);
  g.merit = d_hat(t, x.structure(), p);
  g.h_s = h_s(x);
  const std::array<const LetterSet*, 2> sides{&t.left, &t.right};
  for (std::size_t j = 0; j < 2; ++j) {
    g.mass[j] = p.mass(*sides[j]);
    g.parts[j] = h_s(restrict_distribution(p, *sides[j]), restrict_structure(x.structure(), *sides[j]));
  }
  return g;
}

double state_distance(Letter a, Letter b, const PartitionStructure& structure) {
  if (a >= structure.universe_size() || b >= structure.universe_size()) {
    throw Error(ErrorKind::AlphabetMismatch, "letter outside the structure's alphabet");
  }
  if (a == b) return 0.0;
  std::vector<double> terms;
  for (const auto& [s, measure] : structure.entries()) {
    if (s.separates(a, b)) terms.push_back(measure);
  }
  return pairwise_sum(terms);
}

DistanceMatrix state_distance_matrix(const PartitionStructure& structure) {
  const std::size_t n = structure.universe_size();
  std::vector<double> values(n * n, 0.0);
  for (Letter a = 0; a < n; ++a) {
    for (Letter b = a + 1; b < n; ++b) values[a * n + b] = values[b * n + a] = state_distance(a, b, structure);
  }
  return DistanceMatrix(structure.alphabet_ptr(), std::move(values));
}

}  // namespace itstruct
