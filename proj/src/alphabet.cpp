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

#include "itstruct/alphabet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include "itstruct/entropy.hpp"

namespace itstruct {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidAlphabet: return "InvalidAlphabet";
    case ErrorKind::InvalidDistribution: return "InvalidDistribution";
    case ErrorKind::InvalidPartition: return "InvalidPartition";
    case ErrorKind::InvalidStructure: return "InvalidStructure";
    case ErrorKind::ZeroMassSubset: return "ZeroMassSubset";
    case ErrorKind::PartitionMismatch: return "PartitionMismatch";
    case ErrorKind::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorKind::EmptySubset: return "EmptySubset";
    case ErrorKind::NotUltrametric: return "NotUltrametric";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::ZeroMassSide: return "ZeroMassSide";
    case ErrorKind::DegenerateSplit: return "DegenerateSplit";
    case ErrorKind::TooFewLetters: return "TooFewLetters";
    case ErrorKind::IterationCap: return "IterationCap";
    case ErrorKind::UnsupportedRegime: return "UnsupportedRegime";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::DuplicateValues: return "DuplicateValues";
    case ErrorKind::NonMonotoneCdf: return "NonMonotoneCdf";
    case ErrorKind::SpaceTooLarge: return "SpaceTooLarge";
    case ErrorKind::Parse: return "ParseError";
  }
  return "Error";
}

LetterSet make_letter_set(std::vector<Letter> letters, std::size_t universe) {
  std::sort(letters.begin(), letters.end());
  letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
  if (!letters.empty() && letters.back() >= universe) {
    throw Error(ErrorKind::AlphabetMismatch,
                "letter index " + std::to_string(letters.back()) + " outside alphabet of size " +
                    std::to_string(universe));
  }
  return letters;
}

// --- Alphabet -------------------------------------------------------------

Alphabet::Alphabet(std::vector<std::string> letters) : letters_(std::move(letters)) {
  if (letters_.empty()) throw Error(ErrorKind::InvalidAlphabet, "alphabet must be non-empty");
  index_.reserve(letters_.size());
  for (Letter i = 0; i < letters_.size(); ++i) {
    if (!index_.emplace(letters_[i], i).second) {
      throw Error(ErrorKind::InvalidAlphabet, "duplicate letter '" + letters_[i] + "'");
    }
  }
}

std::optional<Letter> Alphabet::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Letter Alphabet::index_of(const std::string& name) const {
  if (auto found = find(name)) return *found;
  throw Error(ErrorKind::AlphabetMismatch, "unknown letter '" + name + "'");
}

AlphabetPtr make_alphabet(std::vector<std::string> letters) {
  return std::make_shared<const Alphabet>(std::move(letters));
}

AlphabetPtr indexed_alphabet(std::size_t n, const std::string& prefix) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
  return make_alphabet(std::move(names));
}

AlphabetPtr sub_alphabet(const Alphabet& base, const LetterSet& subset) {
  std::vector<std::string> names;
  names.reserve(subset.size());
  for (Letter a : subset) names.push_back(base.name(a));
  return make_alphabet(std::move(names));
}

namespace {

std::string format_sum(double total) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", total);
  return buf;
}

AlphabetPtr tuple_alphabet(const std::vector<const Alphabet*>& factors) {
  std::size_t total = 1;
  for (const auto* f : factors) total *= f->size();
  std::vector<std::string> names;
  names.reserve(total);
  std::vector<std::size_t> digits(factors.size(), 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::string name = "(";
    for (std::size_t k = 0; k < factors.size(); ++k) {
      if (k) name += ",";
      name += factors[k]->name(digits[k]);
    }
    names.push_back(name + ")");
    for (std::size_t k = factors.size(); k-- > 0;) {
      if (++digits[k] < factors[k]->size()) break;
      digits[k] = 0;
    }
  }
  return make_alphabet(std::move(names));
}

// Block label of every product letter, given per-factor partitions.
std::vector<std::size_t> product_labels(const std::vector<const Partition*>& parts) {
  std::size_t total = 1;
  for (const auto* p : parts) total *= p->universe_size();
  std::vector<std::size_t> labels(total);
  std::vector<std::size_t> digits(parts.size(), 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t label = 0;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      label = label * parts[k]->size() + parts[k]->block_of(digits[k]);
    }
    labels[idx] = label;
    for (std::size_t k = parts.size(); k-- > 0;) {
      if (++digits[k] < parts[k]->universe_size()) break;
      digits[k] = 0;
    }
  }
  return labels;
}

}  // namespace

AlphabetPtr product_alphabet(const Alphabet& a, const Alphabet& b) {
  return tuple_alphabet({&a, &b});
}

// --- Distribution ---------------------------------------------------------

Distribution::Distribution(AlphabetPtr alphabet, std::vector<double> probs, bool renormalize)
    : alphabet_(std::move(alphabet)), probs_(std::move(probs)) {
  if (!alphabet_) throw Error(ErrorKind::InvalidDistribution, "missing alphabet");
  if (probs_.size() != alphabet_->size()) {
    throw Error(ErrorKind::InvalidDistribution,
                "expected " + std::to_string(alphabet_->size()) + " probabilities, got " +
                    std::to_string(probs_.size()));
  }
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (!std::isfinite(probs_[i]) || probs_[i] < 0.0) {
      throw Error(ErrorKind::InvalidDistribution,
                  "probability of '" + alphabet_->name(i) + "' is negative or not finite");
    }
  }
  const double total = pairwise_sum(probs_);
  if (renormalize) {
    if (!(total > 0.0)) throw Error(ErrorKind::InvalidDistribution, "total mass is zero");
    for (double& p : probs_) p /= total;
  } else if (!sums_to_one(total)) {
    throw Error(ErrorKind::InvalidDistribution,
                "probabilities sum to " + format_sum(total) + ", expected 1");
  }
}

Distribution Distribution::uniform(AlphabetPtr alphabet) {
  const std::size_t n = alphabet->size();
  return Distribution(std::move(alphabet), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double Distribution::mass(const LetterSet& subset) const {
  std::vector<double> values;
  values.reserve(subset.size());
  for (Letter a : subset) values.push_back(probs_.at(a));
  return pairwise_sum(values);
}

// --- Partition ------------------------------------------------------------

Partition::Partition(std::size_t universe, std::vector<LetterSet> components) {
  if (universe == 0) throw Error(ErrorKind::InvalidPartition, "empty universe");
  labels_.assign(universe, static_cast<std::size_t>(-1));
  for (std::size_t c = 0; c < components.size(); ++c) {
    if (components[c].empty()) throw Error(ErrorKind::InvalidPartition, "empty component");
    for (Letter a : components[c]) {
      if (a >= universe) throw Error(ErrorKind::PartitionMismatch, "letter outside universe");
      if (labels_[a] != static_cast<std::size_t>(-1)) {
        throw Error(ErrorKind::InvalidPartition, "components are not disjoint");
      }
      labels_[a] = c;
    }
  }
  for (auto label : labels_) {
    if (label == static_cast<std::size_t>(-1)) {
      throw Error(ErrorKind::PartitionMismatch, "components do not cover the alphabet");
    }
  }
  rebuild_components();
}

Partition Partition::from_labels(std::span<const std::size_t> labels) {
  if (labels.empty()) throw Error(ErrorKind::InvalidPartition, "empty universe");
  Partition p;
  p.labels_.assign(labels.begin(), labels.end());
  p.rebuild_components();
  return p;
}

Partition Partition::singletons(std::size_t universe) {
  std::vector<std::size_t> labels(universe);
  std::iota(labels.begin(), labels.end(), 0);
  return from_labels(labels);
}

Partition Partition::whole(std::size_t universe) {
  std::vector<std::size_t> labels(universe, 0);
  return from_labels(labels);
}

void Partition::rebuild_components() {
  // Relabel blocks in order of first appearance, which orders components by
  // their smallest letter.
  std::unordered_map<std::size_t, std::size_t> remap;
  components_.clear();
  for (Letter a = 0; a < labels_.size(); ++a) {
    auto [it, inserted] = remap.emplace(labels_[a], components_.size());
    if (inserted) components_.emplace_back();
    labels_[a] = it->second;
    components_[it->second].push_back(a);
  }
}

// --- PartitionStructure ---------------------------------------------------

PartitionStructure::PartitionStructure(AlphabetPtr alphabet) : alphabet_(std::move(alphabet)) {
  if (!alphabet_) throw Error(ErrorKind::InvalidStructure, "missing alphabet");
}

PartitionStructure::PartitionStructure(AlphabetPtr alphabet, std::vector<Entry> entries)
    : PartitionStructure(std::move(alphabet)) {
  std::map<std::vector<std::size_t>, std::size_t> seen;
  for (auto& [partition, measure] : entries) {
    if (partition.universe_size() != alphabet_->size()) {
      throw Error(ErrorKind::PartitionMismatch, "partition universe differs from alphabet size");
    }
    if (!std::isfinite(measure) || measure < 0.0) {
      throw Error(ErrorKind::InvalidStructure, "measures must be finite and non-negative");
    }
    std::vector<std::size_t> key(partition.labels().begin(), partition.labels().end());
    auto [it, inserted] = seen.emplace(std::move(key), entries_.size());
    if (inserted) {
      entries_.emplace_back(std::move(partition), measure);
    } else {
      entries_[it->second].second += measure;
    }
  }
}

PartitionStructure PartitionStructure::traditional(AlphabetPtr alphabet) {
  const std::size_t n = alphabet->size();
  return PartitionStructure(std::move(alphabet), {{Partition::singletons(n), 1.0}});
}

std::vector<double> PartitionStructure::measures() const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.second);
  return out;
}

double PartitionStructure::measure_of(const Partition& s) const {
  for (const auto& [partition, measure] : entries_) {
    if (partition == s) return measure;
  }
  return 0.0;
}

double PartitionStructure::total_measure() const { return pairwise_sum(measures()); }

bool PartitionStructure::is_normalized() const {
  return sums_to_one(total_measure());
}

namespace {

// Letters grouped by their block signature across positive-measure partitions.
std::vector<LetterSet> inseparable_groups(const PartitionStructure& structure) {
  const std::size_t n = structure.universe_size();
  std::map<std::vector<std::size_t>, LetterSet> groups;
  for (Letter a = 0; a < n; ++a) {
    std::vector<std::size_t> signature;
    for (const auto& [partition, measure] : structure.entries()) {
      if (measure > 0.0) signature.push_back(partition.block_of(a));
    }
    groups[signature].push_back(a);
  }
  std::vector<LetterSet> out;
  out.reserve(groups.size());
  for (auto& [key, letters] : groups) out.push_back(std::move(letters));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

bool PartitionStructure::is_separating() const {
  return inseparable_groups(*this).size() == universe_size();
}

// --- ProductStructure -----------------------------------------------------

ProductStructure::ProductStructure(std::vector<PartitionStructure> factors)
    : factors_(std::move(factors)) {
  if (factors_.empty()) throw Error(ErrorKind::InvalidStructure, "product needs a factor");
  std::vector<const Alphabet*> alphabets;
  for (const auto& f : factors_) alphabets.push_back(&f.alphabet());
  alphabet_ = factors_.size() == 1 ? factors_.front().alphabet_ptr() : tuple_alphabet(alphabets);
  if (factors_.size() <= kEagerFactorLimit) materialized_ = materialize();
}

std::size_t ProductStructure::size() const {
  std::size_t total = 1;
  for (const auto& f : factors_) total *= f.size();
  return total;
}

double ProductStructure::total_measure() const {
  double total = 1.0;
  for (const auto& f : factors_) total *= f.total_measure();
  return total;
}

void ProductStructure::stream(const std::function<void(const Partition&, double)>& visit) const {
  for (const auto& f : factors_) {
    if (f.empty()) return;
  }
  std::vector<std::size_t> digits(factors_.size(), 0);
  std::vector<const Partition*> parts(factors_.size());
  while (true) {
    double measure = 1.0;
    for (std::size_t k = 0; k < factors_.size(); ++k) {
      parts[k] = &factors_[k].partition(digits[k]);
      measure *= factors_[k].measure(digits[k]);
    }
    const auto labels = product_labels(parts);
    visit(Partition::from_labels(labels), measure);
    std::size_t k = factors_.size();
    while (k-- > 0) {
      if (++digits[k] < factors_[k].size()) break;
      digits[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
}

PartitionStructure ProductStructure::materialize() const {
  if (materialized_) return *materialized_;
  std::vector<PartitionStructure::Entry> entries;
  stream([&](const Partition& s, double m) { entries.emplace_back(s, m); });
  return PartitionStructure(alphabet_, std::move(entries));
}

// --- JointDistribution ----------------------------------------------------

JointDistribution::JointDistribution(AlphabetPtr rows, AlphabetPtr cols, std::vector<double> values)
    : rows_(std::move(rows)), cols_(std::move(cols)), values_(std::move(values)) {
  if (!rows_ || !cols_) throw Error(ErrorKind::InvalidDistribution, "missing alphabet");
  if (values_.size() != rows_->size() * cols_->size()) {
    throw Error(ErrorKind::InvalidDistribution, "joint matrix has wrong shape");
  }
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorKind::InvalidDistribution, "joint entries must be finite and >= 0");
    }
  }
  const double total = pairwise_sum(values_);
  if (!sums_to_one(total)) {
    throw Error(ErrorKind::InvalidDistribution,
                "joint probabilities sum to " + format_sum(total) + ", expected 1");
  }
}

JointDistribution JointDistribution::independent(const Distribution& rows,
                                                 const Distribution& cols) {
  std::vector<double> values;
  values.reserve(rows.size() * cols.size());
  for (double pr : rows.probs()) {
    for (double pc : cols.probs()) values.push_back(pr * pc);
  }
  return JointDistribution(rows.alphabet_ptr(), cols.alphabet_ptr(), std::move(values));
}

Distribution JointDistribution::row_marginal() const {
  return Distribution(rows_, itstruct::row_marginal(values_, rows_->size(), cols_->size()));
}

Distribution JointDistribution::col_marginal() const {
  return Distribution(cols_, itstruct::col_marginal(values_, rows_->size(), cols_->size()));
}

Distribution JointDistribution::flatten() const {
  return Distribution(product_alphabet(*rows_, *cols_), values_);
}

std::vector<double> StructuredSpace::masses() const {
  std::vector<double> out;
  out.reserve(cells.size());
  for (const auto& c : cells) out.push_back(c.q);
  return out;
}

// --- operations -----------------------------------------------------------

Distribution restrict_distribution(const Distribution& p, const LetterSet& subset) {
  if (subset.empty()) throw Error(ErrorKind::EmptySubset, "cannot condition on an empty set");
  const auto letters = make_letter_set(subset, p.size());
  const double total = p.mass(letters);
  if (!(total > 0.0)) throw Error(ErrorKind::ZeroMassSubset, "conditioning set has zero mass");
  std::vector<double> probs;
  probs.reserve(letters.size());
  for (Letter a : letters) probs.push_back(p[a] / total);
  return Distribution(sub_alphabet(p.alphabet(), letters), std::move(probs), true);
}

std::vector<double> reduced_masses(const Distribution& p, const Partition& s) {
  if (s.universe_size() != p.size()) {
    throw Error(ErrorKind::PartitionMismatch, "partition does not cover the distribution's alphabet");
  }
  std::vector<double> out;
  out.reserve(s.size());
  for (const auto& component : s.components()) out.push_back(p.mass(component));
  return out;
}

std::string component_label(const Alphabet& alphabet, const LetterSet& component) {
  std::string out = "{";
  for (std::size_t k = 0; k < component.size(); ++k) {
    if (k) out += ",";
    out += alphabet.name(component[k]);
  }
  return out + "}";
}

Distribution reduce(const Distribution& p, const Partition& s) {
  auto masses = reduced_masses(p, s);
  std::vector<std::string> names;
  names.reserve(s.size());
  for (const auto& component : s.components()) {
    names.push_back(component_label(p.alphabet(), component));
  }
  return Distribution(make_alphabet(std::move(names)), std::move(masses), true);
}

Partition join(const Partition& s, const Partition& t) {
  if (s.universe_size() != t.universe_size()) {
    throw Error(ErrorKind::AlphabetMismatch, "partitions over different alphabets");
  }
  std::vector<std::size_t> labels(s.universe_size());
  for (Letter a = 0; a < labels.size(); ++a) labels[a] = s.block_of(a) * t.size() + t.block_of(a);
  return Partition::from_labels(labels);
}

bool refines(const Partition& s, const Partition& t) {
  if (s.universe_size() != t.universe_size()) {
    throw Error(ErrorKind::AlphabetMismatch, "partitions over different alphabets");
  }
  for (const auto& component : s.components()) {
    const auto block = t.block_of(component.front());
    for (Letter a : component) {
      if (t.block_of(a) != block) return false;
    }
  }
  return true;
}

Partition restrict_partition(const Partition& s, const LetterSet& subset) {
  if (subset.empty()) throw Error(ErrorKind::EmptySubset, "cannot restrict to an empty set");
  std::vector<std::size_t> labels;
  labels.reserve(subset.size());
  for (Letter a : subset) labels.push_back(s.block_of(a));
  return Partition::from_labels(labels);
}

namespace {

template <class Structure>
PartitionStructure restrict_any(const Structure& structure, const LetterSet& subset) {
  if (subset.empty()) throw Error(ErrorKind::EmptySubset, "cannot restrict to an empty set");
  const auto letters = make_letter_set(subset, structure.universe_size());
  std::vector<PartitionStructure::Entry> entries;
  structure.for_each([&](const Partition& s, double measure) {
    auto restricted = restrict_partition(s, letters);
    if (restricted.size() > 1) entries.emplace_back(std::move(restricted), measure);
  });
  return PartitionStructure(sub_alphabet(structure.alphabet(), letters), std::move(entries));
}

}  // namespace

PartitionStructure restrict_structure(const PartitionStructure& structure,
                                      const LetterSet& subset) {
  return restrict_any(structure, subset);
}

PartitionStructure restrict_structure(const ProductStructure& structure,
                                      const LetterSet& subset) {
  return restrict_any(structure, subset);
}

PartitionStructure combine(const PartitionStructure& a, const PartitionStructure& b) {
  if (!(a.alphabet() == b.alphabet())) {
    throw Error(ErrorKind::AlphabetMismatch, "cannot combine structures over different alphabets");
  }
  std::vector<PartitionStructure::Entry> entries = a.entries();
  entries.insert(entries.end(), b.entries().begin(), b.entries().end());
  return PartitionStructure(a.alphabet_ptr(), std::move(entries));
}

PartitionStructure product_structure(const PartitionStructure& a, const PartitionStructure& b) {
  return ProductStructure({a, b}).materialize();
}

ProductStructure power_structure(const PartitionStructure& structure, std::size_t m) {
  if (m == 0) throw Error(ErrorKind::InvalidStructure, "power must be at least 1");
  return ProductStructure(std::vector<PartitionStructure>(m, structure));
}

Distribution power_distribution(const Distribution& p, std::size_t m) {
  if (m == 0) throw Error(ErrorKind::InvalidDistribution, "power must be at least 1");
  if (m == 1) return p;
  std::vector<const Alphabet*> alphabets(m, &p.alphabet());
  auto alphabet = tuple_alphabet(alphabets);
  std::vector<double> probs(alphabet->size());
  std::vector<std::size_t> digits(m, 0);
  for (std::size_t idx = 0; idx < probs.size(); ++idx) {
    double prob = 1.0;
    for (auto d : digits) prob *= p[d];
    probs[idx] = prob;
    for (std::size_t k = m; k-- > 0;) {
      if (++digits[k] < p.size()) break;
      digits[k] = 0;
    }
  }
  return Distribution(std::move(alphabet), std::move(probs), true);
}

StructuredSpace build_q(const Distribution& p, const PartitionStructure& structure) {
  if (!(p.alphabet() == structure.alphabet())) {
    throw Error(ErrorKind::AlphabetMismatch, "distribution and structure alphabets differ");
  }
  StructuredSpace space;
  for (std::size_t k = 0; k < structure.size(); ++k) {
    const auto masses = reduced_masses(p, structure.partition(k));
    for (std::size_t c = 0; c < masses.size(); ++c) {
      space.cells.push_back({k, c, masses[c] * structure.measure(k)});
    }
  }
  space.total_mass = structure.total_measure();
  space.is_probability = structure.is_normalized();
  return space;
}

InseparableMerge merge_inseparable(const PartitionStructure& structure) {
  auto groups = inseparable_groups(structure);
  const std::size_t n = structure.universe_size();
  std::vector<std::size_t> group_of(n);
  std::vector<std::string> names;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (Letter a : groups[g]) group_of[a] = g;
    names.push_back(groups[g].size() == 1 ? structure.alphabet().name(groups[g].front())
                                          : component_label(structure.alphabet(), groups[g]));
  }
  auto alphabet = make_alphabet(std::move(names));
  std::vector<PartitionStructure::Entry> entries;
  for (const auto& [partition, measure] : structure.entries()) {
    // Zero-measure partitions may split a group; they carry no weight.
    if (!(measure > 0.0)) continue;
    std::vector<std::size_t> labels(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) labels[g] = partition.block_of(groups[g].front());
    entries.emplace_back(Partition::from_labels(labels), measure);
  }
  return {PartitionStructure(std::move(alphabet), std::move(entries)), std::move(groups)};
}

Distribution merge_distribution(const Distribution& p, const InseparableMerge& merge) {
  std::vector<double> probs;
  probs.reserve(merge.groups.size());
  for (const auto& group : merge.groups) probs.push_back(p.mass(group));
  return Distribution(merge.structure.alphabet_ptr(), std::move(probs), true);
}

}  // namespace itstruct
