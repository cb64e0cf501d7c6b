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

#include "itstruct/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "itstruct/entropy.hpp"

namespace itstruct {

namespace {

// Tolerance on the typicality band so exactly equi-probable sequences
// are not lost to rounding.
constexpr double kBandSlack = 1e-12;

void check_normalized(const PartitionStructure& structure) {
  if (!structure.is_normalized()) throw Error(ErrorKind::NotNormalized, "structure measure must sum to 1");
}

// Neumaier-compensated running sum.
struct Sum {
  double s = 0.0;
  double c = 0.0;
  void add(double x) {
    const double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

struct Tally {
  std::uint64_t count = 0;
  Sum mass;
};

struct Enumeration {
  std::uint64_t count = 0;
  double mass = 0.0;
  std::vector<std::uint64_t> class_sizes;  // empty unless grouped
};

/// Enumerates support^N sequences and counts those whose -log2 prob lies in
/// [lo, hi]. With `group` set, also counts per group sequence (base G).
Enumeration enumerate(const std::vector<double>& probs, std::size_t n, double lo, double hi,
                      const std::vector<std::size_t>* group, std::size_t groups, unsigned threads) {
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) support.push_back(i);
  }
  const std::size_t m = support.size();
  std::vector<double> cost(m), weight(m);
  std::vector<std::size_t> gid(m);
  for (std::size_t k = 0; k < m; ++k) {
    cost[k] = -std::log2(probs[support[k]]);
    weight[k] = probs[support[k]];
    gid[k] = group ? (*group)[support[k]] : k;
  }
  const std::size_t g_count = group ? groups : m;
  std::uint64_t stride = 1;  // G^(N-1)
  for (std::size_t j = 1; j < n; ++j) stride *= g_count;

  Enumeration out;
  if (group) out.class_sizes.assign(stride * g_count, 0);

  // One task per group of the first symbol; each writes a disjoint slice.
  auto run_task = [&](std::size_t g, Tally& tally) {
    std::vector<std::size_t> digit(n, 0);
    std::vector<double> prefix_cost(n + 1, 0.0), prefix_weight(n + 1, 1.0);
    std::vector<std::uint64_t> prefix_class(n + 1, 0);
    for (std::size_t first = 0; first < m; ++first) {
      if (gid[first] != g) continue;
      digit.assign(n, 0);
      digit[0] = first;
      std::size_t from = 0;
      while (true) {
        for (std::size_t j = from; j < n; ++j) {
          prefix_cost[j + 1] = prefix_cost[j] + cost[digit[j]];
          prefix_weight[j + 1] = prefix_weight[j] * weight[digit[j]];
          prefix_class[j + 1] = prefix_class[j] * g_count + gid[digit[j]];
        }
        const double c = prefix_cost[n];
        if (c >= lo && c <= hi) {
          ++tally.count;
          tally.mass.add(prefix_weight[n]);
          if (group) ++out.class_sizes[prefix_class[n]];
        }
        std::size_t j = n;
        while (j > 1 && digit[j - 1] + 1 == m) digit[--j] = 0;
        if (j <= 1) break;
        ++digit[j - 1];
        from = j - 1;
      }
    }
  };

  std::vector<Tally> tallies(g_count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, g_count));
  if (threads <= 1) {
    for (std::size_t g = 0; g < g_count; ++g) run_task(g, tallies[g]);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t g = t; g < g_count; g += threads) run_task(g, tallies[g]);
      });
    }
    for (auto& th : pool) th.join();
  }
  Sum mass;
  for (const auto& t : tallies) {
    out.count += t.count;
    mass.add(t.mass.value());
  }
  out.mass = mass.value();
  return out;
}

void check_space(const SequenceSpace& space, std::uint64_t cap) {
  if (space.length() == 0) throw Error(ErrorKind::UnsupportedRegime, "sequence length must be positive");
  std::size_t support = 0;
  for (double q : space.probs()) support += q > 0.0;
  const double log2_size = static_cast<double>(space.length()) * std::log2(static_cast<double>(support));
  if (log2_size > std::log2(static_cast<double>(cap)) + 1e-9) {
    throw Error(ErrorKind::SpaceTooLarge, std::to_string(support) + "^" + std::to_string(space.length()) +
                                              " sequences exceed the enumeration cap of " + std::to_string(cap));
  }
}

TypicalSet summarize(const SequenceSpace& space, double epsilon, std::uint64_t count, double mass) {
  const double n = static_cast<double>(space.length());
  const double h = space.entropy();
  std::size_t support = 0;
  for (double q : space.probs()) support += q > 0.0;
  TypicalSet t{};
  t.length = space.length();
  t.epsilon = epsilon;
  t.entropy = h;
  t.count = count;
  t.mass = mass;
  t.log2_count = count ? std::log2(static_cast<double>(count)) : -std::numeric_limits<double>::infinity();
  t.rate = t.log2_count / n;
  t.log2_lower = n * (h - epsilon) + (mass > 0.0 ? std::log2(mass) : -std::numeric_limits<double>::infinity());
  t.log2_upper = n * (h + epsilon);
  t.types_correction = static_cast<double>(support) * std::log2(n + 1.0);
  t.within_envelope = count == 0 || (t.log2_count >= t.log2_lower - 1e-9 &&
                                     t.log2_count <= t.log2_upper + t.types_correction + 1e-9);
  return t;
}

std::pair<double, double> band(const SequenceSpace& space, double epsilon) {
  const double n = static_cast<double>(space.length());
  const double h = space.entropy();
  const double slack = kBandSlack * std::max(1.0, n * h);
  return {n * (h - epsilon) - slack, n * (h + epsilon) + slack};
}

}  // namespace

SequenceSpace::SequenceSpace(SequenceKind kind, std::size_t length, std::vector<double> probs,
                             std::vector<std::string> symbols, std::vector<CellSymbol> cells)
    : kind_(kind), length_(length), probs_(std::move(probs)), symbols_(std::move(symbols)), cells_(std::move(cells)) {}

SequenceSpace SequenceSpace::letters(const Distribution& p, std::size_t length) {
  return SequenceSpace(SequenceKind::Letters, length, {p.probs().begin(), p.probs().end()}, p.alphabet().names());
}

SequenceSpace SequenceSpace::partitions(const PartitionStructure& structure, std::size_t length) {
  check_normalized(structure);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < structure.size(); ++i) names.push_back("s" + std::to_string(i));
  return SequenceSpace(SequenceKind::Partitions, length, structure.measures(), std::move(names));
}

SequenceSpace SequenceSpace::cells(const Distribution& p, const PartitionStructure& structure, std::size_t length) {
  check_normalized(structure);
  const auto q = build_q(p, structure);
  std::vector<double> probs;
  std::vector<std::string> names;
  std::vector<CellSymbol> cells;
  for (const auto& c : q.cells) {
    probs.push_back(c.q);
    cells.push_back({c.partition, c.component});
    names.push_back(component_label(structure.alphabet(), structure.partition(c.partition).component(c.component)) +
                    "@s" + std::to_string(c.partition));
  }
  return SequenceSpace(SequenceKind::Cells, length, std::move(probs), std::move(names), std::move(cells));
}

SequenceSpace SequenceSpace::components(const Distribution& p, const Partition& s, std::size_t length) {
  std::vector<std::string> names;
  for (const auto& c : s.components()) names.push_back(component_label(p.alphabet(), c));
  return SequenceSpace(SequenceKind::Components, length, reduced_masses(p, s), std::move(names));
}

double SequenceSpace::entropy() const { return itstruct::entropy(probs_); }

double SequenceSpace::log2_size() const {
  return static_cast<double>(length_) * std::log2(static_cast<double>(probs_.size()));
}

TypicalSet typical_set(const SequenceSpace& space, double epsilon, std::uint64_t cap, unsigned threads) {
  check_space(space, cap);
  const auto [lo, hi] = band(space, epsilon);
  const auto e = enumerate(space.probs(), space.length(), lo, hi, nullptr, 0, threads);
  return summarize(space, epsilon, e.count, e.mass);
}

EquivalenceClasses equivalence_class_stats(const Distribution& p, const PartitionStructure& structure,
                                           std::size_t length, double epsilon, std::uint64_t cap,
                                           unsigned threads) {
  const auto space = SequenceSpace::cells(p, structure, length);
  check_space(space, cap);
  std::vector<std::size_t> group;
  for (const auto& c : space.cell_symbols()) group.push_back(c.partition);
  const auto [lo, hi] = band(space, epsilon);
  const auto e = enumerate(space.probs(), length, lo, hi, &group, structure.size(), threads);

  EquivalenceClasses out{};
  out.typical = summarize(space, epsilon, e.count, e.mass);
  out.min_class = std::numeric_limits<std::uint64_t>::max();
  for (auto size : e.class_sizes) {
    if (size == 0) continue;
    ++out.class_count;
    out.min_class = std::min(out.min_class, size);
    out.max_class = std::max(out.max_class, size);
  }
  if (out.class_count == 0) out.min_class = 0;
  const double n = static_cast<double>(length);
  auto rate = [n](std::uint64_t x) {
    return x ? std::log2(static_cast<double>(x)) / n : -std::numeric_limits<double>::infinity();
  };
  out.structure_entropy = entropy(structure.measures());
  std::vector<double> terms;
  for (const auto& [s, m] : structure.entries()) terms.push_back(m * entropy(reduced_masses(p, s)));
  out.h_s = pairwise_sum(terms);
  out.class_rate = rate(out.class_count);
  out.min_class_rate = rate(out.min_class);
  out.max_class_rate = rate(out.max_class);
  return out;
}

std::vector<std::size_t> project(const std::vector<CellSymbol>& sequence) {
  std::vector<std::size_t> out;
  out.reserve(sequence.size());
  for (const auto& c : sequence) out.push_back(c.partition);
  return out;
}

double subset_probability(const std::vector<CellSymbol>& sequence, const PartitionStructure& structure,
                          const Distribution& p) {
  double out = 1.0;
  for (const auto& c : sequence) out *= p.mass(structure.partition(c.partition).component(c.component));
  return out;
}

SampledTypicality sample_typicality(const SequenceSpace& space, double epsilon, std::size_t samples,
                                    std::uint64_t seed) {
  if (space.length() == 0) throw Error(ErrorKind::UnsupportedRegime, "sequence length must be positive");
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> draw(space.probs().begin(), space.probs().end());
  const double n = static_cast<double>(space.length());
  const double h = space.entropy();
  std::size_t typical = 0;
  Sum rates;
  for (std::size_t k = 0; k < samples; ++k) {
    double cost = 0.0;
    for (std::size_t j = 0; j < space.length(); ++j) cost -= std::log2(space.probs()[draw(rng)]);
    const double r = cost / n;
    rates.add(r);
    if (std::abs(r - h) <= epsilon + kBandSlack) ++typical;
  }
  const double count = static_cast<double>(samples);
  return {samples ? typical / count : 0.0, samples ? rates.value() / count : 0.0};
}

std::vector<CellSymbol> sample_cells(const Distribution& p, const PartitionStructure& structure, std::size_t length,
                                     std::uint64_t seed) {
  const auto space = SequenceSpace::cells(p, structure, length);
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> draw(space.probs().begin(), space.probs().end());
  std::vector<CellSymbol> out;
  for (std::size_t j = 0; j < length; ++j) out.push_back(space.cell_symbols()[draw(rng)]);
  return out;
}

}  // namespace itstruct
