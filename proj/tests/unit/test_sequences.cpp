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

#include <cmath>
#include <map>
#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "itstruct/sequences.hpp"

using namespace itstruct;
using testgen::letters;
using testgen::part;

namespace {

// Typical count and mass by explicit recursion over every sequence.
std::pair<std::uint64_t, double> typical_oracle(const std::vector<double>& p, std::size_t n, double eps) {
  const double h = testgen::shannon(p);
  std::uint64_t count = 0;
  double mass = 0.0;
  std::vector<std::size_t> seq(n, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == n) {
      double prob = 1.0;
      for (auto s : seq) prob *= p[s];
      if (prob > 0.0 && std::abs(-std::log2(prob) / n - h) <= eps + 1e-12) {
        ++count;
        mass += prob;
      }
      return;
    }
    for (std::size_t s = 0; s < p.size(); ++s) {
      seq[j] = s;
      rec(j + 1);
    }
  };
  rec(0);
  return {count, mass};
}

// Typical count for two symbols from binomial types.
std::uint64_t binomial_typical(double q, std::size_t n, double eps) {
  const double h = testgen::shannon({q, 1 - q});
  std::uint64_t count = 0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double rate = -(k * std::log2(q) + (n - k) * std::log2(1 - q)) / n;
    if (std::abs(rate - h) <= eps + 1e-12) {
      std::uint64_t c = 1;
      for (std::size_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
      count += c;
    }
  }
  return count;
}

PartitionStructure pair_structure() {
  return PartitionStructure(letters(4), {{Partition::singletons(4), 0.6}, {part(4, {{0, 1}, {2, 3}}), 0.4}});
}

}  // namespace

TEST_CASE("uniform letters are all typical") {
  for (std::size_t n : {1, 3, 6}) {
    auto t = typical_set(SequenceSpace::letters(Distribution::uniform(letters(4)), n), 0.01);
    CHECK(t.count == (std::uint64_t{1} << (2 * n)));
    CHECK(t.mass == doctest::Approx(1.0));
    CHECK(t.rate == doctest::Approx(2.0));
  }
}

TEST_CASE("typical counts match brute force and types") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 2 + trial % 3;
    const std::size_t n = 1 + trial % 6;
    auto p = testgen::random_distribution(letters(m), rng, trial % 4 == 0);
    const double eps = 0.05 + 0.1 * (trial % 3);
    auto t = typical_set(SequenceSpace::letters(p, n), eps, kDefaultEnumerationCap, 1 + trial % 3);
    auto [count, mass] = typical_oracle({p.probs().begin(), p.probs().end()}, n, eps);
    CHECK(t.count == count);
    CHECK(t.mass == doctest::Approx(mass).epsilon(1e-12));
    CHECK(t.within_envelope);
  }

  Distribution skew(letters(2), {.75, .25});
  auto t16 = typical_set(SequenceSpace::letters(skew, 16), 0.1);
  CHECK(t16.count == binomial_typical(.75, 16, 0.1));
  CHECK(t16.log2_count >= 16 * (t16.entropy - 0.1));
  CHECK(t16.log2_count <= 16 * (t16.entropy + 0.1) + 2 * std::log2(17.0));
  CHECK(t16.within_envelope);
}

TEST_CASE("thread count does not change results") {
  auto space = SequenceSpace::cells(Distribution(letters(4), {.1, .2, .3, .4}), pair_structure(), 6);
  auto a = typical_set(space, 0.2, kDefaultEnumerationCap, 1);
  auto b = typical_set(space, 0.2, kDefaultEnumerationCap, 4);
  CHECK(a.count == b.count);
  CHECK(a.mass == b.mass);
}

TEST_CASE("enumeration cap") {
  try {
    typical_set(SequenceSpace::letters(Distribution::uniform(letters(4)), 13), 0.1);
    FAIL("expected SpaceTooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SpaceTooLarge);
  }
  CHECK_THROWS_AS(typical_set(SequenceSpace::letters(Distribution::uniform(letters(2)), 0), 0.1), Error);
}

TEST_CASE("equivalence classes") {
  auto u4 = Distribution::uniform(letters(4));
  auto trad = equivalence_class_stats(u4, PartitionStructure::traditional(letters(4)), 6, 0.1);
  CHECK(trad.class_count == 1);
  CHECK(trad.min_class == trad.typical.count);

  auto e = equivalence_class_stats(u4, pair_structure(), 8, 0.15);
  CHECK(e.structure_entropy == doctest::Approx(0.970950594).epsilon(1e-8));
  CHECK(e.h_s == doctest::Approx(1.6));
  CHECK(e.class_rate <= e.structure_entropy + 0.15 + 1e-9);
  CHECK(e.class_rate >= e.structure_entropy - 0.15 - 8.0 * 2 * std::log2(9.0) / 8.0);
  CHECK(e.min_class <= e.max_class);

  // Classes partition the typical set: brute-force regrouping.
  const auto space = SequenceSpace::cells(u4, pair_structure(), 4);
  auto small = equivalence_class_stats(u4, pair_structure(), 4, 0.3);
  const auto& q = space.probs();
  const double h = space.entropy();
  std::map<std::vector<std::size_t>, std::uint64_t> classes;
  std::uint64_t total = 0;
  std::vector<std::size_t> seq(4);
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == 4) {
      double c = 0.0;
      std::vector<CellSymbol> cells;
      for (auto s : seq) {
        c -= std::log2(q[s]);
        cells.push_back(space.cell_symbols()[s]);
      }
      if (std::abs(c / 4 - h) <= 0.3 + 1e-12) {
        ++classes[project(cells)];
        ++total;
      }
      return;
    }
    for (std::size_t s = 0; s < q.size(); ++s) {
      seq[j] = s;
      rec(j + 1);
    }
  };
  rec(0);
  CHECK(small.class_count == classes.size());
  CHECK(small.typical.count == total);
  std::uint64_t lo = UINT64_MAX, hi = 0;
  for (auto& [k, v] : classes) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(small.min_class == lo);
  CHECK(small.max_class == hi);

  CHECK_THROWS_AS(equivalence_class_stats(u4, PartitionStructure(letters(4), {{Partition::singletons(4), 0.5}}), 2, 0.1),
                  Error);
}

TEST_CASE("projection and subset probability") {
  CHECK(project({{0, 1}, {1, 0}}) == std::vector<std::size_t>{0, 1});
  CHECK(project({}).empty());
  auto s = pair_structure();
  auto u4 = Distribution::uniform(letters(4));
  CHECK(subset_probability({{0, 2}, {1, 0}}, s, u4) == doctest::Approx(0.125));
  PartitionStructure whole(letters(4), {{Partition::whole(4), 1.0}});
  CHECK(subset_probability({{0, 0}, {0, 0}}, whole, u4) == 1.0);

  auto trad = PartitionStructure::traditional(letters(4));
  auto seq = sample_cells(u4, trad, 5, 3);
  CHECK(project(seq) == std::vector<std::size_t>(5, 0));

  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    total += -std::log2(subset_probability(sample_cells(u4, s, 8, seed), s, u4)) / 8;
  }
  CHECK(total / 200 == doctest::Approx(1.6).epsilon(0.05));
}

TEST_CASE("sampled typicality") {
  Distribution skew(letters(2), {.75, .25});
  auto space = SequenceSpace::letters(skew, 200);
  auto s = sample_typicality(space, 0.1, 2000, 9);
  CHECK(s.mean_rate == doctest::Approx(space.entropy()).epsilon(0.02));
  CHECK(s.typical_fraction > 0.8);
}
