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

// Hand-rolled random instance generators and brute-force oracles shared by
// the unit and acceptance suites. Nothing here calls into the library's
// tree or entropy code except to wrap results in library types.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "itstruct/alphabet.hpp"
#include "itstruct/coding.hpp"
#include "itstruct/ultrametric.hpp"

namespace testgen {

using itstruct::AlphabetPtr;
using itstruct::Distribution;
using itstruct::LetterSet;
using itstruct::Partition;

/// Alphabet "a", "b", ... for n <= 26, otherwise "a0", "a1", ...
inline AlphabetPtr letters(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back(n <= 26 ? std::string(1, static_cast<char>('a' + i)) : "a" + std::to_string(i));
  }
  return itstruct::make_alphabet(std::move(names));
}

inline Partition part(std::size_t n, std::vector<LetterSet> components) {
  return Partition(n, std::move(components));
}

inline std::vector<double> dirichlet(std::size_t n, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) total += (x = e(rng));
  for (auto& x : w) x /= total;
  return w;
}

/// Dirichlet draw with a chance of zeroing some letters.
inline std::vector<double> sparse_dirichlet(std::size_t n, std::mt19937_64& rng) {
  auto w = dirichlet(n, rng);
  std::bernoulli_distribution drop(0.2);
  double total = 0.0;
  for (auto& x : w) {
    if (drop(rng)) x = 0.0;
    total += x;
  }
  if (total <= 0.0) return dirichlet(n, rng);
  for (auto& x : w) x /= total;
  return w;
}

inline Distribution random_distribution(const AlphabetPtr& a, std::mt19937_64& rng,
                                        bool sparse = false) {
  return Distribution(a, sparse ? sparse_dirichlet(a->size(), rng) : dirichlet(a->size(), rng), true);
}

inline Partition random_partition(std::size_t n, std::mt19937_64& rng, std::size_t max_blocks = 0) {
  if (max_blocks == 0) max_blocks = n;
  std::uniform_int_distribution<std::size_t> pick(0, max_blocks - 1);
  std::vector<std::size_t> labels(n);
  for (auto& l : labels) l = pick(rng);
  return Partition::from_labels(labels);
}

/// Random ultrametric via recursive splits of a shuffled letter list. Each
/// split point gets a height drawn below its parent; heights on a level may
/// repeat (with probability `tie`) so that multi-way nodes appear. The
/// largest distance is 1.
inline std::vector<double> random_ultrametric_values(std::size_t n, std::mt19937_64& rng,
                                                     double tie = 0.2, double zero = 0.05) {
  std::vector<double> d(n * n, 0.0);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::function<void(std::size_t, std::size_t, double)> split = [&](std::size_t lo, std::size_t hi,
                                                                   double h) {
    if (hi - lo < 2) return;
    std::uniform_int_distribution<std::size_t> cut(lo + 1, hi - 1);
    const std::size_t m = cut(rng);
    for (std::size_t i = lo; i < m; ++i) {
      for (std::size_t j = m; j < hi; ++j) {
        d[order[i] * n + order[j]] = d[order[j] * n + order[i]] = h;
      }
    }
    auto child_height = [&]() {
      if (u(rng) < zero) return 0.0;
      if (u(rng) < tie) return h;  // same level: merges into a multi-way node
      return h * u(rng);
    };
    split(lo, m, child_height());
    split(m, hi, child_height());
  };
  split(0, n, 1.0);
  return d;
}

inline itstruct::DistanceMatrix random_ultrametric(std::size_t n, std::mt19937_64& rng,
                                                   double tie = 0.2, double zero = 0.05) {
  return itstruct::DistanceMatrix(letters(n), random_ultrametric_values(n, rng, tie, zero));
}

/// n distinct sorted points; normalized to [0, 1] when `normalized`.
inline std::vector<double> random_points(std::size_t n, std::mt19937_64& rng, bool normalized) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> gaps(n - 1);
  for (auto& g : gaps) g = 0.01 + u(rng);
  std::vector<double> x{normalized ? 0.0 : 4.0 * u(rng) - 2.0};
  const double total = std::accumulate(gaps.begin(), gaps.end(), 0.0);
  for (double g : gaps) x.push_back(x.back() + (normalized ? g / total : g));
  if (normalized) x.back() = 1.0;
  return x;
}

/// Random full binary code tree: repeatedly join two random parts.
inline itstruct::CodeTree random_code_tree(std::size_t n, std::mt19937_64& rng) {
  std::vector<itstruct::CodeNodePtr> parts;
  for (itstruct::Letter a = 0; a < n; ++a) parts.push_back(itstruct::code_leaf(a));
  while (parts.size() > 1) {
    std::shuffle(parts.begin(), parts.end(), rng);
    auto x = parts.back();
    parts.pop_back();
    auto y = parts.back();
    parts.pop_back();
    parts.push_back(itstruct::code_join(x, y));
  }
  return itstruct::CodeTree(letters(n), parts.front());
}

/// One to four random partitions with Dirichlet measures, scaled by a
/// random total unless `normalized`.
inline itstruct::PartitionStructure random_structure(const AlphabetPtr& a, std::mt19937_64& rng,
                                                     bool normalized) {
  std::uniform_int_distribution<int> count(1, 4);
  std::vector<itstruct::PartitionStructure::Entry> entries;
  const int k = count(rng);
  auto w = dirichlet(static_cast<std::size_t>(k), rng);
  std::uniform_real_distribution<double> scale(0.2, 3.0);
  const double s = normalized ? 1.0 : scale(rng);
  for (int i = 0; i < k; ++i) entries.emplace_back(random_partition(a->size(), rng), s * w[i]);
  return itstruct::PartitionStructure(a, entries);
}

inline double shannon(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log2(x);
  }
  return h;
}

/// H_U straight from a distance matrix: a block with a single distinct
/// inter-letter distance d contributes d*H; otherwise the letters split into
/// classes of "distance below the block maximum" and the reduced alphabet
/// sees the maximum as its uniform distance.
inline double hu_from_matrix(const std::vector<double>& d, std::size_t n,
                             const std::vector<double>& p, const std::vector<std::size_t>& block) {
  if (block.size() < 2) return 0.0;
  double total_mass = 0.0;
  for (auto a : block) total_mass += p[a];
  if (total_mass <= 0.0) return 0.0;
  double top = 0.0;
  for (auto a : block) {
    for (auto b : block) top = std::max(top, d[a * n + b]);
  }
  std::vector<std::vector<std::size_t>> classes;
  for (auto a : block) {
    bool placed = false;
    for (auto& c : classes) {
      if (d[a * n + c.front()] < top - 1e-12) {
        c.push_back(a);
        placed = true;
        break;
      }
    }
    if (!placed) classes.push_back({a});
  }
  std::vector<double> reduced;
  double h = 0.0;
  for (auto& c : classes) {
    double m = 0.0;
    for (auto a : c) m += p[a];
    reduced.push_back(m / total_mass);
  }
  h = top * shannon(reduced);
  for (std::size_t k = 0; k < classes.size(); ++k) {
    if (reduced[k] <= 0.0) continue;
    std::vector<double> cond(p.size(), 0.0);
    double m = 0.0;
    for (auto a : classes[k]) m += p[a];
    for (auto a : classes[k]) cond[a] = p[a] / m;
    h += reduced[k] * hu_from_matrix(d, n, cond, classes[k]);
  }
  return h;
}

inline double hu_from_matrix(const itstruct::DistanceMatrix& d, const Distribution& p) {
  std::vector<std::size_t> all(d.size());
  std::iota(all.begin(), all.end(), 0);
  return hu_from_matrix(d.values(), d.size(), std::vector<double>(p.probs().begin(), p.probs().end()),
                        all);
}

/// All set partitions of {0..n-1} as label vectors (restricted growth strings).
inline std::vector<std::vector<std::size_t>> all_partitions(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> labels(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (i == n) {
      out.push_back(labels);
      return;
    }
    for (std::size_t l = 0; l <= used && l < n; ++l) {
      labels[i] = l;
      rec(i + 1, std::max(used, l + 1));
    }
  };
  if (n > 0) rec(0, 0);
  return out;
}

}  // namespace testgen
