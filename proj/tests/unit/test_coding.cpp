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

#include <queue>
#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "itstruct/coding.hpp"
#include "itstruct/concordance.hpp"

using namespace itstruct;
using testgen::letters;
using testgen::part;
using testgen::random_code_tree;

namespace {

DistanceMatrix two_clusters(double inner) {
  return DistanceMatrix(letters(4), {0, inner, 1, 1, inner, 0, 1, 1, 1, 1, 0, inner, 1, 1, inner, 0});
}

PartitionStructure pair_structure() {
  return PartitionStructure(letters(4), {{Partition::singletons(4), 0.6}, {part(4, {{0, 1}, {2, 3}}), 0.4}});
}

/// Every full binary tree on the letter set (children unordered).
std::vector<CodeNodePtr> all_code_trees(const LetterSet& set) {
  if (set.size() == 1) return {code_leaf(set.front())};
  std::vector<CodeNodePtr> out;
  const std::size_t rest = set.size() - 1;
  for (std::size_t mask = 0; mask + 1 < (std::size_t{1} << rest); ++mask) {
    LetterSet a{set.front()}, b;
    for (std::size_t i = 0; i < rest; ++i) ((mask >> i) & 1 ? a : b).push_back(set[i + 1]);
    for (auto& x : all_code_trees(a)) {
      for (auto& y : all_code_trees(b)) out.push_back(code_join(x, y));
    }
  }
  return out;
}

double classical_length(const CodeTree& c, const Distribution& p) {
  double mu = 0.0;
  const auto words = c.codewords();
  for (Letter a = 0; a < p.size(); ++a) mu += p[a] * static_cast<double>(words[a].size());
  return mu;
}

double huffman_length(const std::vector<double>& p) {
  std::priority_queue<double, std::vector<double>, std::greater<>> q(p.begin(), p.end());
  double total = 0.0;
  while (q.size() > 1) {
    const double a = q.top();
    q.pop();
    const double b = q.top();
    q.pop();
    total += a + b;
    q.push(a + b);
  }
  return total;
}

}  // namespace

TEST_CASE("code tree basics") {
  auto c = CodeTree::parse(letters(3), "(a,(b,c))");
  CHECK(c.to_string() == "(a,(b,c))");
  CHECK(c.codewords() == std::vector<std::string>{"0", "10", "11"});
  CHECK(c.internal_nodes().size() == 2);
  CHECK_THROWS_AS(CodeTree::parse(letters(3), "(a,b)"), Error);
  CHECK_THROWS_AS(CodeTree::parse(letters(3), "(a,(b,a))"), Error);
  CHECK_THROWS_AS(CodeTree::parse(letters(3), "(a,(b,c)"), ParseError);
  CHECK(all_code_trees({0, 1, 2, 3}).size() == 15);
}

TEST_CASE("mu_U and lambda_U on documented values") {
  auto d = two_clusters(0.2);
  auto u = Distribution::uniform(letters(4));
  auto matching = CodeTree::parse(letters(4), "((a,b),(c,d))");
  auto mixed = CodeTree::parse(letters(4), "((a,c),(b,d))");
  CHECK(mu_u(matching, u, d) == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(mu_u(mixed, u, d) == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(lambda_u(matching, u, d) == doctest::Approx(1.2).epsilon(1e-12));

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 9;
    auto p = testgen::random_distribution(letters(n), rng, true);
    auto c = random_code_tree(n, rng);
    auto ham = DistanceMatrix::uniform(letters(n), 1.0);
    CHECK(mu_u(c, p, ham) == doctest::Approx(classical_length(c, p)).epsilon(1e-12));
    auto scaled = DistanceMatrix::uniform(letters(n), 0.7);
    CHECK(lambda_u(c, p, scaled) == doctest::Approx(0.7 * entropy(p.probs())).epsilon(1e-12));
  }

  Distribution skew(letters(4), {0.7, 0.1, 0.1, 0.1});
  CHECK(lambda_u(matching, skew, d) < mu_u(matching, skew, d));
  auto one = CodeTree(letters(1), code_leaf(0));
  CHECK(mu_u(one, Distribution::uniform(letters(1)), DistanceMatrix(letters(1), {0})) == 0.0);
}

TEST_CASE("coding chain and recursive forms on random instances") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + trial % 20;
    auto d = testgen::random_ultrametric(n, rng);
    auto t = tree_from_distance(d);
    auto p = testgen::random_distribution(d.alphabet_ptr(), rng, trial % 4 == 0);
    auto c = random_code_tree(n, rng);
    const double h = hu(t, p);
    const double lam = lambda_u(c, p, d);
    const double mu = mu_u(c, p, d);
    CHECK(h <= lam + 1e-9);
    CHECK(lam <= mu + 1e-9);
    CHECK(mu_u_recursive(c, p, d) == doctest::Approx(mu).epsilon(1e-9));
    CHECK(lambda_u_recursive(c, p, d) == doctest::Approx(lam).epsilon(1e-9));
    auto lengths = mu_u_lengths(c, p, d);
    double per_letter = 0.0;
    for (Letter a = 0; a < n; ++a) per_letter += p[a] * lengths.letter_length[a];
    CHECK(per_letter == doctest::Approx(mu).epsilon(1e-9));
  }
}

TEST_CASE("ESSCL") {
  auto a = letters(4);
  auto u = Distribution::uniform(a);
  auto s = pair_structure();
  auto matched = esscl(CodeTree::parse(a, "((a,b),(c,d))"), StructuredAlphabet(u, s));
  CHECK(matched.expected == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(matched.node_cost[0] == doctest::Approx(1.0));
  CHECK(matched.node_cost[1] == doctest::Approx(0.6));
  auto crossed = esscl(CodeTree::parse(a, "((a,c),(b,d))"), StructuredAlphabet(u, s));
  CHECK(crossed.node_cost[0] == doctest::Approx(0.6));
  // Inside {a,c} the pair partition separates a from c: merit .6 + .4.
  CHECK(crossed.node_cost[1] == doctest::Approx(1.0));
  CHECK(crossed.expected == doctest::Approx(1.6));
  CHECK(crossed.expected >= 1.6 - 1e-12);

  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 8;
    auto al = letters(n);
    auto p = testgen::random_distribution(al, rng, trial % 3 == 0);
    auto c = random_code_tree(n, rng);
    auto trad = esscl(c, StructuredAlphabet(p, PartitionStructure::traditional(al)));
    // Zero-mass splits get merit 0, so compare against the traversed bits.
    double classical = 0.0;
    for (const auto* node : c.internal_nodes()) {
      if (p.mass(node->zero->leaves) > 0 && p.mass(node->one->leaves) > 0) classical += p.mass(node->leaves);
    }
    CHECK(trad.expected == doctest::Approx(classical).epsilon(1e-12));

    std::vector<PartitionStructure::Entry> entries;
    std::uniform_real_distribution<double> w(0.0, 1.0);
    for (int k = 0; k < 3; ++k) entries.emplace_back(testgen::random_partition(n, rng), w(rng));
    PartitionStructure st(al, entries);
    auto x = StructuredAlphabet(p, st);
    auto e = esscl(c, x);
    CHECK(h_s(x) <= e.expected + 1e-9);
    double per_letter = 0.0;
    for (Letter l = 0; l < n; ++l) per_letter += p[l] * e.letter_length[l];
    CHECK(per_letter == doctest::Approx(e.expected).epsilon(1e-9));
  }
}

TEST_CASE("ESSCL strictness for a mismatched tree") {
  auto a = letters(4);
  Distribution p(a, {0.4, 0.1, 0.3, 0.2});
  auto s = pair_structure();
  auto x = StructuredAlphabet(p, s);
  const double matched = esscl(CodeTree::parse(a, "((a,b),(c,d))"), x).expected;
  const double crossed = esscl(CodeTree::parse(a, "((a,c),(b,d))"), x).expected;
  CHECK(h_s(x) <= matched + 1e-12);
  CHECK(crossed > h_s(x));
}

TEST_CASE("optimize on documented instances") {
  auto d = two_clusters(0.2);
  auto t = tree_from_distance(d);
  auto u = Distribution::uniform(letters(4));
  auto r = optimize(t, u);
  CHECK(mu_u(r.tree, u, d) == doctest::Approx(1.2).epsilon(1e-12));
  double best = 1e9;
  for (auto& root : all_code_trees({0, 1, 2, 3})) best = std::min(best, mu_u(CodeTree(letters(4), root), u, d));
  CHECK(best == doctest::Approx(1.2).epsilon(1e-12));

  auto pair = tree_from_distance(DistanceMatrix::uniform(letters(2), 0.3));
  auto q = Distribution(letters(2), {0.2, 0.8});
  CHECK(mu_u(optimize(pair, q).tree, q, pair.distance_matrix()) == doctest::Approx(0.3));

  auto star = tree_from_distance(DistanceMatrix::uniform(letters(3), 1.0));
  auto dyadic = Distribution(letters(3), {0.5, 0.25, 0.25});
  CHECK(mu_u(optimize(star, dyadic).tree, dyadic, star.distance_matrix()) == doctest::Approx(1.5));

  try {
    optimize(tree_from_distance(DistanceMatrix(letters(1), {0})), Distribution::uniform(letters(1)));
    FAIL("expected TooFewLetters");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TooFewLetters);
  }
}

TEST_CASE("optimize with Hamming distance is Huffman-optimal") {
  std::mt19937_64 rng(88);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 7;
    auto al = letters(n);
    auto p = testgen::random_distribution(al, rng, trial % 5 == 0);
    auto star = tree_from_distance(DistanceMatrix::uniform(al, 1.0));
    auto r = optimize(star, p);
    const double mu = mu_u(r.tree, p, star.distance_matrix());
    const std::vector<double> probs(p.probs().begin(), p.probs().end());
    CHECK(mu == doctest::Approx(huffman_length(probs)).epsilon(1e-9));
    CHECK(mu <= entropy(p.probs()) + 1 + 1e-9);
    if (n <= 6) {
      LetterSet all(n);
      std::iota(all.begin(), all.end(), 0);
      double best = 1e9;
      for (auto& root : all_code_trees(all)) best = std::min(best, classical_length(CodeTree(al, root), p));
      CHECK(best == doctest::Approx(huffman_length(probs)).epsilon(1e-9));
    }
  }
}

TEST_CASE("optimize trace is monotone and ends at the returned tree") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + trial % 25;
    auto d = testgen::random_ultrametric(n, rng, 0.3, 0.0);
    auto t = tree_from_distance(d);
    auto p = testgen::random_distribution(d.alphabet_ptr(), rng);
    auto r = optimize(t, p);
    REQUIRE(r.trace.size() >= 2);
    for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k] <= r.trace[k - 1] + 1e-12);
    CHECK(r.trace.front() == doctest::Approx(mu_u(initial_code_tree(t, p), p, d)).epsilon(1e-9));
    CHECK(r.trace.back() == doctest::Approx(mu_u(r.tree, p, d)).epsilon(1e-9));
    CHECK(hu(t, p) <= r.trace.back() + 1e-9);
  }
}

TEST_CASE("bound trials are seeded and thread independent") {
  auto a = run_bound_trials(40, 3, 20, 12345, 1);
  auto b = run_bound_trials(40, 3, 20, 12345, 4);
  REQUIRE(a.instances.size() == 40);
  for (std::size_t i = 0; i < 40; ++i) {
    CHECK(a.instances[i].seed == b.instances[i].seed);
    CHECK(a.instances[i].n == b.instances[i].n);
    CHECK(a.instances[i].mu == b.instances[i].mu);
    CHECK(a.instances[i].hu == b.instances[i].hu);
    CHECK(a.instances[i].n >= 3);
    CHECK(a.instances[i].n <= 20);
  }
  CHECK(a.max_gap == b.max_gap);
  CHECK(a.max_gap_index == b.max_gap_index);
  CHECK(a.violations == b.violations);

  // Generated trees are binary and normalized.
  auto c = generate_trial(trial_seed(1, 0), 3, 50);
  auto tree = tree_from_distance(DistanceMatrix(indexed_alphabet(c.summary.n), c.distances));
  CHECK(tree.is_normalized());
  for (const auto& node : tree.nodes()) {
    if (!node.is_leaf()) CHECK(node.children.size() == 2);
  }
}

TEST_CASE("typical compression") {
  auto a = letters(4);
  auto u = Distribution::uniform(a);
  auto r = typical_compression_check(StructuredAlphabet(u, pair_structure()), 2);
  CHECK(r.esscl_total == doctest::Approx(3.2).epsilon(1e-12));
  CHECK(r.esscl_per_symbol == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(r.h_s == doctest::Approx(1.6).epsilon(1e-12));

  auto trad = typical_compression_check(StructuredAlphabet(u, PartitionStructure::traditional(a)), 3);
  CHECK(trad.esscl_per_symbol == doctest::Approx(2.0).epsilon(1e-12));

  auto one = typical_compression_check(StructuredAlphabet(u, pair_structure()), 1);
  CHECK(one.esscl_total ==
        doctest::Approx(esscl(CodeTree::parse(a, "((a,b),(c,d))"), StructuredAlphabet(u, pair_structure())).expected));

  auto lazy = typical_compression_check(StructuredAlphabet(u, pair_structure()), 4);
  CHECK(lazy.esscl_per_symbol == doctest::Approx(1.6).epsilon(1e-9));

  for (auto bad : {StructuredAlphabet(Distribution(a, {0.4, 0.2, 0.2, 0.2}), pair_structure()),
                   StructuredAlphabet(Distribution::uniform(letters(3)),
                                      PartitionStructure::traditional(letters(3)))}) {
    try {
      typical_compression_check(bad, 2);
      FAIL("expected UnsupportedRegime");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::UnsupportedRegime);
    }
  }
}
