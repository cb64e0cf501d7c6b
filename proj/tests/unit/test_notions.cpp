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
#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "itstruct/notions.hpp"
#include "itstruct/ultrametric.hpp"

using namespace itstruct;
using testgen::letters;
using testgen::part;
using testgen::random_structure;

namespace {

// Double-sum oracles: iterate letters directly, accumulate component masses
// by hand, take logs with std::log2.

double hs_double_sum(const Distribution& p, const PartitionStructure& s) {
  double total = 0.0;
  for (const auto& [partition, measure] : s.entries()) {
    for (const auto& component : partition.components()) {
      double m = 0.0;
      for (Letter a : component) m += p[a];
      if (m > 0.0) total -= measure * m * std::log2(m);
    }
  }
  return total;
}

struct JointOracle {
  double joint = 0.0, a_given_b = 0.0, b_given_a = 0.0, info = 0.0;
};

JointOracle joint_double_sums(const StructuredJoint& j) {
  JointOracle o;
  const auto& pj = j.joint();
  for (const auto& [sa, ma] : j.row_structure().entries()) {
    for (const auto& [sb, mb] : j.col_structure().entries()) {
      const double w = ma * mb;
      for (const auto& ci : sa.components()) {
        double pi = 0.0;
        for (Letter a : ci) {
          for (Letter b = 0; b < pj.col_count(); ++b) pi += pj(a, b);
        }
        for (const auto& cj : sb.components()) {
          double pjm = 0.0, pij = 0.0;
          for (Letter b : cj) {
            for (Letter a = 0; a < pj.row_count(); ++a) pjm += pj(a, b);
          }
          for (Letter a : ci) {
            for (Letter b : cj) pij += pj(a, b);
          }
          if (pij <= 0.0) continue;
          o.joint -= w * pij * std::log2(pij);
          o.a_given_b -= w * pij * std::log2(pij / pjm);
          o.b_given_a -= w * pij * std::log2(pij / pi);
          o.info += w * pij * std::log2(pij / (pi * pjm));
        }
      }
    }
  }
  return o;
}

JointDistribution random_joint(std::size_t n, std::size_t m, std::mt19937_64& rng) {
  return JointDistribution(letters(n), make_alphabet([&] {
                             std::vector<std::string> v;
                             for (std::size_t i = 0; i < m; ++i) v.push_back("y" + std::to_string(i));
                             return v;
                           }()),
                           testgen::sparse_dirichlet(n * m, rng));
}

PartitionStructure pair_structure() {
  return PartitionStructure(letters(4), {{Partition::singletons(4), 0.6}, {part(4, {{0, 1}, {2, 3}}), 0.4}});
}

}  // namespace

TEST_CASE("h_s on documented values") {
  auto a = letters(4);
  Distribution p(a, {0.1, 0.2, 0.3, 0.4});
  CHECK(h_s(p, PartitionStructure::traditional(a)) == doctest::Approx(entropy(p.probs())).epsilon(1e-14));
  CHECK(h_s(Distribution::uniform(a), pair_structure()) == doctest::Approx(1.6).epsilon(1e-14));

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    auto d = testgen::random_ultrametric(2 + trial % 10, rng);
    auto t = tree_from_distance(d);
    auto q = testgen::random_distribution(d.alphabet_ptr(), rng);
    CHECK(h_s(q, to_partition_structure(t)) == doctest::Approx(hu_bandwise(t, q)).epsilon(1e-12));
  }
}

TEST_CASE("h_s matches the double-sum form") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    auto a = letters(1 + trial % 8);
    auto p = testgen::random_distribution(a, rng, true);
    auto s = random_structure(a, rng, trial % 2 == 0);
    CHECK(h_s(p, s) == doctest::Approx(hs_double_sum(p, s)).epsilon(1e-12));
  }
}

TEST_CASE("h_s streams lazy product structures") {
  auto a = letters(4);
  auto p = Distribution::uniform(a);
  auto s = pair_structure();
  for (std::size_t m = 1; m <= 5; ++m) {
    auto power = power_structure(s, m);
    CHECK(h_s(power_distribution(p, m), power) == doctest::Approx(1.6 * m).epsilon(1e-12));
  }
}

TEST_CASE("joint notions on documented values") {
  auto a = letters(4);
  auto s = pair_structure();
  auto u = Distribution::uniform(a);
  StructuredJoint sq(JointDistribution::independent(u, u), s, s);
  CHECK(h_s_joint(sq) == doctest::Approx(3.2).epsilon(1e-12));

  std::mt19937_64 rng(6);
  auto p = testgen::random_distribution(a, rng);
  auto q = testgen::random_distribution(letters(3), rng);
  auto sb = random_structure(letters(3), rng, true);
  StructuredJoint indep(JointDistribution::independent(p, q), s, sb);
  CHECK(h_s_joint(indep) == doctest::Approx(h_s(p, s) + h_s(q, sb)).epsilon(1e-12));
  CHECK(h_s_conditional(indep, Conditioning::AGivenB) == doctest::Approx(h_s(p, s)).epsilon(1e-12));
  CHECK(i_s(indep) == doctest::Approx(0.0));

  auto joint = random_joint(4, 3, rng);
  StructuredJoint trad(joint, PartitionStructure::traditional(joint.rows_ptr()),
                       PartitionStructure::traditional(joint.cols_ptr()));
  const auto v = joint.values();
  CHECK(h_s_joint(trad) == doctest::Approx(entropy(v)).epsilon(1e-14));
  CHECK(h_s_conditional(trad, Conditioning::AGivenB) ==
        doctest::Approx(conditional_entropy_rows_given_cols(v, 4, 3)).epsilon(1e-14));
  CHECK(i_s(trad) == doctest::Approx(mutual_information(v, 4, 3)).epsilon(1e-14));
}

TEST_CASE("identity coupling") {
  auto a = letters(4);
  std::mt19937_64 rng(9);
  auto p = testgen::random_distribution(a, rng);
  std::vector<double> diag(16, 0.0);
  for (Letter x = 0; x < 4; ++x) diag[x * 4 + x] = p[x];

  // One partition: every reduced joint is deterministic.
  PartitionStructure single(a, {{part(4, {{0, 1}, {2, 3}}), 1.0}});
  StructuredJoint j1(JointDistribution(a, a, diag), single, single);
  CHECK(h_s_conditional(j1, Conditioning::AGivenB) == doctest::Approx(0.0));
  CHECK(i_s(j1) == doctest::Approx(h_s(p, single)).epsilon(1e-12));

  // Several partitions: cross pairs leave residual conditional entropy, and
  // the mutual-information identity still holds.
  auto s = pair_structure();
  StructuredJoint j2(JointDistribution(a, a, diag), s, s);
  CHECK(i_s(j2) == doctest::Approx(h_s(p, s) - h_s_conditional(j2, Conditioning::AGivenB)).epsilon(1e-12));
}

TEST_CASE("joint notions match double sums and satisfy the chain rule") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 6, m = 1 + (trial / 6) % 6;
    auto joint = random_joint(n, m, rng);
    const bool normalized = trial % 3 != 0;
    StructuredJoint j(joint, random_structure(joint.rows_ptr(), rng, normalized),
                      random_structure(joint.cols_ptr(), rng, normalized));
    const auto o = joint_double_sums(j);
    CHECK(h_s_joint(j) == doctest::Approx(o.joint).epsilon(1e-12));
    CHECK(h_s_conditional(j, Conditioning::AGivenB) == doctest::Approx(o.a_given_b).epsilon(1e-12));
    CHECK(h_s_conditional(j, Conditioning::BGivenA) == doctest::Approx(o.b_given_a).epsilon(1e-12));
    CHECK(i_s(j) == doctest::Approx(o.info).epsilon(1e-9));
    CHECK(h_s_conditional(j, Conditioning::AGivenB) >= 0.0);
    CHECK(i_s(j) >= 0.0);
    if (!normalized) continue;
    const double ha = h_s(j.row_marginal());
    const double hb = h_s(j.col_marginal());
    CHECK(h_s_joint(j) == doctest::Approx(ha + h_s_conditional(j, Conditioning::BGivenA)).epsilon(1e-9));
    CHECK(h_s_joint(j) == doctest::Approx(hb + h_s_conditional(j, Conditioning::AGivenB)).epsilon(1e-9));
    CHECK(i_s(j) == doctest::Approx(ha - h_s_conditional(j, Conditioning::AGivenB)).epsilon(1e-9));
    CHECK(i_s(j) == doctest::Approx(hb - h_s_conditional(j, Conditioning::BGivenA)).epsilon(1e-9));
  }
}

TEST_CASE("relative entropy") {
  auto a = letters(4);
  Distribution p(a, {0.1, 0.2, 0.3, 0.4});
  Distribution q(a, {0.25, 0.25, 0.25, 0.25});
  CHECK(d_kl_s(StructuredAlphabet(p, pair_structure()), p) == 0.0);
  CHECK(d_kl_s(StructuredAlphabet(p, PartitionStructure::traditional(a)), q) ==
        doctest::Approx(kl_divergence(p.probs(), q.probs())).epsilon(1e-14));
  PartitionStructure blind(a, {{part(4, {{0, 1}, {2, 3}}), 1.0}});
  CHECK(d_kl_s(StructuredAlphabet(Distribution(a, {0.5, 0, 0.5, 0}), blind), q) == 0.0);
  CHECK(std::isinf(d_kl_s(StructuredAlphabet(q, pair_structure()), Distribution(a, {0.5, 0.5, 0, 0}))));
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    auto pa = testgen::random_distribution(a, rng);
    auto pb = testgen::random_distribution(a, rng);
    CHECK(d_kl_s(StructuredAlphabet(pa, random_structure(a, rng, false)), pb) >= 0.0);
  }
}

TEST_CASE("Q form") {
  auto a = letters(4);
  auto u = Distribution::uniform(a);
  auto x = StructuredAlphabet(u, pair_structure());
  const auto space = build_q(u, pair_structure());
  CHECK(entropy(space.masses()) == doctest::Approx(2.5710).epsilon(1e-4));
  CHECK(binary_entropy(0.6) == doctest::Approx(0.9710).epsilon(1e-4));
  CHECK(h_s_via_q(x) == doctest::Approx(1.6).epsilon(1e-12));

  Distribution p(a, {0.1, 0.2, 0.3, 0.4});
  CHECK(h_s_via_q(StructuredAlphabet(p, PartitionStructure::traditional(a))) ==
        doctest::Approx(entropy(p.probs())).epsilon(1e-12));
  auto s = part(4, {{0, 3}, {1, 2}});
  CHECK(h_s_via_q(StructuredAlphabet(p, PartitionStructure(a, {{s, 1.0}}))) ==
        doctest::Approx(entropy(reduced_masses(p, s))).epsilon(1e-12));

  try {
    h_s_via_q(StructuredAlphabet(p, PartitionStructure(a, {{s, 2.0}})));
    FAIL("expected NotNormalized");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotNormalized);
  }
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    auto b = letters(1 + trial % 7);
    auto pr = testgen::random_distribution(b, rng, true);
    auto st = random_structure(b, rng, true);
    CHECK(h_s_via_q(StructuredAlphabet(pr, st)) == doctest::Approx(h_s(pr, st)).epsilon(1e-9));
  }
}

TEST_CASE("additivity, upper bound and concavity") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> lam(0.01, 0.99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 5;
    auto a = letters(n);
    auto s1 = random_structure(a, rng, false);
    auto s2 = random_structure(a, rng, false);
    auto both = combine(s1, s2);
    auto p = testgen::random_distribution(a, rng, true);
    auto p2 = testgen::random_distribution(a, rng);
    CHECK(h_s(p, both) == doctest::Approx(h_s(p, s1) + h_s(p, s2)).epsilon(1e-12));
    CHECK(d_kl_s(StructuredAlphabet(p, both), p2) ==
          doctest::Approx(d_kl_s(StructuredAlphabet(p, s1), p2) + d_kl_s(StructuredAlphabet(p, s2), p2))
              .epsilon(1e-12));

    auto joint = random_joint(n, 3, rng);
    auto sb = random_structure(joint.cols_ptr(), rng, false);
    auto r1 = random_structure(joint.rows_ptr(), rng, false);
    auto r2 = random_structure(joint.rows_ptr(), rng, false);
    StructuredJoint j1(joint, r1, sb), j2(joint, r2, sb), j12(joint, combine(r1, r2), sb);
    CHECK(h_s_joint(j12) == doctest::Approx(h_s_joint(j1) + h_s_joint(j2)).epsilon(1e-12));
    CHECK(i_s(j12) == doctest::Approx(i_s(j1) + i_s(j2)).epsilon(1e-9));
    CHECK(h_s_conditional(j12, Conditioning::AGivenB) ==
          doctest::Approx(h_s_conditional(j1, Conditioning::AGivenB) +
                          h_s_conditional(j2, Conditioning::AGivenB))
              .epsilon(1e-12));

    auto norm = random_structure(a, rng, true);
    CHECK(h_s(p, norm) <= entropy(p.probs()) + 1e-12);
    const double l = lam(rng);
    std::vector<double> mix(n);
    for (std::size_t i = 0; i < n; ++i) mix[i] = l * p[i] + (1 - l) * p2[i];
    Distribution pm(a, mix, true);
    CHECK(h_s(pm, s1) >= l * h_s(p, s1) + (1 - l) * h_s(p2, s1) - 1e-9);
  }
}
