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

#include "itstruct/coding.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <iterator>
#include <numeric>
#include <random>
#include <thread>
#include <unordered_map>

#include "itstruct/concordance.hpp"
#include "itstruct/entropy.hpp"
#include "itstruct/seed.hpp"

namespace itstruct {

// --- code trees -----------------------------------------------------------

CodeNodePtr code_leaf(Letter a) {
  auto node = std::make_shared<CodeNode>();
  node->letter = a;
  node->leaves = {a};
  return node;
}

CodeNodePtr code_join(CodeNodePtr zero, CodeNodePtr one) {
  if (!zero || !one) throw Error(ErrorKind::InvalidStructure, "code node needs two children");
  auto node = std::make_shared<CodeNode>();
  std::set_union(zero->leaves.begin(), zero->leaves.end(), one->leaves.begin(), one->leaves.end(),
                 std::back_inserter(node->leaves));
  if (node->leaves.size() != zero->leaves.size() + one->leaves.size()) {
    throw Error(ErrorKind::InvalidStructure, "code subtrees share a letter");
  }
  node->zero = std::move(zero);
  node->one = std::move(one);
  return node;
}

CodeTree::CodeTree(AlphabetPtr alphabet, CodeNodePtr root)
    : alphabet_(std::move(alphabet)), root_(std::move(root)) {
  if (!alphabet_ || !root_) throw Error(ErrorKind::InvalidStructure, "empty code tree");
  LetterSet all(alphabet_->size());
  std::iota(all.begin(), all.end(), 0);
  if (root_->leaves != all) {
    throw Error(ErrorKind::AlphabetMismatch, "code tree leaves must match the alphabet");
  }
}

std::vector<const CodeNode*> CodeTree::internal_nodes() const {
  std::vector<const CodeNode*> out;
  std::function<void(const CodeNode*)> visit = [&](const CodeNode* n) {
    if (n->is_leaf()) return;
    out.push_back(n);
    visit(n->zero.get());
    visit(n->one.get());
  };
  visit(root_.get());
  return out;
}

std::vector<std::string> CodeTree::codewords() const {
  std::vector<std::string> words(letter_count());
  std::function<void(const CodeNode*, std::string&)> visit = [&](const CodeNode* n, std::string& prefix) {
    if (n->is_leaf()) {
      words[*n->letter] = prefix;
      return;
    }
    prefix.push_back('0');
    visit(n->zero.get(), prefix);
    prefix.back() = '1';
    visit(n->one.get(), prefix);
    prefix.pop_back();
  };
  std::string prefix;
  visit(root_.get(), prefix);
  return words;
}

std::string CodeTree::to_string() const {
  std::function<std::string(const CodeNode*)> render = [&](const CodeNode* n) -> std::string {
    if (n->is_leaf()) return alphabet_->name(*n->letter);
    return "(" + render(n->zero.get()) + "," + render(n->one.get()) + ")";
  };
  return render(root_.get());
}

CodeTree CodeTree::parse(AlphabetPtr alphabet, const std::string& text) {
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto fail = [&](const std::string& why) -> ParseError {
    return ParseError("code tree", 1, pos + 1, why);
  };
  std::function<CodeNodePtr()> node = [&]() -> CodeNodePtr {
    skip();
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      auto zero = node();
      skip();
      if (pos >= text.size() || text[pos] != ',') throw fail("expected ','");
      ++pos;
      auto one = node();
      skip();
      if (pos >= text.size() || text[pos] != ')') throw fail("expected ')'");
      ++pos;
      return code_join(std::move(zero), std::move(one));
    }
    const std::size_t start = pos;
    while (pos < text.size() && text[pos] != ',' && text[pos] != ')' && text[pos] != '(' &&
           !std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
    if (pos == start) throw fail("expected a letter");
    const auto name = text.substr(start, pos - start);
    const auto letter = alphabet->find(name);
    if (!letter) throw fail("unknown letter '" + name + "'");
    return code_leaf(*letter);
  };
  auto root = node();
  skip();
  if (pos < text.size() && text[pos] == ';') ++pos;
  skip();
  if (pos != text.size()) throw fail("trailing characters");
  return CodeTree(std::move(alphabet), std::move(root));
}

// --- lengths --------------------------------------------------------------

namespace {

void check_sizes(const CodeTree& c, const Distribution& p, const DistanceMatrix& d) {
  if (p.size() != c.letter_count() || d.size() != c.letter_count()) {
    throw Error(ErrorKind::AlphabetMismatch, "code tree, distribution and distances differ in size");
  }
}

/// Per-letter sums of node costs along each root-to-leaf path.
std::vector<double> path_sums(const CodeTree& c, const std::vector<double>& node_cost) {
  std::vector<double> out(c.letter_count(), 0.0);
  std::size_t index = 0;
  std::function<void(const CodeNode*, double)> visit = [&](const CodeNode* n, double acc) {
    if (n->is_leaf()) {
      out[*n->letter] = acc;
      return;
    }
    const double here = acc + node_cost[index++];
    visit(n->zero.get(), here);
    visit(n->one.get(), here);
  };
  visit(c.root().get(), 0.0);
  return out;
}

/// Expected distance under arbitrary non-negative weights, conditioned on
/// each side; zero-weight sides fall back to uniform weights.
double weighted_distance(const DistanceMatrix& d, const std::vector<double>& w, const LetterSet& b,
                         const LetterSet& c) {
  auto normalized = [&](const LetterSet& set) {
    std::vector<double> out;
    double total = 0.0;
    for (Letter a : set) total += w[a];
    for (Letter a : set) out.push_back(total > 0.0 ? w[a] / total : 1.0 / static_cast<double>(set.size()));
    return out;
  };
  const auto wb = normalized(b);
  const auto wc = normalized(c);
  std::vector<double> terms;
  terms.reserve(b.size() * c.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t j = 0; j < c.size(); ++j) terms.push_back(wb[i] * wc[j] * d(b[i], c[j]));
  }
  return pairwise_sum(terms);
}

double weight_of(const std::vector<double>& w, const LetterSet& set) {
  std::vector<double> parts;
  for (Letter a : set) parts.push_back(w[a]);
  return pairwise_sum(parts);
}

/// Recursive form shared by mu and lambda; `w` holds P conditioned on the
/// node's leaves (zero elsewhere).
double recursive_length(const CodeNode* n, const std::vector<double>& w, const DistanceMatrix& d,
                        bool with_split_entropy) {
  if (n->is_leaf()) return 0.0;
  const double m0 = weight_of(w, n->zero->leaves);
  const double m1 = weight_of(w, n->one->leaves);
  const double total = m0 + m1;
  double value = weighted_distance(d, w, n->zero->leaves, n->one->leaves);
  if (with_split_entropy) value *= total > 0.0 ? binary_entropy(m0 / total) : 0.0;
  for (const auto& [child, mass] : {std::pair{n->zero.get(), m0}, std::pair{n->one.get(), m1}}) {
    if (!(mass > 0.0)) continue;
    std::vector<double> cond(w.size(), 0.0);
    for (Letter a : child->leaves) cond[a] = w[a] / mass;
    value += (mass / total) * recursive_length(child, cond, d, with_split_entropy);
  }
  return value;
}

}  // namespace

CodeLengths mu_u_lengths(const CodeTree& c, const Distribution& p, const DistanceMatrix& d) {
  check_sizes(c, p, d);
  CodeLengths out;
  std::vector<double> terms;
  for (const auto* n : c.internal_nodes()) {
    const double cost = expected_distance(d, p, n->zero->leaves, n->one->leaves);
    out.node_cost.push_back(cost);
    terms.push_back(p.mass(n->leaves) * cost);
  }
  out.expected = pairwise_sum(terms);
  out.letter_length = path_sums(c, out.node_cost);
  return out;
}

double mu_u(const CodeTree& c, const Distribution& p, const DistanceMatrix& d) {
  return mu_u_lengths(c, p, d).expected;
}

double mu_u_recursive(const CodeTree& c, const Distribution& p, const DistanceMatrix& d) {
  check_sizes(c, p, d);
  return recursive_length(c.root().get(), {p.probs().begin(), p.probs().end()}, d, false);
}

double lambda_u(const CodeTree& c, const Distribution& p, const DistanceMatrix& d) {
  check_sizes(c, p, d);
  std::vector<double> terms;
  for (const auto* n : c.internal_nodes()) {
    const double mass = p.mass(n->leaves);
    if (!(mass > 0.0)) continue;
    const double h = binary_entropy(p.mass(n->zero->leaves) / mass);
    terms.push_back(mass * expected_distance(d, p, n->zero->leaves, n->one->leaves) * h);
  }
  return pairwise_sum(terms);
}

double lambda_u_recursive(const CodeTree& c, const Distribution& p, const DistanceMatrix& d) {
  check_sizes(c, p, d);
  return recursive_length(c.root().get(), {p.probs().begin(), p.probs().end()}, d, true);
}

namespace {

template <class Structure>
CodeLengths esscl_any(const CodeTree& c, const Distribution& p, const Structure& structure) {
  if (p.size() != c.letter_count() || structure.universe_size() != c.letter_count()) {
    throw Error(ErrorKind::AlphabetMismatch, "code tree, distribution and structure differ in size");
  }
  CodeLengths out;
  std::vector<double> terms;
  for (const auto* n : c.internal_nodes()) {
    const double mass = p.mass(n->leaves);
    double merit = 0.0;
    if (mass > 0.0 && p.mass(n->zero->leaves) > 0.0 && p.mass(n->one->leaves) > 0.0) {
      // Condition on the node's letters and re-index the split there.
      const auto& leaves = n->leaves;
      auto local = [&](const LetterSet& side) {
        LetterSet out_side;
        for (Letter a : side) out_side.push_back(std::lower_bound(leaves.begin(), leaves.end(), a) - leaves.begin());
        return out_side;
      };
      const BinarySplit split{local(n->zero->leaves), local(n->one->leaves)};
      merit = d_hat(split, restrict_structure(structure, leaves), restrict_distribution(p, leaves));
    }
    out.node_cost.push_back(merit);
    terms.push_back(mass * merit);
  }
  out.expected = pairwise_sum(terms);
  out.letter_length = path_sums(c, out.node_cost);
  return out;
}

}  // namespace

CodeLengths esscl(const CodeTree& c, const StructuredAlphabet& x) {
  return esscl_any(c, x.distribution(), x.structure());
}

CodeLengths esscl(const CodeTree& c, const Distribution& p, const ProductStructure& structure) {
  return esscl_any(c, p, structure);
}

// --- optimize -------------------------------------------------------------

CodeTree initial_code_tree(const UltrametricTree& tree, const Distribution& p) {
  if (p.size() != tree.letter_count()) {
    throw Error(ErrorKind::AlphabetMismatch, "distribution size differs from tree leaves");
  }
  const auto mass = node_masses(tree, p);
  std::function<std::pair<CodeNodePtr, double>(std::size_t)> build =
      [&](std::size_t i) -> std::pair<CodeNodePtr, double> {
    const auto& node = tree.node(i);
    if (node.is_leaf()) return {code_leaf(*node.letter), mass[i]};
    std::vector<std::pair<CodeNodePtr, double>> parts;
    for (auto c : node.children) parts.push_back(build(c));
    auto lighter = [](const std::pair<CodeNodePtr, double>& a, const std::pair<CodeNodePtr, double>& b) {
      if (a.second != b.second) return a.second < b.second;
      return a.first->leaves.front() < b.first->leaves.front();
    };
    while (parts.size() > 1) {
      std::sort(parts.begin(), parts.end(), lighter);
      auto a = parts[0];
      auto b = parts[1];
      if (b.first->leaves.front() < a.first->leaves.front()) std::swap(a, b);
      parts.erase(parts.begin(), parts.begin() + 2);
      parts.emplace_back(code_join(a.first, b.first), a.second + b.second);
    }
    return parts.front();
  };
  return CodeTree(tree.alphabet_ptr(), build(UltrametricTree::root()).first);
}

namespace {

class Optimizer {
 public:
  Optimizer(const DistanceMatrix& d, const Distribution& p, std::size_t cap)
      : d_(d), p_(p), cap_(cap) {}

  /// Sum of P(A^c) * D(A^{c0}, A^{c1}) over the subtree's internal nodes.
  double cost(const CodeNodePtr& n) {
    if (n->is_leaf()) return 0.0;
    if (auto it = cache_.find(n.get()); it != cache_.end()) return it->second.second;
    const double own = p_.mass(n->leaves) * expected_distance(d_, p_, n->zero->leaves, n->one->leaves);
    const double value = own + cost(n->zero) + cost(n->one);
    cache_.emplace(n.get(), std::pair{n, value});
    return value;
  }

  CodeNodePtr run(CodeNodePtr node) {
    while (true) {
      if (node->is_leaf()) return node;
      auto left = run(node->zero);
      auto right = run(node->one);
      auto simple = (left == node->zero && right == node->one) ? node : code_join(left, right);
      // Nested calls have already folded their own changes into total_.
      const double simple_cost = cost(simple);

      CodeNodePtr best = simple;
      double best_cost = simple_cost;
      for (auto& candidate : mixed(left, right)) {
        const double c = cost(candidate);
        if (c < best_cost - 1e-12 * std::max(1.0, std::abs(best_cost))) {
          best = candidate;
          best_cost = c;
        }
      }
      if (best == simple) return simple;
      total_ += best_cost - simple_cost;
      trace.push_back(total_);
      if (++restarts > cap_) {
        throw Error(ErrorKind::IterationCap, "optimize exceeded " + std::to_string(cap_) + " restarts");
      }
      node = best;
    }
  }

  void start(double initial) {
    total_ = initial;
    trace.push_back(initial);
  }

  std::vector<double> trace;
  std::size_t restarts = 0;

 private:
  /// Every binary tree over the given sub-codes, in a fixed order.
  static std::vector<CodeNodePtr> shapes(const std::vector<CodeNodePtr>& parts) {
    if (parts.size() == 1) return {parts.front()};
    std::vector<CodeNodePtr> out;
    const std::size_t k = parts.size();
    // Subsets containing parts[0] on the zero side; the rest on the one side.
    for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << k); mask += 2) {
      std::vector<CodeNodePtr> a, b;
      for (std::size_t i = 0; i < k; ++i) ((mask >> i) & 1 ? a : b).push_back(parts[i]);
      for (const auto& x : shapes(a)) {
        for (const auto& y : shapes(b)) out.push_back(code_join(x, y));
      }
    }
    return out;
  }

  /// The cross combinations of the sub-codes below `left` and `right`:
  /// every other binary tree over them that mixes the two sides.
  static std::vector<CodeNodePtr> mixed(const CodeNodePtr& left, const CodeNodePtr& right) {
    std::vector<CodeNodePtr> parts;
    for (const auto* side : {&left, &right}) {
      if ((*side)->is_leaf()) {
        parts.push_back(*side);
      } else {
        parts.push_back((*side)->zero);
        parts.push_back((*side)->one);
      }
    }
    if (parts.size() == 2) return {};
    const LetterSet& left_leaves = left->leaves;
    std::vector<CodeNodePtr> out;
    for (auto& t : shapes(parts)) {
      const bool simple = (t->zero->leaves == left_leaves) || (t->one->leaves == left_leaves);
      if (!simple) out.push_back(std::move(t));
    }
    return out;
  }

  const DistanceMatrix& d_;
  const Distribution& p_;
  std::size_t cap_;
  double total_ = 0.0;
  std::unordered_map<const CodeNode*, std::pair<CodeNodePtr, double>> cache_;
};

}  // namespace

OptimizeResult optimize(const UltrametricTree& tree, const Distribution& p) {
  const std::size_t n = tree.letter_count();
  if (n < 2) throw Error(ErrorKind::TooFewLetters, "optimize needs at least 2 letters");
  const auto d = tree.distance_matrix();
  const auto initial = initial_code_tree(tree, p);
  Optimizer opt(d, p, 10 * n * n);
  opt.start(opt.cost(initial.root()));
  auto root = opt.run(initial.root());
  CodeTree result(tree.alphabet_ptr(), root);
  opt.trace.push_back(opt.cost(root));
  return {std::move(result), std::move(opt.trace), opt.restarts};
}

// --- bound trials ---------------------------------------------------------

std::uint64_t trial_seed(std::uint64_t seed, std::size_t index) {
  return derive_seed(seed, index);
}

TrialCase generate_trial(std::uint64_t instance_seed, std::size_t min_letters,
                         std::size_t max_letters) {
  if (min_letters < 2 || max_letters < min_letters) {
    throw Error(ErrorKind::TooFewLetters, "letter range must satisfy 2 <= min <= max");
  }
  std::mt19937_64 rng(instance_seed);
  const std::size_t n = std::uniform_int_distribution<std::size_t>(min_letters, max_letters)(rng);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  // Random recursive binary splits, internal nodes listed breadth-first.
  struct Split {
    std::size_t lo, mid, hi;
  };
  std::vector<Split> splits;
  std::vector<std::pair<std::size_t, std::size_t>> queue{{0, n}};
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const auto [lo, hi] = queue[q];
    if (hi - lo < 2) continue;
    const std::size_t mid = std::uniform_int_distribution<std::size_t>(lo + 1, hi - 1)(rng);
    splits.push_back({lo, mid, hi});
    queue.emplace_back(lo, mid);
    queue.emplace_back(mid, hi);
  }
  std::vector<double> heights(splits.size());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto& h : heights) h = unit(rng);
  std::sort(heights.begin(), heights.end(), std::greater<>());
  const double top = heights.front();
  for (auto& h : heights) h /= top;

  TrialCase out{};
  out.distances.assign(n * n, 0.0);
  for (std::size_t k = 0; k < splits.size(); ++k) {
    const auto& s = splits[k];
    for (std::size_t i = s.lo; i < s.mid; ++i) {
      for (std::size_t j = s.mid; j < s.hi; ++j) {
        out.distances[order[i] * n + order[j]] = out.distances[order[j] * n + order[i]] = heights[k];
      }
    }
  }
  std::exponential_distribution<double> e(1.0);
  out.probs.resize(n);
  double total = 0.0;
  for (auto& x : out.probs) total += (x = e(rng));
  for (auto& x : out.probs) x /= total;
  out.summary.seed = instance_seed;
  out.summary.n = n;
  return out;
}

namespace {

TrialCase evaluate_trial(std::uint64_t instance_seed, std::size_t index, std::size_t min_letters,
                         std::size_t max_letters) {
  auto c = generate_trial(instance_seed, min_letters, max_letters);
  auto alphabet = indexed_alphabet(c.summary.n);
  const DistanceMatrix d(alphabet, c.distances);
  const Distribution p(alphabet, c.probs, true);
  const auto tree = tree_from_distance(d);
  const auto result = optimize(tree, p);
  c.summary.index = index;
  c.summary.hu = hu(tree, p);
  c.summary.mu = mu_u(result.tree, p, d);
  c.summary.gap = c.summary.mu - c.summary.hu;
  c.code = result.tree.to_string();
  return c;
}

}  // namespace

TrialReport run_bound_trials(std::size_t count, std::size_t min_letters, std::size_t max_letters,
                             std::uint64_t seed, unsigned threads) {
  if (count == 0) throw Error(ErrorKind::InvalidStructure, "trial count must be at least 1");
  if (min_letters < 2 || max_letters < min_letters) {
    throw Error(ErrorKind::TooFewLetters, "letter range must satisfy 2 <= min <= max");
  }
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));

  std::vector<TrialCase> cases(count);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(threads);
  auto worker = [&](unsigned id) {
    try {
      for (std::size_t i = next++; i < count; i = next++) {
        cases[i] = evaluate_trial(trial_seed(seed, i), i, min_letters, max_letters);
      }
    } catch (...) {
      failures[id] = std::current_exception();
      next = count;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker, t);
  worker(0);
  for (auto& t : pool) t.join();
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  TrialReport report{seed, count, min_letters, max_letters, {}, -std::numeric_limits<double>::infinity(),
                     0, 0, {}};
  report.instances.reserve(count);
  for (auto& c : cases) {
    report.instances.push_back(c.summary);
    if (c.summary.gap > report.max_gap) {
      report.max_gap = c.summary.gap;
      report.max_gap_index = c.summary.index;
    }
    if (c.summary.mu > c.summary.hu + 1.0 + kBoundSlack) {
      ++report.violations;
      report.violating.push_back(std::move(c));
    }
  }
  return report;
}

// --- typical compression --------------------------------------------------

TypicalCompression typical_compression_check(const StructuredAlphabet& x, std::size_t m) {
  const auto& p = x.distribution();
  const std::size_t n = p.size();
  if (m == 0) throw Error(ErrorKind::UnsupportedRegime, "block length must be at least 1");
  for (std::size_t a = 0; a < n; ++a) {
    if (std::abs(p[a] - 1.0 / static_cast<double>(n)) > 1e-12) {
      throw Error(ErrorKind::UnsupportedRegime, "only the uniform distribution is supported");
    }
  }
  if (n < 2 || (n & (n - 1)) != 0) {
    throw Error(ErrorKind::UnsupportedRegime, "alphabet size must be a power of two");
  }
  if (!x.structure().is_normalized()) throw Error(ErrorKind::NotNormalized, "structure must be normalized");
  double block = 1.0;
  for (std::size_t k = 0; k < m; ++k) block *= static_cast<double>(n);
  if (block > 4096.0) throw Error(ErrorKind::UnsupportedRegime, "|A|^m above 4096 is not enumerated");

  const auto pm = power_distribution(p, m);
  const auto sm = power_structure(x.structure(), m);
  std::function<CodeNodePtr(std::size_t, std::size_t)> balanced = [&](std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return code_leaf(lo);
    const std::size_t mid = lo + (hi - lo) / 2;
    return code_join(balanced(lo, mid), balanced(mid, hi));
  };
  const CodeTree tree(pm.alphabet_ptr(), balanced(0, pm.size()));
  const auto lengths = esscl(tree, pm, sm);
  return {lengths.expected / static_cast<double>(m), h_s(x), lengths.expected, m};
}

}  // namespace itstruct
