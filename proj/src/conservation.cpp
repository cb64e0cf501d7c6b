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

#include "itstruct/conservation.hpp"

#include <functional>

#include "itstruct/entropy.hpp"

namespace itstruct {

UltrametricTree with_gap_leaf(const UltrametricTree& tree) {
  if (tree.alphabet().find(std::string(1, kGap))) return tree;
  auto names = tree.alphabet().names();
  names.emplace_back(1, kGap);
  auto alphabet = make_alphabet(std::move(names));
  auto nodes = tree.nodes();
  TreeNode gap;
  gap.letter = alphabet->size() - 1;
  gap.parent = UltrametricTree::root();
  if (nodes.front().is_leaf()) {
    // One-letter tree: a new root at height 1.
    TreeNode root;
    root.height = 1.0;
    nodes.front().parent = 0;
    std::vector<TreeNode> out{root, nodes.front(), gap};
    out[0].children = {1, 2};
    return UltrametricTree(alphabet, std::move(out), 0);
  }
  nodes.push_back(gap);
  nodes.front().children.push_back(nodes.size() - 1);
  return UltrametricTree(alphabet, std::move(nodes), 0);
}

Partition clusters_below(const UltrametricTree& tree, double height) {
  std::vector<LetterSet> blocks;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    const auto& n = tree.node(i);
    if (n.is_leaf() || n.height < height) {
      blocks.push_back(n.leaves);
      return;
    }
    for (auto c : n.children) rec(c);
  };
  rec(UltrametricTree::root());
  return Partition(tree.letter_count(), std::move(blocks));
}

ConservationReport conservation_score(const Alignment& aln, const UltrametricTree& input,
                                      const ConservationOptions& options) {
  const bool extra = options.gap_mode == GapMode::ExtraLetter;
  const auto tree = extra ? with_gap_leaf(input) : input;
  const auto& alphabet = tree.alphabet();
  std::vector<std::optional<Letter>> letter_of(256);
  for (char aa : kAminoAcids) {
    auto l = alphabet.find(std::string(1, aa));
    if (!l) throw Error(ErrorKind::AlphabetMismatch, std::string("tree has no leaf for residue '") + aa + "'");
    letter_of[static_cast<unsigned char>(aa)] = l;
  }
  if (extra) letter_of[static_cast<unsigned char>(kGap)] = alphabet.find(std::string(1, kGap));

  std::optional<Partition> clusters;
  if (options.cut_height) clusters = clusters_below(tree, *options.cut_height);

  ConservationReport report{options.gap_mode, options.min_coverage, {}};
  const std::size_t rows = aln.row_count();
  for (std::size_t j = 0; j < aln.column_count(); ++j) {
    std::vector<double> counts(alphabet.size(), 0.0);
    std::size_t residues = 0, counted = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      const char c = aln.rows[r][j];
      if (c != kGap) ++residues;
      if (auto l = letter_of[static_cast<unsigned char>(c)]) {
        counts[*l] += 1.0;
        ++counted;
      }
    }
    ColumnScore s{j, rows ? static_cast<double>(residues) / static_cast<double>(rows) : 0.0, 0.0, 0.0,
                  std::nullopt, false};
    s.low_coverage = s.coverage < options.min_coverage || counted == 0;
    if (counted > 0) {
      Distribution p(tree.alphabet_ptr(), std::move(counts), true);
      s.h_u = hu(tree, p);
      s.h = entropy(p.probs());
      if (clusters) s.reduced_h = entropy(reduced_masses(p, *clusters));
    } else if (clusters) {
      s.reduced_h = 0.0;
    }
    report.columns.push_back(s);
  }
  return report;
}

std::string conservation_csv(const ConservationReport& report) {
  std::string out = "column,coverage,h_u,h,reduced_h,low_coverage\n";
  for (const auto& c : report.columns) {
    out += std::to_string(c.index) + "," + format_report(c.coverage) + "," + format_report(c.h_u) + "," +
           format_report(c.h) + "," + (c.reduced_h ? format_report(*c.reduced_h) : "") + "," +
           (c.low_coverage ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace itstruct
