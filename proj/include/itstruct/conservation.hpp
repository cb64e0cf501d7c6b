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

// Per-column conservation of an amino-acid alignment: ultrametric entropy
// against a residue tree, classical entropy, and optionally the entropy of
// the residue clusters below a cut height.

#include <optional>
#include <vector>

#include "itstruct/io.hpp"
#include "itstruct/ultrametric.hpp"

namespace itstruct {

enum class GapMode {
  Skip,         // drop gaps and renormalize over residues
  ExtraLetter,  // count gaps as a letter at the root height from every residue
};

struct ColumnScore {
  std::size_t index;
  double coverage;  // non-gap fraction
  double h_u;
  double h;
  std::optional<double> reduced_h;
  bool low_coverage;
};

struct ConservationReport {
  GapMode gap_mode;
  double min_coverage;
  std::vector<ColumnScore> columns;
};

struct ConservationOptions {
  GapMode gap_mode = GapMode::Skip;
  /// Columns below this non-gap fraction are flagged.
  double min_coverage = 0.5;
  /// Clusters are the maximal subtrees with height below this value.
  std::optional<double> cut_height;
};

/// The tree's letters must include every amino acid; in extra-letter mode a
/// gap leaf "-" is added under the root when missing. Columns without any
/// counted symbol score 0 and are flagged.
ConservationReport conservation_score(const Alignment& aln, const UltrametricTree& tree,
                                      const ConservationOptions& options = {});

/// The tree with a leaf named "-" attached to the root.
UltrametricTree with_gap_leaf(const UltrametricTree& tree);

/// Leaf sets of the maximal subtrees whose height is below `height`.
Partition clusters_below(const UltrametricTree& tree, double height);

std::string conservation_csv(const ConservationReport& report);

}  // namespace itstruct
