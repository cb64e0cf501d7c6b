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

// Text formats: FASTA and Stockholm alignments, Newick trees, CSV distance
// matrices and point lists, and JSON distributions, structures and joints.
// Readers report malformed input as ParseError with a 1-based line and
// column; well-formed input that violates a domain rule raises Error.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "itstruct/alphabet.hpp"
#include "itstruct/coding.hpp"
#include "itstruct/ultrametric.hpp"

namespace itstruct {

inline constexpr std::string_view kAminoAcids = "ACDEFGHIKLMNPQRSTVWY";
inline constexpr char kGap = '-';

/// Equal-length rows over the amino acids and the gap symbol. Readers map
/// lowercase residues to uppercase and '.' to '-'.
struct Alignment {
  std::vector<std::string> names;
  std::vector<std::string> rows;

  std::size_t row_count() const noexcept { return rows.size(); }
  std::size_t column_count() const noexcept { return rows.empty() ? 0 : rows.front().size(); }
  std::string column(std::size_t j) const;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view text);

Alignment parse_fasta(std::string_view text, const std::string& source = "<fasta>");
Alignment parse_stockholm(std::string_view text, const std::string& source = "<stockholm>");
/// Stockholm when the text starts with "# STOCKHOLM", FASTA otherwise.
Alignment parse_alignment(std::string_view text, const std::string& source = "<alignment>");
std::string to_fasta(const Alignment& aln);
std::string to_stockholm(const Alignment& aln);

/// Newick with branch lengths. A node's height is its distance to the
/// leaves below it; leaf depths must agree within kUltrametricTolerance
/// relative (NotUltrametric). Zero-length internal branches and
/// single-child nodes are collapsed.
UltrametricTree parse_newick(std::string_view text, const std::string& source = "<newick>");
std::string to_newick(const UltrametricTree& tree);

/// Header row of letter names (first cell ignored), then one row per
/// letter: name followed by n distances.
DistanceMatrix parse_distance_csv(std::string_view text, const std::string& source = "<csv>");
std::string to_distance_csv(const DistanceMatrix& d);

/// One value per line, or value,probability pairs. A header line is
/// skipped when its first field is not numeric.
struct PointList {
  std::vector<double> values;
  std::optional<std::vector<double>> probs;
};
PointList parse_points_csv(std::string_view text, const std::string& source = "<csv>");

/// {"letters": [...], "probs": [...]} or {"probs": {"a": 0.5, ...}}. With
/// `alphabet` given, letters are matched to it by name.
Distribution parse_distribution_json(std::string_view text, const std::string& source = "<json>",
                                     const AlphabetPtr& alphabet = nullptr);
std::string distribution_to_json(const Distribution& p);

/// {"letters": [...], "partitions": [{"blocks": [["a","b"],["c"]], "measure": 0.4}, ...]}
/// or {"letters": [...], "traditional": true}.
PartitionStructure parse_structure_json(std::string_view text, const std::string& source = "<json>",
                                        const AlphabetPtr& alphabet = nullptr);
std::string structure_to_json(const PartitionStructure& s);

/// {"rows": [...], "cols": [...], "values": [[...], ...]}.
JointDistribution parse_joint_json(std::string_view text, const std::string& source = "<json>");
std::string joint_to_json(const JointDistribution& j);

/// A bound-trial instance with its distances, probabilities and optimized
/// code, enough to replay it.
std::string trial_case_to_json(const TrialCase& c);

/// Shortest decimal that round-trips.
std::string format_number(double x);
/// Twelve significant digits, used for reports.
std::string format_report(double x);

}  // namespace itstruct
