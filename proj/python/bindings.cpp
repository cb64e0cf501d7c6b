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

// Python bindings. Inputs are plain lists and dicts; letters are indices
// unless a Newick tree or an alignment supplies names.

#include <map>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "itstruct/coding.hpp"
#include "itstruct/concordance.hpp"
#include "itstruct/conservation.hpp"
#include "itstruct/io.hpp"
#include "itstruct/linear.hpp"
#include "itstruct/notions.hpp"
#include "itstruct/sequences.hpp"
#include "itstruct/ultrametric.hpp"

namespace py = pybind11;
using namespace itstruct;

namespace {

using Blocks = std::vector<std::vector<std::size_t>>;
using StructureArg = std::vector<std::pair<Blocks, double>>;

DistanceMatrix matrix(const std::vector<std::vector<double>>& rows) {
  std::vector<double> flat;
  for (const auto& r : rows) {
    if (r.size() != rows.size()) throw Error(ErrorKind::InvalidDistribution, "distance matrix must be square");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return DistanceMatrix(indexed_alphabet(rows.size()), std::move(flat));
}

PartitionStructure structure(const AlphabetPtr& a, const StructureArg& entries_in) {
  std::vector<PartitionStructure::Entry> entries;
  for (const auto& [blocks, measure] : entries_in) entries.emplace_back(Partition(a->size(), blocks), measure);
  return PartitionStructure(a, std::move(entries));
}

Distribution named_probs(const AlphabetPtr& a, const std::map<std::string, double>& probs) {
  std::vector<double> p(a->size(), 0.0);
  for (const auto& [name, v] : probs) p[a->index_of(name)] = v;
  return Distribution(a, std::move(p));
}

double hu_by(const UltrametricTree& t, const Distribution& p, const std::string& method) {
  if (method == "recursive") return hu_recursive(t, p);
  if (method == "nodewise") return hu_nodewise(t, p);
  if (method == "arcwise") return hu_arcwise(t, p);
  if (method == "bandwise") return hu_bandwise(t, p);
  throw py::value_error("method must be recursive, nodewise, arcwise or bandwise");
}

py::dict typical_dict(const TypicalSet& t) {
  py::dict d;
  d["length"] = t.length;
  d["epsilon"] = t.epsilon;
  d["entropy"] = t.entropy;
  d["count"] = t.count;
  d["mass"] = t.mass;
  d["log2_count"] = t.log2_count;
  d["rate"] = t.rate;
  d["log2_lower"] = t.log2_lower;
  d["log2_upper"] = t.log2_upper;
  d["types_correction"] = t.types_correction;
  d["within_envelope"] = t.within_envelope;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Structure-sensitive entropy: ultrametric, partition-structure and real-line notions";

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  m.def(
      "hu",
      [](const std::vector<std::vector<double>>& distances, const std::vector<double>& probs,
         const std::string& method) {
        auto d = matrix(distances);
        return hu_by(tree_from_distance(d), Distribution(d.alphabet_ptr(), probs), method);
      },
      py::arg("distances"), py::arg("probs"), py::arg("method") = "arcwise",
      "Ultrametric entropy in bits of probs on an ultrametric distance matrix.");

  m.def(
      "hu_newick",
      [](const std::string& newick, const std::map<std::string, double>& probs, const std::string& method) {
        auto t = parse_newick(newick);
        return hu_by(t, named_probs(t.alphabet_ptr(), probs), method);
      },
      py::arg("newick"), py::arg("probs"), py::arg("method") = "arcwise",
      "Ultrametric entropy of a {leaf name: probability} map on a Newick tree.");

  m.def(
      "h_s",
      [](const std::vector<double>& probs, const StructureArg& entries_in) {
        auto a = indexed_alphabet(probs.size());
        return h_s(Distribution(a, probs), structure(a, entries_in));
      },
      py::arg("probs"), py::arg("structure"),
      "Structured entropy; structure is a list of (blocks, measure) with blocks of letter indices.");

  m.def(
      "d_hat",
      [](const std::vector<double>& probs, const StructureArg& entries_in, const std::vector<std::size_t>& left,
         const std::vector<std::size_t>& right) {
        auto a = indexed_alphabet(probs.size());
        return d_hat(BinarySplit::make(left, right, a->size()), structure(a, entries_in), Distribution(a, probs));
      },
      py::arg("probs"), py::arg("structure"), py::arg("left"), py::arg("right"),
      "Concordance distance between two disjoint letter sets.");

  m.def(
      "state_distances",
      [](std::size_t n, const StructureArg& entries_in) {
        auto d = state_distance_matrix(structure(indexed_alphabet(n), entries_in));
        std::vector<std::vector<double>> rows(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j) rows[i][j] = d(i, j);
        }
        return rows;
      },
      py::arg("n"), py::arg("structure"), "Sum of measures of partitions separating each pair.");

  m.def(
      "code_lengths",
      [](const std::vector<std::vector<double>>& distances, const std::vector<double>& probs,
         const std::string& code) {
        auto d = matrix(distances);
        Distribution p(d.alphabet_ptr(), probs);
        auto c = CodeTree::parse(d.alphabet_ptr(), code);
        return std::make_pair(mu_u(c, p, d), lambda_u(c, p, d));
      },
      py::arg("distances"), py::arg("probs"), py::arg("code"),
      "(mu_U, lambda_U) of a code tree in nested form over letters a0, a1, ...");

  m.def(
      "optimize",
      [](const std::vector<std::vector<double>>& distances, const std::vector<double>& probs) {
        auto d = matrix(distances);
        Distribution p(d.alphabet_ptr(), probs);
        auto r = optimize(tree_from_distance(d), p);
        return std::make_pair(r.tree.to_string(), mu_u(r.tree, p, d));
      },
      py::arg("distances"), py::arg("probs"), "Optimized code tree and its mu_U.");

  m.def(
      "bound_trials",
      [](std::size_t count, std::uint64_t seed, std::size_t min_letters, std::size_t max_letters,
         unsigned threads) {
        TrialReport r;
        {
          py::gil_scoped_release release;
          r = run_bound_trials(count, min_letters, max_letters, seed, threads);
        }
        py::dict d;
        d["count"] = r.count;
        d["violations"] = r.violations;
        d["max_gap"] = r.max_gap;
        d["max_gap_index"] = r.max_gap_index;
        return d;
      },
      py::arg("count"), py::arg("seed"), py::arg("min_letters") = 3, py::arg("max_letters") = 50,
      py::arg("threads") = 0, "Seeded instances checking mu_U <= H_U + 1 for the optimized code.");

  m.def(
      "h_r",
      [](const std::vector<double>& points, const std::vector<double>& probs) {
        LinearAlphabet a(points);
        return h_r(a, Distribution(a.alphabet_ptr(), probs));
      },
      py::arg("points"), py::arg("probs"), "Real-line entropy of probs on strictly increasing points.");

  m.def("h_r_sample", &h_r_sample, py::arg("values"), "Real-line entropy of distinct sample values.");

  m.def(
      "stddev_correlation",
      [](std::size_t samples, std::size_t points, const std::string& law, std::uint64_t seed) {
        SampleLaw l;
        if (law == "uniform") {
          l = SampleLaw::Uniform;
        } else if (law == "normal") {
          l = SampleLaw::Normal;
        } else {
          throw py::value_error("law must be uniform or normal");
        }
        return stddev_correlation_sim(samples, points, l, seed).pearson;
      },
      py::arg("samples"), py::arg("points"), py::arg("law") = "uniform", py::arg("seed") = 1,
      "Pearson r between sample real-line entropy and standard deviation.");

  m.def(
      "typical_set",
      [](const std::vector<double>& probs, std::size_t length, double epsilon) {
        auto a = indexed_alphabet(probs.size());
        TypicalSet t;
        {
          py::gil_scoped_release release;
          t = typical_set(SequenceSpace::letters(Distribution(a, probs), length), epsilon);
        }
        return typical_dict(t);
      },
      py::arg("probs"), py::arg("length"), py::arg("epsilon"), "Exact weak-typicality count of IID letter sequences.");

  m.def(
      "conservation",
      [](const std::string& alignment, const std::string& newick, const std::string& gap_mode,
         double min_coverage) {
        ConservationOptions o;
        if (gap_mode == "extra-letter") {
          o.gap_mode = GapMode::ExtraLetter;
        } else if (gap_mode != "skip") {
          throw py::value_error("gap_mode must be skip or extra-letter");
        }
        o.min_coverage = min_coverage;
        auto report = conservation_score(parse_alignment(alignment), parse_newick(newick), o);
        py::list out;
        for (const auto& c : report.columns) {
          py::dict d;
          d["column"] = c.index;
          d["coverage"] = c.coverage;
          d["h_u"] = c.h_u;
          d["h"] = c.h;
          d["low_coverage"] = c.low_coverage;
          out.append(d);
        }
        return out;
      },
      py::arg("alignment"), py::arg("newick"), py::arg("gap_mode") = "skip", py::arg("min_coverage") = 0.5,
      "Per-column scores of a FASTA or Stockholm alignment against a residue tree.");
}
