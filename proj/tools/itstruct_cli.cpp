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

// Command-line front end. Every subcommand prints a JSON summary on stdout
// (conserve prints CSV). Exit codes: 0 ok, 1 validation error, 2 parse
// error, 64 usage error.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "itstruct/coding.hpp"
#include "itstruct/concordance.hpp"
#include "itstruct/conservation.hpp"
#include "itstruct/io.hpp"
#include "itstruct/linear.hpp"
#include "itstruct/notions.hpp"
#include "itstruct/sequences.hpp"
#include "itstruct/ultrametric.hpp"
#include "json.hpp"

using namespace itstruct;
using json = nlohmann::ordered_json;

namespace {

struct Display {
  std::string name = "2";
  double factor = 1.0;
};

Display display_base() {
  Display d;
  if (const char* env = std::getenv("ITSTRUCT_LOG_BASE")) {
    const std::string v = env;
    if (v == "e") {
      d = {"e", bits_to_base(std::exp(1.0))};
    } else if (v == "10") {
      d = {"10", bits_to_base(10.0)};
    } else if (v != "2") {
      throw CLI::ValidationError("ITSTRUCT_LOG_BASE", "must be 2, e or 10");
    }
  }
  return d;
}

json num(double x) {
  if (!std::isfinite(x)) return x > 0 ? json("inf") : (x < 0 ? json("-inf") : json(nullptr));
  return std::stod(format_report(x));
}

struct Context {
  Display base;
  json bits(double x) const { return num(x * base.factor); }
  void emit(json j) const {
    j["log_base"] = base.name;
    std::cout << j.dump(2) << "\n";
  }
};

std::string load(const std::string& path) { return read_file(path); }

Distribution load_probs(const std::string& path, const AlphabetPtr& alphabet) {
  return parse_distribution_json(load(path), path, alphabet);
}

UltrametricTree load_tree(const std::string& tree_path, const std::string& matrix_path) {
  if (!tree_path.empty()) return parse_newick(load(tree_path), tree_path);
  if (!matrix_path.empty()) return tree_from_distance(parse_distance_csv(load(matrix_path), matrix_path));
  throw CLI::ValidationError("--tree/--matrix", "one of them is required");
}

PartitionStructure load_structure(const std::string& path, const AlphabetPtr& alphabet) {
  if (path.empty()) return PartitionStructure::traditional(alphabet);
  return parse_structure_json(load(path), path, alphabet);
}

LetterSet letter_list(const Alphabet& a, const std::string& text) {
  LetterSet out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    if (comma > start) out.push_back(a.index_of(text.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

json letters_json(const Alphabet& a, const LetterSet& s) {
  json out = json::array();
  for (Letter x : s) out.push_back(a.name(x));
  return out;
}

LinearAlphabet points_from_names(const Alphabet& a) {
  std::vector<double> pts;
  for (const auto& n : a.names()) pts.push_back(std::stod(n));
  return LinearAlphabet(std::move(pts));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure-sensitive entropy toolkit"};
  app.require_subcommand(1);
  std::function<void(const Context&)> action;

  // hu
  std::string tree_path, matrix_path, probs_path;
  auto* hu_cmd = app.add_subcommand("hu", "Ultrametric entropy of a distribution on a tree");
  hu_cmd->add_option("--tree", tree_path, "Newick tree");
  hu_cmd->add_option("--matrix", matrix_path, "ultrametric distance CSV");
  hu_cmd->add_option("--probs", probs_path, "distribution JSON")->required();
  hu_cmd->callback([&] {
    action = [&](const Context& ctx) {
      auto tree = load_tree(tree_path, matrix_path);
      auto p = load_probs(probs_path, tree.alphabet_ptr());
      ctx.emit({{"H_U", ctx.bits(hu(tree, p))},
                {"recursive", ctx.bits(hu_recursive(tree, p))},
                {"nodewise", ctx.bits(hu_nodewise(tree, p))},
                {"arcwise", ctx.bits(hu_arcwise(tree, p))},
                {"bandwise", ctx.bits(hu_bandwise(tree, p))},
                {"H", ctx.bits(entropy(p.probs()))},
                {"normalized", tree.is_normalized()},
                {"letters", tree.letter_count()}});
    };
  });

  // hs
  std::string structure_path;
  auto* hs_cmd = app.add_subcommand("hs", "Structured entropy of a distribution");
  hs_cmd->add_option("--structure", structure_path, "structure JSON (default: traditional)");
  hs_cmd->add_option("--probs", probs_path, "distribution JSON")->required();
  hs_cmd->callback([&] {
    action = [&](const Context& ctx) {
      auto p = load_probs(probs_path, nullptr);
      auto s = load_structure(structure_path, p.alphabet_ptr());
      StructuredAlphabet x(p, s);
      json out{{"H_S", ctx.bits(h_s(x))},
               {"H", ctx.bits(entropy(p.probs()))},
               {"total_measure", num(s.total_measure())},
               {"separating", s.is_separating()}};
      if (s.is_normalized()) out["H_S_via_Q"] = ctx.bits(h_s_via_q(x));
      json parts = json::array();
      for (const auto& [part, m] : s.entries()) {
        parts.push_back({{"measure", num(m)}, {"H", ctx.bits(entropy(reduced_masses(p, part)))}});
      }
      out["partitions"] = parts;
      ctx.emit(out);
    };
  });

  // notions
  std::string joint_path, rows_path, cols_path, probs2_path;
  auto* notions_cmd = app.add_subcommand("notions", "Joint, conditional, mutual information, relative entropy");
  notions_cmd->add_option("--joint", joint_path, "joint distribution JSON");
  notions_cmd->add_option("--rows", rows_path, "row structure JSON (default: traditional)");
  notions_cmd->add_option("--cols", cols_path, "column structure JSON (default: traditional)");
  notions_cmd->add_option("--probs", probs_path, "first distribution JSON, for relative entropy");
  notions_cmd->add_option("--probs2", probs2_path, "second distribution JSON, for relative entropy");
  notions_cmd->add_option("--structure", structure_path, "structure JSON for relative entropy");
  notions_cmd->callback([&] {
    action = [&](const Context& ctx) {
      json out;
      if (!joint_path.empty()) {
        auto j = parse_joint_json(load(joint_path), joint_path);
        StructuredJoint sj(j, load_structure(rows_path, j.rows_ptr()), load_structure(cols_path, j.cols_ptr()));
        out["H_S_joint"] = ctx.bits(h_s_joint(sj));
        out["H_S_rows"] = ctx.bits(h_s(sj.row_marginal()));
        out["H_S_cols"] = ctx.bits(h_s(sj.col_marginal()));
        out["H_S_cols_given_rows"] = ctx.bits(h_s_conditional(sj, Conditioning::BGivenA));
        out["H_S_rows_given_cols"] = ctx.bits(h_s_conditional(sj, Conditioning::AGivenB));
        out["I_S"] = ctx.bits(i_s(sj));
      }
      if (!probs_path.empty() || !probs2_path.empty()) {
        if (probs_path.empty() || probs2_path.empty()) {
          throw CLI::ValidationError("--probs/--probs2", "relative entropy needs both");
        }
        auto p1 = load_probs(probs_path, nullptr);
        auto p2 = load_probs(probs2_path, p1.alphabet_ptr());
        out["D_KL_S"] = ctx.bits(d_kl_s(StructuredAlphabet(p1, load_structure(structure_path, p1.alphabet_ptr())), p2));
      }
      if (out.empty()) throw CLI::ValidationError("notions", "give --joint and/or --probs with --probs2");
      ctx.emit(out);
    };
  });

  // distance
  std::string split_text;
  auto* distance_cmd = app.add_subcommand("distance", "State distances and split concordance");
  distance_cmd->add_option("--structure", structure_path, "structure JSON")->required();
  distance_cmd->add_option("--split", split_text, "binary split 'a,b|c,d'");
  distance_cmd->add_option("--probs", probs_path, "distribution JSON (needed with --split)");
  distance_cmd->callback([&] {
    action = [&](const Context& ctx) {
      auto s = parse_structure_json(load(structure_path), structure_path);
      const auto& a = s.alphabet();
      auto m = state_distance_matrix(s);
      json rows = json::array();
      for (Letter x = 0; x < m.size(); ++x) {
        json row = json::array();
        for (Letter y = 0; y < m.size(); ++y) row.push_back(num(m(x, y)));
        rows.push_back(row);
      }
      json out{{"letters", a.names()}, {"state_distance", rows}, {"ultrametric", m.is_ultrametric()}};
      if (!split_text.empty()) {
        const auto bar = split_text.find('|');
        if (bar == std::string::npos) throw CLI::ValidationError("--split", "expected 'left|right'");
        if (probs_path.empty()) throw CLI::ValidationError("--probs", "required with --split");
        auto p = load_probs(probs_path, s.alphabet_ptr());
        auto t = BinarySplit::make(letter_list(a, split_text.substr(0, bar)), letter_list(a, split_text.substr(bar + 1)),
                                   a.size());
        out["split"] = {letters_json(a, t.left), letters_json(a, t.right)};
        out["d_hat"] = num(d_hat(t, s, p));
        if (t.left.size() + t.right.size() == a.size()) {
          json per = json::array();
          for (const auto& [part, measure] : s.entries()) {
            per.push_back({{"measure", num(measure)}, {"concordance", num(concordance(t, part, p))}});
          }
          out["concordance"] = per;
        }
      }
      ctx.emit(out);
    };
  });

  // code
  std::string code_text;
  auto* code_cmd = app.add_subcommand("code", "Code tree lengths, or the optimized code for a tree");
  code_cmd->add_option("--tree", tree_path, "Newick tree");
  code_cmd->add_option("--matrix", matrix_path, "ultrametric distance CSV");
  code_cmd->add_option("--structure", structure_path, "structure JSON (expected structured code length)");
  code_cmd->add_option("--probs", probs_path, "distribution JSON")->required();
  code_cmd->add_option("--code", code_text, "code tree such as '((a,b),c)'");
  code_cmd->callback([&] {
    action = [&](const Context& ctx) {
      if (!structure_path.empty()) {
        if (code_text.empty()) throw CLI::ValidationError("--code", "required with --structure");
        auto s = parse_structure_json(load(structure_path), structure_path);
        auto p = load_probs(probs_path, s.alphabet_ptr());
        auto c = CodeTree::parse(s.alphabet_ptr(), code_text);
        auto lengths = esscl(c, StructuredAlphabet(p, s));
        ctx.emit({{"code", c.to_string()}, {"ESSCL", num(lengths.expected)}, {"H_S", ctx.bits(h_s(p, s))}});
        return;
      }
      auto tree = load_tree(tree_path, matrix_path);
      auto p = load_probs(probs_path, tree.alphabet_ptr());
      const auto d = tree.distance_matrix();
      json out{{"H_U", ctx.bits(hu(tree, p))}};
      if (code_text.empty()) {
        auto r = optimize(tree, p);
        json trace = json::array();
        for (double v : r.trace) trace.push_back(num(v));
        out["code"] = r.tree.to_string();
        out["mu_U"] = num(mu_u(r.tree, p, d));
        out["lambda_U"] = num(lambda_u(r.tree, p, d));
        out["trace"] = trace;
        out["restarts"] = r.restarts;
      } else {
        auto c = CodeTree::parse(tree.alphabet_ptr(), code_text);
        out["code"] = c.to_string();
        out["mu_U"] = num(mu_u(c, p, d));
        out["lambda_U"] = num(lambda_u(c, p, d));
      }
      ctx.emit(out);
    };
  });

  // trials
  std::size_t count = 10000, min_letters = 3, max_letters = 50;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out_dir;
  auto* trials_cmd = app.add_subcommand("trials", "Seeded bound trials of the optimized code");
  trials_cmd->add_option("--count", count, "instances")->capture_default_str();
  trials_cmd->add_option("--seed", seed, "run seed")->capture_default_str();
  trials_cmd->add_option("--min", min_letters, "fewest letters")->capture_default_str();
  trials_cmd->add_option("--max", max_letters, "most letters")->capture_default_str();
  trials_cmd->add_option("--threads", threads, "workers (0: hardware)")->capture_default_str();
  trials_cmd->add_option("--out-dir", out_dir, "write one JSON file per violating instance");
  trials_cmd->callback([&] {
    action = [&](const Context& ctx) {
      auto r = run_bound_trials(count, min_letters, max_letters, seed, threads);
      json violating = json::array();
      for (const auto& c : r.violating) {
        violating.push_back(json::parse(trial_case_to_json(c)));
        if (!out_dir.empty()) {
          std::filesystem::create_directories(out_dir);
          const auto file = std::filesystem::path(out_dir) / ("violation_" + std::to_string(c.summary.index) + ".json");
          write_file(file.string(), trial_case_to_json(c) + "\n");
        }
      }
      ctx.emit({{"seed", r.seed},
                {"count", r.count},
                {"min_letters", r.min_letters},
                {"max_letters", r.max_letters},
                {"max_gap", num(r.max_gap)},
                {"max_gap_index", r.max_gap_index},
                {"violations", r.violations},
                {"slack", kBoundSlack},
                {"violating", violating}});
    };
  });

  // itr
  std::string points_path, thresholds_path, law = "uniform", limit;
  bool normalize = false, collapse = false, simulate = false;
  std::size_t samples = 1000, per_sample = 50;
  double step = 1e-4;
  auto* itr_cmd = app.add_subcommand("itr", "Entropy of distributions on the real line");
  itr_cmd->add_option("--points", points_path, "CSV of values or value,prob pairs");
  itr_cmd->add_option("--joint", joint_path, "joint JSON whose row and column names are numbers");
  itr_cmd->add_flag("--normalize", normalize, "rescale points to [0, 1]");
  itr_cmd->add_flag("--collapse-duplicates", collapse, "merge equal points and sum their probabilities");
  itr_cmd->add_option("--thresholds", thresholds_path, "write per-threshold CSV");
  itr_cmd->add_flag("--simulate", simulate, "standard-deviation correlation simulation");
  itr_cmd->add_option("--samples", samples, "simulation samples")->capture_default_str();
  itr_cmd->add_option("--per-sample", per_sample, "points per sample")->capture_default_str();
  itr_cmd->add_option("--law", law, "uniform or normal")->check(CLI::IsMember({"uniform", "normal"}));
  itr_cmd->add_option("--seed", seed, "simulation seed");
  itr_cmd->add_option("--limit", limit, "infinitesimal-bin limit for a uniform or normal cdf")
      ->check(CLI::IsMember({"uniform", "normal"}));
  itr_cmd->add_option("--step", step, "quadrature step for --limit")->capture_default_str();
  itr_cmd->callback([&] {
    action = [&](const Context& ctx) {
      json out;
      if (!points_path.empty()) {
        auto list = parse_points_csv(load(points_path), points_path);
        auto values = list.values;
        if (normalize) {
          const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
          const double a = *lo, w = *hi - *lo;
          for (auto& v : values) v = (v - a) / w;
        }
        if (!list.probs) {
          out["H_R_sample"] = ctx.bits(h_r_sample(values));
        } else {
          auto report = [&](const LinearAlphabet& points, const Distribution& p) {
            out["H_R"] = ctx.bits(h_r(points, p));
            out["normalized"] = points.is_normalized();
            if (thresholds_path.empty()) return;
            std::string csv = "gap,below,above,contribution\n";
            for (const auto& t : h_r_terms(points, p)) {
              csv += format_report(t.gap) + "," + format_report(t.below) + "," + format_report(t.above) + "," +
                     format_report(t.contribution * ctx.base.factor) + "\n";
            }
            write_file(thresholds_path, csv);
          };
          if (collapse) {
            auto c = collapse_duplicates(values, *list.probs);
            report(c.alphabet, c.p);
          } else {
            LinearAlphabet points(values);
            report(points, Distribution(points.alphabet_ptr(), *list.probs));
          }
        }
      }
      if (!joint_path.empty()) {
        auto j = parse_joint_json(load(joint_path), joint_path);
        auto a = points_from_names(j.rows());
        auto b = points_from_names(j.cols());
        out["H_R_joint"] = ctx.bits(h_r_joint(a, b, j));
        out["H_R_rows"] = ctx.bits(h_r(a, j.row_marginal()));
        out["H_R_cols"] = ctx.bits(h_r(b, j.col_marginal()));
        out["H_R_cols_given_rows"] = ctx.bits(h_r_conditional(a, b, j, Conditioning::BGivenA));
        out["I_R"] = ctx.bits(i_r(a, b, j));
      }
      if (simulate) {
        auto sim = stddev_correlation_sim(samples, per_sample, law == "normal" ? SampleLaw::Normal : SampleLaw::Uniform,
                                          seed);
        out["simulation"] = {{"law", law}, {"samples", samples}, {"per_sample", per_sample},
                             {"seed", seed}, {"pearson", num(sim.pearson)}};
        if (sim.degenerate) std::cerr << "warning: zero variance, correlation undefined\n";
      }
      if (!limit.empty()) {
        std::function<double(double)> cdf;
        double lo = 0.0, hi = 1.0;
        if (limit == "uniform") {
          cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
        } else {
          cdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
          lo = -8.0;
          hi = 8.0;
        }
        out["limit"] = {{"cdf", limit}, {"step", step}, {"value", ctx.bits(h_r_limit(cdf, lo, hi, step))}};
      }
      if (out.empty()) throw CLI::ValidationError("itr", "give --points, --joint, --simulate or --limit");
      ctx.emit(out);
    };
  });

  // sequences
  std::size_t length = 8;
  double epsilon = 0.1;
  std::string kind = "letters";
  std::uint64_t cap = kDefaultEnumerationCap;
  auto* seq_cmd = app.add_subcommand("sequences", "Typical-set counts by exact enumeration");
  seq_cmd->add_option("--probs", probs_path, "distribution JSON");
  seq_cmd->add_option("--structure", structure_path, "structure JSON");
  seq_cmd->add_option("--length", length, "sequence length N")->capture_default_str();
  seq_cmd->add_option("--epsilon", epsilon, "typicality tolerance")->capture_default_str();
  seq_cmd->add_option("--kind", kind, "letters, partitions, cells or classes")
      ->check(CLI::IsMember({"letters", "partitions", "cells", "classes"}))
      ->capture_default_str();
  seq_cmd->add_option("--cap", cap, "enumeration cap")->capture_default_str();
  seq_cmd->add_option("--threads", threads, "workers (0: hardware)");
  seq_cmd->callback([&] {
    action = [&](const Context& ctx) {
      auto typical_json = [&](const TypicalSet& t) {
        return json{{"length", t.length},         {"epsilon", t.epsilon},
                    {"entropy", num(t.entropy)},  {"count", t.count},
                    {"mass", num(t.mass)},        {"log2_count", num(t.log2_count)},
                    {"rate", num(t.rate)},        {"log2_lower", num(t.log2_lower)},
                    {"log2_upper", num(t.log2_upper)}, {"types_correction", num(t.types_correction)},
                    {"within_envelope", t.within_envelope}};
      };
      json out{{"kind", kind}};
      if (kind == "partitions") {
        auto s = parse_structure_json(load(structure_path), structure_path);
        out["typical"] = typical_json(typical_set(SequenceSpace::partitions(s, length), epsilon, cap, threads));
      } else {
        if (probs_path.empty()) throw CLI::ValidationError("--probs", "required");
        auto p = load_probs(probs_path, nullptr);
        if (kind == "letters") {
          out["typical"] = typical_json(typical_set(SequenceSpace::letters(p, length), epsilon, cap, threads));
        } else {
          auto s = load_structure(structure_path, p.alphabet_ptr());
          if (kind == "cells") {
            out["typical"] = typical_json(typical_set(SequenceSpace::cells(p, s, length), epsilon, cap, threads));
          } else {
            auto e = equivalence_class_stats(p, s, length, epsilon, cap, threads);
            out["typical"] = typical_json(e.typical);
            out["classes"] = {{"count", e.class_count},         {"min_size", e.min_class},
                              {"max_size", e.max_class},        {"rate", num(e.class_rate)},
                              {"min_size_rate", num(e.min_class_rate)}, {"max_size_rate", num(e.max_class_rate)},
                              {"H_structure", num(e.structure_entropy)}, {"H_S", num(e.h_s)}};
          }
        }
      }
      ctx.emit(out);
    };
  });

  // conserve
  std::string aln_path, gap_mode = "skip", csv_out;
  double min_coverage = 0.5;
  std::optional<double> cut_height;
  auto* cons_cmd = app.add_subcommand("conserve", "Per-column conservation of an alignment");
  cons_cmd->add_option("--aln", aln_path, "FASTA or Stockholm alignment")->required();
  cons_cmd->add_option("--tree", tree_path, "Newick residue tree")->required();
  cons_cmd->add_option("--gap-mode", gap_mode, "skip or extra-letter")
      ->check(CLI::IsMember({"skip", "extra-letter"}))
      ->capture_default_str();
  cons_cmd->add_option("--min-coverage", min_coverage, "flag columns below this non-gap fraction")
      ->capture_default_str();
  cons_cmd->add_option("--cut-height", cut_height, "also score residue clusters below this height");
  cons_cmd->add_option("--out", csv_out, "write the CSV here instead of stdout");
  cons_cmd->callback([&] {
    action = [&](const Context& ctx) {
      auto aln = parse_alignment(load(aln_path), aln_path);
      auto tree = parse_newick(load(tree_path), tree_path);
      ConservationOptions options{gap_mode == "skip" ? GapMode::Skip : GapMode::ExtraLetter, min_coverage, cut_height};
      auto report = conservation_score(aln, tree, options);
      if (ctx.base.factor != 1.0) {
        for (auto& c : report.columns) {
          c.h_u *= ctx.base.factor;
          c.h *= ctx.base.factor;
          if (c.reduced_h) *c.reduced_h *= ctx.base.factor;
        }
      }
      const auto csv = conservation_csv(report);
      if (csv_out.empty()) {
        std::cout << csv;
      } else {
        write_file(csv_out, csv);
        ctx.emit({{"columns", report.columns.size()}, {"rows", aln.row_count()}, {"out", csv_out}});
      }
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;
  }
  try {
    Context ctx{display_base()};
    action(ctx);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 64;
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
