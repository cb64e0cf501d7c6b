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

#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "itstruct/conservation.hpp"
#include "itstruct/io.hpp"

using namespace itstruct;

namespace {

const char* kAaTree =
    "(((I:0.3,L:0.3,V:0.3,M:0.3):0.3,(F:0.3,W:0.3,Y:0.3):0.3):0.4,((D:0.2,E:0.2):0.4,(N:0.2,Q:0.2):0.4,"
    "(K:0.3,R:0.3,H:0.3):0.3):0.4,((A:0.4,G:0.4):0.3,(S:0.2,T:0.2):0.5,C:0.7,P:0.7):0.3);";

template <class F>
ParseError parse_error_of(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected ParseError");
  throw;
}

Alignment column_alignment(const std::vector<std::string>& columns) {
  Alignment aln;
  const std::size_t rows = columns.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    aln.names.push_back("s" + std::to_string(r));
    std::string row;
    for (const auto& c : columns) row.push_back(c[r]);
    aln.rows.push_back(row);
  }
  return aln;
}

}  // namespace

TEST_CASE("newick") {
  auto t = parse_newick("((a:0.1,b:0.1):0.4,(c:0.1,d:0.1):0.4);");
  CHECK(t.letter_count() == 4);
  CHECK(t.root_height() == doctest::Approx(0.5));
  auto d = t.distance_matrix();
  CHECK(d(0, 1) == doctest::Approx(0.1));
  CHECK(d(0, 2) == doctest::Approx(0.5));

  auto back = parse_newick(to_newick(t));
  CHECK(back.distance_matrix().values() == d.values());

  // Comments, whitespace, quoting and collapsed zero-length branches.
  auto q = parse_newick(" ( 'x y':1 , ((u:0.5,v:0.5):0,w:0.5):0.5 ) [root] ;\n");
  CHECK(q.letter_count() == 4);
  CHECK(q.node(0).children.size() == 2);
  CHECK(q.alphabet().find("x y").has_value());
  CHECK(parse_newick(to_newick(q)).distance_matrix().values() == q.distance_matrix().values());

  auto e = parse_error_of([] { parse_newick("((a:1,b:1):1,c:2"); });
  CHECK(e.line() == 1);
  CHECK(parse_error_of([] { parse_newick("(a:1,b:x);"); }).column() == 8);
  CHECK(parse_error_of([] { parse_newick("(a:1,\n b);"); }).line() == 2);
  try {
    parse_newick("(a:1,b:2);");
    FAIL("expected NotUltrametric");
  } catch (const ParseError&) {
    FAIL("wrong error type");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::NotUltrametric);
  }

  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    auto m = testgen::random_ultrametric(2 + trial % 12, rng);
    auto tree = tree_from_distance(m);
    auto again = parse_newick(to_newick(tree));
    const auto da = again.distance_matrix();
    const auto& names = m.alphabet().names();
    for (Letter a = 0; a < m.size(); ++a) {
      for (Letter b = 0; b < m.size(); ++b) {
        const auto x = again.alphabet().index_of(names[a]);
        const auto y = again.alphabet().index_of(names[b]);
        CHECK(da(x, y) == doctest::Approx(m(a, b)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("alignments") {
  const std::string fasta = ">p1 first\nACDE\nFG\n>p2\nac-e\n.g\n";
  auto a = parse_fasta(fasta);
  CHECK(a.row_count() == 2);
  CHECK(a.rows[1] == "AC-E-G");
  CHECK(a.column(2) == "D-");
  auto round = parse_fasta(to_fasta(a));
  CHECK(round.rows == a.rows);
  CHECK(round.names == a.names);

  // Stockholm block in the name/start-end style, split over two blocks.
  const std::string sto =
      "# STOCKHOLM 1.0\n#=GF ID demo\n"
      "Q1/26-33  IFQVATIG\nQ2/3-10   LFQHSTMA\nQ3/12-19  IYQVSTMT\nQ4/67-74  LYQTSTMA\n"
      "Q5/19-26  IYQTSLSM\nQ6/46-53  LFQYSTIN\nQ7/1-8    LFQYNTLG\nQ8/1-8    AYQHGTLA\n\n"
      "Q1/26-33  SR\nQ2/3-10   AL\nQ3/12-19  SL\nQ4/67-74  AL\nQ5/19-26  AL\nQ6/46-53  AL\nQ7/1-8    AL\nQ8/1-8    QI\n//\n";
  auto s = parse_alignment(sto);
  CHECK(s.row_count() == 8);
  CHECK(s.column_count() == 10);
  CHECK(s.column(2) == "QQQQQQQQ");
  auto s2 = parse_stockholm(to_stockholm(s));
  CHECK(s2.rows == s.rows);

  auto bad = parse_error_of([] { parse_fasta(">a\nAC*E\n"); });
  CHECK(bad.line() == 2);
  CHECK(bad.column() == 3);
  auto ragged = parse_error_of([] { parse_fasta(">a\nACE\n>b\nAC\n"); });
  CHECK(ragged.line() == 3);
  parse_error_of([] { parse_stockholm("# STOCKHOLM 1.0\na ACD\n"); });
  parse_error_of([] { parse_stockholm("a ACD\n//\n"); });
}

TEST_CASE("csv and json") {
  auto d = DistanceMatrix(testgen::letters(3), {0, .2, 1, .2, 0, 1, 1, 1, 0});
  auto d2 = parse_distance_csv(to_distance_csv(d));
  CHECK(d2.values() == d.values());
  CHECK(d2.alphabet() == d.alphabet());
  CHECK(parse_error_of([] { parse_distance_csv(",a,b\na,0,1\nb,1,x\n"); }).line() == 3);

  auto pts = parse_points_csv("value,prob\n0,0.25\n0.5,0.25\n1,0.5\n");
  CHECK(pts.values == std::vector<double>{0, .5, 1});
  CHECK(pts.probs->at(2) == 0.5);
  CHECK_FALSE(parse_points_csv("1\n2\n3\n").probs.has_value());

  auto p = parse_distribution_json(R"({"letters": ["a","b","c"], "probs": [0.2, 0.3, 0.499999999]})");
  CHECK(p.size() == 3);
  auto by_name = parse_distribution_json(R"({"probs": {"x": 0.25, "y": 0.75}})");
  CHECK(by_name.alphabet().name(1) == "y");
  auto reordered = parse_distribution_json(R"({"probs": {"c": 0.5, "a": 0.5}})", "<json>", testgen::letters(3));
  CHECK(reordered[2] == 0.5);
  CHECK(reordered[1] == 0.0);
  try {
    parse_distribution_json(R"({"letters": ["a","b"], "probs": [0.5, 0.49]})");
    FAIL("expected InvalidDistribution");
  } catch (const ParseError&) {
    FAIL("wrong error type");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidDistribution);
  }
  auto syntax = parse_error_of([] { parse_distribution_json("{\n  \"probs\": [0.5,,]\n}"); });
  CHECK(syntax.line() == 2);
  auto p2 = parse_distribution_json(distribution_to_json(p));
  CHECK(std::vector<double>(p2.probs().begin(), p2.probs().end()) ==
        std::vector<double>(p.probs().begin(), p.probs().end()));

  auto s = parse_structure_json(R"({"letters": ["a","b","c","d"],
      "partitions": [{"blocks": [["a"],["b"],["c"],["d"]], "measure": 0.6},
                     {"blocks": [["a","b"],["c","d"]], "measure": 0.4}]})");
  CHECK(s.size() == 2);
  CHECK(s.measure(1) == 0.4);
  auto s2 = parse_structure_json(structure_to_json(s));
  CHECK(s2.entries() == s.entries());
  CHECK(parse_structure_json(R"({"letters": ["a","b"], "traditional": true})").partition(0) ==
        Partition::singletons(2));

  auto j = parse_joint_json(R"({"rows": ["x","y"], "cols": ["u","v"], "values": [[0.1,0.2],[0.3,0.4]]})");
  CHECK(j(1, 0) == 0.3);
  auto j2 = parse_joint_json(joint_to_json(j));
  CHECK(std::vector<double>(j2.values().begin(), j2.values().end()) ==
        std::vector<double>(j.values().begin(), j.values().end()));

  CHECK(format_report(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(0.1) == "0.1");
}

TEST_CASE("conservation scores") {
  auto tree = parse_newick(kAaTree);
  CHECK(tree.is_normalized());
  auto aln = column_alignment({"DDDDDDDD", "DDDDEEEE", "DDDDIIII", "DD--EE--", "--------", "DDDD----", "AGAGAGAG"});
  auto report = conservation_score(aln, tree);
  REQUIRE(report.columns.size() == 7);
  CHECK(report.columns[0].h_u == doctest::Approx(0.0));
  CHECK(report.columns[0].h == doctest::Approx(0.0));
  CHECK(report.columns[1].h_u == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(report.columns[1].h == doctest::Approx(1.0));
  CHECK(report.columns[2].h_u == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(report.columns[3].h_u == doctest::Approx(report.columns[1].h_u).epsilon(1e-12));
  CHECK(report.columns[3].coverage == 0.5);
  CHECK_FALSE(report.columns[3].low_coverage);
  CHECK(report.columns[4].low_coverage);
  CHECK(report.columns[4].h_u == 0.0);
  CHECK(report.columns[6].h_u == doctest::Approx(0.4).epsilon(1e-9));

  // Gaps as a letter at the root height.
  auto extra = conservation_score(aln, tree, {GapMode::ExtraLetter, 0.5, std::nullopt});
  CHECK(extra.columns[5].h_u == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(extra.columns[0].h_u == doctest::Approx(0.0));

  // Reduced alphabet: clusters below height 0.5 merge D/E but not D/I.
  auto reduced = conservation_score(aln, tree, {GapMode::Skip, 0.5, 0.5});
  CHECK(*reduced.columns[1].reduced_h == doctest::Approx(0.0));
  CHECK(*reduced.columns[2].reduced_h == doctest::Approx(1.0));

  // Row order and uniform row duplication leave scores unchanged.
  Alignment shuffled = aln, doubled = aln;
  std::reverse(shuffled.rows.begin(), shuffled.rows.end());
  doubled.rows.insert(doubled.rows.end(), aln.rows.begin(), aln.rows.end());
  doubled.names.insert(doubled.names.end(), aln.names.begin(), aln.names.end());
  auto r1 = conservation_score(shuffled, tree);
  auto r2 = conservation_score(doubled, tree);
  for (std::size_t j = 0; j < aln.column_count(); ++j) {
    CHECK(r1.columns[j].h_u == doctest::Approx(report.columns[j].h_u).epsilon(1e-12));
    CHECK(r2.columns[j].h_u == doctest::Approx(report.columns[j].h_u).epsilon(1e-12));
  }

  auto partial = parse_newick("((A:1,C:1):1,D:2);");
  CHECK_THROWS_AS(conservation_score(aln, partial), Error);
  CHECK(conservation_csv(report).find("column,coverage,h_u,h,reduced_h,low_coverage") == 0);
}
