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

#include "itstruct/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

namespace itstruct {

using ojson = nlohmann::ordered_json;

namespace {

struct LineView {
  std::size_t number;
  std::string_view text;
};

std::vector<LineView> split_lines(std::string_view text) {
  std::vector<LineView> out;
  std::size_t start = 0, number = 1;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back({number++, line});
    if (end == text.size()) break;
    start = end + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

/// Residue check; returns the normalized character or 0 when invalid.
char normalize_residue(char c) {
  if (c == '.' || c == kGap) return kGap;
  const char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return kAminoAcids.find(u) == std::string_view::npos ? '\0' : u;
}

void append_residues(std::string& row, std::string_view chunk, const std::string& source, std::size_t line,
                     std::size_t column0) {
  for (std::size_t k = 0; k < chunk.size(); ++k) {
    const char c = chunk[k];
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    const char r = normalize_residue(c);
    if (!r) {
      throw ParseError(source, line, column0 + k + 1,
                       std::string("'") + c + "' is not an amino acid or gap symbol");
    }
    row.push_back(r);
  }
}

void check_rectangular(const Alignment& aln, const std::string& source, const std::vector<std::size_t>& lines) {
  if (aln.rows.empty()) throw ParseError(source, 0, 0, "alignment has no sequences");
  for (std::size_t i = 0; i < aln.rows.size(); ++i) {
    if (aln.rows[i].size() != aln.rows.front().size()) {
      throw ParseError(source, lines[i], 0,
                       "sequence '" + aln.names[i] + "' has length " + std::to_string(aln.rows[i].size()) +
                           ", expected " + std::to_string(aln.rows.front().size()));
    }
  }
}

[[noreturn]] void rethrow_json(const nlohmann::json::parse_error& e, std::string_view text, const std::string& source) {
  std::size_t line = 1, column = 1;
  const std::size_t stop = std::min<std::size_t>(e.byte ? e.byte - 1 : 0, text.size());
  for (std::size_t k = 0; k < stop; ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  std::string what = e.what();
  if (auto at = what.find("syntax error"); at != std::string::npos) what = what.substr(at);
  throw ParseError(source, line, column, what);
}

ojson parse_json(std::string_view text, const std::string& source) {
  try {
    return ojson::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    rethrow_json(e, text, source);
  }
}

[[noreturn]] void bad_field(const std::string& source, const std::string& what) {
  throw ParseError(source, 0, 0, what);
}

std::vector<std::string> string_list(const ojson& j, const std::string& key, const std::string& source) {
  if (!j.contains(key) || !j[key].is_array()) bad_field(source, "\"" + key + "\" must be an array of names");
  std::vector<std::string> out;
  for (const auto& v : j[key]) {
    if (!v.is_string()) bad_field(source, "\"" + key + "\" entries must be strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

double number(const ojson& v, const std::string& source, const std::string& what) {
  if (!v.is_number()) bad_field(source, what + " must be a number");
  return v.get<double>();
}

AlphabetPtr alphabet_for(const ojson& j, const std::string& source, const AlphabetPtr& given) {
  if (!j.contains("letters")) {
    if (given) return given;
    bad_field(source, "missing \"letters\"");
  }
  auto names = string_list(j, "letters", source);
  if (given) {
    if (names != given->names()) {
      throw Error(ErrorKind::AlphabetMismatch, source + ": letters differ from the expected alphabet");
    }
    return given;
  }
  return make_alphabet(std::move(names));
}

bool needs_quotes(const std::string& name) {
  return name.empty() || name.find_first_of("()[]':;, _\t\n") != std::string::npos;
}

// --- Newick -----------------------------------------------------------------

struct RawNode {
  std::string label;
  double length = 0.0;
  bool has_length = false;
  std::vector<std::size_t> children;
};

class NewickParser {
 public:
  NewickParser(std::string_view text, const std::string& source) : text_(text), source_(source) {}

  std::vector<RawNode> run() {
    skip();
    parse_subtree(true);
    skip();
    if (peek() != ';') fail("expected ';' at the end of the tree");
    ++pos_;
    skip();
    if (pos_ != text_.size()) fail("unexpected text after ';'");
    return std::move(nodes_);
  }

 private:
  std::size_t parse_subtree(bool root = false) {
    const std::size_t id = nodes_.size();
    nodes_.emplace_back();
    if (peek() == '(') {
      ++pos_;
      while (true) {
        skip();
        const std::size_t child = parse_subtree();
        nodes_[id].children.push_back(child);
        skip();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        if (peek() == ')') {
          ++pos_;
          break;
        }
        fail("expected ',' or ')'");
      }
      skip();
    }
    nodes_[id].label = parse_label();
    skip();
    if (peek() == ':') {
      ++pos_;
      skip();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                     text_[pos_] == '.' || text_[pos_] == '-' || text_[pos_] == '+')) {
        ++pos_;
      }
      auto v = to_double(text_.substr(start, pos_ - start));
      if (!v) fail("invalid branch length", start);
      if (*v < 0.0) fail("negative branch length", start);
      nodes_[id].length = *v;
      nodes_[id].has_length = true;
    }
    if (nodes_[id].children.empty() && nodes_[id].label.empty()) fail("leaf without a name");
    if (!root && !nodes_[id].has_length) {
      fail(nodes_[id].label.empty() ? "internal branch has no length" : "branch to '" + nodes_[id].label + "' has no length");
    }
    return id;
  }

  std::string parse_label() {
    std::string out;
    if (peek() == '\'') {
      ++pos_;
      while (true) {
        if (pos_ >= text_.size()) fail("unterminated quoted label");
        if (text_[pos_] == '\'') {
          if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '\'') {
            out.push_back('\'');
            pos_ += 2;
            continue;
          }
          ++pos_;
          return out;
        }
        out.push_back(text_[pos_++]);
      }
    }
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::string_view("():;,[]'").find(c) != std::string_view::npos || std::isspace(static_cast<unsigned char>(c))) {
        break;
      }
      out.push_back(c == '_' ? ' ' : c);
      ++pos_;
    }
    return out;
  }

  void skip() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_[pos_] == '[') {
        const auto end = text_.find(']', pos_);
        if (end == std::string_view::npos) fail("unterminated comment");
        pos_ = end + 1;
      } else {
        break;
      }
    }
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  [[noreturn]] void fail(const std::string& reason, std::optional<std::size_t> at = std::nullopt) const {
    const std::size_t stop = std::min(at.value_or(pos_), text_.size());
    std::size_t line = 1, column = 1;
    for (std::size_t k = 0; k < stop; ++k) {
      if (text_[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(source_, line, column, reason);
  }

  std::string_view text_;
  const std::string& source_;
  std::size_t pos_ = 0;
  std::vector<RawNode> nodes_;
};

}  // namespace

std::string Alignment::column(std::size_t j) const {
  std::string out;
  for (const auto& r : rows) out.push_back(r.at(j));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Parse, "cannot write " + path);
  out << text;
}

Alignment parse_fasta(std::string_view text, const std::string& source) {
  Alignment aln;
  std::vector<std::size_t> header_lines;
  for (const auto& [number, raw] : split_lines(text)) {
    const auto line = trim(raw);
    if (line.empty() || line.front() == ';') continue;
    if (line.front() == '>') {
      auto name = trim(line.substr(1));
      name = name.substr(0, std::min(name.size(), name.find_first_of(" \t")));
      if (name.empty()) throw ParseError(source, number, 2, "sequence header without a name");
      aln.names.emplace_back(name);
      aln.rows.emplace_back();
      header_lines.push_back(number);
      continue;
    }
    if (aln.rows.empty()) throw ParseError(source, number, 1, "sequence data before the first '>' header");
    append_residues(aln.rows.back(), raw, source, number, 0);
  }
  check_rectangular(aln, source, header_lines);
  return aln;
}

Alignment parse_stockholm(std::string_view text, const std::string& source) {
  const auto lines = split_lines(text);
  std::size_t k = 0;
  while (k < lines.size() && trim(lines[k].text).empty()) ++k;
  if (k == lines.size() || trim(lines[k].text).substr(0, 11) != "# STOCKHOLM") {
    throw ParseError(source, k < lines.size() ? lines[k].number : 1, 1, "missing '# STOCKHOLM' header");
  }
  Alignment aln;
  std::map<std::string, std::size_t> index;
  std::vector<std::size_t> first_line;
  bool terminated = false;
  for (++k; k < lines.size(); ++k) {
    const auto& [number, raw] = lines[k];
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line == "//") {
      terminated = true;
      break;
    }
    const auto split = line.find_first_of(" \t");
    if (split == std::string_view::npos) throw ParseError(source, number, 1, "expected '<name> <sequence>'");
    const std::string name(line.substr(0, split));
    auto [it, inserted] = index.emplace(name, aln.rows.size());
    if (inserted) {
      aln.names.push_back(name);
      aln.rows.emplace_back();
      first_line.push_back(number);
    }
    const auto offset = static_cast<std::size_t>(line.data() - raw.data()) + split;
    append_residues(aln.rows[it->second], line.substr(split), source, number, offset);
  }
  if (!terminated) throw ParseError(source, lines.back().number, 1, "missing '//' terminator");
  check_rectangular(aln, source, first_line);
  return aln;
}

Alignment parse_alignment(std::string_view text, const std::string& source) {
  const auto t = trim(text);
  if (t.substr(0, 11) == "# STOCKHOLM") return parse_stockholm(text, source);
  return parse_fasta(text, source);
}

std::string to_fasta(const Alignment& aln) {
  std::string out;
  for (std::size_t i = 0; i < aln.rows.size(); ++i) {
    out += ">" + aln.names[i] + "\n";
    for (std::size_t j = 0; j < aln.rows[i].size(); j += 60) out += aln.rows[i].substr(j, 60) + "\n";
  }
  return out;
}

std::string to_stockholm(const Alignment& aln) {
  std::size_t width = 0;
  for (const auto& n : aln.names) width = std::max(width, n.size());
  std::string out = "# STOCKHOLM 1.0\n";
  for (std::size_t i = 0; i < aln.rows.size(); ++i) {
    out += aln.names[i] + std::string(width - aln.names[i].size() + 2, ' ') + aln.rows[i] + "\n";
  }
  return out + "//\n";
}

UltrametricTree parse_newick(std::string_view text, const std::string& source) {
  auto raw = NewickParser(text, source).run();

  // Depth of every node below the root, preorder (children follow parents).
  std::vector<double> depth(raw.size(), 0.0);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    for (auto c : raw[i].children) {
      depth[c] = depth[i] + raw[c].length;
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i].children.empty()) total = std::max(total, depth[i]);
  }
  const double tol = kUltrametricTolerance * std::max(1.0, total);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!raw[i].children.empty()) continue;
    if (std::abs(depth[i] - total) > tol) {
      throw Error(ErrorKind::NotUltrametric, source + ": leaf '" + raw[i].label + "' is at depth " +
                                                 format_number(depth[i]) + ", others at " + format_number(total));
    }
    names.push_back(raw[i].label);
  }
  auto alphabet = make_alphabet(names);

  // Rebuild, collapsing single-child nodes and zero-height internal steps.
  std::vector<TreeNode> nodes;
  std::function<void(std::size_t, std::optional<std::size_t>)> emit = [&](std::size_t i,
                                                                          std::optional<std::size_t> parent) {
    if (raw[i].children.empty()) {
      TreeNode leaf;
      leaf.letter = alphabet->index_of(raw[i].label);
      leaf.parent = parent;
      nodes.push_back(leaf);
      if (parent) nodes[*parent].children.push_back(nodes.size() - 1);
      return;
    }
    const double h = std::max(0.0, total - depth[i]);
    // A node at its parent's height, or with one child, merges upward.
    const bool merge = parent && (raw[i].children.size() == 1 || std::abs(nodes[*parent].height - h) <= tol);
    std::size_t here;
    if (merge) {
      here = *parent;
    } else if (raw[i].children.size() == 1 && !parent) {
      // Single-child root: descend.
      emit(raw[i].children.front(), std::nullopt);
      return;
    } else {
      TreeNode node;
      node.height = h;
      node.parent = parent;
      nodes.push_back(node);
      here = nodes.size() - 1;
      if (parent) nodes[*parent].children.push_back(here);
    }
    for (auto c : raw[i].children) emit(c, here);
  };
  emit(0, std::nullopt);
  return UltrametricTree(alphabet, std::move(nodes), 0);
}

std::string to_newick(const UltrametricTree& tree) {
  auto label = [](const std::string& name) {
    if (!needs_quotes(name)) return name;
    std::string out = "'";
    for (char c : name) {
      out.push_back(c);
      if (c == '\'') out.push_back('\'');
    }
    return out + "'";
  };
  std::function<std::string(std::size_t)> rec = [&](std::size_t i) {
    const auto& n = tree.node(i);
    std::string out;
    if (n.is_leaf()) {
      out = label(tree.alphabet().name(*n.letter));
    } else {
      out = "(";
      for (std::size_t k = 0; k < n.children.size(); ++k) out += (k ? "," : "") + rec(n.children[k]);
      out += ")";
    }
    if (i != UltrametricTree::root()) out += ":" + format_number(tree.arc_length(i));
    return out;
  };
  return rec(UltrametricTree::root()) + ";";
}

DistanceMatrix parse_distance_csv(std::string_view text, const std::string& source) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  for (const auto& [number, raw] : split_lines(text)) {
    if (trim(raw).empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = raw.find(',', start);
      fields.emplace_back(trim(raw.substr(start, comma == std::string_view::npos ? raw.npos : comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    rows.emplace_back(number, std::move(fields));
  }
  if (rows.empty()) throw ParseError(source, 1, 1, "empty matrix");
  std::vector<std::string> names(rows[0].second.begin() + 1, rows[0].second.end());
  const std::size_t n = names.size();
  if (rows.size() != n + 1) {
    throw ParseError(source, rows.back().first, 1,
                     "expected " + std::to_string(n) + " data rows, found " + std::to_string(rows.size() - 1));
  }
  std::vector<double> values(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [number, fields] = rows[i + 1];
    if (fields.size() != n + 1) {
      throw ParseError(source, number, 1, "expected " + std::to_string(n + 1) + " fields");
    }
    if (fields[0] != names[i]) {
      throw ParseError(source, number, 1, "row name '" + fields[0] + "' does not match column '" + names[i] + "'");
    }
    for (std::size_t j = 0; j < n; ++j) {
      auto v = to_double(fields[j + 1]);
      if (!v) throw ParseError(source, number, 0, "field " + std::to_string(j + 2) + " is not a number");
      values[i * n + j] = *v;
    }
  }
  return DistanceMatrix(make_alphabet(std::move(names)), std::move(values));
}

std::string to_distance_csv(const DistanceMatrix& d) {
  std::string out;
  for (const auto& name : d.alphabet().names()) out += "," + name;
  out += "\n";
  for (Letter a = 0; a < d.size(); ++a) {
    out += d.alphabet().name(a);
    for (Letter b = 0; b < d.size(); ++b) out += "," + format_number(d(a, b));
    out += "\n";
  }
  return out;
}

PointList parse_points_csv(std::string_view text, const std::string& source) {
  PointList out;
  std::vector<double> probs;
  std::optional<std::size_t> width;
  bool first = true;
  for (const auto& [number, raw] : split_lines(text)) {
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    auto v = to_double(line.substr(0, comma));
    if (!v) {
      if (first) {
        first = false;
        continue;
      }
      throw ParseError(source, number, 1, "expected a number");
    }
    first = false;
    const std::size_t w = comma == std::string_view::npos ? 1 : 2;
    if (width && *width != w) throw ParseError(source, number, 1, "mixed one- and two-column rows");
    width = w;
    out.values.push_back(*v);
    if (w == 2) {
      auto p = to_double(line.substr(comma + 1));
      if (!p) throw ParseError(source, number, comma + 2, "expected a probability");
      probs.push_back(*p);
    }
  }
  if (out.values.empty()) throw ParseError(source, 1, 1, "no points");
  if (width == 2) out.probs = std::move(probs);
  return out;
}

Distribution parse_distribution_json(std::string_view text, const std::string& source, const AlphabetPtr& alphabet) {
  const auto j = parse_json(text, source);
  if (!j.is_object() || !j.contains("probs")) bad_field(source, "expected an object with \"probs\"");
  const auto& probs = j["probs"];
  if (probs.is_object()) {
    std::vector<std::string> names;
    std::vector<double> values;
    for (const auto& [k, v] : probs.items()) {
      names.push_back(k);
      values.push_back(number(v, source, "probability of '" + k + "'"));
    }
    if (!alphabet) return Distribution(make_alphabet(std::move(names)), std::move(values));
    std::vector<double> ordered(alphabet->size(), 0.0);
    for (std::size_t i = 0; i < names.size(); ++i) ordered[alphabet->index_of(names[i])] = values[i];
    return Distribution(alphabet, std::move(ordered));
  }
  if (!probs.is_array()) bad_field(source, "\"probs\" must be an array or an object");
  auto a = alphabet_for(j, source, alphabet);
  std::vector<double> values;
  for (const auto& v : probs) values.push_back(number(v, source, "probability"));
  if (values.size() != a->size()) {
    throw Error(ErrorKind::AlphabetMismatch, source + ": " + std::to_string(values.size()) + " probabilities for " +
                                                 std::to_string(a->size()) + " letters");
  }
  return Distribution(a, std::move(values));
}

std::string distribution_to_json(const Distribution& p) {
  ojson j;
  j["letters"] = p.alphabet().names();
  j["probs"] = std::vector<double>(p.probs().begin(), p.probs().end());
  return j.dump(2);
}

PartitionStructure parse_structure_json(std::string_view text, const std::string& source,
                                        const AlphabetPtr& alphabet) {
  const auto j = parse_json(text, source);
  if (!j.is_object()) bad_field(source, "expected an object");
  auto a = alphabet_for(j, source, alphabet);
  if (j.value("traditional", false)) return PartitionStructure::traditional(a);
  if (!j.contains("partitions") || !j["partitions"].is_array()) bad_field(source, "\"partitions\" must be an array");
  std::vector<PartitionStructure::Entry> entries;
  for (const auto& e : j["partitions"]) {
    if (!e.is_object() || !e.contains("blocks") || !e["blocks"].is_array()) {
      bad_field(source, "each partition needs \"blocks\"");
    }
    std::vector<LetterSet> blocks;
    for (const auto& b : e["blocks"]) {
      if (!b.is_array()) bad_field(source, "each block must be an array of letters");
      LetterSet block;
      for (const auto& name : b) {
        if (!name.is_string()) bad_field(source, "block entries must be letter names");
        block.push_back(a->index_of(name.get<std::string>()));
      }
      blocks.push_back(std::move(block));
    }
    const double m = e.contains("measure") ? number(e["measure"], source, "measure") : 1.0;
    entries.emplace_back(Partition(a->size(), std::move(blocks)), m);
  }
  return PartitionStructure(a, std::move(entries));
}

std::string structure_to_json(const PartitionStructure& s) {
  ojson j;
  j["letters"] = s.alphabet().names();
  j["partitions"] = ojson::array();
  for (const auto& [p, m] : s.entries()) {
    ojson blocks = ojson::array();
    for (const auto& c : p.components()) {
      ojson block = ojson::array();
      for (Letter x : c) block.push_back(s.alphabet().name(x));
      blocks.push_back(block);
    }
    j["partitions"].push_back({{"blocks", blocks}, {"measure", m}});
  }
  return j.dump(2);
}

JointDistribution parse_joint_json(std::string_view text, const std::string& source) {
  const auto j = parse_json(text, source);
  if (!j.is_object()) bad_field(source, "expected an object");
  auto rows = make_alphabet(string_list(j, "rows", source));
  auto cols = make_alphabet(string_list(j, "cols", source));
  if (!j.contains("values") || !j["values"].is_array() || j["values"].size() != rows->size()) {
    bad_field(source, "\"values\" must hold one array per row");
  }
  std::vector<double> values;
  for (const auto& r : j["values"]) {
    if (!r.is_array() || r.size() != cols->size()) bad_field(source, "each row of \"values\" needs one entry per column");
    for (const auto& v : r) values.push_back(number(v, source, "joint probability"));
  }
  return JointDistribution(rows, cols, std::move(values));
}

std::string joint_to_json(const JointDistribution& p) {
  ojson j;
  j["rows"] = p.rows().names();
  j["cols"] = p.cols().names();
  j["values"] = ojson::array();
  for (Letter a = 0; a < p.row_count(); ++a) {
    std::vector<double> row;
    for (Letter b = 0; b < p.col_count(); ++b) row.push_back(p(a, b));
    j["values"].push_back(row);
  }
  return j.dump(2);
}

std::string trial_case_to_json(const TrialCase& c) {
  ojson j = {{"index", c.summary.index}, {"seed", c.summary.seed}, {"n", c.summary.n},
             {"H_U", c.summary.hu},      {"mu_U", c.summary.mu},   {"gap", c.summary.gap},
             {"distances", c.distances}, {"probs", c.probs},       {"code", c.code}};
  return j.dump(2);
}

std::string format_number(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

std::string format_report(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace itstruct
