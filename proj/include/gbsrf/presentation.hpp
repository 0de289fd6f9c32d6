#pragma once

// Input presentations and their standard form.
//
// File format (UTF-8, '#' starts a comment, blank lines ignored):
//
//   hnn
//   gens a b
//   rel t : a^2 -> (a b)^3        # t · lhs · t^-1 = rhs
//
//   graph
//   vertex v1 gens a
//   vertex v2 gens b
//   edge e : v1 a^2 -- v2 b^3
//
// In graph mode a generator name used by several vertices is renamed to
// "<name>_<vertex>" in every vertex that declares it; edge words are read in
// the scope of their own vertex.

#include <cstddef>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "gbsrf/error.hpp"
#include "gbsrf/syntax.hpp"
#include "gbsrf/words.hpp"

namespace gbsrf {

struct HnnRelation {
  std::string stable;
  Word lhs;
  Word rhs;
  std::size_t line = 0;
};

/// ⟨generators, stable letters | stable · lhs · stable⁻¹ = rhs⟩
struct HnnInput {
  Alphabet generators;
  std::vector<HnnRelation> relations;
};

struct GraphVertex {
  std::string id;
  std::vector<Generator> gens;
};

struct GraphEdge {
  std::string id;
  std::size_t v0 = 0;
  Word word0;
  std::size_t v1 = 0;
  Word word1;
  std::size_t line = 0;
};

/// Graph of free groups with cyclic edge groups; generator indices are global.
struct GraphOfGroupsInput {
  Alphabet generators;
  std::vector<GraphVertex> vertices;
  std::vector<GraphEdge> edges;
};

using ParsedInput = std::variant<GraphOfGroupsInput, HnnInput>;

namespace detail {

struct SourceLine {
  std::size_t number;
  std::string_view text;
};

inline std::vector<SourceLine> logical_lines(std::string_view text) {
  std::vector<SourceLine> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view line = text.substr(pos, end - pos);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    bool blank = true;
    for (char c : line) blank = blank && std::isspace(static_cast<unsigned char>(c));
    if (!blank) out.push_back({number, line});
    pos = end + 1;
  }
  return out;
}

inline void require_nontrivial(Word const& w, Cursor const& cur, std::string const& what) {
  if (w.empty()) cur.fail(ErrorKind::EmptyEdgeWord, what + " is trivial after free reduction");
}

inline HnnInput parse_hnn(std::vector<SourceLine> const& lines) {
  HnnInput out;
  std::unordered_set<std::string> stables;
  bool have_gens = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    Cursor cur(lines[i].text, lines[i].number);
    auto kw = cur.expect_identifier("'gens' or 'rel'");
    if (kw == "gens") {
      do {
        std::size_t col = cur.column();
        std::string id = cur.expect_identifier("generator name");
        if (stables.count(id) || !out.generators.add(id)) {
          throw Error(ErrorKind::DuplicateId, "duplicate identifier '" + id + "'", lines[i].number, col);
        }
      } while (!cur.at_end());
      have_gens = true;
    } else if (kw == "rel") {
      if (!have_gens) cur.fail(ErrorKind::SyntaxError, "'rel' before 'gens'");
      std::size_t col = cur.column();
      std::string id = cur.expect_identifier("stable letter name");
      if (out.generators.find(id) || !stables.insert(id).second) {
        throw Error(ErrorKind::DuplicateId, "duplicate identifier '" + id + "'", lines[i].number, col);
      }
      cur.expect(":");
      auto lookup = [&](std::string const& n) { return out.generators.find(n); };
      Word lhs = read_word(cur, lookup);
      require_nontrivial(lhs, cur, "left-hand word");
      cur.expect("->");
      Word rhs = read_word(cur, lookup);
      require_nontrivial(rhs, cur, "right-hand word");
      if (!cur.at_end()) cur.fail(ErrorKind::SyntaxError, "unexpected trailing input");
      out.relations.push_back({std::move(id), std::move(lhs), std::move(rhs), lines[i].number});
    } else {
      throw Error(ErrorKind::SyntaxError, "unknown directive '" + kw + "'", lines[i].number, 1);
    }
  }
  if (!have_gens) throw Error(ErrorKind::SyntaxError, "missing 'gens' line");
  return out;
}

inline GraphOfGroupsInput parse_graph(std::vector<SourceLine> const& lines) {
  GraphOfGroupsInput out;
  struct RawVertex {
    std::string id;
    std::vector<std::string> gens;
  };
  std::vector<RawVertex> raw;
  std::unordered_map<std::string, std::size_t> vertex_index;
  std::unordered_map<std::string, std::size_t> name_uses;
  std::vector<std::size_t> edge_lines;

  for (std::size_t i = 1; i < lines.size(); ++i) {
    Cursor cur(lines[i].text, lines[i].number);
    auto kw = cur.expect_identifier("'vertex' or 'edge'");
    if (kw == "vertex") {
      std::size_t col = cur.column();
      std::string id = cur.expect_identifier("vertex name");
      if (!vertex_index.emplace(id, raw.size()).second) {
        throw Error(ErrorKind::DuplicateId, "duplicate vertex '" + id + "'", lines[i].number, col);
      }
      if (cur.expect_identifier("'gens'") != "gens") cur.fail(ErrorKind::SyntaxError, "expected 'gens'");
      RawVertex v{id, {}};
      std::unordered_set<std::string> local;
      do {
        std::size_t gcol = cur.column();
        std::string g = cur.expect_identifier("generator name");
        if (!local.insert(g).second) {
          throw Error(ErrorKind::DuplicateId, "duplicate generator '" + g + "'", lines[i].number, gcol);
        }
        ++name_uses[g];
        v.gens.push_back(std::move(g));
      } while (!cur.at_end());
      raw.push_back(std::move(v));
    } else if (kw == "edge") {
      edge_lines.push_back(i);
    } else {
      throw Error(ErrorKind::SyntaxError, "unknown directive '" + kw + "'", lines[i].number, 1);
    }
  }

  // global generator names, renaming clashes
  std::vector<std::unordered_map<std::string, Generator>> scope(raw.size());
  for (std::size_t vi = 0; vi < raw.size(); ++vi) {
    GraphVertex gv{raw[vi].id, {}};
    for (auto const& g : raw[vi].gens) {
      std::string global = name_uses[g] > 1 ? g + "_" + raw[vi].id : g;
      if (!out.generators.add(global)) {
        throw Error(ErrorKind::DuplicateId, "generator name '" + global + "' clashes after renaming");
      }
      Generator idx = *out.generators.find(global);
      scope[vi].emplace(g, idx);
      gv.gens.push_back(idx);
    }
    out.vertices.push_back(std::move(gv));
  }

  std::unordered_set<std::string> edge_ids;
  for (std::size_t i : edge_lines) {
    Cursor cur(lines[i].text, lines[i].number);
    cur.expect_identifier("'edge'");
    std::size_t col = cur.column();
    std::string id = cur.expect_identifier("edge name");
    if (out.generators.find(id) || !edge_ids.insert(id).second) {
      throw Error(ErrorKind::DuplicateId, "duplicate identifier '" + id + "'", lines[i].number, col);
    }
    cur.expect(":");
    auto read_end = [&](std::size_t& vertex, Word& word) {
      std::size_t vcol = cur.column();
      std::string vid = cur.expect_identifier("vertex name");
      auto it = vertex_index.find(vid);
      if (it == vertex_index.end()) {
        throw Error(ErrorKind::UnknownVertex, "unknown vertex '" + vid + "'", lines[i].number, vcol);
      }
      vertex = it->second;
      auto const& sc = scope[vertex];
      word = read_word(cur, [&](std::string const& n) -> std::optional<Generator> {
        auto f = sc.find(n);
        if (f == sc.end()) return std::nullopt;
        return f->second;
      });
      require_nontrivial(word, cur, "edge word");
    };
    GraphEdge e;
    e.id = id;
    e.line = lines[i].number;
    read_end(e.v0, e.word0);
    cur.expect("--");
    read_end(e.v1, e.word1);
    if (!cur.at_end()) cur.fail(ErrorKind::SyntaxError, "unexpected trailing input");
    out.edges.push_back(std::move(e));
  }
  return out;
}

}  // namespace detail

inline ParsedInput parse(std::string_view text) {
  auto lines = detail::logical_lines(text);
  if (lines.empty()) throw Error(ErrorKind::SyntaxError, "empty input");
  Cursor head(lines[0].text, lines[0].number);
  std::string mode = head.expect_identifier("'hnn' or 'graph'");
  if (!head.at_end()) head.fail(ErrorKind::SyntaxError, "unexpected trailing input");
  if (mode == "hnn") return detail::parse_hnn(lines);
  if (mode == "graph") return detail::parse_graph(lines);
  throw Error(ErrorKind::SyntaxError, "first line must be 'hnn' or 'graph'", lines[0].number, 1);
}

/// Wedges all vertex groups into one free group; each edge becomes a stable
/// letter named after the edge.
inline HnnInput to_hnn(GraphOfGroupsInput const& g) {
  HnnInput out;
  out.generators = g.generators;
  for (auto const& e : g.edges) {
    out.relations.push_back({e.id, e.word0, e.word1, e.line});
  }
  return out;
}

inline HnnInput as_hnn(ParsedInput const& in) {
  if (auto const* g = std::get_if<GraphOfGroupsInput>(&in)) return to_hnn(*g);
  return std::get<HnnInput>(in);
}

/// t_j · w_g^m · t_j⁻¹ = w_h^n
struct StandardRelation {
  std::size_t g = 0;
  long m = 0;
  std::size_t h = 0;
  long n = 0;

  bool operator==(StandardRelation const&) const = default;
};

/// Multiple HNN presentation over an independent set of canonical primitive
/// cyclic words. The alphabet lists the vertex generators first, then one
/// stable letter per relation in relation order.
struct StandardPresentation {
  Alphabet alphabet;
  std::size_t vertex_rank = 0;
  std::vector<CyclicWord> classes;
  std::vector<StandardRelation> relations;
  // Input stable letter j equals stable_left[j] · t_j · stable_right[j]⁻¹.
  std::vector<Word> stable_left;
  std::vector<Word> stable_right;

  std::size_t num_stable() const noexcept { return relations.size(); }
  bool is_stable(Letter l) const noexcept { return l.gen() >= vertex_rank; }
  std::size_t stable_index(Letter l) const noexcept { return l.gen() - vertex_rank; }
  Letter stable_letter(std::size_t j, int sign = 1) const {
    return Letter(static_cast<Generator>(vertex_rank + j), sign);
  }
  Word const& class_word(std::size_t g) const { return classes.at(g).word(); }
  std::string const& stable_name(std::size_t j) const {
    return alphabet.name(static_cast<Generator>(vertex_rank + j));
  }

  std::string format(std::span<Letter const> w) const { return format_word(w, alphabet); }

  Word parse(std::string_view text) const { return parse_word(text, alphabet); }

  /// Rewrites a word over the input presentation into this presentation.
  Word from_input(std::span<Letter const> w) const {
    Word out;
    for (Letter l : w) {
      if (!is_stable(l)) {
        push_reduced(out, l);
        continue;
      }
      std::size_t j = stable_index(l);
      Word piece = l.sign() > 0
                       ? concat(concat(stable_left[j], Word{l}), inverse(stable_right[j]))
                       : concat(concat(stable_right[j], Word{l}), inverse(stable_left[j]));
      for (Letter p : piece) push_reduced(out, p);
    }
    return out;
  }

  /// Inverse of from_input.
  Word to_input(std::span<Letter const> w) const {
    Word out;
    for (Letter l : w) {
      if (!is_stable(l)) {
        push_reduced(out, l);
        continue;
      }
      std::size_t j = stable_index(l);
      Word piece = l.sign() > 0
                       ? concat(concat(inverse(stable_left[j]), Word{l}), stable_right[j])
                       : concat(concat(inverse(stable_right[j]), Word{l}), stable_left[j]);
      for (Letter p : piece) push_reduced(out, p);
    }
    return out;
  }
};

namespace detail {

struct AlignedWord {
  CyclicWord rep;
  long exponent;
  Word conjugator;  // word = conjugator · rep^exponent · conjugator⁻¹
};

inline AlignedWord align(std::span<Letter const> w) {
  CyclicReduction cr = cyclic_reduce(w);
  if (cr.core.empty()) throw Error(ErrorKind::TrivialEdgeWord, "edge word is trivial");
  PrimitiveRoot pr = primitive_root(cr.core);
  CanonicalClass cc = canonical_class(pr.root);
  Word oriented = cc.sign > 0 ? pr.root : inverse(pr.root);
  std::size_t k = least_rotation(oriented);
  Word d(oriented.begin(), oriented.begin() + static_cast<std::ptrdiff_t>(k));
  // root = d · rep^sign · d⁻¹
  Word conj = free_reduce(concat(cr.conjugator, d));
  return AlignedWord{cc.rep, detail::checked_mul(pr.exponent, cc.sign), std::move(conj)};
}

}  // namespace detail

/// Replaces every relation word by a power of a canonical primitive class.
inline StandardPresentation normalize(HnnInput const& in) {
  StandardPresentation sp;
  sp.alphabet = in.generators;
  sp.vertex_rank = in.generators.size();
  for (auto const& r : in.relations) {
    if (!sp.alphabet.add(r.stable)) {
      throw Error(ErrorKind::DuplicateId, "duplicate identifier '" + r.stable + "'", r.line);
    }
  }
  std::unordered_map<Word, std::size_t, WordHash> index;
  index.reserve(2 * in.relations.size());
  auto class_of = [&](CyclicWord const& c) {
    auto [it, inserted] = index.emplace(c.word(), sp.classes.size());
    if (inserted) sp.classes.push_back(c);
    return it->second;
  };
  for (auto const& r : in.relations) {
    try {
      auto u = detail::align(r.lhs);
      auto v = detail::align(r.rhs);
      StandardRelation rel;
      rel.g = class_of(u.rep);
      rel.m = u.exponent;
      rel.h = class_of(v.rep);
      rel.n = v.exponent;
      sp.relations.push_back(rel);
      sp.stable_left.push_back(std::move(v.conjugator));
      sp.stable_right.push_back(std::move(u.conjugator));
    } catch (Error const& e) {
      if (e.line() != 0 || r.line == 0) throw;
      throw Error(e.kind(), std::string(e.what()), r.line);
    }
  }
  return sp;
}

inline StandardPresentation normalize(ParsedInput const& in) { return normalize(as_hnn(in)); }

inline StandardPresentation load_presentation(std::string_view text) {
  return normalize(parse(text));
}

namespace detail {

inline std::string format_power(std::span<Letter const> base, long e, Alphabet const& alpha) {
  if (base.size() == 1) return format_word(power(base, e), alpha);
  std::string s = "(" + format_word(base, alpha) + ")";
  if (e != 1) s += "^" + std::to_string(e);
  return s;
}

}  // namespace detail

/// Prints a standard presentation in HNN mode; parsing and normalizing the
/// output reproduces the same classes and relations.
inline std::string format_presentation(StandardPresentation const& sp) {
  std::ostringstream os;
  os << "hnn\n";
  if (sp.vertex_rank > 0) {
    os << "gens";
    for (std::size_t i = 0; i < sp.vertex_rank; ++i) os << ' ' << sp.alphabet.name(static_cast<Generator>(i));
    os << '\n';
  }
  for (std::size_t j = 0; j < sp.relations.size(); ++j) {
    auto const& r = sp.relations[j];
    os << "rel " << sp.stable_name(j) << " : "
       << detail::format_power(sp.class_word(r.g), r.m, sp.alphabet) << " -> "
       << detail::format_power(sp.class_word(r.h), r.n, sp.alphabet) << '\n';
  }
  return os.str();
}

}  // namespace gbsrf
