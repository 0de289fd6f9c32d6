#pragma once

// Combinatorial 2-complexes, links of 0-cells, the local criterion for
// combinatorial coverings, and the finite covers Ŷ(n, m) of the presentation
// complex of BS(1, q).

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gbsrf/britton.hpp"
#include "gbsrf/error.hpp"
#include "gbsrf/presentation.hpp"
#include "gbsrf/words.hpp"

namespace gbsrf {

struct OneCell {
  std::size_t source = 0;
  std::size_t target = 0;
  Generator label = 0;
};

/// A 1-cell crossed along (forward) or against its orientation.
struct CellStep {
  std::size_t cell = 0;
  bool forward = true;

  bool operator==(CellStep const&) const = default;
};

struct TwoCell {
  std::vector<CellStep> boundary;
};

struct TwoComplex {
  std::size_t zero_cells = 0;
  std::vector<OneCell> one_cells;
  std::vector<TwoCell> two_cells;

  std::size_t start(CellStep s) const {
    auto const& c = one_cells.at(s.cell);
    return s.forward ? c.source : c.target;
  }
  std::size_t end(CellStep s) const {
    auto const& c = one_cells.at(s.cell);
    return s.forward ? c.target : c.source;
  }

  /// Throws IllFormedMap unless every cell reference is in range and every
  /// boundary is a nonempty closed path.
  void validate() const {
    for (auto const& c : one_cells) {
      if (c.source >= zero_cells || c.target >= zero_cells) {
        throw Error(ErrorKind::IllFormedMap, "1-cell endpoint out of range");
      }
    }
    for (auto const& f : two_cells) {
      if (f.boundary.empty()) throw Error(ErrorKind::IllFormedMap, "2-cell with empty boundary");
      for (std::size_t i = 0; i < f.boundary.size(); ++i) {
        CellStep s = f.boundary[i];
        CellStep t = f.boundary[(i + 1) % f.boundary.size()];
        if (s.cell >= one_cells.size() || t.cell >= one_cells.size()) {
          throw Error(ErrorKind::IllFormedMap, "boundary refers to an unknown 1-cell");
        }
        if (end(s) != start(t)) throw Error(ErrorKind::IllFormedMap, "2-cell boundary is not closed");
      }
    }
  }
};

/// The 2-cell a domain 2-cell is sent to; boundary step i goes to step
/// (i + offset) of the image.
struct TwoCellImage {
  std::size_t cell = 0;
  std::size_t offset = 0;
};

struct CMap {
  TwoComplex domain;
  TwoComplex codomain;
  std::vector<std::size_t> zero;
  std::vector<std::size_t> one;
  std::vector<TwoCellImage> two;
};

/// One end of a 1-cell: its source end or its target end.
struct CellEnd {
  std::size_t cell = 0;
  bool at_target = false;

  auto operator<=>(CellEnd const&) const = default;
};

struct Corner {
  std::size_t two_cell = 0;
  std::size_t index = 0;  // between boundary steps index and index + 1
  std::size_t a = 0;      // link vertices joined
  std::size_t b = 0;

  auto operator<=>(Corner const&) const = default;
};

struct Link {
  std::vector<CellEnd> vertices;
  std::vector<Corner> edges;
};

inline Link link(TwoComplex const& x, std::size_t v) {
  if (v >= x.zero_cells) throw Error(ErrorKind::UnknownCell, "no 0-cell " + std::to_string(v));
  Link out;
  for (std::size_t c = 0; c < x.one_cells.size(); ++c) {
    if (x.one_cells[c].source == v) out.vertices.push_back({c, false});
    if (x.one_cells[c].target == v) out.vertices.push_back({c, true});
  }
  auto index_of = [&](CellEnd e) {
    auto it = std::find(out.vertices.begin(), out.vertices.end(), e);
    return static_cast<std::size_t>(it - out.vertices.begin());
  };
  for (std::size_t f = 0; f < x.two_cells.size(); ++f) {
    auto const& bd = x.two_cells[f].boundary;
    for (std::size_t i = 0; i < bd.size(); ++i) {
      CellStep in = bd[i];
      CellStep next = bd[(i + 1) % bd.size()];
      if (x.end(in) != v) continue;
      CellEnd arrive{in.cell, in.forward};
      CellEnd leave{next.cell, !next.forward};
      out.edges.push_back({f, i, index_of(arrive), index_of(leave)});
    }
  }
  return out;
}

namespace detail {

inline void check_map(CMap const& f) {
  TwoComplex const& x = f.domain;
  TwoComplex const& y = f.codomain;
  x.validate();
  y.validate();
  auto bad = [](std::string const& what) { return Error(ErrorKind::IllFormedMap, what); };
  if (f.zero.size() != x.zero_cells || f.one.size() != x.one_cells.size() ||
      f.two.size() != x.two_cells.size()) {
    throw bad("cell maps do not cover the domain");
  }
  for (std::size_t z : f.zero) {
    if (z >= y.zero_cells) throw bad("0-cell image out of range");
  }
  for (std::size_t c = 0; c < x.one_cells.size(); ++c) {
    if (f.one[c] >= y.one_cells.size()) throw bad("1-cell image out of range");
    OneCell const& a = x.one_cells[c];
    OneCell const& b = y.one_cells[f.one[c]];
    if (a.label != b.label) throw bad("1-cell map does not preserve labels");
    if (f.zero[a.source] != b.source || f.zero[a.target] != b.target) {
      throw bad("1-cell map does not commute with endpoints");
    }
  }
  for (std::size_t c = 0; c < x.two_cells.size(); ++c) {
    TwoCellImage im = f.two[c];
    if (im.cell >= y.two_cells.size()) throw bad("2-cell image out of range");
    auto const& bx = x.two_cells[c].boundary;
    auto const& by = y.two_cells[im.cell].boundary;
    if (bx.size() != by.size()) throw bad("2-cell boundary lengths differ");
    for (std::size_t i = 0; i < bx.size(); ++i) {
      CellStep s = by[(i + im.offset) % by.size()];
      if (f.one[bx[i].cell] != s.cell || bx[i].forward != s.forward) {
        throw bad("2-cell map does not commute with the attaching map");
      }
    }
  }
}

}  // namespace detail

/// True iff the induced map of links is an isomorphism at every 0-cell.
inline bool is_covering(CMap const& f) {
  detail::check_map(f);
  TwoComplex const& x = f.domain;
  TwoComplex const& y = f.codomain;
  if (x.zero_cells == 0) throw Error(ErrorKind::ContractViolation, "domain is empty");
  std::vector<Link> targets(y.zero_cells);
  std::vector<bool> built(y.zero_cells, false);
  for (std::size_t v = 0; v < x.zero_cells; ++v) {
    Link lx = link(x, v);
    std::size_t w = f.zero[v];
    if (!built[w]) {
      targets[w] = link(y, w);
      built[w] = true;
    }
    Link const& ly = targets[w];
    if (lx.vertices.size() != ly.vertices.size() || lx.edges.size() != ly.edges.size()) return false;
    std::vector<CellEnd> ends;
    for (CellEnd e : lx.vertices) ends.push_back({f.one[e.cell], e.at_target});
    std::vector<CellEnd> want = ly.vertices;
    std::sort(ends.begin(), ends.end());
    std::sort(want.begin(), want.end());
    if (ends != want) return false;
    std::vector<std::pair<std::size_t, std::size_t>> corners;
    for (Corner const& c : lx.edges) {
      TwoCellImage im = f.two[c.two_cell];
      std::size_t len = y.two_cells[im.cell].boundary.size();
      corners.push_back({im.cell, (c.index + im.offset) % len});
    }
    std::vector<std::pair<std::size_t, std::size_t>> want_corners;
    for (Corner const& c : ly.edges) want_corners.push_back({c.two_cell, c.index});
    std::sort(corners.begin(), corners.end());
    std::sort(want_corners.begin(), want_corners.end());
    if (corners != want_corners) return false;
  }
  return true;
}

/// One 0-cell, one 1-cell per generator and stable letter, one 2-cell per
/// relation with boundary t · w_g^m · t⁻¹ · w_h^-n.
inline TwoComplex presentation_complex(StandardPresentation const& sp) {
  TwoComplex x;
  x.zero_cells = 1;
  for (std::size_t g = 0; g < sp.alphabet.size(); ++g) x.one_cells.push_back({0, 0, static_cast<Generator>(g)});
  for (std::size_t j = 0; j < sp.relations.size(); ++j) {
    auto const& r = sp.relations[j];
    Word w{sp.stable_letter(j, 1)};
    Word u = power(sp.class_word(r.g), r.m);
    w.insert(w.end(), u.begin(), u.end());
    w.push_back(sp.stable_letter(j, -1));
    Word v = power(sp.class_word(r.h), -r.n);
    w.insert(w.end(), v.begin(), v.end());
    TwoCell f;
    for (Letter l : w) f.boundary.push_back({l.gen(), l.sign() > 0});
    x.two_cells.push_back(std::move(f));
  }
  return x;
}

inline StandardPresentation bs1q_presentation(long q) {
  return load_presentation("hnn\ngens a\nrel t : a -> a^" + std::to_string(q) + "\n");
}

/// Ŷ(n, m) → P_{BS(1,q)}: m cycles of length n labeled a, joined cyclically by
/// tubes of n 2-cells each.
inline CMap bs_cover(long q, long n, long m) {
  if (q < 2 || n < 1 || m < 1) throw Error(ErrorKind::BadParameters, "need q >= 2, n >= 1, m >= 1");
  if (std::gcd(n, q) != 1) throw Error(ErrorKind::NotCoprime, "n must be coprime to q");
  if (n * m > 1000000) throw Error(ErrorKind::BadParameters, "cover too large");
  CMap f;
  f.codomain = presentation_complex(bs1q_presentation(q));
  std::size_t const N = static_cast<std::size_t>(n);
  std::size_t const M = static_cast<std::size_t>(m);
  std::size_t const Q = static_cast<std::size_t>(q);
  auto vertex = [&](std::size_t i, std::size_t k) { return (i % M) * N + k % N; };
  TwoComplex& x = f.domain;
  x.zero_cells = N * M;
  // a-edge (i, k) → (i, k + 1) has index vertex(i, k); t-edge (i, j) follows
  for (std::size_t i = 0; i < M; ++i) {
    for (std::size_t k = 0; k < N; ++k) x.one_cells.push_back({vertex(i, k), vertex(i, k + 1), 0});
  }
  std::size_t const t0 = x.one_cells.size();
  auto t_edge = [&](std::size_t i, std::size_t j) { return t0 + (i % M) * N + j % N; };
  for (std::size_t i = 0; i < M; ++i) {
    for (std::size_t j = 0; j < N; ++j) x.one_cells.push_back({vertex(i + 1, j * Q), vertex(i, j), 1});
  }
  for (std::size_t i = 0; i < M; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      TwoCell c;
      c.boundary.push_back({t_edge(i, j), true});
      c.boundary.push_back({vertex(i, j), true});
      c.boundary.push_back({t_edge(i, j + 1), false});
      for (std::size_t s = Q; s-- > 0;) c.boundary.push_back({vertex(i + 1, j * Q + s), false});
      x.two_cells.push_back(std::move(c));
    }
  }
  f.zero.assign(x.zero_cells, 0);
  for (auto const& c : x.one_cells) f.one.push_back(c.label);
  f.two.assign(x.two_cells.size(), TwoCellImage{0, 0});
  return f;
}

struct LiftResult {
  std::size_t end = 0;
  bool closed = false;
};

/// Unique path lifting through a covering map.
class CoverLift {
 public:
  explicit CoverLift(CMap const& f) : labels_(0) {
    for (auto const& c : f.codomain.one_cells) labels_ = std::max<std::size_t>(labels_, c.label + 1);
    std::size_t const none = static_cast<std::size_t>(-1);
    next_.assign(f.domain.zero_cells * 2 * labels_, none);
    for (auto const& c : f.domain.one_cells) {
      next_[slot(c.source, Letter(c.label, 1))] = c.target;
      next_[slot(c.target, Letter(c.label, -1))] = c.source;
    }
    zero_cells_ = f.domain.zero_cells;
  }

  std::size_t zero_cells() const noexcept { return zero_cells_; }

  std::size_t step(std::size_t v, Letter l) const {
    if (l.gen() >= labels_) throw Error(ErrorKind::UnknownLabel, "no 1-cell carries this label");
    std::size_t u = next_[slot(v, l)];
    if (u == static_cast<std::size_t>(-1)) {
      throw Error(ErrorKind::ContractViolation, "map is not a covering: a lift is missing");
    }
    return u;
  }

  LiftResult lift(std::span<Letter const> w, std::size_t base) const {
    if (base >= zero_cells_) throw Error(ErrorKind::UnknownCell, "no 0-cell " + std::to_string(base));
    std::size_t v = base;
    for (Letter l : w) v = step(v, l);
    return {v, v == base};
  }

 private:
  std::size_t slot(std::size_t v, Letter l) const { return v * 2 * labels_ + l.code(); }

  std::size_t labels_;
  std::size_t zero_cells_ = 0;
  std::vector<std::size_t> next_;
};

inline LiftResult lift_path(CMap const& f, std::span<Letter const> w, std::size_t base) {
  return CoverLift(f).lift(w, base);
}

/// First (n, m) whose cover has a base 0-cell at which w lifts to an open path.
inline std::optional<std::pair<long, long>> rf_witness_search(long q, HnnWord const& w,
                                                              std::vector<std::pair<long, long>> const& params) {
  StandardPresentation sp = bs1q_presentation(q);
  if (is_trivial(w, sp)) {
    throw Error(ErrorKind::ContractViolation, "word is trivial in BS(1, q); no cover can separate it");
  }
  for (auto [n, m] : params) {
    CoverLift lift(bs_cover(q, n, m));
    for (std::size_t b = 0; b < lift.zero_cells(); ++b) {
      if (!lift.lift(w, b).closed) return std::make_pair(n, m);
    }
  }
  return std::nullopt;
}

/// Adjacency text for debugging; the format is not stable.
inline std::string dump(TwoComplex const& x) {
  std::ostringstream os;
  os << "0-cells " << x.zero_cells << '\n';
  for (std::size_t c = 0; c < x.one_cells.size(); ++c) {
    auto const& e = x.one_cells[c];
    os << "1-cell " << c << ' ' << e.source << " -> " << e.target << " label " << e.label << '\n';
  }
  for (std::size_t f = 0; f < x.two_cells.size(); ++f) {
    os << "2-cell " << f << ':';
    for (CellStep s : x.two_cells[f].boundary) os << ' ' << s.cell << (s.forward ? "+" : "-");
    os << '\n';
  }
  return os.str();
}

}  // namespace gbsrf
