#pragma once

// Word problem in the multiple HNN extension and the structure of reduced
// words: vertex excursions, Γ-words and extremal subwords.

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "gbsrf/error.hpp"
#include "gbsrf/gamma.hpp"
#include "gbsrf/presentation.hpp"
#include "gbsrf/words.hpp"

namespace gbsrf {

/// A word over the vertex generators and the stable letters.
using HnnWord = Word;

namespace detail {

/// A run of letters read cyclically from a shared base word. The base is
/// cyclically reduced whenever the run is longer than it, so every segment is
/// a reduced word.
struct Segment {
  std::shared_ptr<Word const> base;
  std::size_t offset = 0;
  long length = 0;

  std::size_t period() const noexcept { return base->size(); }
  Letter at(long i) const {
    return (*base)[(offset + static_cast<std::size_t>(i)) % base->size()];
  }
};

/// A freely reduced stable-letter-free word stored as segments.
class Excursion {
 public:
  bool empty() const noexcept { return segments_.empty(); }
  long length() const noexcept { return length_; }

  void append(Segment r) {
    while (r.length > 0 && !segments_.empty()) {
      Segment& l = segments_.back();
      long const cap = std::min(l.length, r.length);
      long const probe = std::min<long>(cap, static_cast<long>(l.period() + r.period()));
      long k = 0;
      while (k < probe && l.at(l.length - 1 - k).inverse() == r.at(k)) ++k;
      if (k == probe) k = cap;
      if (k == 0) break;
      l.length -= k;
      length_ -= k;
      r.offset = (r.offset + static_cast<std::size_t>(k % static_cast<long>(r.period()))) % r.period();
      r.length -= k;
      if (l.length == 0) segments_.pop_back();
    }
    if (r.length > 0) {
      length_ = checked_add(length_, r.length);
      segments_.push_back(std::move(r));
    }
  }

  void append(Excursion const& other) {
    for (auto const& s : other.segments_) append(s);
  }

  /// e with this = base^e, for a nonempty cyclically reduced base.
  std::optional<long> power_of(std::span<Letter const> base) const {
    if (segments_.empty()) return 0L;
    long const p = static_cast<long>(base.size());
    if (length_ % p != 0) return std::nullopt;
    Letter const first = segments_.front().at(0);
    bool forward;
    if (first == base[0]) {
      forward = true;
    } else if (first == base[static_cast<std::size_t>(p - 1)].inverse()) {
      forward = false;
    } else {
      return std::nullopt;
    }
    auto target = [&](long i) {
      long r = i % p;
      return forward ? base[static_cast<std::size_t>(r)]
                     : base[static_cast<std::size_t>(p - 1 - r)].inverse();
    };
    long pos = 0;
    for (auto const& s : segments_) {
      long const probe = std::min<long>(s.length, p + static_cast<long>(s.period()));
      for (long i = 0; i < probe; ++i) {
        if (s.at(i) != target(pos + i)) return std::nullopt;
      }
      pos += s.length;
    }
    return forward ? length_ / p : -(length_ / p);
  }

  void expand_into(Word& out, std::size_t limit) const {
    if (out.size() + static_cast<std::size_t>(length_) > limit) {
      throw Error(ErrorKind::Overflow, "reduced word too long to print");
    }
    for (auto const& s : segments_) {
      for (long i = 0; i < s.length; ++i) out.push_back(s.at(i));
    }
  }

 private:
  std::vector<Segment> segments_;
  long length_ = 0;
};

}  // namespace detail

/// Incremental Britton reduction. The accumulated word is kept free of
/// pinches; powers are stored without expansion.
class BrittonReducer {
 public:
  explicit BrittonReducer(StandardPresentation const& sp) : sp_(&sp), excursions_(1) {}

  void push(Letter l) { push(std::span<Letter const>(&l, 1)); }

  void push(std::span<Letter const> w) {
    Word run;
    for (Letter l : w) {
      if (l.gen() >= sp_->alphabet.size()) {
        throw Error(ErrorKind::UnknownGenerator, "letter outside the alphabet");
      }
      if (!sp_->is_stable(l)) {
        push_reduced(run, l);
        continue;
      }
      flush(run);
      push_stable(l);
    }
    flush(run);
  }

  /// Appends w^e without expanding it when w has no stable letters.
  void push_power(std::span<Letter const> w, long e) {
    if (e == 0 || w.empty()) return;
    bool vertex_only = std::none_of(w.begin(), w.end(), [&](Letter l) { return sp_->is_stable(l); });
    if (!vertex_only) {
      unsigned long mag = e > 0 ? static_cast<unsigned long>(e) : static_cast<unsigned long>(-(e + 1)) + 1;
      if (mag > kMaxLiteralLength / w.size()) {
        throw Error(ErrorKind::Overflow, "power of a word with stable letters too long");
      }
      push(power(w, e));
      return;
    }
    CyclicReduction cr = cyclic_reduce(w);
    if (cr.core.empty()) return;
    push(cr.conjugator);
    append_power(std::make_shared<Word const>(std::move(cr.core)), e);
    push(inverse(cr.conjugator));
  }

  bool is_trivial() const noexcept { return stable_.empty() && excursions_.front().empty(); }
  std::size_t stable_count() const noexcept { return stable_.size(); }

  Word word(std::size_t limit = kMaxLiteralLength) const {
    Word out;
    for (std::size_t i = 0; i < excursions_.size(); ++i) {
      if (i > 0) {
        if (out.size() + 1 > limit) throw Error(ErrorKind::Overflow, "reduced word too long to print");
        out.push_back(stable_[i - 1]);
      }
      excursions_[i].expand_into(out, limit);
    }
    return out;
  }

 private:
  void flush(Word& run) {
    if (run.empty()) return;
    long len = static_cast<long>(run.size());
    excursions_.back().append(detail::Segment{std::make_shared<Word const>(std::move(run)), 0, len});
    run.clear();
  }

  void append_power(std::shared_ptr<Word const> base, long e) {
    long len = detail::checked_mul(static_cast<long>(base->size()), e < 0 ? -e : e);
    if (e < 0) base = std::make_shared<Word const>(inverse(*base));
    excursions_.back().append(detail::Segment{std::move(base), 0, len});
  }

  std::shared_ptr<Word const> class_base(std::size_t c) {
    auto it = bases_.find(c);
    if (it == bases_.end()) {
      it = bases_.emplace(c, std::make_shared<Word const>(sp_->class_word(c))).first;
    }
    return it->second;
  }

  void push_stable(Letter s) {
    if (!stable_.empty() && stable_.back() == s.inverse()) {
      Letter open = stable_.back();
      auto const& rel = sp_->relations[sp_->stable_index(open)];
      bool const plus = open.sign() > 0;
      std::size_t const from = plus ? rel.g : rel.h;
      long const mod = plus ? rel.m : rel.n;
      std::size_t const to = plus ? rel.h : rel.g;
      long const label = plus ? rel.n : rel.m;
      auto e = excursions_.back().power_of(sp_->class_word(from));
      if (e && *e % mod == 0) {
        long image = detail::checked_mul(*e / mod, label);
        excursions_.pop_back();
        stable_.pop_back();
        if (image != 0) append_power(class_base(to), image);
        return;
      }
    }
    stable_.push_back(s);
    excursions_.emplace_back();
  }

  StandardPresentation const* sp_;
  std::vector<Letter> stable_;
  std::vector<detail::Excursion> excursions_;
  std::unordered_map<std::size_t, std::shared_ptr<Word const>> bases_;
};

/// Performs the leftmost pinch t^ε x t^-ε of a freely reduced word, if any.
inline std::optional<HnnWord> pinch_step(HnnWord const& w, StandardPresentation const& sp) {
  std::optional<std::size_t> prev;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (!sp.is_stable(w[k])) continue;
    if (prev && w[*prev] == w[k].inverse()) {
      Letter open = w[*prev];
      auto const& rel = sp.relations[sp.stable_index(open)];
      bool const plus = open.sign() > 0;
      std::span<Letter const> x(w.data() + *prev + 1, k - *prev - 1);
      auto e = power_of(x, sp.class_word(plus ? rel.g : rel.h));
      long const mod = plus ? rel.m : rel.n;
      if (e && *e % mod == 0) {
        long image = detail::checked_mul(*e / mod, plus ? rel.n : rel.m);
        Word out(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(*prev));
        Word mid = power(sp.class_word(plus ? rel.h : rel.g), image);
        out.insert(out.end(), mid.begin(), mid.end());
        out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(k) + 1, w.end());
        return free_reduce(out);
      }
    }
    prev = k;
  }
  return std::nullopt;
}

inline bool is_pinch_free(HnnWord const& w, StandardPresentation const& sp) {
  return is_reduced(w) && !pinch_step(w, sp);
}

inline HnnWord britton_reduce(HnnWord const& w, StandardPresentation const& sp) {
  BrittonReducer r(sp);
  r.push(w);
  return r.word();
}

inline bool is_trivial(HnnWord const& w, StandardPresentation const& sp) {
  BrittonReducer r(sp);
  r.push(w);
  return r.is_trivial();
}

inline bool are_equal(HnnWord const& a, HnnWord const& b, StandardPresentation const& sp) {
  BrittonReducer r(sp);
  r.push(a);
  r.push(inverse(b));
  return r.is_trivial();
}

/// Half-open letter range.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  bool contains(Span o) const noexcept { return begin <= o.begin && o.end <= end; }
  bool operator==(Span const&) const = default;
};

struct GammaWordSpan {
  Span span;
  EdgePath path;
  bool clean = true;
};

/// s = s1 · s2 with inverse Γ-paths; the apex belongs to s1.
struct ExtremalSpan {
  Span span;
  Span s1;
  Span s2;
  Span apex;
  EdgePath path1;
};

struct Decomposition {
  std::vector<Span> vertex_excursions;
  std::vector<GammaWordSpan> gamma_words;
  std::vector<ExtremalSpan> extremal_spans;
};

/// The Γ-edge traversed by a stable letter: t_j runs from h to g.
inline Traversal traversal_of(Letter stable, StandardPresentation const& sp) {
  return Traversal{sp.stable_index(stable), stable.sign() > 0};
}

namespace detail {

/// Largest |k| with w_c^k a suffix (or prefix) of `x`, as a letter count.
inline std::size_t power_affix(std::span<Letter const> x, Word const& base, bool suffix) {
  std::size_t const p = base.size();
  auto letter = [&](std::size_t i) { return suffix ? x[x.size() - 1 - i] : x[i]; };
  auto expect = [&](std::size_t i, bool fwd) {
    // reading forward: base^±; reading backward: the same sequence reversed
    std::size_t r = i % p;
    if (fwd) return suffix ? base[p - 1 - r] : base[r];
    return suffix ? base[r].inverse() : base[p - 1 - r].inverse();
  };
  std::size_t best = 0;
  for (bool fwd : {true, false}) {
    std::size_t i = 0;
    while (i < x.size() && letter(i) == expect(i, fwd)) ++i;
    best = std::max(best, i - i % p);
  }
  return best;
}

}  // namespace detail

/// Locates vertex excursions, maximal Γ-word spans and extremal spans of a
/// freely reduced word.
inline Decomposition decompose(HnnWord const& w, StandardPresentation const& sp,
                               GammaGraph const& gamma, std::vector<ComponentReport> const& reports) {
  if (!is_reduced(w)) throw Error(ErrorKind::ContractViolation, "word is not freely reduced");
  std::vector<bool> edge_clean(gamma.num_edges(), true);
  for (auto const& r : reports) {
    for (std::size_t e : r.edges) edge_clean[e] = r.clean;
  }
  bool const pinch_free = !pinch_step(w, sp);

  Decomposition d;
  std::vector<std::size_t> pos;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (sp.is_stable(w[i])) pos.push_back(i);
  }
  // excursion i sits before stable letter i; the last one after all of them
  auto gap = [&](std::size_t i) {
    std::size_t b = i == 0 ? 0 : pos[i - 1] + 1;
    std::size_t e = i == pos.size() ? w.size() : pos[i];
    return Span{b, e};
  };
  for (std::size_t i = 0; i <= pos.size(); ++i) {
    Span g = gap(i);
    if (g.size() > 0) d.vertex_excursions.push_back(g);
  }
  if (pos.empty()) return d;

  std::vector<Traversal> trav;
  for (std::size_t p : pos) trav.push_back(traversal_of(w[p], sp));
  auto sub = [&](Span s) { return std::span<Letter const>(w.data() + s.begin, s.size()); };
  auto linked = [&](std::size_t i) {
    if (gamma.end(trav[i]) != gamma.start(trav[i + 1])) return false;
    return power_of(sub(gap(i + 1)), sp.class_word(gamma.end(trav[i]))).has_value();
  };

  struct Chain {
    std::size_t first;
    std::size_t last;
    Span span;
  };
  std::vector<Chain> chains;
  auto extend = [&](std::size_t first, std::size_t last) {
    Span before = gap(first);
    Span after = gap(last + 1);
    std::size_t lead = detail::power_affix(sub(before), sp.class_word(gamma.start(trav[first])), true);
    std::size_t tail = detail::power_affix(sub(after), sp.class_word(gamma.end(trav[last])), false);
    return Span{before.end - lead, after.begin + tail};
  };
  for (std::size_t i = 0; i < pos.size();) {
    std::size_t j = i;
    while (j + 1 < pos.size() && linked(j)) ++j;
    Chain c{i, j, extend(i, j)};
    GammaWordSpan gw;
    gw.span = c.span;
    gw.path.assign(trav.begin() + static_cast<std::ptrdiff_t>(i), trav.begin() + static_cast<std::ptrdiff_t>(j) + 1);
    gw.clean = edge_clean[trav[i].edge];
    d.gamma_words.push_back(std::move(gw));
    chains.push_back(c);
    i = j + 1;
  }

  std::vector<ExtremalSpan> found;
  for (auto const& c : chains) {
    for (std::size_t a = c.first; a < c.last; ++a) {
      if (trav[a + 1] != trav[a].reversed()) continue;
      if (pinch_free && is_unit(gamma.far_label(trav[a]))) {
        throw Error(ErrorKind::ContractViolation,
                    "pinch-free word backtracks in Γ through an end labeled ±1");
      }
      if (edge_clean[trav[a].edge]) continue;
      std::size_t r = 1;
      while (a + 1 >= r + 1 && a - r >= c.first && a + 1 + r <= c.last &&
             trav[a + 1 + r] == trav[a - r].reversed()) {
        ++r;
      }
      std::size_t lo = a + 1 - r;
      std::size_t hi = a + r;
      ExtremalSpan x;
      x.span = extend(lo, hi);
      x.apex = gap(a + 1);
      x.s1 = Span{x.span.begin, pos[a + 1]};
      x.s2 = Span{pos[a + 1], x.span.end};
      x.path1.assign(trav.begin() + static_cast<std::ptrdiff_t>(lo), trav.begin() + static_cast<std::ptrdiff_t>(a) + 1);
      found.push_back(std::move(x));
    }
  }
  for (auto const& x : found) {
    bool dominated = std::any_of(found.begin(), found.end(), [&](ExtremalSpan const& y) {
      return y.span != x.span && y.span.contains(x.span);
    });
    if (!dominated) d.extremal_spans.push_back(x);
  }
  return d;
}

inline Decomposition decompose(HnnWord const& w, StandardPresentation const& sp) {
  GammaGraph g = build_gamma(sp);
  return decompose(w, sp, g, analyze(g));
}

/// True when the only vertex letters of the span are those of its apex.
inline bool is_normalized(ExtremalSpan const& x, HnnWord const& w, StandardPresentation const& sp) {
  for (std::size_t i = x.span.begin; i < x.span.end; ++i) {
    if (i >= x.apex.begin && i < x.apex.end) continue;
    if (!sp.is_stable(w[i])) return false;
  }
  return true;
}

namespace detail {

/// Rewrites one extremal span as τ · w^E · τ⁻¹ by pushing vertex powers
/// through the stable letters towards the apex.
inline HnnWord normalize_span(HnnWord const& w, ExtremalSpan const& x, StandardPresentation const& sp,
                              GammaGraph const& gamma) {
  std::vector<std::size_t> pos;
  for (std::size_t i = x.span.begin; i < x.span.end; ++i) {
    if (sp.is_stable(w[i])) pos.push_back(i);
  }
  std::size_t const half = pos.size() / 2;
  auto exponent_of = [&](std::size_t b, std::size_t e, std::size_t vertex) {
    auto k = power_of(std::span<Letter const>(w.data() + b, e - b), sp.class_word(vertex));
    if (!k) throw Error(ErrorKind::ContractViolation, "excursion inside a Γ-word is not a power");
    return *k;
  };
  auto not_divisible = [] {
    return Error(ErrorKind::NotNormalizable, "vertex power does not pass through a stable letter");
  };

  long carry = 0;
  for (std::size_t i = 0; i < half; ++i) {
    Traversal t = traversal_of(w[pos[i]], sp);
    std::size_t b = i == 0 ? x.span.begin : pos[i - 1] + 1;
    carry = checked_add(carry, exponent_of(b, pos[i], gamma.start(t)));
    long near = gamma.near_label(t);
    if (carry % near != 0) throw not_divisible();
    carry = checked_mul(carry / near, gamma.far_label(t));
  }
  Traversal apex_in = traversal_of(w[pos[half - 1]], sp);
  std::size_t apex_vertex = gamma.end(apex_in);
  long apex = checked_add(carry, exponent_of(x.apex.begin, x.apex.end, apex_vertex));

  carry = 0;
  for (std::size_t i = pos.size(); i-- > half;) {
    Traversal t = traversal_of(w[pos[i]], sp);
    std::size_t e = i + 1 == pos.size() ? x.span.end : pos[i + 1];
    carry = checked_add(carry, exponent_of(pos[i] + 1, e, gamma.end(t)));
    long far = gamma.far_label(t);
    if (carry % far != 0) throw not_divisible();
    carry = checked_mul(carry / far, gamma.near_label(t));
  }
  apex = checked_add(apex, carry);
  if (apex == 0) throw Error(ErrorKind::ContractViolation, "extremal subword collapsed");

  Word out(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(x.span.begin));
  for (std::size_t i = 0; i < half; ++i) out.push_back(w[pos[i]]);
  Word mid = power(sp.class_word(apex_vertex), apex);
  out.insert(out.end(), mid.begin(), mid.end());
  for (std::size_t i = half; i < pos.size(); ++i) out.push_back(w[pos[i]]);
  out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(x.span.end), w.end());
  return out;
}

}  // namespace detail

/// Normalizes every extremal subword of a pinch-free word. The stable-letter
/// sequence and the group element are preserved.
inline HnnWord normalize_extremal(HnnWord const& w, StandardPresentation const& sp) {
  if (!is_pinch_free(w, sp)) throw Error(ErrorKind::NotPinchFree, "word admits a pinch or free cancellation");
  GammaGraph gamma = build_gamma(sp);
  auto reports = analyze(gamma);
  HnnWord cur = w;
  std::size_t const budget = 4 * w.size() + 16;
  for (std::size_t round = 0; round < budget; ++round) {
    Decomposition d = decompose(cur, sp, gamma, reports);
    auto it = std::find_if(d.extremal_spans.begin(), d.extremal_spans.end(),
                           [&](ExtremalSpan const& x) { return !is_normalized(x, cur, sp); });
    if (it == d.extremal_spans.end()) return cur;
    cur = detail::normalize_span(cur, *it, sp, gamma);
  }
  throw Error(ErrorKind::NotNormalizable, "normalization did not reach a fixpoint");
}

}  // namespace gbsrf
