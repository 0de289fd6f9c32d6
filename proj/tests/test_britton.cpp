#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "gbsrf/britton.hpp"
#include "oracles.hpp"

using namespace gbsrf;

namespace {

StandardPresentation bs(long p, long q) {
  return load_presentation("hnn\ngens a\nrel t : a^" + std::to_string(p) + " -> a^" + std::to_string(q));
}

Word stable_sequence(Word const& w, StandardPresentation const& sp) {
  Word out;
  for (Letter l : w) {
    if (sp.is_stable(l)) out.push_back(l);
  }
  return out;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (Error const& e) {
    return e.kind();
  }
  return ErrorKind::ContractViolation;
}

}  // namespace

TEST_CASE("pinch_step") {
  auto sp = bs(1, 2);
  auto r = pinch_step(sp.parse("t a t^-1"), sp);
  REQUIRE(r);
  CHECK(*r == sp.parse("a a"));

  sp = bs(2, 3);
  r = pinch_step(sp.parse("t a^4 t^-1"), sp);
  REQUIRE(r);
  CHECK(*r == sp.parse("a^6"));
  CHECK_FALSE(pinch_step(sp.parse("t a t^-1"), sp));
  r = pinch_step(sp.parse("t^-1 a^-6 t"), sp);
  REQUIRE(r);
  CHECK(*r == sp.parse("a^-4"));
  CHECK_FALSE(pinch_step(sp.parse("t^-1 a^2 t"), sp));
}

TEST_CASE("pinch_step rewrites the leftmost pinch") {
  auto sp = bs(1, 2);
  auto r = pinch_step(sp.parse("t a t^-1 a t a^2 t^-1"), sp);
  REQUIRE(r);
  CHECK(*r == sp.parse("a^3 t a^2 t^-1"));
  CHECK_FALSE(pinch_step(sp.parse("t a t^-1 t^-1"), sp) == std::nullopt);
  CHECK_FALSE(pinch_step(sp.parse("t^-1 a t"), sp));
}

TEST_CASE("britton_reduce") {
  auto sp = bs(1, 4);
  CHECK(britton_reduce(sp.parse("t^3 a t^-1 a^-3 t^-1 a^5 t^2"), sp) == sp.parse("t a^9 t^2"));
  sp = bs(2, 3);
  CHECK(britton_reduce(sp.parse("t a^2 t^-1 a^-3"), sp).empty());
  auto free = load_presentation("hnn\ngens a b\nrel t : a -> a^2");
  CHECK(britton_reduce(free.parse("a b b^-1 a b"), free) == free.parse("a^2 b"));
}

TEST_CASE("is_trivial and are_equal") {
  CHECK_FALSE(is_trivial(bs(2, 4).parse("t a t^-1 a^-2"), bs(2, 4)));
  CHECK(is_trivial(bs(1, 2).parse("t a t^-1 a^-2"), bs(1, 2)));
  CHECK(is_trivial(Word{}, bs(2, 3)));
  auto sp = bs(1, 4);
  CHECK(are_equal(sp.parse("t^3 a t^-1 a^-3 t^-1 a^5 t^2"), sp.parse("t a^9 t^2"), sp));
  CHECK_FALSE(are_equal(sp.parse("t a^9 t^2"), sp.parse("t a^8 t^2"), sp));
}

TEST_CASE("is_trivial agrees with the affine model of BS(1, q)") {
  std::mt19937 rng(41);
  for (long q : {2L, 3L, -2L, 5L}) {
    auto sp = bs(1, q);
    int trivial_seen = 0;
    for (int i = 0; i < 3000; ++i) {
      Word w = oracle::random_word(rng, 2, 1 + static_cast<std::size_t>(i % 12));
      if (i % 4 == 0) {
        // a conjugated relator times noise often collapses
        Word c = oracle::random_word(rng, 2, static_cast<std::size_t>(i % 4));
        Word rel = sp.parse("t a t^-1 a^" + std::to_string(-q));
        w = concat(concat(c, rel), inverse(c));
      }
      bool expect = oracle::trivial_in_bs1q(w, q);
      CHECK(is_trivial(w, sp) == expect);
      trivial_seen += expect;
    }
    CHECK(trivial_seen > 100);
  }
}

TEST_CASE("britton_reduce preserves the element and reaches a pinch-free word") {
  std::mt19937 rng(42);
  std::vector<StandardPresentation> pres{
      bs(1, 2), bs(2, 3), bs(2, 4), bs(-3, 6),
      load_presentation("hnn\ngens a b\nrel t : a -> a^2\nrel s : b^3 -> a"),
      load_presentation("hnn\ngens a b\nrel t : a b -> (b a)^2\nrel s : a^2 -> b^-2"),
  };
  for (auto const& sp : pres) {
    auto gens = static_cast<std::uint32_t>(sp.alphabet.size());
    for (int i = 0; i < 400; ++i) {
      Word w = oracle::random_word(rng, gens, static_cast<std::size_t>(i % 16));
      Word r = britton_reduce(w, sp);
      CHECK(is_reduced(r));
      CHECK(is_pinch_free(r, sp));
      CHECK(stable_sequence(r, sp).size() <= stable_sequence(w, sp).size());
      CHECK(are_equal(w, r, sp));
      CHECK(britton_reduce(r, sp) == r);
      CHECK(is_trivial(w, sp) == r.empty());
    }
  }
}

TEST_CASE("reduced words satisfying Britton's hypothesis are nontrivial") {
  std::mt19937 rng(43);
  for (auto [p, q] : {std::pair{2L, 3L}, {3L, 5L}, {2L, 4L}, {4L, 6L}}) {
    auto sp = bs(p, q);
    int tested = 0;
    for (int i = 0; i < 4000 && tested < 300; ++i) {
      // t^e a^k blocks with every t a^k t^-1 having p ∤ k and t^-1 a^k t having q ∤ k
      Word w;
      std::uniform_int_distribution<long> kd(-7, 7);
      int blocks = 1 + i % 5;
      for (int b = 0; b < blocks; ++b) {
        int e = rng() % 2 ? 1 : -1;
        w.push_back(Letter(1, e));
        long k = kd(rng);
        if (k != 0) {
          Word ak = power(Word{Letter(0, 1)}, k);
          w.insert(w.end(), ak.begin(), ak.end());
        }
      }
      if (!is_reduced(w)) continue;
      bool hypothesis = true;
      for (std::size_t x = 0; x < w.size() && hypothesis; ++x) {
        if (!sp.is_stable(w[x])) continue;
        std::size_t y = x + 1;
        while (y < w.size() && !sp.is_stable(w[y])) ++y;
        if (y == w.size() || w[y] != w[x].inverse()) continue;
        long k = static_cast<long>(y - x - 1) * (y - x - 1 > 0 && w[x + 1].sign() < 0 ? -1 : 1);
        long div = w[x].sign() > 0 ? p : q;
        hypothesis = k % div != 0;
      }
      if (!hypothesis) continue;
      ++tested;
      CHECK_FALSE(is_trivial(w, sp));
      CHECK(britton_reduce(w, sp) == w);
    }
    CHECK(tested >= 100);
  }
}

TEST_CASE("long powers reduce through segment arithmetic") {
  auto sp = bs(1, 2);
  BrittonReducer r(sp);
  r.push(sp.parse("t^20"));
  r.push_power(sp.parse("a"), 1);
  r.push(sp.parse("t^-20"));
  r.push_power(sp.parse("a"), -(1L << 20));
  CHECK(r.is_trivial());

  BrittonReducer big(sp);
  big.push_power(sp.parse("a"), 1L << 40);
  big.push_power(sp.parse("a"), -(1L << 40));
  CHECK(big.is_trivial());
}

TEST_CASE("decompose") {
  auto sp = bs(1, 4);
  Word w = sp.parse("t^3 a t^-1 a^-3 t^-1 a^5 t^2");
  auto d = decompose(w, sp);
  CHECK(d.vertex_excursions == std::vector<Span>{{3, 4}, {5, 8}, {9, 14}});
  bool apex_a5 = std::any_of(d.extremal_spans.begin(), d.extremal_spans.end(),
                             [&](ExtremalSpan const& x) { return x.apex == Span{9, 14}; });
  CHECK(apex_a5);

  sp = bs(1, 2);
  d = decompose(sp.parse("a t"), sp);
  CHECK(d.extremal_spans.empty());
  REQUIRE(d.gamma_words.size() == 1);
  CHECK(d.gamma_words[0].span == Span{0, 2});

  sp = bs(1, 4);
  w = sp.parse("a^3 t^-1 a^5 t a^-1");
  d = decompose(w, sp);
  REQUIRE(d.extremal_spans.size() == 1);
  CHECK(d.extremal_spans[0].span == Span{0, w.size()});
  CHECK(d.extremal_spans[0].apex == Span{4, 9});
  CHECK(d.extremal_spans[0].s1 == Span{0, 9});
  CHECK(d.extremal_spans[0].s2 == Span{9, 11});
}

TEST_CASE("clean components have no extremal spans") {
  auto sp = bs(2, 2);
  auto d = decompose(sp.parse("t^-1 a^3 t"), sp);
  CHECK(d.extremal_spans.empty());
  REQUIRE(d.gamma_words.size() == 1);
  CHECK(d.gamma_words[0].clean);
}

TEST_CASE("excursions that are not powers split Γ-words") {
  auto sp = load_presentation("hnn\ngens a b\nrel t : a -> a^2");
  auto d = decompose(sp.parse("t^-1 b t"), sp);
  CHECK(d.gamma_words.size() == 2);
  CHECK(d.extremal_spans.empty());
}

TEST_CASE("decomposition invariants on random pinch-free words") {
  std::mt19937 rng(44);
  std::vector<StandardPresentation> pres{bs(1, 2), bs(1, 3), bs(2, 3),
                                         load_presentation("hnn\ngens a b\nrel t : a -> a^2\nrel s : a^3 -> b")};
  for (auto const& sp : pres) {
    auto gens = static_cast<std::uint32_t>(sp.alphabet.size());
    for (int i = 0; i < 500; ++i) {
      Word w = britton_reduce(oracle::random_word(rng, gens, static_cast<std::size_t>(i % 18)), sp);
      auto d = decompose(w, sp);
      std::size_t covered = 0;
      for (std::size_t k = 0; k < d.vertex_excursions.size(); ++k) {
        Span s = d.vertex_excursions[k];
        covered += s.size();
        for (std::size_t x = s.begin; x < s.end; ++x) CHECK_FALSE(sp.is_stable(w[x]));
        if (s.begin > 0) CHECK(sp.is_stable(w[s.begin - 1]));
        if (s.end < w.size()) CHECK(sp.is_stable(w[s.end]));
        if (k > 0) CHECK(d.vertex_excursions[k - 1].end < s.begin);
      }
      CHECK(covered + stable_sequence(w, sp).size() == w.size());
      for (auto const& x : d.extremal_spans) {
        CHECK(x.span.contains(x.apex));
        CHECK(x.s1.begin == x.span.begin);
        CHECK(x.s2.end == x.span.end);
        CHECK(x.s1.end == x.s2.begin);
        for (auto const& y : d.extremal_spans) {
          if (y.span != x.span) CHECK_FALSE(y.span.contains(x.span));
        }
      }
    }
  }
}

TEST_CASE("normalize_extremal examples") {
  auto sp = bs(1, 4);
  Word w = sp.parse("a^3 t^-1 a^5 t a^-1");
  Word n = normalize_extremal(w, sp);
  CHECK(n == sp.parse("t^-1 a^13 t"));
  CHECK(are_equal(w, n, sp));

  sp = bs(1, 2);
  w = sp.parse("a t^-1 a^3 t");
  n = normalize_extremal(w, sp);
  CHECK(n == sp.parse("t^-1 a^5 t"));
  CHECK(are_equal(w, n, sp));

  w = sp.parse("a t a^-1");
  CHECK(normalize_extremal(w, sp) == w);

  CHECK(kind_of([&] { normalize_extremal(sp.parse("t a t^-1"), sp); }) == ErrorKind::NotPinchFree);
  CHECK(kind_of([&] { normalize_extremal(Word{Letter(1, 1), Letter(1, -1)}, sp); }) == ErrorKind::NotPinchFree);
}

TEST_CASE("normalize_extremal preserves the element and the stable sequence") {
  std::mt19937 rng(45);
  std::vector<StandardPresentation> pres{bs(1, 2), bs(1, 3), bs(1, -2), bs(-1, 4),
                                         load_presentation("hnn\ngens a b\nrel t : a -> a^2\nrel s : a^3 -> b"),
                                         load_presentation("hnn\ngens a b\nrel t : a -> a^3\nrel s : b -> b")};
  int nontrivial_rewrites = 0;
  for (auto const& sp : pres) {
    auto gens = static_cast<std::uint32_t>(sp.alphabet.size());
    for (int i = 0; i < 400; ++i) {
      Word w = britton_reduce(oracle::random_word(rng, gens, static_cast<std::size_t>(i % 20)), sp);
      Word n = normalize_extremal(w, sp);
      CHECK(stable_sequence(n, sp) == stable_sequence(w, sp));
      CHECK(are_equal(w, n, sp));
      CHECK(normalize_extremal(n, sp) == n);
      for (auto const& x : decompose(n, sp).extremal_spans) CHECK(is_normalized(x, n, sp));
      nontrivial_rewrites += n != w;
    }
  }
  CHECK(nontrivial_rewrites > 100);
}
