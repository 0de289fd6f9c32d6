#pragma once

// Shared fixtures: corrupted covers, normalization words, clean components
// built from a chosen potential.

#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gbsrf/gbsrf.hpp"

namespace fixtures {

struct Corruption {
  std::string name;
  std::function<void(gbsrf::CMap&)> apply;
};

inline void erase_two_cell(gbsrf::CMap& f, std::size_t c) {
  f.domain.two_cells.erase(f.domain.two_cells.begin() + static_cast<std::ptrdiff_t>(c));
  f.two.erase(f.two.begin() + static_cast<std::ptrdiff_t>(c));
}

/// Length of the a-cycle through 0-cell 0 of a cover of BS(1, q).
inline std::size_t cycle_length(gbsrf::CMap const& f) {
  std::size_t n = 1;
  while (f.domain.one_cells[n - 1].target != 0) ++n;
  return n;
}

/// Ten ways to break a cover of BS(1, q) with m >= 2 and n >= 3.
inline std::vector<Corruption> cover_corruptions() {
  using gbsrf::CMap;
  std::vector<Corruption> out;
  out.push_back({"dropped 2-cell", [](CMap& f) { erase_two_cell(f, 0); }});
  out.push_back({"dropped last 2-cell", [](CMap& f) { erase_two_cell(f, f.domain.two_cells.size() - 1); }});
  out.push_back({"duplicated 2-cell", [](CMap& f) {
                   f.domain.two_cells.push_back(f.domain.two_cells[1]);
                   f.two.push_back(f.two[1]);
                 }});
  out.push_back({"relabeled a-edge", [](CMap& f) {
                   f.domain.one_cells[0].label = 1;
                   f.one[0] = 1;
                 }});
  out.push_back({"relabeled t-edge", [](CMap& f) {
                   std::size_t t = f.domain.one_cells.size() - 1;
                   f.domain.one_cells[t].label = 0;
                   f.one[t] = 0;
                 }});
  out.push_back({"one 2-cell rotated by one a-edge on its wrapped side", [](CMap& f) {
                   std::size_t const n = cycle_length(f);
                   auto& bd = f.domain.two_cells[0].boundary;
                   for (std::size_t i = 3; i < bd.size(); ++i) bd[i].cell = n + (bd[i].cell - n + 1) % n;
                 }});
  out.push_back({"tube attached to the wrong cycle", [](CMap& f) {
                   // tube 0 is re-glued so that both of its sides run along cycle 0
                   std::size_t const n = cycle_length(f);
                   std::size_t const first_t = f.domain.zero_cells;
                   for (std::size_t j = 0; j < n; ++j) f.domain.one_cells[first_t + j].source -= n;
                   for (std::size_t c = 0; c < n; ++c) {
                     auto& bd = f.domain.two_cells[c].boundary;
                     for (std::size_t i = 3; i < bd.size(); ++i) bd[i].cell -= n;
                   }
                 }});
  out.push_back({"dangling 1-cell", [](CMap& f) {
                   f.domain.one_cells.push_back({0, 1, 0});
                   f.one.push_back(0);
                 }});
  out.push_back({"isolated 0-cell", [](CMap& f) {
                   ++f.domain.zero_cells;
                   f.zero.push_back(0);
                 }});
  out.push_back({"2-cell image with a shifted offset", [](CMap& f) { f.two[0].offset = 1; }});
  return out;
}

/// True when the corrupted map is either not well formed or not a covering.
inline bool rejected(gbsrf::CMap const& f) {
  try {
    return !gbsrf::is_covering(f);
  } catch (gbsrf::Error const& e) {
    return e.kind() == gbsrf::ErrorKind::IllFormedMap;
  }
}

struct NormalizationFixture {
  std::string presentation;
  std::string word;
};

inline std::string const kBs12 = "hnn\ngens a\nrel t : a -> a^2\n";
inline std::string const kBs14 = "hnn\ngens a\nrel t : a -> a^4\n";
// a BS(1,3) loop at a, and a separate clean component on b, c
inline std::string const kMixed = "hnn\ngens a b c\nrel t : a -> a^3\nrel s : b^2 -> c^3\n";

inline std::vector<NormalizationFixture> normalization_corpus() {
  std::vector<NormalizationFixture> out;
  for (char const* w : {"a t^-1 a^3 t", "a^3 t^-1 a t a^-1", "t^-1 a t", "a t^-1 a t a", "a^-1 t^-1 a^5 t a^2",
                        "t^-2 a t^2", "a t^-1 a t^-1 a t^2", "a t^-1 a^-1 t^-1 a^3 t a t a^-1", "a t a^-1",
                        "t^-1 a^3 t a t^2", "a^2 t^-1 a t^-1 a t a^-1 t", "t^-1 a^-3 t a^-1"}) {
    out.push_back({kBs12, w});
  }
  for (char const* w : {"a^3 t^-1 a^5 t a^-1", "a t^-1 a^-3 t^-1 a^5 t^2", "a t^-1 a t^-1 a^2 t a^3 t",
                        "a^-2 t^-1 a^3 t^-1 a t^2 a", "t^-1 a^2 t", "a^7 t^-1 a t", "t^-3 a t^3",
                        "a t^-1 a t^-1 a t^-1 a t^3", "t^-2 a^3 t a^2 t", "a^5 t^-1 a^-1 t a^2"}) {
    out.push_back({kBs14, w});
  }
  for (char const* w : {"a t^-1 a^2 t", "b s^-1 c s", "a t^-1 a t b s c^3 s^-1", "a^2 t^-1 a t^-1 a t a t",
                        "c^2 s b s^-1 a t^-1 a t", "t^-1 a t s b^3 s^-1", "a t^-1 b t", "a^-1 t^-1 a^4 t a",
                        "b^2 a t^-1 a^2 t b^-2", "t^-1 a^2 t^-1 a t a t"}) {
    out.push_back({kMixed, w});
  }
  return out;
}

/// A connected Γ whose labels are derived from a chosen potential, so that it
/// is clean by construction.
inline gbsrf::GammaGraph clean_component(std::mt19937& rng, std::size_t nv, std::size_t ne) {
  std::uniform_int_distribution<long> pick_potential(1, 12);
  std::vector<long> p(nv);
  for (auto& x : p) x = pick_potential(rng);
  std::uniform_int_distribution<std::size_t> pick_vertex(0, nv - 1);
  auto edge = [&](std::size_t u, std::size_t v) {
    // labels p_u / r and p_v / r for a common divisor r
    long g = std::gcd(p[u], p[v]);
    std::vector<long> divs;
    for (long r = 1; r <= g; ++r) {
      if (g % r == 0) divs.push_back(r);
    }
    long r = divs[rng() % divs.size()];
    long su = rng() % 3 == 0 ? -1 : 1;
    long sv = rng() % 3 == 0 ? -1 : 1;
    return gbsrf::GammaEdge{u, su * (p[u] / r), v, sv * (p[v] / r)};
  };
  std::vector<gbsrf::GammaEdge> edges;
  for (std::size_t v = 1; v < nv; ++v) {
    std::uniform_int_distribution<std::size_t> parent(0, v - 1);
    edges.push_back(rng() % 2 ? edge(parent(rng), v) : edge(v, parent(rng)));
  }
  while (edges.size() < ne) edges.push_back(edge(pick_vertex(rng), pick_vertex(rng)));
  std::shuffle(edges.begin(), edges.end(), rng);
  return gbsrf::GammaGraph(nv, std::move(edges));
}

}  // namespace fixtures
