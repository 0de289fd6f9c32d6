#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "gbsrf/gamma.hpp"
#include "oracles.hpp"

using namespace gbsrf;

namespace {

GammaGraph gamma_of(std::string const& text) { return build_gamma(load_presentation(text)); }

GammaGraph random_connected(std::mt19937& rng, std::size_t nv, std::size_t ne) {
  static constexpr long kLabels[] = {1, -1, 2, -2, 3, 4, -4, 6};
  std::uniform_int_distribution<std::size_t> pick_label(0, std::size(kLabels) - 1);
  std::uniform_int_distribution<std::size_t> pick_vertex(0, nv - 1);
  std::vector<GammaEdge> edges;
  for (std::size_t v = 1; v < nv; ++v) {
    std::uniform_int_distribution<std::size_t> parent(0, v - 1);
    std::size_t p = parent(rng);
    bool flip = rng() % 2;
    edges.push_back({flip ? v : p, kLabels[pick_label(rng)], flip ? p : v, kLabels[pick_label(rng)]});
  }
  while (edges.size() < ne) {
    edges.push_back({pick_vertex(rng), kLabels[pick_label(rng)], pick_vertex(rng), kLabels[pick_label(rng)]});
  }
  std::shuffle(edges.begin(), edges.end(), rng);
  return GammaGraph(nv, std::move(edges));
}

bool potential_valid(GammaGraph const& g, ComponentReport const& r, std::vector<BigInt> const& p) {
  std::vector<std::size_t> idx(g.num_vertices(), 0);
  for (std::size_t i = 0; i < r.vertices.size(); ++i) idx[r.vertices[i]] = i;
  for (auto const& x : p) {
    if (x <= 0) return false;
  }
  for (std::size_t e : r.edges) {
    auto const& ed = g.edge(e);
    BigInt pa = p[idx[ed.initial]], pb = p[idx[ed.terminal]];
    BigInt la = std::labs(ed.initial_label), lb = std::labs(ed.terminal_label);
    if (pa % la != 0 || pb % lb != 0 || pa / la != pb / lb) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("build_gamma") {
  auto g = gamma_of("hnn\ngens a\nrel t : a^2 -> a^3");
  CHECK(g.num_vertices() == 1);
  REQUIRE(g.num_edges() == 1);
  CHECK(g.edge(0).terminal_label == 2);
  CHECK(g.edge(0).initial_label == 3);

  g = gamma_of("hnn\ngens a b\nrel s : a^2 -> b^3\nrel t : b^5 -> a^7");
  CHECK(g.num_vertices() == 2);
  REQUIRE(g.num_edges() == 2);
  CHECK(g.edge(0).terminal == 0);
  CHECK(g.edge(0).terminal_label == 2);
  CHECK(g.edge(0).initial == 1);
  CHECK(g.edge(0).initial_label == 3);
  CHECK(g.edge(1).terminal == 1);
  CHECK(g.edge(1).terminal_label == 5);
  CHECK(g.edge(1).initial == 0);
  CHECK(g.edge(1).initial_label == 7);
  auto comps = components(g);
  REQUIRE(comps.size() == 1);
  EdgePath two_cycle{{0, true}, {1, true}};
  CHECK_NOTHROW(check_closed(g, two_cycle));
  CHECK(analyze(g)[0].betti == 1);

  g = gamma_of("hnn\ngens a b\nrel t : a^2 -> b^3");
  CHECK(g.num_vertices() == 2);
  CHECK(g.num_edges() == 1);
  CHECK(analyze(g)[0].betti == 0);
}

TEST_CASE("loop products") {
  auto g = gamma_of("hnn\ngens a\nrel t : a^2 -> a^3");
  EdgePath fwd{{0, true}};
  std::set<long> got{loop_product(g, fwd), loop_product(g, reversed(fwd))};
  CHECK(got == std::set<long>{2, 3});

  g = gamma_of("hnn\ngens a\nrel t : a -> a^2");
  got = {loop_product(g, fwd), loop_product(g, reversed(fwd))};
  CHECK(got == std::set<long>{1, 2});

  g = gamma_of("hnn\ngens a\nrel t : a^-2 -> a^3");
  got = {loop_product(g, fwd), loop_product(g, reversed(fwd))};
  CHECK(got == std::set<long>{-2, 3});

  CHECK_THROWS_MATCHES(loop_product(g, EdgePath{}), Error,
                       Catch::Matchers::Predicate<Error>([](Error const& e) { return e.kind() == ErrorKind::EmptyCycle; }));
}

TEST_CASE("forward and backward loop products use complementary ends") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = random_connected(rng, 1 + trial % 4, 2 + trial % 4);
    auto c = components(g)[0];
    for (auto const& cyc : oracle::cycles_by_subsets(g, c.edges)) {
      BigInt all = 1;
      for (auto t : cyc) all *= BigInt(g.edge(t.edge).initial_label) * g.edge(t.edge).terminal_label;
      CHECK(loop_product_big(g, cyc) * loop_product_big(g, reversed(cyc)) == all);
    }
  }
}

TEST_CASE("analyze_component examples") {
  auto g = gamma_of("hnn\ngens a\nrel t : a -> a^2");
  auto r = analyze(g)[0];
  CHECK_FALSE(r.clean);
  CHECK_FALSE(r.potential);
  CHECK(r.betti == 1);
  REQUIRE(r.unique_cycle);
  CHECK(std::set<BigInt>{r.unique_cycle->loop_product_forward, r.unique_cycle->loop_product_backward} ==
        std::set<BigInt>{1, 2});
  CHECK(r.structure_ok == true);

  g = gamma_of("hnn\ngens a\nrel t : a^2 -> a^3");
  r = analyze(g)[0];
  CHECK_FALSE(r.clean);
  CHECK(r.structure_ok == false);
  REQUIRE(r.failure_evidence);
  CHECK(r.failure_evidence->kind == EvidenceKind::UnbalancedCycle);

  g = gamma_of("hnn\ngens a b\nrel t : a^2 -> b^3");
  r = analyze(g)[0];
  CHECK(r.clean);
  CHECK_FALSE(r.structure_ok);
  REQUIRE(r.potential);
  CHECK(*r.potential == std::vector<BigInt>{2, 3});
  auto brute = oracle::potential_search(g, components(g)[0], 12);
  REQUIRE(brute);
  CHECK(*brute == std::vector<long>{2, 3});
}

TEST_CASE("failure evidence kinds") {
  // off-cycle end labeled 2 pointing away from a BS(1,2) loop
  auto g = gamma_of("hnn\ngens a b\nrel t : a -> a^2\nrel s : a -> b^2");
  auto r = analyze(g)[0];
  CHECK(r.betti == 1);
  CHECK(r.structure_ok == false);
  REQUIRE(r.failure_evidence);
  CHECK(r.failure_evidence->kind == EvidenceKind::OffCycleHalfEdge);
  CHECK(r.failure_evidence->label == 2);
  CHECK(g.vertex_of(r.failure_evidence->half_edge) == 1);

  // the end at the far vertex is 1: allowed
  g = gamma_of("hnn\ngens a b\nrel t : a -> a^2\nrel s : a^3 -> b");
  r = analyze(g)[0];
  CHECK(r.structure_ok == true);

  g = gamma_of("hnn\ngens a\nrel t : a -> a^2\nrel s : a -> a^3");
  r = analyze(g)[0];
  CHECK(r.betti == 2);
  CHECK_FALSE(r.unique_cycle);
  CHECK(r.structure_ok == false);
  REQUIRE(r.failure_evidence);
  CHECK(r.failure_evidence->kind == EvidenceKind::TwoCycles);
  CHECK_FALSE(oracle::balanced(g, r.failure_evidence->cycle));
  CHECK_NOTHROW(check_closed(g, r.failure_evidence->second_cycle));
}

TEST_CASE("report invariants") {
  std::mt19937 rng(32);
  for (int trial = 0; trial < 400; ++trial) {
    auto g = random_connected(rng, 1 + trial % 5, 1 + trial % 6);
    for (auto const& r : analyze(g)) {
      CHECK(r.clean == r.potential.has_value());
      CHECK(r.structure_ok.has_value() == !r.clean);
      if (!r.clean) CHECK(r.unique_cycle.has_value() == (r.betti == 1));
      CHECK(r.betti == r.edges.size() - r.vertices.size() + 1);
    }
  }
}

TEST_CASE("gain cleanliness agrees with cycle enumeration") {
  std::mt19937 rng(33);
  int clean_seen = 0, dirty_seen = 0;
  for (int trial = 0; trial < 600; ++trial) {
    std::size_t nv = 1 + static_cast<std::size_t>(trial % 5);
    std::size_t ne = std::max<std::size_t>(nv - 1, 1 + static_cast<std::size_t>(trial % 6));
    auto g = random_connected(rng, nv, ne);
    auto c = components(g)[0];
    auto r = analyze_component(g, c);
    bool all_balanced = true;
    for (auto const& cyc : oracle::cycles_by_subsets(g, c.edges)) all_balanced = all_balanced && oracle::balanced(g, cyc);
    CHECK(r.clean == all_balanced);
    (r.clean ? clean_seen : dirty_seen)++;
    if (r.clean) {
      CHECK(potential_valid(g, r, *r.potential));
    } else {
      CHECK(r.structure_ok == oracle::structure_by_definition(g, c));
    }
  }
  CHECK(clean_seen > 50);
  CHECK(dirty_seen > 50);
}

TEST_CASE("potential exists exactly when clean and is minimal") {
  std::mt19937 rng(34);
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t nv = 1 + static_cast<std::size_t>(trial % 3);
    auto g = random_connected(rng, nv, nv + static_cast<std::size_t>(trial % 2));
    auto c = components(g)[0];
    auto r = analyze_component(g, c);
    auto brute = oracle::potential_search(g, c, 48);
    if (!r.clean) {
      CHECK_FALSE(brute);
      continue;
    }
    REQUIRE(brute);
    REQUIRE(r.potential);
    for (std::size_t i = 0; i < nv; ++i) CHECK((*r.potential)[i] == (*brute)[i]);
  }
  for (int trial = 0; trial < 200; ++trial) {
    auto g = random_connected(rng, 2 + trial % 5, 1 + trial % 5);
    for (auto const& r : analyze(g)) {
      if (!r.clean) continue;
      for (long p : {2, 3, 5, 7}) {
        bool all_divisible = true;
        for (auto const& x : *r.potential) all_divisible = all_divisible && x % p == 0;
        if (!all_divisible) continue;
        std::vector<BigInt> smaller;
        for (auto const& x : *r.potential) smaller.push_back(x / p);
        CHECK_FALSE(potential_valid(g, r, smaller));
      }
    }
  }
}

TEST_CASE("balance is invariant under rotation and reversal") {
  std::mt19937 rng(35);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = random_connected(rng, 1 + trial % 4, 2 + trial % 3);
    auto c = components(g)[0];
    for (auto const& cyc : oracle::cycles_by_subsets(g, c.edges)) {
      if (cyc.size() > 4) continue;
      bool b = oracle::balanced(g, cyc);
      for (std::size_t k = 0; k < cyc.size(); ++k) {
        EdgePath rot(cyc.begin() + static_cast<std::ptrdiff_t>(k), cyc.end());
        rot.insert(rot.end(), cyc.begin(), cyc.begin() + static_cast<std::ptrdiff_t>(k));
        CHECK(oracle::balanced(g, rot) == b);
        CHECK(oracle::balanced(g, reversed(rot)) == b);
        CHECK(loop_product(g, rot) == loop_product(g, cyc));
      }
    }
  }
}

TEST_CASE("random trees are clean") {
  std::mt19937 rng(36);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t nv = 1 + static_cast<std::size_t>(trial % 8);
    auto g = random_connected(rng, nv, nv - 1);
    auto r = analyze(g);
    REQUIRE(r.size() == 1);
    CHECK(r[0].betti == 0);
    CHECK(r[0].clean);
    REQUIRE(r[0].potential);
    CHECK(potential_valid(g, r[0], *r[0].potential));
  }
}

TEST_CASE("spanning tree paths and fundamental cycles") {
  std::mt19937 rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = random_connected(rng, 1 + trial % 6, 1 + trial % 8);
    auto c = components(g)[0];
    SpanningTree t(g, c);
    CHECK(t.root() == c.vertices.front());
    for (std::size_t a : c.vertices) {
      for (std::size_t b : c.vertices) {
        auto p = t.path(a, b);
        std::size_t v = a;
        for (auto s : p) {
          CHECK(g.start(s) == v);
          v = g.end(s);
        }
        CHECK(v == b);
      }
    }
    std::size_t non_tree = 0;
    for (std::size_t e : c.edges) {
      if (t.is_tree_edge(e)) continue;
      ++non_tree;
      CHECK_NOTHROW(check_closed(g, t.fundamental_cycle(e)));
    }
    CHECK(non_tree == c.edges.size() - c.vertices.size() + 1);
  }
}
