#pragma once

// The labeled multigraph Γ of a standard presentation and its per-component
// analysis.

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <deque>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "gbsrf/error.hpp"
#include "gbsrf/presentation.hpp"

namespace gbsrf {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Relation j is an edge from `initial` (class h, label n_j) to `terminal`
/// (class g, label m_j).
struct GammaEdge {
  std::size_t initial = 0;
  long initial_label = 0;
  std::size_t terminal = 0;
  long terminal_label = 0;
};

/// One end of an edge.
struct HalfEdge {
  std::size_t edge = 0;
  bool terminal = false;

  bool operator==(HalfEdge const&) const = default;
};

/// An edge crossed in either direction; `forward` means initial → terminal.
struct Traversal {
  std::size_t edge = 0;
  bool forward = true;

  Traversal reversed() const noexcept { return {edge, !forward}; }
  bool operator==(Traversal const&) const = default;
};

using EdgePath = std::vector<Traversal>;

class GammaGraph {
 public:
  GammaGraph() = default;
  GammaGraph(std::size_t num_vertices, std::vector<GammaEdge> edges)
      : num_vertices_(num_vertices), edges_(std::move(edges)), out_(num_vertices) {
    for (std::size_t j = 0; j < edges_.size(); ++j) {
      auto const& e = edges_[j];
      if (e.initial >= num_vertices_ || e.terminal >= num_vertices_) {
        throw Error(ErrorKind::ContractViolation, "edge endpoint out of range");
      }
      if (e.initial_label == 0 || e.terminal_label == 0) {
        throw Error(ErrorKind::ContractViolation, "edge labels must be nonzero");
      }
      out_[e.initial].push_back({j, true});
      out_[e.terminal].push_back({j, false});
    }
  }

  std::size_t num_vertices() const noexcept { return num_vertices_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::vector<GammaEdge> const& edges() const noexcept { return edges_; }
  GammaEdge const& edge(std::size_t j) const { return edges_.at(j); }

  std::size_t vertex_of(HalfEdge he) const {
    return he.terminal ? edge(he.edge).terminal : edge(he.edge).initial;
  }
  long label(HalfEdge he) const {
    return he.terminal ? edge(he.edge).terminal_label : edge(he.edge).initial_label;
  }

  std::size_t start(Traversal t) const { return t.forward ? edge(t.edge).initial : edge(t.edge).terminal; }
  std::size_t end(Traversal t) const { return t.forward ? edge(t.edge).terminal : edge(t.edge).initial; }
  HalfEdge near_end(Traversal t) const { return {t.edge, !t.forward}; }
  HalfEdge far_end(Traversal t) const { return {t.edge, t.forward}; }
  long near_label(Traversal t) const { return label(near_end(t)); }
  long far_label(Traversal t) const { return label(far_end(t)); }

  /// Traversals leaving v; a self-loop contributes both directions.
  std::span<Traversal const> leaving(std::size_t v) const { return out_.at(v); }

  std::size_t degree(std::size_t v) const { return out_.at(v).size(); }

 private:
  std::size_t num_vertices_ = 0;
  std::vector<GammaEdge> edges_;
  std::vector<std::vector<Traversal>> out_;
};

inline GammaGraph build_gamma(StandardPresentation const& sp) {
  std::vector<GammaEdge> edges;
  edges.reserve(sp.relations.size());
  for (auto const& r : sp.relations) edges.push_back({r.h, r.n, r.g, r.m});
  return GammaGraph(sp.classes.size(), std::move(edges));
}

/// Throws unless `path` is a nonempty closed walk.
inline void check_closed(GammaGraph const& g, std::span<Traversal const> path) {
  if (path.empty()) throw Error(ErrorKind::EmptyCycle, "closed path is empty");
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i].edge >= g.num_edges()) {
      throw Error(ErrorKind::ContractViolation, "edge index out of range");
    }
    Traversal next = path[(i + 1) % path.size()];
    if (next.edge >= g.num_edges() || g.end(path[i]) != g.start(next)) {
      throw Error(ErrorKind::ContractViolation, "edge path is not closed");
    }
  }
}

/// Product of the labels on the outgoing ends along a closed path.
inline long loop_product(GammaGraph const& g, std::span<Traversal const> path) {
  check_closed(g, path);
  long p = 1;
  for (Traversal t : path) p = detail::checked_mul(p, g.near_label(t));
  return p;
}

inline BigInt loop_product_big(GammaGraph const& g, std::span<Traversal const> path) {
  check_closed(g, path);
  BigInt p = 1;
  for (Traversal t : path) p *= g.near_label(t);
  return p;
}

inline EdgePath reversed(std::span<Traversal const> path) {
  EdgePath out;
  out.reserve(path.size());
  for (auto it = path.rbegin(); it != path.rend(); ++it) out.push_back(it->reversed());
  return out;
}

struct Component {
  std::vector<std::size_t> vertices;  // ascending
  std::vector<std::size_t> edges;     // ascending
};

/// Connected components ordered by least vertex.
inline std::vector<Component> components(GammaGraph const& g) {
  std::vector<std::size_t> comp(g.num_vertices(), static_cast<std::size_t>(-1));
  std::vector<Component> out;
  for (std::size_t s = 0; s < g.num_vertices(); ++s) {
    if (comp[s] != static_cast<std::size_t>(-1)) continue;
    std::size_t id = out.size();
    out.emplace_back();
    std::vector<std::size_t> stack{s};
    comp[s] = id;
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      out[id].vertices.push_back(v);
      for (Traversal t : g.leaving(v)) {
        std::size_t u = g.end(t);
        if (comp[u] == static_cast<std::size_t>(-1)) {
          comp[u] = id;
          stack.push_back(u);
        }
      }
    }
  }
  for (std::size_t j = 0; j < g.num_edges(); ++j) out[comp[g.edge(j).initial]].edges.push_back(j);
  for (auto& c : out) std::sort(c.vertices.begin(), c.vertices.end());
  return out;
}

/// Breadth-first spanning tree of one component, rooted at its least vertex.
class SpanningTree {
 public:
  SpanningTree(GammaGraph const& g, Component const& c)
      : graph_(&g), tree_edge_(g.num_edges(), false) {
    if (c.vertices.empty()) throw Error(ErrorKind::ContractViolation, "empty component");
    std::size_t const none = static_cast<std::size_t>(-1);
    depth_.assign(g.num_vertices(), none);
    parent_.assign(g.num_vertices(), Traversal{});
    root_ = c.vertices.front();
    depth_[root_] = 0;
    std::deque<std::size_t> queue{root_};
    while (!queue.empty()) {
      std::size_t v = queue.front();
      queue.pop_front();
      order_.push_back(v);
      for (Traversal t : g.leaving(v)) {
        std::size_t u = g.end(t);
        if (depth_[u] != none) continue;
        depth_[u] = depth_[v] + 1;
        parent_[u] = t;
        tree_edge_[t.edge] = true;
        queue.push_back(u);
      }
    }
  }

  std::size_t root() const noexcept { return root_; }
  /// Vertices in breadth-first order.
  std::vector<std::size_t> const& order() const noexcept { return order_; }
  bool is_tree_edge(std::size_t e) const { return tree_edge_.at(e); }
  /// Traversal from the parent of v into v; meaningless at the root.
  Traversal parent(std::size_t v) const { return parent_.at(v); }
  std::size_t depth(std::size_t v) const { return depth_.at(v); }

  /// Path from a to b inside the tree.
  EdgePath path(std::size_t a, std::size_t b) const {
    EdgePath up;
    EdgePath down;
    while (depth_[a] > depth_[b]) {
      up.push_back(parent_[a].reversed());
      a = graph_->start(parent_[a]);
    }
    while (depth_[b] > depth_[a]) {
      down.push_back(parent_[b]);
      b = graph_->start(parent_[b]);
    }
    while (a != b) {
      up.push_back(parent_[a].reversed());
      a = graph_->start(parent_[a]);
      down.push_back(parent_[b]);
      b = graph_->start(parent_[b]);
    }
    up.insert(up.end(), down.rbegin(), down.rend());
    return up;
  }

  /// The cycle closed by a non-tree edge, based at its initial vertex.
  EdgePath fundamental_cycle(std::size_t e) const {
    EdgePath out{Traversal{e, true}};
    EdgePath back = path(graph_->edge(e).terminal, graph_->edge(e).initial);
    out.insert(out.end(), back.begin(), back.end());
    return out;
  }

 private:
  GammaGraph const* graph_;
  std::size_t root_ = 0;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> depth_;
  std::vector<Traversal> parent_;
  std::vector<bool> tree_edge_;
};

struct CycleInfo {
  EdgePath path;
  BigInt loop_product_forward;
  BigInt loop_product_backward;
};

enum class EvidenceKind {
  UnbalancedCycle,   // the unique cycle has no loop-product ±1
  OffCycleHalfEdge,  // an end pointing away from the cycle is not ±1
  TwoCycles,         // two independent cycles, the first unbalanced
};

struct FailureEvidence {
  EvidenceKind kind = EvidenceKind::UnbalancedCycle;
  EdgePath cycle;
  EdgePath second_cycle;
  HalfEdge half_edge;
  long label = 0;
};

struct ComponentReport {
  std::vector<std::size_t> vertices;
  std::vector<std::size_t> edges;
  std::size_t betti = 0;
  bool clean = true;
  std::optional<std::vector<BigInt>> potential;  // parallel to `vertices`
  std::optional<CycleInfo> unique_cycle;
  std::optional<bool> structure_ok;
  std::optional<FailureEvidence> failure_evidence;
};

inline bool is_unit(BigInt const& x) { return x == 1 || x == -1; }
inline bool is_unit(long x) { return x == 1 || x == -1; }

namespace detail {

inline BigInt abs_big(long x) { return boost::multiprecision::abs(BigInt(x)); }

/// The unique embedded cycle of a connected graph with Betti number one.
inline EdgePath unique_cycle(GammaGraph const& g, Component const& c) {
  std::vector<std::size_t> deg(g.num_vertices(), 0);
  std::vector<bool> alive(g.num_edges(), false);
  for (std::size_t e : c.edges) alive[e] = true;
  for (std::size_t v : c.vertices) deg[v] = g.degree(v);
  std::vector<std::size_t> leaves;
  for (std::size_t v : c.vertices) {
    if (deg[v] == 1) leaves.push_back(v);
  }
  while (!leaves.empty()) {
    std::size_t v = leaves.back();
    leaves.pop_back();
    for (Traversal t : g.leaving(v)) {
      if (!alive[t.edge]) continue;
      alive[t.edge] = false;
      --deg[v];
      std::size_t u = g.end(t);
      if (--deg[u] == 1) leaves.push_back(u);
    }
  }
  std::size_t start = static_cast<std::size_t>(-1);
  for (std::size_t v : c.vertices) {
    if (deg[v] > 0) {
      start = v;
      break;
    }
  }
  if (start == static_cast<std::size_t>(-1)) {
    throw Error(ErrorKind::ContractViolation, "component has no cycle");
  }
  EdgePath cycle;
  std::size_t v = start;
  std::size_t prev_edge = static_cast<std::size_t>(-1);
  do {
    Traversal step{};
    bool found = false;
    for (Traversal t : g.leaving(v)) {
      if (alive[t.edge] && t.edge != prev_edge) {
        step = t;
        found = true;
        break;
      }
    }
    if (!found) throw Error(ErrorKind::ContractViolation, "pruned core is not a cycle");
    cycle.push_back(step);
    prev_edge = step.edge;
    v = g.end(step);
  } while (v != start);
  return cycle;
}

}  // namespace detail

/// Cleanliness, potential, Betti number and the structure check for one
/// connected component.
inline ComponentReport analyze_component(GammaGraph const& g, Component const& c) {
  ComponentReport rep;
  rep.vertices = c.vertices;
  rep.edges = c.edges;
  rep.betti = c.edges.size() + 1 - c.vertices.size();

  SpanningTree tree(g, c);
  std::vector<Rational> ratio(g.num_vertices());
  ratio[tree.root()] = 1;
  for (std::size_t v : tree.order()) {
    if (v == tree.root()) continue;
    Traversal t = tree.parent(v);
    ratio[v] = ratio[g.start(t)] * Rational(detail::abs_big(g.far_label(t)),
                                            detail::abs_big(g.near_label(t)));
  }
  std::optional<std::size_t> unbalanced_edge;
  for (std::size_t e : c.edges) {
    if (tree.is_tree_edge(e)) continue;
    GammaEdge const& ed = g.edge(e);
    if (ratio[ed.terminal] * std::abs(ed.initial_label) !=
        ratio[ed.initial] * std::abs(ed.terminal_label)) {
      unbalanced_edge = e;
      break;
    }
  }
  rep.clean = !unbalanced_edge;

  if (rep.clean) {
    BigInt scale = 1;
    for (std::size_t v : c.vertices) {
      BigInt a = numerator(ratio[v]);
      BigInt b = denominator(ratio[v]);
      scale = boost::multiprecision::lcm(scale, b);
      for (Traversal t : g.leaving(v)) {
        BigInt l = detail::abs_big(g.near_label(t));
        scale = boost::multiprecision::lcm(scale, b * l / boost::multiprecision::gcd(a, l));
      }
    }
    std::vector<BigInt> pot;
    pot.reserve(c.vertices.size());
    for (std::size_t v : c.vertices) {
      pot.push_back(scale * numerator(ratio[v]) / denominator(ratio[v]));
    }
    rep.potential = std::move(pot);
    return rep;
  }

  if (rep.betti == 0) {
    throw Error(ErrorKind::ContractViolation, "a tree component cannot be unclean");
  }

  if (rep.betti >= 2) {
    FailureEvidence ev;
    ev.kind = EvidenceKind::TwoCycles;
    ev.cycle = tree.fundamental_cycle(*unbalanced_edge);
    for (std::size_t e : c.edges) {
      if (!tree.is_tree_edge(e) && e != *unbalanced_edge) {
        ev.second_cycle = tree.fundamental_cycle(e);
        break;
      }
    }
    rep.structure_ok = false;
    rep.failure_evidence = std::move(ev);
    return rep;
  }

  CycleInfo cyc;
  cyc.path = detail::unique_cycle(g, c);
  cyc.loop_product_forward = loop_product_big(g, cyc.path);
  cyc.loop_product_backward = loop_product_big(g, reversed(cyc.path));
  bool unit_loop = is_unit(cyc.loop_product_forward) || is_unit(cyc.loop_product_backward);

  std::optional<FailureEvidence> evidence;
  if (!unit_loop) {
    evidence = FailureEvidence{EvidenceKind::UnbalancedCycle, cyc.path, {}, {}, 0};
  } else {
    std::vector<bool> seen(g.num_vertices(), false);
    std::vector<bool> on_cycle(g.num_edges(), false);
    std::deque<std::size_t> queue;
    for (Traversal t : cyc.path) {
      on_cycle[t.edge] = true;
      if (!seen[g.start(t)]) {
        seen[g.start(t)] = true;
        queue.push_back(g.start(t));
      }
    }
    while (!queue.empty() && !evidence) {
      std::size_t v = queue.front();
      queue.pop_front();
      for (Traversal t : g.leaving(v)) {
        if (on_cycle[t.edge] || seen[g.end(t)]) continue;
        std::size_t u = g.end(t);
        seen[u] = true;
        if (!is_unit(g.far_label(t))) {
          evidence = FailureEvidence{EvidenceKind::OffCycleHalfEdge, {}, {}, g.far_end(t),
                                     g.far_label(t)};
          break;
        }
        queue.push_back(u);
      }
    }
  }
  rep.structure_ok = !evidence;
  rep.failure_evidence = std::move(evidence);
  rep.unique_cycle = std::move(cyc);
  return rep;
}

inline std::vector<ComponentReport> analyze(GammaGraph const& g) {
  std::vector<ComponentReport> out;
  for (auto const& c : components(g)) out.push_back(analyze_component(g, c));
  return out;
}

}  // namespace gbsrf
