#pragma once

// Residual finiteness decision and very-unbalanced certificates.

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <deque>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gbsrf/britton.hpp"
#include "gbsrf/error.hpp"
#include "gbsrf/gamma.hpp"
#include "gbsrf/presentation.hpp"
#include "gbsrf/words.hpp"

namespace gbsrf {

struct CheckRecord {
  std::string claim;
  bool holds = false;
};

/// Claims h · g^m · h⁻¹ = g^n with 1, |m|, |n| distinct and the relation not
/// divisible.
struct VUCertificate {
  Word g;
  HnnWord h;
  long m = 0;
  long n = 0;
  std::vector<CheckRecord> checks;
};

struct BsReport {
  bool explicit_pair = false;
  long p = 0;  // explicit BS(p, q)
  long q = 0;
  long ratio = 0;  // otherwise BS(r, r·ratio) for some prime r
};

struct Verdict {
  bool residually_finite = true;
  bool lerf = true;
  std::vector<ComponentReport> components;
  std::optional<VUCertificate> certificate;
  std::optional<BsReport> bs_report;
};

namespace detail {

inline std::string power_text(char const* base, long e) {
  return e == 1 ? std::string(base) : std::string(base) + "^" + std::to_string(e);
}

/// Whether h · g^a · h⁻¹ · g^-b is trivial.
inline bool conjugates_to(StandardPresentation const& sp, Word const& g, HnnWord const& h, long a, long b) {
  BrittonReducer r(sp);
  r.push(h);
  r.push_power(g, a);
  r.push(inverse(h));
  r.push_power(g, detail::checked_mul(b, -1));
  return r.is_trivial();
}

}  // namespace detail

/// Runs every check of the definition and records it; valid iff all hold.
inline bool verify_certificate(VUCertificate& cert, StandardPresentation const& sp) {
  cert.checks.clear();
  auto record = [&](std::string claim, auto&& test) {
    bool ok = false;
    try {
      ok = test();
    } catch (Error const&) {
      ok = false;
    }
    cert.checks.push_back({std::move(claim), ok});
    return ok;
  };
  Word g = free_reduce(cert.g);
  bool alphabet_ok = std::all_of(cert.h.begin(), cert.h.end(),
                                 [&](Letter l) { return l.gen() < sp.alphabet.size(); });
  bool vertex = record("g is a nontrivial word in the vertex generators", [&] {
    return !g.empty() &&
           std::all_of(g.begin(), g.end(), [&](Letter l) { return l.gen() < sp.vertex_rank; });
  });
  long const m = cert.m;
  long const n = cert.n;
  auto mag = [](long x) { return x < 0 ? -static_cast<unsigned long>(x) : static_cast<unsigned long>(x); };
  bool distinct = record("1, |m| = " + std::to_string(mag(m)) + ", |n| = " + std::to_string(mag(n)) +
                             " are distinct",
                         [&] { return m != 0 && n != 0 && mag(m) != 1 && mag(n) != 1 && mag(m) != mag(n); });
  bool usable = vertex && alphabet_ok && m != 0 && n != 0;
  bool relation = record(
      "h " + detail::power_text("g", m) + " h^-1 = " + detail::power_text("g", n),
      [&] { return usable && detail::conjugates_to(sp, g, cert.h, m, n); });
  bool ok = vertex && distinct && relation && alphabet_ok;
  if (m != 0 && n != 0 && m % n == 0) {
    ok = record("h " + detail::power_text("g", m / n) + " h^-1 != g",
                [&] { return usable && !detail::conjugates_to(sp, g, cert.h, m / n, 1); }) &&
         ok;
  }
  if (m != 0 && n != 0 && n % m == 0) {
    ok = record("h g h^-1 != " + detail::power_text("g", n / m),
                [&] { return usable && !detail::conjugates_to(sp, g, cert.h, 1, n / m); }) &&
         ok;
  }
  return ok;
}

inline bool verify_certificate(VUCertificate const& cert, StandardPresentation const& sp) {
  VUCertificate copy = cert;
  return verify_certificate(copy, sp);
}

/// Baumslag–Solitar subgroup implied by a verified certificate.
inline BsReport bs_report(VUCertificate const& cert) {
  long const m = cert.m;
  long const n = cert.n;
  BsReport r;
  if (m == 0 || n == 0) throw Error(ErrorKind::ContractViolation, "certificate exponents must be nonzero");
  if (n % m == 0) {
    r.ratio = n / m;
  } else if (m % n == 0) {
    r.ratio = m / n;
  } else {
    long d = std::gcd(m, n);
    r.explicit_pair = true;
    r.p = m / d;
    r.q = n / d;
  }
  return r;
}

namespace detail {

struct CandidateSearch {
  GammaGraph const& gamma;
  StandardPresentation const& sp;
  ComponentReport const& report;
  std::size_t max_length;
  std::size_t budget = 20000;

  std::optional<VUCertificate> found;

  HnnWord word_of(EdgePath const& p) const {
    HnnWord w;
    for (Traversal t : p) push_reduced(w, sp.stable_letter(t.edge, t.forward ? 1 : -1));
    return w;
  }

  /// Tries one closed path; true once a certificate is accepted.
  bool attempt(EdgePath const& p) {
    if (found || budget == 0) return found.has_value();
    if (p.empty() || p.size() > max_length) return false;
    --budget;
    long plus = 0;
    long minus = 0;
    try {
      plus = loop_product(gamma, p);
      minus = loop_product(gamma, reversed(p));
    } catch (Error const& e) {
      if (e.kind() == ErrorKind::Overflow) return false;
      throw;
    }
    if (is_unit(plus) || is_unit(minus) || std::labs(plus) == std::labs(minus)) return false;
    std::size_t const a = gamma.start(p.front());
    Word const& g = sp.class_word(a);
    HnnWord h = word_of(p);
    long const d = std::gcd(plus, minus);
    std::vector<long> divisors;
    for (long k = 1; k * k <= d; ++k) {
      if (d % k != 0) continue;
      divisors.push_back(k);
      if (k != d / k) divisors.push_back(d / k);
    }
    std::sort(divisors.rbegin(), divisors.rend());
    for (int eps : {1, -1}) {
      for (long k : divisors) {
        bool holds = false;
        try {
          holds = conjugates_to(sp, g, h, minus / k, eps * (plus / k));
        } catch (Error const& e) {
          if (e.kind() != ErrorKind::Overflow) throw;
        }
        if (!holds) continue;
        VUCertificate cert{g, h, minus / k, eps * (plus / k), {}};
        if (verify_certificate(cert, sp)) {
          found = std::move(cert);
          return true;
        }
        break;
      }
    }
    return false;
  }

  bool attempt_rotations(EdgePath const& cycle) {
    EdgePath back = reversed(cycle);
    for (EdgePath const* c : {&cycle, static_cast<EdgePath const*>(&back)}) {
      for (std::size_t r = 0; r < c->size(); ++r) {
        EdgePath rot(c->begin() + static_cast<std::ptrdiff_t>(r), c->end());
        rot.insert(rot.end(), c->begin(), c->begin() + static_cast<std::ptrdiff_t>(r));
        if (attempt(rot)) return true;
      }
    }
    return false;
  }
};

/// Shortest path from `from` to any vertex flagged in `target`.
inline std::optional<EdgePath> path_to(GammaGraph const& g, std::size_t from, std::vector<bool> const& target) {
  std::size_t const none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> seen(g.num_vertices(), none);
  std::vector<Traversal> via(g.num_vertices());
  std::deque<std::size_t> queue{from};
  seen[from] = 0;
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    if (target[v]) {
      EdgePath out;
      while (v != from) {
        out.push_back(via[v]);
        v = g.start(via[v]);
      }
      std::reverse(out.begin(), out.end());
      return out;
    }
    for (Traversal t : g.leaving(v)) {
      std::size_t u = g.end(t);
      if (seen[u] != none) continue;
      seen[u] = seen[v] + 1;
      via[u] = t;
      queue.push_back(u);
    }
  }
  return std::nullopt;
}

/// Embedded cycles of a component: fundamental cycles first, then further
/// ones found by depth-first search, at most `cap` in total.
inline std::vector<EdgePath> embedded_cycles(GammaGraph const& g, Component const& c, std::size_t cap) {
  std::vector<EdgePath> out;
  std::set<std::vector<std::size_t>> seen;
  auto add = [&](EdgePath const& p) {
    std::vector<std::size_t> key;
    for (Traversal t : p) key.push_back(t.edge);
    std::sort(key.begin(), key.end());
    if (out.size() < cap && seen.insert(key).second) out.push_back(p);
  };
  SpanningTree tree(g, c);
  for (std::size_t e : c.edges) {
    if (!tree.is_tree_edge(e)) add(tree.fundamental_cycle(e));
  }
  std::vector<std::size_t> rank(g.num_vertices(), 0);
  for (std::size_t i = 0; i < c.vertices.size(); ++i) rank[c.vertices[i]] = i;
  std::size_t steps = 0;
  std::size_t const step_cap = 200000;
  std::vector<bool> on_path(g.num_vertices(), false);
  std::vector<bool> used(g.num_edges(), false);
  EdgePath path;
  auto dfs = [&](auto&& self, std::size_t s, std::size_t v) -> void {
    if (out.size() >= cap || ++steps > step_cap) return;
    for (Traversal t : g.leaving(v)) {
      if (used[t.edge]) continue;
      std::size_t u = g.end(t);
      if (rank[u] < rank[s]) continue;
      if (u == s) {
        path.push_back(t);
        add(path);
        path.pop_back();
        continue;
      }
      if (on_path[u]) continue;
      used[t.edge] = true;
      on_path[u] = true;
      path.push_back(t);
      self(self, s, u);
      path.pop_back();
      on_path[u] = false;
      used[t.edge] = false;
    }
  };
  for (std::size_t s : c.vertices) {
    on_path[s] = true;
    dfs(dfs, s, s);
    on_path[s] = false;
  }
  return out;
}

}  // namespace detail

/// Searches closed paths of a failing component for a very unbalanced
/// element; every returned certificate has passed verify_certificate.
inline VUCertificate build_certificate(ComponentReport const& report, GammaGraph const& gamma,
                                       StandardPresentation const& sp) {
  if (report.clean || report.structure_ok.value_or(true)) {
    throw Error(ErrorKind::ContractViolation, "component does not fail the structure check");
  }
  Component comp{report.vertices, report.edges};
  detail::CandidateSearch search{gamma, sp, report, 4 * report.edges.size() + 4, 20000, std::nullopt};
  std::vector<EdgePath> cycles = detail::embedded_cycles(gamma, comp, 64);

  auto done = [&]() -> VUCertificate {
    return std::move(*search.found);
  };

  for (auto const& c : cycles) {
    if (search.attempt_rotations(c)) return done();
  }

  std::vector<bool> on_cycle(gamma.num_vertices(), false);
  for (auto const& cyc : cycles) {
    std::fill(on_cycle.begin(), on_cycle.end(), false);
    for (Traversal t : cyc) on_cycle[gamma.start(t)] = true;
    for (std::size_t v : comp.vertices) {
      if (on_cycle[v]) continue;
      auto p = detail::path_to(gamma, v, on_cycle);
      if (!p) continue;
      std::size_t x = gamma.end(p->back());
      std::size_t r = 0;
      while (gamma.start(cyc[r]) != x) ++r;
      EdgePath at(cyc.begin() + static_cast<std::ptrdiff_t>(r), cyc.end());
      at.insert(at.end(), cyc.begin(), cyc.begin() + static_cast<std::ptrdiff_t>(r));
      for (EdgePath const& loop : {at, reversed(at)}) {
        for (int power = 1; power <= 2; ++power) {
          EdgePath cand = *p;
          for (int i = 0; i < power; ++i) cand.insert(cand.end(), loop.begin(), loop.end());
          EdgePath back = reversed(*p);
          cand.insert(cand.end(), back.begin(), back.end());
          if (search.attempt(cand)) return done();
        }
      }
    }
  }

  for (std::size_t i = 0; i < cycles.size(); ++i) {
    EdgePath const& base = cycles[i];
    if (boost::multiprecision::abs(loop_product_big(gamma, base)) ==
        boost::multiprecision::abs(loop_product_big(gamma, reversed(base)))) {
      continue;
    }
    for (std::size_t j = 0; j < cycles.size(); ++j) {
      if (j == i) continue;
      std::vector<bool> other(gamma.num_vertices(), false);
      for (Traversal t : cycles[j]) other[gamma.start(t)] = true;
      for (EdgePath const& orient : {base, reversed(base)}) {
        for (std::size_t rot = 0; rot < orient.size(); ++rot) {
          EdgePath gam(orient.begin() + static_cast<std::ptrdiff_t>(rot), orient.end());
          gam.insert(gam.end(), orient.begin(), orient.begin() + static_cast<std::ptrdiff_t>(rot));
          for (std::size_t stop = 0; stop <= gam.size(); ++stop) {
            EdgePath arc(gam.begin(), gam.begin() + static_cast<std::ptrdiff_t>(stop));
            std::size_t y = stop == 0 ? gamma.start(gam.front()) : gamma.end(arc.back());
            auto bridge = detail::path_to(gamma, y, other);
            if (!bridge) continue;
            EdgePath to(arc);
            to.insert(to.end(), bridge->begin(), bridge->end());
            std::size_t z = to.empty() ? y : gamma.end(to.back());
            EdgePath const& cj = cycles[j];
            std::size_t r = 0;
            while (gamma.start(cj[r]) != z) ++r;
            EdgePath loop(cj.begin() + static_cast<std::ptrdiff_t>(r), cj.end());
            loop.insert(loop.end(), cj.begin(), cj.begin() + static_cast<std::ptrdiff_t>(r));
            for (EdgePath const& around : {loop, reversed(loop)}) {
              EdgePath q = to;
              q.insert(q.end(), around.begin(), around.end());
              EdgePath ret = reversed(to);
              q.insert(q.end(), ret.begin(), ret.end());
              if (search.attempt(q)) return done();
              EdgePath s = gam;
              s.insert(s.end(), q.begin(), q.end());
              if (search.attempt(s)) return done();
            }
          }
        }
      }
    }
  }
  throw Error(ErrorKind::CertificateSearchExhausted, "no very unbalanced element found within the search bound");
}

inline Verdict decide(StandardPresentation const& sp) {
  Verdict v;
  GammaGraph gamma = build_gamma(sp);
  v.components = analyze(gamma);
  ComponentReport const* failing = nullptr;
  for (auto const& c : v.components) {
    if (!c.clean) v.lerf = false;
    if (!c.clean && !*c.structure_ok && !failing) failing = &c;
  }
  if (failing) {
    v.residually_finite = false;
    v.lerf = false;
    v.certificate = build_certificate(*failing, gamma, sp);
    v.bs_report = bs_report(*v.certificate);
  }
  return v;
}

}  // namespace gbsrf
