#pragma once

// JSON form of verdicts, component reports and certificates. Words are
// printed over the input alphabet.

#include <cstdint>
#include <limits>
#include <string>

#include "json.hpp"

#include "gbsrf/certify.hpp"
#include "gbsrf/gamma.hpp"
#include "gbsrf/presentation.hpp"

namespace gbsrf {

using Json = nlohmann::ordered_json;

inline constexpr int kJsonSchema = 1;

/// Numbers that fit in 64 bits are emitted as integers, others as decimal
/// strings.
inline Json big_to_json(BigInt const& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max()) {
    return Json(x.convert_to<std::int64_t>());
  }
  return Json(x.str());
}

inline Json path_to_json(EdgePath const& p, StandardPresentation const& sp) {
  Json out = Json::array();
  for (Traversal t : p) out.push_back({{"edge", sp.stable_name(t.edge)}, {"forward", t.forward}});
  return out;
}

inline std::string to_string(EvidenceKind k) {
  switch (k) {
    case EvidenceKind::UnbalancedCycle: return "unbalanced_cycle";
    case EvidenceKind::OffCycleHalfEdge: return "off_cycle_half_edge";
    case EvidenceKind::TwoCycles: return "two_cycles";
  }
  return "unknown";
}

inline Json report_to_json(ComponentReport const& r, GammaGraph const& gamma, StandardPresentation const& sp) {
  Json out;
  Json vertices = Json::array();
  for (std::size_t v : r.vertices) vertices.push_back({{"index", v}, {"word", sp.format(sp.class_word(v))}});
  out["vertices"] = std::move(vertices);
  Json edges = Json::array();
  for (std::size_t e : r.edges) {
    GammaEdge const& ed = gamma.edge(e);
    edges.push_back({{"stable", sp.stable_name(e)},
                     {"initial", ed.initial},
                     {"initial_label", ed.initial_label},
                     {"terminal", ed.terminal},
                     {"terminal_label", ed.terminal_label}});
  }
  out["edges"] = std::move(edges);
  out["betti"] = r.betti;
  out["clean"] = r.clean;
  if (r.potential) {
    Json pot = Json::array();
    for (std::size_t i = 0; i < r.vertices.size(); ++i) {
      pot.push_back({{"vertex", r.vertices[i]}, {"value", big_to_json((*r.potential)[i])}});
    }
    out["potential"] = std::move(pot);
  } else {
    out["potential"] = nullptr;
  }
  if (r.unique_cycle) {
    out["unique_cycle"] = {{"path", path_to_json(r.unique_cycle->path, sp)},
                           {"loop_product_forward", big_to_json(r.unique_cycle->loop_product_forward)},
                           {"loop_product_backward", big_to_json(r.unique_cycle->loop_product_backward)}};
  } else {
    out["unique_cycle"] = nullptr;
  }
  out["structure_ok"] = r.structure_ok ? Json(*r.structure_ok) : Json(nullptr);
  if (r.failure_evidence) {
    FailureEvidence const& ev = *r.failure_evidence;
    Json e{{"kind", to_string(ev.kind)}};
    switch (ev.kind) {
      case EvidenceKind::UnbalancedCycle:
        e["cycle"] = path_to_json(ev.cycle, sp);
        break;
      case EvidenceKind::OffCycleHalfEdge:
        e["edge"] = sp.stable_name(ev.half_edge.edge);
        e["end"] = ev.half_edge.terminal ? "terminal" : "initial";
        e["label"] = ev.label;
        break;
      case EvidenceKind::TwoCycles:
        e["cycle"] = path_to_json(ev.cycle, sp);
        e["second_cycle"] = path_to_json(ev.second_cycle, sp);
        break;
    }
    out["failure_evidence"] = std::move(e);
  } else {
    out["failure_evidence"] = nullptr;
  }
  return out;
}

inline Json certificate_to_json(VUCertificate const& c, StandardPresentation const& sp) {
  Json checks = Json::array();
  for (auto const& ch : c.checks) checks.push_back({{"claim", ch.claim}, {"holds", ch.holds}});
  return {{"g", sp.format(sp.to_input(c.g))},
          {"h", sp.format(sp.to_input(c.h))},
          {"m", c.m},
          {"n", c.n},
          {"checks", std::move(checks)}};
}

inline std::string describe(BsReport const& r) {
  if (r.explicit_pair) return "BS(" + std::to_string(r.p) + ", " + std::to_string(r.q) + ") embeds";
  return "BS(q, " + std::to_string(r.ratio) + "q) embeds for some prime q";
}

inline Json bs_report_to_json(BsReport const& r) {
  if (r.explicit_pair) return {{"kind", "explicit"}, {"p", r.p}, {"q", r.q}, {"statement", describe(r)}};
  return {{"kind", "prime_existence"}, {"ratio", r.ratio}, {"statement", describe(r)}};
}

inline Json verdict_to_json(Verdict const& v, StandardPresentation const& sp) {
  GammaGraph gamma = build_gamma(sp);
  Json out;
  out["schema"] = kJsonSchema;
  out["verdict"] = v.residually_finite ? "residually_finite" : "not_residually_finite";
  out["lerf"] = v.lerf;
  Json comps = Json::array();
  for (auto const& c : v.components) comps.push_back(report_to_json(c, gamma, sp));
  out["components"] = std::move(comps);
  out["certificate"] = v.certificate ? certificate_to_json(*v.certificate, sp) : Json(nullptr);
  out["bs_report"] = v.bs_report ? bs_report_to_json(*v.bs_report) : Json(nullptr);
  return out;
}

/// Reads a certificate object, or the "certificate" member of a full verdict.
inline VUCertificate certificate_from_json(Json const& j, StandardPresentation const& sp) {
  Json const* c = &j;
  if (j.is_object() && j.contains("certificate")) c = &j.at("certificate");
  if (!c->is_object()) throw Error(ErrorKind::SyntaxError, "certificate must be a JSON object");
  try {
    VUCertificate out;
    out.g = sp.from_input(sp.parse(c->at("g").get<std::string>()));
    out.h = sp.from_input(sp.parse(c->at("h").get<std::string>()));
    out.m = c->at("m").get<long>();
    out.n = c->at("n").get<long>();
    return out;
  } catch (Json::exception const& e) {
    throw Error(ErrorKind::SyntaxError, std::string("malformed certificate: ") + e.what());
  }
}

}  // namespace gbsrf
