#pragma once

// Command-line front end. Exit status: 0 success (or residually finite /
// valid), 1 negative answer (not residually finite / invalid), 2 error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gbsrf/britton.hpp"
#include "gbsrf/certify.hpp"
#include "gbsrf/complexes.hpp"
#include "gbsrf/presentation.hpp"
#include "gbsrf/serialize.hpp"

namespace gbsrf::cli {

struct Config {
  std::string subcommand;
  std::string input;
  std::string word;
  std::string certificate;
  bool json = false;
  long q = 0;
  long n = 0;
  long m = 0;
  bool check = false;
  std::optional<std::string> lift;
  std::size_t base = 0;
};

namespace detail {

inline std::string read_file(std::string const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void print_report(std::ostream& out, std::size_t index, ComponentReport const& r,
                         StandardPresentation const& sp) {
  out << "component " << index + 1 << ": vertices {";
  for (std::size_t i = 0; i < r.vertices.size(); ++i) {
    out << (i ? ", " : "") << sp.format(sp.class_word(r.vertices[i]));
  }
  out << "} edges {";
  for (std::size_t i = 0; i < r.edges.size(); ++i) out << (i ? ", " : "") << sp.stable_name(r.edges[i]);
  out << "} betti " << r.betti;
  if (r.clean) {
    out << ", clean, potential (";
    for (std::size_t i = 0; i < r.potential->size(); ++i) out << (i ? ", " : "") << (*r.potential)[i];
    out << ")\n";
    return;
  }
  out << ", not clean";
  if (r.unique_cycle) {
    out << ", loop-products " << r.unique_cycle->loop_product_forward << " and "
        << r.unique_cycle->loop_product_backward;
  }
  out << ", structure " << (*r.structure_ok ? "ok" : "fails");
  if (r.failure_evidence) out << " (" << to_string(r.failure_evidence->kind) << ")";
  out << '\n';
}

inline void print_checks(std::ostream& out, std::vector<CheckRecord> const& checks) {
  for (auto const& c : checks) out << "  [" << (c.holds ? "holds" : "fails") << "] " << c.claim << '\n';
}

inline int decide(Config const& cfg, std::ostream& out) {
  StandardPresentation sp = load_presentation(read_file(cfg.input));
  Verdict v = gbsrf::decide(sp);
  if (cfg.json) {
    out << verdict_to_json(v, sp).dump(2) << '\n';
    return v.residually_finite ? 0 : 1;
  }
  out << (v.residually_finite ? "residually finite" : "not residually finite") << '\n';
  out << "lerf: " << (v.lerf ? "yes" : "no") << '\n';
  for (std::size_t i = 0; i < v.components.size(); ++i) print_report(out, i, v.components[i], sp);
  if (v.certificate) {
    auto const& c = *v.certificate;
    out << "certificate: g = " << sp.format(sp.to_input(c.g)) << ", h = " << sp.format(sp.to_input(c.h))
        << ", m = " << c.m << ", n = " << c.n << '\n';
    print_checks(out, c.checks);
  }
  if (v.bs_report) out << "subgroup: " << describe(*v.bs_report) << '\n';
  return v.residually_finite ? 0 : 1;
}

inline int word_problem(Config const& cfg, std::ostream& out) {
  StandardPresentation sp = load_presentation(read_file(cfg.input));
  HnnWord w = sp.from_input(sp.parse(cfg.word));
  HnnWord r = britton_reduce(w, sp);
  out << (r.empty() ? "trivial" : "nontrivial") << '\n';
  out << "reduced: " << sp.format(sp.to_input(r)) << '\n';
  return 0;
}

inline int normalize_word(Config const& cfg, std::ostream& out) {
  StandardPresentation sp = load_presentation(read_file(cfg.input));
  HnnWord w = britton_reduce(sp.from_input(sp.parse(cfg.word)), sp);
  out << sp.format(sp.to_input(normalize_extremal(w, sp))) << '\n';
  return 0;
}

inline int verify(Config const& cfg, std::ostream& out) {
  StandardPresentation sp = load_presentation(read_file(cfg.input));
  Json j;
  try {
    j = Json::parse(read_file(cfg.certificate));
  } catch (Json::parse_error const& e) {
    throw Error(ErrorKind::SyntaxError, std::string("certificate is not valid JSON: ") + e.what());
  }
  VUCertificate cert = certificate_from_json(j, sp);
  bool ok = verify_certificate(cert, sp);
  out << (ok ? "valid" : "invalid") << '\n';
  print_checks(out, cert.checks);
  return ok ? 0 : 1;
}

inline int cover(Config const& cfg, std::ostream& out) {
  CMap f = bs_cover(cfg.q, cfg.n, cfg.m);
  if (cfg.check) {
    bool ok = is_covering(f);
    out << "covering: " << (ok ? "yes" : "no") << " (degree " << f.domain.zero_cells << ")\n";
    return ok ? 0 : 1;
  }
  StandardPresentation sp = bs1q_presentation(cfg.q);
  HnnWord w = sp.parse(*cfg.lift);
  LiftResult r = lift_path(f, w, cfg.base);
  out << "lift from " << cfg.base << " ends at " << r.end << " (" << (r.closed ? "closed" : "open") << ")\n";
  return 0;
}

}  // namespace detail

/// Parses argv and runs one subcommand.
inline int run(int argc, char const* const* argv, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Residual finiteness of graphs of free groups with cyclic edge groups", "gbsrf"};
  app.require_subcommand(1);

  auto* decide = app.add_subcommand("decide", "decide residual finiteness and LERF");
  decide->add_option("file", cfg.input, "presentation file")->required();
  decide->add_flag("--json", cfg.json, "print the verdict as JSON");

  auto* wp = app.add_subcommand("wp", "solve the word problem");
  wp->add_option("file", cfg.input, "presentation file")->required();
  wp->add_option("word", cfg.word, "word over the input generators")->required();

  auto* norm = app.add_subcommand("normalize", "normalize the extremal subwords of a word");
  norm->add_option("file", cfg.input, "presentation file")->required();
  norm->add_option("word", cfg.word, "word over the input generators")->required();

  auto* ver = app.add_subcommand("verify", "check a very-unbalanced certificate");
  ver->add_option("file", cfg.input, "presentation file")->required();
  ver->add_option("certificate", cfg.certificate, "certificate or verdict JSON")->required();

  auto* cov = app.add_subcommand("cover", "build the cover Y(n, m) of BS(1, q)");
  cov->add_option("--q", cfg.q, "q >= 2")->required();
  cov->add_option("--n", cfg.n, "cycle length, coprime to q")->required();
  cov->add_option("--m", cfg.m, "number of cycles")->required();
  auto* chk = cov->add_flag("--check", cfg.check, "run the link test");
  auto* lft = cov->add_option("--lift", cfg.lift, "lift a word over a, t");
  cov->add_option("--base", cfg.base, "base 0-cell for --lift");
  chk->excludes(lft);
  cov->callback([&] {
    if (!cfg.check && !cfg.lift) throw CLI::ValidationError("cover", "one of --check or --lift is required");
  });

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    out << app.help();
    return 0;
  } catch (CLI::ParseError const& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  std::string where = cfg.input.empty() ? std::string() : cfg.input + ": ";
  try {
    if (decide->parsed()) return detail::decide(cfg, out);
    if (wp->parsed()) return detail::word_problem(cfg, out);
    if (norm->parsed()) return detail::normalize_word(cfg, out);
    if (ver->parsed()) return detail::verify(cfg, out);
    if (cov->parsed()) return detail::cover(cfg, out);
  } catch (Error const& e) {
    err << "error: " << where << e.what() << '\n';
    return 2;
  } catch (std::exception const& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace gbsrf::cli
