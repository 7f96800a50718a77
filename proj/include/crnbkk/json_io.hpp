#pragma once

#include <json.hpp>

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "crnbkk/bounds.hpp"
#include "crnbkk/crn.hpp"
#include "crnbkk/degree.hpp"
#include "crnbkk/matchpoly.hpp"
#include "crnbkk/poly.hpp"
#include "crnbkk/polytope.hpp"
#include "crnbkk/rational.hpp"

/// JSON encodings for everything the command-line tool prints. Rationals are
/// strings "p/q"; integers are numbers when they fit in 64 bits and decimal
/// strings otherwise.
namespace crnbkk::json_io {

using nlohmann::json;

inline constexpr const char* kToolVersion = "0.3.0";

inline json integer(const Integer& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

inline Integer parse_integer(const json& j) {
  if (j.is_number_integer()) return Integer(std::to_string(j.get<std::int64_t>()));
  if (j.is_string()) return Integer(j.get<std::string>());
  throw Error("expected an integer, got " + j.dump());
}

inline json rational(const Rational& q) { return q.get_str(); }

inline json points(const std::vector<Point>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(p);
  return a;
}

// ---------------------------------------------------------------------------
// Algebra

inline json polynomial(const Polynomial& p) {
  json terms = json::array();
  for (const auto& [m, c] : p.terms()) terms.push_back({m, rational(c)});
  return terms;
}

inline json system(const PolySystem& s) {
  json polys = json::array();
  for (const auto& p : s.polys) polys.push_back(polynomial(p));
  return {{"vars", s.var_names}, {"polys", polys}, {"tags", s.tags}};
}

inline json parameters(const ParameterAssignment& p) {
  json rates = json::object(), inits = json::object();
  for (const auto& [k, v] : p.rates) rates[k] = rational(v);
  for (const auto& [k, v] : p.init_conds) inits[k] = rational(v);
  return {{"seed", p.seed}, {"rates", rates}, {"initial_conditions", inits}};
}

// ---------------------------------------------------------------------------
// Polytopes

inline json halfspaces(const std::vector<Halfspace>& hs) {
  json a = json::array();
  for (const auto& h : hs) a.push_back({{"normal", h.normal}, {"offset", h.offset}});
  return a;
}

inline json polytope(const LatticePolytope& p) {
  return {{"dim", p.dim},
          {"ambient_dim", p.ambient_dim},
          {"points", points(p.points)},
          {"vertices", p.vertices},
          {"facets", halfspaces(p.facets)},
          {"affine_hull", halfspaces(p.equations)}};
}

inline json hpolytope(const HPolytope& h) {
  return {{"dim", h.dim}, {"facets", halfspaces(h.inequalities)}, {"affine_hull", halfspaces(h.equations)}};
}

inline json triangulation(const Triangulation& t) { return {{"order", t.order}, {"simplices", t.simplices}}; }

// ---------------------------------------------------------------------------
// Mixed volume certificates

inline json certificate(const MixedCellCertificate& c) {
  json supports = json::array();
  for (const auto& s : c.supports) supports.push_back({{"points", points(s.points)}, {"heights", s.heights}});
  json cells = json::array();
  for (const auto& cell : c.cells) cells.push_back({{"selection", cell.selection}, {"volume", integer(cell.volume)}});
  return {{"kind", c.kind == MixedCellCertificate::Kind::Mixed ? "mixed" : "simplicial"},
          {"dim", c.dim},
          {"seed", c.seed},
          {"attempt", c.attempt},
          {"supports", supports},
          {"cells", cells},
          {"total", integer(c.total)}};
}

/// Parses a certificate; structural problems become crnbkk::Error.
inline MixedCellCertificate parse_certificate(const json& j) {
  try {
    MixedCellCertificate c;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "mixed") c.kind = MixedCellCertificate::Kind::Mixed;
    else if (kind == "simplicial") c.kind = MixedCellCertificate::Kind::Simplicial;
    else throw Error("unknown certificate kind " + kind);
    c.dim = j.at("dim").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.attempt = j.at("attempt").get<int>();
    for (const auto& s : j.at("supports")) {
      LiftedSupport l;
      l.points = s.at("points").get<std::vector<Point>>();
      l.heights = s.at("heights").get<std::vector<std::int64_t>>();
      c.supports.push_back(std::move(l));
    }
    for (const auto& cell : j.at("cells")) {
      MixedCell m;
      m.selection = cell.at("selection").get<std::vector<std::vector<std::size_t>>>();
      m.volume = parse_integer(cell.at("volume"));
      c.cells.push_back(std::move(m));
    }
    c.total = parse_integer(j.at("total"));
    return c;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed certificate: ") + e.what());
  }
}

inline json certificate_check(const CertificateCheck& c) {
  json j{{"ok", c.ok}, {"total", integer(c.total)}, {"message", c.message}};
  j["bad_cell"] = c.bad_cell ? json(*c.bad_cell) : json(nullptr);
  return j;
}

// ---------------------------------------------------------------------------
// Reports

inline json chen(const ChenReport& r) {
  json faces = json::array();
  for (const auto& f : r.faces)
    faces.push_back({{"group", f.group},
                     {"points", points(f.points)},
                     {"dim", f.dim},
                     {"hits", f.hits},
                     {"condition", f.condition},
                     {"ok", f.ok}});
  json j{{"theorem", theorem_name(r.theorem)}, {"holds", r.holds}, {"faces", faces}, {"violation", r.violation}};
  j["witness"] = r.witness ? json(*r.witness) : json(nullptr);
  return j;
}

inline json degree(const DegreeReport& r) {
  json j{{"ok", r.ok},
         {"status", r.status},
         {"total", r.total},
         {"toric", r.toric},
         {"boundary", r.boundary},
         {"method", method_name(r.method)},
         {"parameters_seed", r.parameters_seed}};
  if (r.method == DegreeMethod::Groebner) {
    j["basis_size"] = r.basis_size;
    j["peak_digits"] = r.peak_digits;
  } else {
    json coeffs = json::array();
    for (const auto& c : r.eliminant.coeffs()) coeffs.push_back(rational(c));
    j["eliminant"] = coeffs;  // lowest degree first
    j["squarefree"] = r.squarefree;
  }
  return j;
}

inline json graph(const Multigraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges) edges.push_back({e.a, e.b, e.label});
  return {{"vertices", g.vertex_count}, {"edges", edges}};
}

inline json matching_check(const MatchingCheck& m) {
  return {{"n", m.n},
          {"graph", m.tilde ? "G~_n" : "G_n"},
          {"matchings", m.matchings},
          {"two_edge_matchings", m.two_edge},
          {"vertex_sets_equal", m.vertex_sets_equal},
          {"polytopes_equal", m.polytopes_equal},
          {"ok", m.ok()}};
}

/// The envelope every command prints.
inline json wrap(const std::string& command, std::uint64_t seed, std::int64_t elapsed_ms, json result) {
  return {{"tool_version", kToolVersion},
          {"seed", seed},
          {"command", command},
          {"elapsed_ms", elapsed_ms},
          {"result", std::move(result)}};
}

}  // namespace crnbkk::json_io
