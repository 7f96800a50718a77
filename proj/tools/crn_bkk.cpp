// crn-bkk: steady-state bounds for chemical reaction networks.
//
// Human-readable output goes to stderr, JSON to stdout (or --json PATH).

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "crnbkk/bounds.hpp"
#include "crnbkk/degree.hpp"
#include "crnbkk/json_io.hpp"
#include "crnbkk/matchpoly.hpp"
#include "crnbkk/polytope.hpp"

using namespace crnbkk;
using json_io::json;

namespace {

enum Exit { kOk = 0, kFail = 1, kUsage = 2, kGuard = 3 };

struct UsageError : Error {
  using Error::Error;
};

struct Options {
  std::string family;
  std::string file;
  int n = -1;
  std::uint64_t seed = 0;
  std::string json_out;
  bool no_timing = false;
  // command specific
  bool oracle = false;
  bool no_oracle = false;
  std::string theorem = "all";
  std::string method = "auto";
  int max_cd = 10, max_e = 5, max_pc = 4;
};

struct Outcome {
  json result;
  bool pass = true;
};

/// Largest n per family for each kind of computation.
struct Limits {
  int cd, e, pc;
  int of(Family f) const { return f == Family::CellDeath ? cd : f == Family::Edelstein ? e : pc; }
};
constexpr Limits kMvLimits{12, 6, 4};
constexpr Limits kSsdLimits{12, 6, 2};
constexpr Limits kOracleLimits{12, 5, 2};

void guard(Family f, int n, const Limits& lim, const std::string& what) {
  if (f == Family::None) return;
  if (n > lim.of(f))
    throw GuardError(what + " for " + family_name(f) + " limited to n <= " + std::to_string(lim.of(f)));
}

// ---------------------------------------------------------------------------
// Inputs

struct Input {
  Family family = Family::None;
  int n = 0;
  ReactionNetwork net;
  ParameterAssignment params;
  PolySystem system;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Family require_family(const Options& o) {
  if (o.family.empty()) throw UsageError("--family is required");
  if (o.n < 0) throw UsageError("--n is required with --family");
  try {
    return parse_family(o.family);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

Input load(const Options& o) {
  if (o.family.empty() == o.file.empty()) throw UsageError("give exactly one of --family or --file");
  Input in;
  if (!o.file.empty()) {
    in.net = parse_network(read_file(o.file));
  } else {
    in.family = require_family(o);
    in.n = o.n;
    in.net = generate(in.family, o.n);
  }
  in.params = sample_parameters(in.net, o.seed);
  in.system = drop_dependent(mass_action_system(in.net, in.params), in.family);
  return in;
}

std::vector<Point> union_points(const PolySystem& sys) {
  std::set<Point> all;
  for (const auto& s : system_supports(sys)) all.insert(s.begin(), s.end());
  return {all.begin(), all.end()};
}

std::string label(const Input& in) {
  if (in.family == Family::None) return "file";
  return family_name(in.family) + "_" + std::to_string(in.n);
}

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

// ---------------------------------------------------------------------------
// Commands

Outcome cmd_generate(const Options& o) {
  const auto f = require_family(o);
  const auto net = generate(f, o.n);
  const auto text = serialize_network(net);
  std::cerr << text;
  json species = json::array();
  for (const auto& s : net.species) species.push_back(s.name);
  return {{{"family", family_name(f)},
           {"n", o.n},
           {"species", species},
           {"complexes", net.complexes.size()},
           {"reactions", net.reactions.size()},
           {"network", text}}};
}

Outcome cmd_system(const Options& o) {
  const auto in = load(o);
  for (std::size_t i = 0; i < in.system.size(); ++i)
    std::cerr << in.system.tags[i] << " = " << to_string(in.system.polys[i], in.system.var_names) << "\n";
  return {{{"input", label(in)}, {"system", json_io::system(in.system)}, {"parameters", json_io::parameters(in.params)}}};
}

Outcome cmd_bezout(const Options& o) {
  const auto in = load(o);
  const auto b = bezout_bound(in.system);
  Outcome out{{{"input", label(in)}, {"bezout", json_io::integer(b)}}};
  std::cerr << label(in) << " bezout " << b;
  if (in.family != Family::None) {
    const auto want = family_formulas(in.family, in.n).bezout;
    out.pass = b == want;
    out.result["expected"] = json_io::integer(want);
    std::cerr << " expected " << want << " " << verdict(out.pass);
  }
  std::cerr << "\n";
  out.result["pass"] = out.pass;
  return out;
}

Outcome cmd_mv(const Options& o) {
  const auto in = load(o);
  guard(in.family, in.n, kMvLimits, "mixed volume");
  if (o.oracle) guard(in.family, in.n, kOracleLimits, "inclusion-exclusion oracle");
  const auto supports = square_supports(in.system, o.seed);
  const auto mv = mixed_volume(supports, o.seed);
  const auto check = verify_certificate(mv.certificate);
  Outcome out{{{"input", label(in)},
               {"mixed_volume", json_io::integer(mv.value)},
               {"certificate", json_io::certificate(mv.certificate)},
               {"certificate_check", json_io::certificate_check(check)}}};
  out.pass = check.ok;
  std::cerr << label(in) << " mixed volume " << mv.value << " (" << mv.certificate.cells.size() << " cells, certificate "
            << verdict(check.ok) << ")";
  if (o.oracle) {
    const auto ie = mixed_volume_oracle(supports);
    out.result["oracle"] = json_io::integer(ie);
    out.pass = out.pass && ie == mv.value;
    std::cerr << " oracle " << ie;
  }
  if (in.family != Family::None) {
    const auto want = family_formulas(in.family, in.n).mv;
    out.result["expected"] = json_io::integer(want);
    out.pass = out.pass && want == mv.value;
    std::cerr << " expected " << want;
  }
  std::cerr << " " << verdict(out.pass) << "\n";
  out.result["pass"] = out.pass;
  return out;
}

Outcome cmd_nvolume(const Options& o) {
  const auto in = load(o);
  guard(in.family, in.n, kMvLimits, "normalized volume");
  const auto hull = convex_hull(union_points(in.system));
  const auto vol = relative_normalized_volume(hull);
  Outcome out{{{"input", label(in)}, {"dim", hull.dim}, {"normalized_volume", json_io::integer(vol)}}};
  std::cerr << label(in) << " Newton polytope of the union: dim " << hull.dim << ", normalized volume " << vol;
  if (in.family == Family::Phosphorylation) {
    // Every polynomial of the randomized system has Newton polytope Q_n.
    const auto want = family_formulas(in.family, in.n).mv;
    out.result["expected"] = json_io::integer(want);
    out.pass = vol == want;
    std::cerr << " expected " << want << " " << verdict(out.pass);
  }
  std::cerr << "\n";
  out.result["pass"] = out.pass;
  return out;
}

Outcome cmd_triangulate(const Options& o) {
  const auto in = load(o);
  guard(in.family, in.n, kMvLimits, "triangulation");
  std::vector<Point> pts;
  Triangulation t;
  if (in.family == Family::Phosphorylation) {
    std::tie(pts, t) = qn_triangulation(in.n);
  } else {
    pts = union_points(in.system);
    t = placing_triangulation(pts);
  }
  const auto uni = is_unimodular(pts, t);
  Outcome out{{{"input", label(in)},
               {"points", json_io::points(pts)},
               {"triangulation", json_io::triangulation(t)},
               {"simplices", t.simplices.size()},
               {"unimodular", uni.unimodular}}};
  if (uni.first_bad) out.result["first_non_unimodular"] = *uni.first_bad;
  std::cerr << label(in) << " placing triangulation: " << t.simplices.size() << " simplices, "
            << (uni.unimodular ? "unimodular" : "not unimodular");
  if (in.family == Family::Phosphorylation) {
    const auto want = family_formulas(in.family, in.n).mv;
    out.result["expected_simplices"] = json_io::integer(want);
    out.pass = uni.unimodular && Integer(static_cast<unsigned long>(t.simplices.size())) == want;
    std::cerr << ", expected " << want << " unimodular simplices " << verdict(out.pass);
  }
  std::cerr << "\n";
  out.result["pass"] = out.pass;
  return out;
}

Outcome cmd_hrep(const Options& o) {
  const auto in = load(o);
  guard(in.family, in.n, kMvLimits, "H-representation");
  const auto pts = in.family == Family::Phosphorylation ? vn_points(in.n) : union_points(in.system);
  const auto hull = convex_hull(pts);
  Outcome out{{{"input", label(in)}, {"polytope", json_io::polytope(hull)}}};
  std::cerr << label(in) << " hull: dim " << hull.dim << ", " << hull.vertices.size() << " vertices, "
            << hull.facets.size() << " facets";
  if (in.family == Family::Phosphorylation && in.n >= 2) {
    const auto h = hrep_qn(in.n);
    out.pass = facet_set(hull) == facet_set(h);
    out.result["stated"] = json_io::hpolytope(h);
    out.result["matches_stated"] = out.pass;
    std::cerr << "; stated inequalities " << verdict(out.pass);
  }
  std::cerr << "\n";
  out.result["pass"] = out.pass;
  return out;
}

Outcome cmd_chen(const Options& o) {
  const auto in = load(o);
  guard(in.family, in.n, kMvLimits, "Chen checks");
  const auto supports = square_supports(in.system, o.seed);
  Outcome out{{{"input", label(in)}}};
  json reports = json::array();
  auto run = [&](ChenTheorem t) {
    const auto r = t == ChenTheorem::Thm1 ? check_chen_thm1(supports) : check_chen_thm2(supports);
    std::cerr << label(in) << " " << theorem_name(t) << ": " << (r.holds ? "holds" : "does not hold");
    if (r.witness) std::cerr << " (witness face " << *r.witness << ": " << r.violation << ")";
    std::cerr << "\n";
    reports.push_back(json_io::chen(r));
  };
  if (o.theorem == "all" || o.theorem == "thm1") run(ChenTheorem::Thm1);
  if (o.theorem == "all" || o.theorem == "thm2") run(ChenTheorem::Thm2);
  if (reports.empty()) throw UsageError("--theorem must be thm1, thm2 or all");
  out.result["reports"] = reports;
  return out;
}

Outcome cmd_ssd(const Options& o) {
  const auto in = load(o);
  guard(in.family, in.n, kSsdLimits, "steady-state degree");
  std::string method = o.method;
  if (method == "auto") method = in.family == Family::CellDeath || in.family == Family::Edelstein ? "elimination" : "groebner";
  DegreeReport r;
  if (method == "elimination") {
    if (in.family == Family::CellDeath) r = ssd_cd(in.n, in.params);
    else if (in.family == Family::Edelstein) r = ssd_edelstein(in.n, in.params);
    else throw UsageError("elimination is available for the cd and e families only");
  } else if (method == "groebner") {
    r = ssd_groebner(in.system, o.seed);
  } else {
    throw UsageError("--method must be auto, elimination or groebner");
  }
  Outcome out{{{"input", label(in)}, {"report", json_io::degree(r)}}};
  out.pass = r.ok;
  std::cerr << label(in) << " steady-state degree (" << method_name(r.method) << "): ";
  if (r.ok) std::cerr << "total " << r.total << ", toric " << r.toric << ", boundary " << r.boundary;
  else std::cerr << r.status;
  if (r.ok && in.family != Family::None) {
    const auto f = family_formulas(in.family, in.n);
    const bool match = Integer(r.total) == f.ssd;
    out.result["expected"] = json_io::integer(f.ssd);
    out.result["conjectured"] = f.ssd_conjectured;
    out.result["matches_expected"] = match;
    // A conjectured value is evidence, so a mismatch is flagged but not a failure.
    if (!f.ssd_conjectured) out.pass = match;
    std::cerr << "; expected " << f.ssd << (f.ssd_conjectured ? " (conjectured) " : " ")
              << (match ? "PASS" : f.ssd_conjectured ? "MISMATCH" : "FAIL");
  }
  std::cerr << "\n";
  out.result["pass"] = out.pass;
  return out;
}

Outcome cmd_matching(const Options& o) {
  if (o.n < 1) throw UsageError("--n >= 1 is required");
  guard(Family::Phosphorylation, o.n, kMvLimits, "matching check");
  Outcome out;
  json checks = json::array();
  for (bool tilde : {false, true}) {
    const auto c = check_matching_polytope(o.n, tilde);
    auto j = json_io::matching_check(c);
    j["graph_json"] = json_io::graph(tilde ? build_gn_tilde(o.n) : build_gn(o.n));
    checks.push_back(j);
    out.pass = out.pass && c.ok();
    std::cerr << (tilde ? "G~_" : "G_") << o.n << ": " << c.matchings << " matchings, " << c.two_edge
              << " with two edges; P_MA = " << (tilde ? "K_" : "Q_") << o.n << " " << verdict(c.ok()) << "\n";
  }
  out.result = {{"n", o.n}, {"checks", checks}, {"pass", out.pass}};
  return out;
}

// One row of the closed-form table.
json table_row(Family f, int n, std::uint64_t seed, bool oracle, bool& pass) {
  const auto want = family_formulas(f, n);
  const auto net = generate(f, n);
  const auto params = sample_parameters(net, seed);
  const auto sys = drop_dependent(mass_action_system(net, params), f);
  json row{{"family", family_name(f)}, {"n", n}};

  const auto b = bezout_bound(sys);
  const bool b_ok = b == want.bezout;
  row["bezout"] = {{"computed", json_io::integer(b)}, {"expected", json_io::integer(want.bezout)}, {"pass", b_ok}};

  const auto supports = square_supports(sys, seed);
  const auto mv = mixed_volume(supports, seed);
  bool mv_ok = mv.value == want.mv && verify_certificate(mv.certificate).ok;
  row["mv"] = {{"computed", json_io::integer(mv.value)}, {"expected", json_io::integer(want.mv)}};
  if (oracle && n <= kOracleLimits.of(f)) {
    const auto ie = mixed_volume_oracle(supports);
    row["mv"]["oracle"] = json_io::integer(ie);
    mv_ok = mv_ok && ie == mv.value;
  } else {
    row["mv"]["oracle"] = nullptr;
  }
  row["mv"]["pass"] = mv_ok;

  bool ssd_ok = true;
  if (n <= kSsdLimits.of(f)) {
    DegreeReport r = f == Family::CellDeath ? ssd_cd(n, params)
                     : f == Family::Edelstein ? ssd_edelstein(n, params)
                                              : ssd_groebner(sys, seed);
    const bool match = r.ok && Integer(r.total) == want.ssd;
    row["ssd"] = {{"computed", r.total},
                  {"toric", r.toric},
                  {"method", method_name(r.method)},
                  {"expected", json_io::integer(want.ssd)},
                  {"conjectured", want.ssd_conjectured},
                  {"matches_expected", match}};
    ssd_ok = r.ok && (match || want.ssd_conjectured);
  } else {
    row["ssd"] = {{"computed", nullptr}, {"expected", json_io::integer(want.ssd)}, {"conjectured", want.ssd_conjectured}};
  }
  row["ssd"]["pass"] = ssd_ok;
  pass = b_ok && mv_ok && ssd_ok;
  row["pass"] = pass;
  return row;
}

Outcome cmd_table1(const Options& o) {
  if (o.max_cd > kMvLimits.cd || o.max_e > kMvLimits.e || o.max_pc > kMvLimits.pc)
    throw GuardError("table1 ranges limited to cd <= 12, e <= 6, pc <= 4");
  struct Job {
    Family f;
    int n;
    std::future<std::pair<json, bool>> result;
  };
  std::vector<Job> jobs;
  auto add = [&](Family f, int lo, int hi) {
    for (int n = lo; n <= hi; ++n)
      jobs.push_back({f, n, std::async(std::launch::async, [f, n, &o] {
                        bool pass = false;
                        auto row = table_row(f, n, o.seed, !o.no_oracle, pass);
                        return std::make_pair(std::move(row), pass);
                      })});
  };
  add(Family::CellDeath, 3, o.max_cd);
  add(Family::Edelstein, 1, o.max_e);
  add(Family::Phosphorylation, 1, o.max_pc);

  Outcome out;
  json rows = json::array();
  auto cell = [](const json& c) {
    std::string v = c["computed"].is_null() ? "-" : c["computed"].dump();
    if (v.front() == '"') v = v.substr(1, v.size() - 2);
    return v + (c["pass"].get<bool>() ? "" : "!");
  };
  std::cerr << std::left << std::setw(8) << "family" << std::setw(4) << "n" << std::setw(14) << "bezout"
            << std::setw(8) << "mv" << std::setw(8) << "oracle" << std::setw(6) << "ssd"
            << "result\n";
  for (auto& j : jobs) {
    auto [row, pass] = j.result.get();
    out.pass = out.pass && pass;
    const auto& oracle = row["mv"]["oracle"];
    std::cerr << std::left << std::setw(8) << family_name(j.f) << std::setw(4) << j.n << std::setw(14)
              << cell(row["bezout"]) << std::setw(8) << cell(row["mv"]) << std::setw(8)
              << (oracle.is_null() ? std::string("-") : oracle.dump()) << std::setw(6) << cell(row["ssd"])
              << verdict(pass) << "\n";
    rows.push_back(std::move(row));
  }
  out.result = {{"rows", rows}, {"pass", out.pass}};
  return out;
}

Outcome cmd_verify(const Options& o) {
  if (o.file.empty()) throw UsageError("--file CERTIFICATE is required");
  json j;
  try {
    j = json::parse(read_file(o.file));
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed JSON: ") + e.what());
  }
  // Accept either a bare certificate or the output of `crn-bkk mv`.
  if (j.contains("result")) j = j["result"];
  if (j.contains("certificate")) j = j["certificate"];
  MixedCellCertificate cert;
  try {
    cert = json_io::parse_certificate(j);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const auto check = verify_certificate(cert);
  std::cerr << "certificate: " << cert.cells.size() << " cells, total " << check.total << " " << verdict(check.ok);
  if (!check.ok) std::cerr << " (" << check.message << ")";
  std::cerr << "\n";
  return {json_io::certificate_check(check), check.ok};
}

void common_options(CLI::App* sub, Options& o, bool input = true) {
  if (input) {
    sub->add_option("--family", o.family, "Network family: cd, e or pc");
    sub->add_option("--n", o.n, "Family parameter");
  }
  sub->add_option("--file", o.file, input ? "Network file in the text format" : "Input file");
  sub->add_option("--seed", o.seed, "Seed for parameters, liftings and randomization");
  sub->add_option("--json", o.json_out, "Write JSON here instead of stdout");
  sub->add_flag("--no-timing", o.no_timing, "Report elapsed_ms as 0 for byte-stable output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bezout, mixed-volume and steady-state degree bounds for reaction networks", "crn-bkk"};
  app.require_subcommand(1);
  Options o;
  std::map<std::string, std::function<Outcome(const Options&)>> commands{
      {"generate", cmd_generate}, {"system", cmd_system},   {"bezout", cmd_bezout},
      {"mv", cmd_mv},             {"nvolume", cmd_nvolume}, {"triangulate", cmd_triangulate},
      {"hrep", cmd_hrep},         {"chen", cmd_chen},       {"ssd", cmd_ssd},
      {"matching-check", cmd_matching}, {"table1", cmd_table1}, {"verify-certificate", cmd_verify}};
  std::map<std::string, std::string> help{
      {"generate", "Print a family network"},
      {"system", "Reduced steady-state system with sampled parameters"},
      {"bezout", "Bezout bound"},
      {"mv", "Mixed volume with a replayable certificate"},
      {"nvolume", "Normalized volume of the Newton polytope"},
      {"triangulate", "Placing triangulation and unimodularity"},
      {"hrep", "Facets of the Newton polytope"},
      {"chen", "Check the mixed-volume positivity theorems"},
      {"ssd", "Steady-state degree"},
      {"matching-check", "Compare matching polytopes with the phosphorylation polytopes"},
      {"table1", "Closed forms for all three families"},
      {"verify-certificate", "Replay a mixed-volume certificate"}};
  for (const auto& [name, fn] : commands) {
    auto* sub = app.add_subcommand(name, help[name]);
    common_options(sub, o, name != "verify-certificate" && name != "table1");
    if (name == "mv") sub->add_flag("--oracle", o.oracle, "Also run the inclusion-exclusion oracle");
    if (name == "chen") sub->add_option("--theorem", o.theorem, "thm1, thm2 or all");
    if (name == "ssd") sub->add_option("--method", o.method, "auto, elimination or groebner");
    if (name == "table1") {
      sub->add_option("--max-cd", o.max_cd, "Largest cd instance");
      sub->add_option("--max-e", o.max_e, "Largest e instance");
      sub->add_option("--max-pc", o.max_pc, "Largest pc instance");
      sub->add_flag("--no-oracle", o.no_oracle, "Skip the inclusion-exclusion oracle");
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = commands.at(name)(o);
  } catch (const GuardError& e) {
    std::cerr << "crn-bkk: " << e.what() << "\n";
    return kGuard;
  } catch (const UsageError& e) {
    std::cerr << "crn-bkk: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "crn-bkk: " << e.what() << "\n";
    return kUsage;
  }
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  const auto doc = json_io::wrap(name, o.seed, o.no_timing ? 0 : ms, std::move(out.result));
  if (o.json_out.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::ofstream f(o.json_out);
    if (!f) {
      std::cerr << "crn-bkk: cannot write " << o.json_out << "\n";
      return kUsage;
    }
    f << doc.dump(2) << "\n";
  }
  return out.pass ? kOk : kFail;
}
