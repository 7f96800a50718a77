// Acceptance run: one PASS/FAIL line per criterion on stdout, details on
// stderr. Exit status is the number of failing criteria.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "crnbkk/bounds.hpp"
#include "crnbkk/degree.hpp"
#include "crnbkk/matchpoly.hpp"
#include "crnbkk/polytope.hpp"

using namespace crnbkk;

namespace {

/// Collects mismatches; a criterion passes when nothing was recorded.
class Check {
 public:
  template <class A, class B>
  void eq(const A& got, const B& want, const std::string& what) {
    if (got == want) return;
    std::ostringstream os;
    os << what << ": got " << got << ", want " << want;
    fail(os.str());
  }
  void that(bool ok, const std::string& what) {
    if (!ok) fail(what);
  }
  void fail(const std::string& msg) {
    if (problems_.size() < 8) problems_.push_back(msg);
    ++count_;
  }
  void note(const std::string& msg) { notes_.push_back(msg); }

  bool ok() const { return count_ == 0; }
  const std::vector<std::string>& problems() const { return problems_; }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  std::vector<std::string> problems_, notes_;
  std::size_t count_ = 0;
};

Integer pow2(int e) {
  Integer z;
  mpz_ui_pow_ui(z.get_mpz_t(), 2, static_cast<unsigned long>(e));
  return z;
}

Integer pc_mv(int n) { return Integer((n + 1) * (n + 4) / 2 - 1); }

std::string tag(const char* fam, int n) { return std::string(fam) + "_" + std::to_string(n); }

std::vector<Point> sorted(std::vector<Point> v) {
  std::sort(v.begin(), v.end());
  return v;
}

HPolytope hrep_of(const LatticePolytope& p) { return {p.ambient_dim, p.facets, p.equations}; }

Point unit(std::size_t d, std::size_t i) {
  Point p(d, 0);
  p[i] = 1;
  return p;
}

std::vector<Support> random_system(Rng& rng, std::size_t d) {
  std::vector<Support> out(d);
  for (auto& s : out) {
    const auto count = rng.uniform(2, 5);
    for (int k = 0; k < count; ++k) {
      Point p(d);
      for (auto& x : p) x = rng.uniform(0, 2);
      s.push_back(p);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

void table1(Check& c) {
  for (int n = 3; n <= 10; ++n) {
    const auto params = sample_parameters(generate_cd(n), 1);
    const auto sys = drop_dependent(mass_action_system(generate_cd(n), params), Family::CellDeath);
    c.eq(bezout_bound(sys), Integer(n), tag("cd", n) + " bezout");
    c.eq(mixed_volume(system_supports(sys)).value, Integer(n - 2), tag("cd", n) + " mv");
    c.eq(ssd_cd(n, params).total, n, tag("cd", n) + " ssd");
  }
  for (int n = 1; n <= 5; ++n) {
    const auto params = sample_parameters(generate_edelstein(n), 1);
    const auto sys = drop_dependent(mass_action_system(generate_edelstein(n), params), Family::Edelstein);
    c.eq(bezout_bound(sys), pow2(n + 1), tag("e", n) + " bezout");
    c.eq(mixed_volume(system_supports(sys)).value, Integer(3), tag("e", n) + " mv");
    c.eq(ssd_edelstein(n, params).total, 3, tag("e", n) + " ssd");
  }
  for (int n = 1; n <= 4; ++n) {
    const auto sys = family_system(Family::Phosphorylation, n, 1);
    c.eq(bezout_bound(sys), pow2(3 * n + 1), tag("pc", n) + " bezout");
    c.eq(mixed_volume(square_supports(sys, 1), 1).value, pc_mv(n), tag("pc", n) + " mv");
  }
}

void cell_death_four(Check& c) {
  const auto net = generate_cd(4);
  const auto rates = symbolic_species_rates(net);
  auto k = [](int a, int b) { return rate_label(static_cast<std::size_t>(a), static_cast<std::size_t>(b)); };
  // xdot_Y = -(k01 + 2 k02 + 3 k03) Y^3 Z - (k12 + 2 k13) Y^2 Z^2 - k23 Y Z^3
  SymbolicPolynomial ydot;
  ydot[{3, 1}] = {{k(0, 1), -1}, {k(0, 2), -2}, {k(0, 3), -3}};
  ydot[{2, 2}] = {{k(1, 2), -1}, {k(1, 3), -2}};
  ydot[{1, 3}] = {{k(2, 3), -1}};
  c.that(rates[0] == ydot, "xdot_Y differs from the printed system");
  SymbolicPolynomial zdot = ydot;
  for (auto& [m, labels] : zdot)
    for (auto& [l, v] : labels) v = -v;
  c.that(rates[1] == zdot, "xdot_Z is not -xdot_Y");

  const auto params = sample_parameters(net, 4);
  const auto sys = drop_dependent(mass_action_system(net, params), Family::CellDeath);
  Polynomial f1(2);
  f1.add_term({1, 0}, 1);
  f1.add_term({0, 1}, 1);
  f1.add_term({0, 0}, -(params.init_conds.at("Y") + params.init_conds.at("Z")));
  c.that(sys.by_tag("f_1") == f1, "f_1 is not x_Y + x_Z - c_Y - c_Z");
  c.eq(mixed_volume(system_supports(sys)).value, Integer(2), "mv");
  const auto r = ssd_cd(4, params);
  c.eq(r.total, 4, "ssd total");
  c.eq(r.boundary, 2, "boundary solutions");
}

void edelstein_one(Check& c) {
  const auto params = sample_parameters(generate_edelstein(1), 2);
  const auto sys = drop_dependent(mass_action_system(generate_edelstein(1), params), Family::Edelstein);
  const auto supports = system_supports(sys);
  const std::vector<Support> printed{{{0, 0, 0}, {0, 1, 0}, {0, 0, 1}},
                                     {{2, 0, 0}, {1, 1, 0}, {1, 0, 0}, {0, 0, 1}},
                                     {{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}};
  c.eq(supports.size(), std::size_t{3}, "support count");
  for (std::size_t i = 0; i < printed.size() && i < supports.size(); ++i)
    c.that(supports[i] == sorted(printed[i]), "support " + std::to_string(i) + " differs from the printed one");
  c.that(check_chen_thm2(supports).holds, "theorem 2 does not hold");
  c.eq(mixed_volume(supports).value, Integer(3), "mv");
  std::vector<Point> all;
  for (const auto& s : supports) all.insert(all.end(), s.begin(), s.end());
  c.eq(euclidean_volume(convex_hull(all)) * 6, Rational(3), "3! vol(Q)");
  const auto r = ssd_edelstein(1, params);
  c.eq(r.eliminant.degree(), 3, "eliminant degree in x_A");
  c.eq(r.total, 3, "ssd total");
}

void phosphorylation_one(Check& c) {
  const auto sys = family_system(Family::Phosphorylation, 1, 3);
  for (const auto& s : square_supports(sys, 3)) c.that(s == sorted(vn_points(1)), "randomized support differs from V_1");

  const auto k1 = kn_points(1);
  const auto t = placing_triangulation(k1, tn_order(1));
  // sigma_1..sigma_4 over v_0..v_4 (indices 0..4), v_12 (5) and v_34 (6).
  const std::vector<std::vector<std::size_t>> sigma{{0, 1, 2, 3, 4}, {1, 2, 3, 4, 5}, {1, 3, 4, 5, 6}, {2, 3, 4, 5, 6}};
  c.that(t.simplices == sigma, "placing triangulation of K_1 differs");

  const auto [pts, lifted] = qn_triangulation(1);
  const auto base = embed(k1, 6, kn_coordinates(1));
  std::set<std::vector<Point>> want, got;
  for (const auto& s : sigma) {
    std::vector<Point> v;
    for (auto i : s) v.push_back(base[i]);
    v.push_back(unit(6, pc_x(1)));
    v.push_back(unit(6, pc_y(1)));
    want.insert(sorted(v));
  }
  for (const auto& s : lifted.simplices) {
    std::vector<Point> v;
    for (auto i : s) v.push_back(pts[i]);
    got.insert(sorted(v));
  }
  c.that(got == want, "cone-lifted simplices s_1..s_4 differ");
  c.eq(mixed_volume(square_supports(sys, 3), 3).value, Integer(4), "mv");
}

void h_representation(Check& c) {
  for (int n = 2; n <= 4; ++n) {
    const auto h = hrep_qn(n);
    const auto verts = sorted(vertices_from_hrep(h));
    c.that(verts == sorted(vn_points(n)), tag("Q", n) + " vertices of the inequalities differ from V_n");
    c.eq(verts.size(), static_cast<std::size_t>(5 * n + 4), tag("Q", n) + " vertex count");
    c.eq(h.inequalities.size(), static_cast<std::size_t>(3 * n + 7), tag("Q", n) + " inequality count");
    const auto hull = convex_hull(vn_points(n));
    c.eq(hull.facets.size(), static_cast<std::size_t>(3 * n + 7), tag("Q", n) + " facet count of the hull");
    c.that(facet_set(hull) == facet_set(h), tag("Q", n) + " hull facets differ from the inequalities");
  }
}

void triangulation(Check& c) {
  for (int n = 2; n <= 4; ++n) {
    const auto kn = kn_points(n);
    const auto t = placing_triangulation(kn, tn_order(n));
    c.that(is_unimodular(kn, t).unimodular, tag("T", n) + " not unimodular");
    c.eq(Integer(static_cast<long>(t.simplices.size())), pc_mv(n), tag("T", n) + " simplex count");

    const auto [pts, lifted] = qn_triangulation(n);
    c.that(is_unimodular(pts, lifted).unimodular, tag("lifted T", n) + " not unimodular");
    c.eq(Integer(static_cast<long>(lifted.simplices.size())), pc_mv(n), tag("lifted T", n) + " simplex count");
    Rational sum = 0;
    const Rational fact(factorial(pts[0].size()));
    for (const auto& s : lifted.simplices) sum += Rational(simplex_determinant(pts, s)) / fact;
    c.eq(sum, euclidean_volume(convex_hull(vn_points(n))), tag("Q", n) + " simplex volumes vs euclidean volume");
  }
}

void matching(Check& c) {
  for (int n = 1; n <= 4; ++n)
    for (bool tilde : {false, true}) {
      const auto r = check_matching_polytope(n, tilde);
      c.that(r.vertex_sets_equal && r.polytopes_equal,
             std::string(tilde ? "P_MA(G~_" : "P_MA(G_") + std::to_string(n) + ") differs");
    }
}

void conjecture(Check& c) {
  for (int n = 1; n <= 2; ++n) {
    std::vector<DegreeReport> reports;
    for (std::uint64_t seed : {1u, 2u}) {
      const auto sys = family_system(Family::Phosphorylation, n, seed);
      const auto r = ssd_groebner(sys, seed);
      c.that(r.ok, tag("pc", n) + " groebner: " + r.status);
      if (!r.ok) continue;
      c.that(Integer(r.toric) <= mixed_volume(square_supports(sys, seed), seed).value, tag("pc", n) + " toric > mv");
      c.that(Integer(r.total) <= bezout_bound(sys), tag("pc", n) + " total > bezout");
      reports.push_back(r);
    }
    if (reports.size() == 2) {
      c.that(reports[0].total == reports[1].total && reports[0].toric == reports[1].toric,
             tag("pc", n) + " seeds disagree");
      const bool match = reports[0].total == 2 * n + 1;
      c.note(tag("pc", n) + " ssd " + std::to_string(reports[0].total) + " (toric " +
             std::to_string(reports[0].toric) + "), conjectured " + std::to_string(2 * n + 1) +
             (match ? "" : " MISMATCH"));
    }
  }
  // The inequalities on every other instance Groebner can solve.
  for (auto [f, lo, hi] : {std::tuple{Family::CellDeath, 3, 8}, std::tuple{Family::Edelstein, 1, 4}})
    for (int n = lo; n <= hi; ++n) {
      const auto sys = family_system(f, n, 1);
      const auto r = ssd_groebner(sys, 1);
      if (!r.ok) continue;
      c.that(Integer(r.toric) <= mixed_volume(square_supports(sys, 1), 1).value, tag(family_name(f).c_str(), n) + " toric > mv");
      c.that(Integer(r.total) <= bezout_bound(sys), tag(family_name(f).c_str(), n) + " total > bezout");
    }
}

void oracle_equivalence(Check& c) {
  auto compare = [&](const std::vector<Support>& s, const std::string& what) {
    c.eq(mixed_volume(s).value, mixed_volume_oracle(s), what);
  };
  for (int n = 3; n <= 12; ++n) compare(system_supports(family_system(Family::CellDeath, n, 1)), tag("cd", n));
  // E_n lives in dimension n + 2 and PC_n in 3n + 3.
  for (int n = 1; n <= 7; ++n) compare(system_supports(family_system(Family::Edelstein, n, 1)), tag("e", n));
  for (int n = 1; n <= 2; ++n) compare(square_supports(family_system(Family::Phosphorylation, n, 1), 1), tag("pc", n));
  Rng rng(2024);
  for (int i = 0; i < 50; ++i) {
    const auto d = static_cast<std::size_t>(rng.uniform(2, 4));
    compare(random_system(rng, d), "random system " + std::to_string(i));
  }
}

void properties(Check& c) {
  // V/H duality on family polytopes and random 0/1 polytopes.
  std::vector<std::pair<std::string, std::vector<Point>>> polys;
  for (int n = 1; n <= 4; ++n) {
    polys.emplace_back(tag("Q", n), vn_points(n));
    polys.emplace_back(tag("K", n), kn_points(n));
  }
  Rng rng(77);
  for (int i = 0; i < 100; ++i) {
    const auto d = static_cast<std::size_t>(rng.uniform(2, 6));
    std::set<Point> chosen;
    const auto want = std::min<std::size_t>(std::size_t{1} << d, static_cast<std::size_t>(rng.uniform(static_cast<long>(d) + 1, static_cast<long>(2 * d + 2))));
    while (chosen.size() < want) {
      Point p(d);
      for (auto& x : p) x = rng.uniform(0, 1);
      chosen.insert(p);
    }
    polys.emplace_back("random 0/1 polytope " + std::to_string(i), std::vector<Point>(chosen.begin(), chosen.end()));
  }
  for (const auto& [name, pts] : polys) {
    const auto hull = convex_hull(pts);
    const auto back = vertices_from_hrep(hrep_of(hull));
    c.that(back == hull.vertex_points(), name + ": vertices of the facets differ");
    c.that(facet_set(convex_hull(back)) == facet_set(hull), name + ": facets of the vertices differ");
  }

  // MV symmetry and invariance under unimodular changes of coordinates.
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = static_cast<std::size_t>(rng.uniform(2, 4));
    auto s = random_system(rng, d);
    const auto mv = mixed_volume(s).value;
    auto perm = s;
    std::reverse(perm.begin(), perm.end());
    std::swap(perm[0], perm[d - 1 - static_cast<std::size_t>(rng.uniform(0, static_cast<long>(d) - 1))]);
    c.eq(mixed_volume(perm).value, mv, "permuted system " + std::to_string(trial));
    // Random product of elementary matrices.
    std::vector<linalg::IntVec> m(d, linalg::IntVec(d, 0));
    for (std::size_t i = 0; i < d; ++i) m[i][i] = 1;
    for (int step = 0; step < 6; ++step) {
      const auto r = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(d) - 1));
      auto q = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(d) - 2));
      if (q >= r) ++q;
      const auto f = rng.uniform(-2, 2);
      for (std::size_t j = 0; j < d; ++j) m[r][j] += f * m[q][j];
    }
    for (auto& sup : s)
      for (auto& p : sup) {
        Point t(d, 0);
        for (std::size_t i = 0; i < d; ++i)
          for (std::size_t j = 0; j < d; ++j) t[i] += m[i][j] * p[j];
        p = t;
      }
    c.eq(mixed_volume(s).value, mv, "unimodular image " + std::to_string(trial));
  }

  // Face-to-face validity of the family triangulations and random placings.
  for (int n = 1; n <= 4; ++n) {
    const auto kn = kn_points(n);
    c.that(!check_face_to_face(kn, placing_triangulation(kn, tn_order(n))).has_value(), tag("T", n) + " not face-to-face");
  }
  for (int n = 1; n <= 2; ++n) {
    const auto [pts, t] = qn_triangulation(n);
    c.that(!check_face_to_face(pts, t).has_value(), tag("lifted T", n) + " not face-to-face");
  }
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = static_cast<std::size_t>(rng.uniform(2, 3));
    std::vector<Point> pts(9, Point(d));
    for (auto& p : pts)
      for (auto& x : p) x = rng.uniform(0, 3);
    c.that(!check_face_to_face(pts, placing_triangulation(pts)).has_value(), "random placing " + std::to_string(trial));
  }

  // Conservation laws annihilate the species rates.
  auto annihilates = [&](const ReactionNetwork& net, const std::string& name) {
    const auto rates = species_rates(net, sample_parameters(net, 5).rates);
    for (const auto& w : conservation_laws(net)) {
      Polynomial sum(net.species.size());
      for (std::size_t s = 0; s < w.size(); ++s) sum += rates[s] * Rational(static_cast<long>(w[s]));
      c.that(sum.is_zero(), name + ": conservation law does not annihilate the rates");
    }
  };
  for (int n = 2; n <= 8; ++n) annihilates(generate_cd(n), tag("cd", n));
  for (int n = 1; n <= 6; ++n) annihilates(generate_edelstein(n), tag("e", n));
  for (int n = 1; n <= 4; ++n) annihilates(generate_pc(n), tag("pc", n));
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"table 1 closed forms (cd 3..10, e 1..5, pc 1..4)", table1},
      {"CD_4 system, mixed volume and steady states", cell_death_four},
      {"E_1 supports, theorem 2, mixed volume and cubic", edelstein_one},
      {"PC_1 supports, triangulation, cone lift and mixed volume", phosphorylation_one},
      {"H-representation of Q_n, n = 2..4", h_representation},
      {"unimodular triangulation of Q_n, n = 2..4", triangulation},
      {"matching polytopes, n = 1..4", matching},
      {"steady-state degree of PC_1, PC_2 and bound inequalities", conjecture},
      {"mixed volume equals inclusion-exclusion", oracle_equivalence},
      {"property suites", properties},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (c.ok() ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << std::endl;
    std::cerr << "  [" << std::fixed << std::setprecision(1) << secs << " s]\n";
    for (const auto& n : c.notes()) std::cerr << "  " << n << "\n";
    for (const auto& p : c.problems()) std::cerr << "  " << p << "\n";
    failures += c.ok() ? 0 : 1;
  }
  return failures;
}
