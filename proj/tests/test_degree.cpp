#include <gtest/gtest.h>

#include "crnbkk/degree.hpp"

using namespace crnbkk;

namespace {

ParameterAssignment params_for(Family f, int n, std::uint64_t seed) { return sample_parameters(generate(f, n), seed); }

Integer mv_of(const PolySystem& sys, std::uint64_t seed = 0) { return mixed_volume(square_supports(sys, seed)).value; }

Rational eval(const Polynomial& p, const std::vector<Rational>& x) {
  Rational v = 0;
  for (const auto& [m, c] : p.terms()) {
    Rational t = c;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (int e = 0; e < m[i]; ++e) t *= x[i];
    v += t;
  }
  return v;
}

}  // namespace

TEST(Univariate, ArithmeticAndGcd) {
  const UnivariatePoly a({-1, 0, 1});  // t^2 - 1
  const UnivariatePoly b({1, 1});      // t + 1
  auto [q, r] = a.divmod(b);
  EXPECT_EQ(q, UnivariatePoly({-1, 1}));
  EXPECT_TRUE(r.is_zero());
  EXPECT_EQ(gcd(a, b * UnivariatePoly({2, 1})), b);
  EXPECT_EQ(a.derivative(), UnivariatePoly({0, 2}));
  EXPECT_EQ(a.evaluate(Rational(3)), 8);
  EXPECT_TRUE(is_squarefree(a));
  EXPECT_FALSE(is_squarefree(b * b));
  EXPECT_EQ(UnivariatePoly({0, 0, 0}).degree(), -1);
  EXPECT_THROW(a.divmod(UnivariatePoly()), Error);
}

TEST(SteadyStateDegree, CellDeathElimination) {
  for (int n = 3; n <= 8; ++n) {
    for (std::uint64_t seed : {1u, 2u}) {
      const auto r = ssd_cd(n, params_for(Family::CellDeath, n, seed));
      EXPECT_EQ(r.total, n) << n;
      EXPECT_EQ(r.boundary, 2) << n;
      EXPECT_EQ(r.toric, n - 2) << n;
      EXPECT_TRUE(r.squarefree);
      EXPECT_EQ(Integer(r.toric), mv_of(family_system(Family::CellDeath, n, seed))) << n;
    }
  }
}

TEST(SteadyStateDegree, CellDeathThreeHasOneExactToricRoot) {
  const auto params = params_for(Family::CellDeath, 3, 5);
  const auto sys = drop_dependent(mass_action_system(generate_cd(3), params), Family::CellDeath);
  const auto r = ssd_cd(3, params);
  // Strip the boundary roots: x_Y = 0 and x_Z = 0.
  const auto& f1 = sys.by_tag("f_1");
  const Rational a = f1.coefficient({1, 0}), b = f1.coefficient({0, 1}), c = f1.coefficient({0, 0});
  const UnivariatePoly xz({-c / b, -a / b});
  const auto linear = r.eliminant.divmod(UnivariatePoly::x() * xz).first;
  ASSERT_EQ(linear.degree(), 1);
  // The boundary steady states sit at the two ends of the conservation segment.
  EXPECT_EQ(r.eliminant.evaluate(0), 0);
  EXPECT_EQ(r.eliminant.evaluate(-c / a), 0);
  const Rational y = -linear[0] / linear[1];
  const Rational z = xz.evaluate(y);
  EXPECT_NE(y, 0);
  EXPECT_NE(z, 0);
  for (const auto& p : sys.polys) EXPECT_EQ(eval(p, {y, z}), 0);
}

TEST(SteadyStateDegree, EdelsteinElimination) {
  for (int n = 1; n <= 6; ++n) {
    for (std::uint64_t seed : {1u, 2u}) {
      const auto r = ssd_edelstein(n, params_for(Family::Edelstein, n, seed));
      EXPECT_EQ(r.total, 3) << n;
      EXPECT_EQ(r.toric, 3) << n;
      EXPECT_EQ(r.boundary, 0) << n;
      EXPECT_EQ(Integer(r.total), mv_of(family_system(Family::Edelstein, n, seed))) << n;
    }
  }
}

TEST(SteadyStateDegree, GroebnerAgreesWithElimination) {
  for (std::uint64_t seed : {1u, 2u}) {
    const auto cd = ssd_groebner(family_system(Family::CellDeath, 4, seed), seed);
    ASSERT_TRUE(cd.ok) << cd.status;
    EXPECT_EQ(cd.total, 4);
    EXPECT_EQ(cd.toric, 2);
    EXPECT_EQ(cd.boundary, 2);

    const auto e = ssd_groebner(family_system(Family::Edelstein, 1, seed), seed);
    ASSERT_TRUE(e.ok) << e.status;
    EXPECT_EQ(e.total, 3);
    EXPECT_EQ(e.toric, 3);

    for (int n = 3; n <= 7; ++n) {
      const auto g = ssd_groebner(family_system(Family::CellDeath, n, seed), seed);
      const auto el = ssd_cd(n, params_for(Family::CellDeath, n, seed));
      EXPECT_EQ(g.total, el.total) << n;
      EXPECT_EQ(g.toric, el.toric) << n;
    }
    for (int n = 2; n <= 4; ++n) {
      const auto g = ssd_groebner(family_system(Family::Edelstein, n, seed), seed);
      const auto el = ssd_edelstein(n, params_for(Family::Edelstein, n, seed));
      EXPECT_EQ(g.total, el.total) << n;
      EXPECT_EQ(g.toric, el.toric) << n;
    }
  }
}

TEST(SteadyStateDegree, PhosphorylationGroebner) {
  for (std::uint64_t seed : {1u, 2u}) {
    const auto sys = family_system(Family::Phosphorylation, 1, seed);
    const auto r = ssd_groebner(sys, seed);
    ASSERT_TRUE(r.ok) << r.status;
    EXPECT_EQ(r.toric, 3);
    EXPECT_LE(Integer(r.toric), mv_of(sys, seed));
    EXPECT_LE(Integer(r.total), bezout_bound(sys));

    // A generic square randomization spans the same polynomials.
    const auto sq = randomize(sys, static_cast<int>(sys.nvars()), seed);
    const auto rs = ssd_groebner(sq, seed);
    ASSERT_TRUE(rs.ok) << rs.status;
    EXPECT_EQ(rs.total, r.total);
    EXPECT_EQ(rs.toric, r.toric);
  }
  const auto two = ssd_groebner(family_system(Family::Phosphorylation, 2, 1), 1);
  ASSERT_TRUE(two.ok) << two.status;
  EXPECT_EQ(two.toric, 5);
}

TEST(SteadyStateDegree, PositiveDimensionalAndBudget) {
  PolySystem sys;
  sys.var_names = {"x", "y"};
  Polynomial p(2);
  p.add_term({1, 1}, 1);
  sys.push(p, "f");
  const auto r = ssd_groebner(sys);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.status, "positive-dimensional ideal");

  const auto tight = ssd_groebner(family_system(Family::Phosphorylation, 1, 1), 1, 10);
  EXPECT_FALSE(tight.ok);
  EXPECT_EQ(tight.status, "coefficient budget exceeded");
}

TEST(SteadyStateDegree, ConjectureSweep) {
  const auto rows = conjecture_sweep(2, {1, 2});
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& row : rows) {
    EXPECT_TRUE(row.seeds_agree) << row.n;
    EXPECT_EQ(row.reports.front().toric, row.expected) << row.n;
  }
  EXPECT_EQ(rows[0].mv, 4);
  EXPECT_EQ(rows[1].mv, 8);
  EXPECT_THROW(conjecture_sweep(3, {1}), GuardError);
}
