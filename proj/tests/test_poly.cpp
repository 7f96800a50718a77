#include <gtest/gtest.h>

#include "crnbkk/poly.hpp"
#include "crnbkk/random.hpp"

using namespace crnbkk;

namespace {

Polynomial random_poly(Rng& rng, std::size_t nvars, int max_terms, int max_deg) {
  Polynomial p(nvars);
  const int terms = static_cast<int>(rng.uniform(0, max_terms));
  for (int t = 0; t < terms; ++t) {
    Monomial m(nvars);
    for (auto& e : m) e = static_cast<int>(rng.uniform(0, max_deg));
    Rational c(static_cast<long>(rng.nonzero(20)), static_cast<long>(rng.uniform(1, 5)));
    c.canonicalize();
    p.add_term(m, c);
  }
  return p;
}

std::vector<Rational> random_point(Rng& rng, std::size_t n) {
  std::vector<Rational> pt(n);
  for (auto& x : pt) {
    x = Rational(static_cast<long>(rng.uniform(-9, 9)), static_cast<long>(rng.uniform(1, 4)));
    x.canonicalize();
  }
  return pt;
}

}  // namespace

TEST(Polynomial, RingAxiomsOnRandomTriples) {
  Rng rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 4));
    const auto a = random_poly(rng, n, 5, 3);
    const auto b = random_poly(rng, n, 5, 3);
    const auto c = random_poly(rng, n, 5, 3);
    const Polynomial zero(n);
    const auto one = Polynomial::constant(n, 1);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a + zero, a);
    EXPECT_EQ(a * one, a);
    EXPECT_TRUE((a - a).is_zero());
    EXPECT_TRUE((a * zero).is_zero());
  }
}

TEST(Polynomial, EvaluationIsARingHomomorphism) {
  Rng rng(102);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 4));
    const auto a = random_poly(rng, n, 6, 4);
    const auto b = random_poly(rng, n, 6, 4);
    const auto pt = random_point(rng, n);
    EXPECT_EQ(evaluate(a + b, pt), evaluate(a, pt) + evaluate(b, pt));
    EXPECT_EQ(evaluate(a * b, pt), evaluate(a, pt) * evaluate(b, pt));
  }
}

TEST(Polynomial, DegreeIsAdditiveUnderProducts) {
  Rng rng(103);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_poly(rng, 3, 4, 3);
    const auto b = random_poly(rng, 3, 4, 3);
    if (a.is_zero() || b.is_zero()) continue;
    EXPECT_EQ((a * b).degree(), a.degree() + b.degree());
  }
}

TEST(Polynomial, RejectsMismatchedRings) {
  EXPECT_THROW(Polynomial::variable(2, 0) + Polynomial::variable(3, 0), Error);
  EXPECT_THROW(evaluate(Polynomial::variable(2, 0), {1}), Error);
  Polynomial p(2);
  EXPECT_THROW(p.add_term({1, 2, 3}, 1), Error);
}

TEST(Polynomial, TextFormIsGradedLex) {
  const std::size_t n = 2;
  const auto x = Polynomial::variable(n, 0), y = Polynomial::variable(n, 1);
  const auto p = x * y * make_rational(-3, 2) + x * x + Polynomial::constant(n, 7) + y;
  EXPECT_EQ(to_string(p, {"x", "y"}), "1*x^2 + -3/2*x*y + 1*y + 7");
  EXPECT_EQ(to_string(Polynomial(n), {"x", "y"}), "0");
  EXPECT_EQ(support(p).front(), (Monomial{2, 0}));
}

TEST(PolySystem, RandomizationKeepsCommonZeros) {
  // Planted zero (1, 2, -1) of three polynomials.
  const std::size_t n = 3;
  const auto x = Polynomial::variable(n, 0), y = Polynomial::variable(n, 1), z = Polynomial::variable(n, 2);
  PolySystem sys;
  sys.var_names = {"x", "y", "z"};
  sys.push(x * y - Polynomial::constant(n, 2), "a");
  sys.push(y + z * 2 - Polynomial::constant(n, 0), "b");
  sys.push(x * x * z + Polynomial::constant(n, 1), "c");
  const std::vector<Rational> zero{1, 2, -1};
  for (const auto& p : sys.polys) ASSERT_EQ(evaluate(p, zero), 0);

  const auto r = randomize(sys, 2, 77);
  EXPECT_EQ(r.size(), 2u);
  for (const auto& p : r.polys) EXPECT_EQ(evaluate(p, zero), 0);
  EXPECT_EQ(r.tags, (std::vector<std::string>{"g_1", "g_2"}));
  // Same seed, same combination.
  EXPECT_EQ(randomize(sys, 2, 77).polys, r.polys);
  EXPECT_NE(randomize(sys, 2, 78).polys, r.polys);
  EXPECT_THROW(randomize(sys, 0, 1), Error);
  EXPECT_THROW(randomize(sys, 4, 1), Error);
}

TEST(PolySystem, CoefficientMatrixDetectsDependence) {
  const std::size_t n = 2;
  const auto x = Polynomial::variable(n, 0), y = Polynomial::variable(n, 1);
  const auto a = x * y + x, b = y * y - x;
  EXPECT_EQ(linalg::rank(coefficient_matrix({a, b, a * 3 - b * 2})), 2u);
  EXPECT_EQ(linalg::rank(coefficient_matrix({a, b, x})), 3u);
}
