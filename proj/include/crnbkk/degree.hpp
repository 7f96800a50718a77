#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "crnbkk/bounds.hpp"
#include "crnbkk/crn.hpp"
#include "crnbkk/groebner.hpp"
#include "crnbkk/linalg.hpp"
#include "crnbkk/poly.hpp"
#include "crnbkk/rational.hpp"

namespace crnbkk {

// ---------------------------------------------------------------------------
// Dense univariate polynomials over Q

class UnivariatePoly {
 public:
  UnivariatePoly() = default;
  explicit UnivariatePoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
  static UnivariatePoly constant(const Rational& a) { return UnivariatePoly({a}); }
  static UnivariatePoly x() { return UnivariatePoly({0, 1}); }

  /// Lowest degree first; empty for the zero polynomial.
  const std::vector<Rational>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const Rational& leading() const { return c_.back(); }
  Rational operator[](std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }

  Rational evaluate(const Rational& t) const {
    Rational v = 0;
    for (std::size_t i = c_.size(); i-- > 0;) v = v * t + c_[i];
    return v;
  }

  friend UnivariatePoly operator+(const UnivariatePoly& a, const UnivariatePoly& b) {
    std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return UnivariatePoly(std::move(c));
  }
  friend UnivariatePoly operator-(const UnivariatePoly& a, const UnivariatePoly& b) { return a + b * Rational(-1); }
  friend UnivariatePoly operator*(const UnivariatePoly& a, const Rational& s) {
    auto c = a.c_;
    for (auto& x : c) x *= s;
    return UnivariatePoly(std::move(c));
  }
  friend UnivariatePoly operator*(const UnivariatePoly& a, const UnivariatePoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return UnivariatePoly(std::move(c));
  }
  bool operator==(const UnivariatePoly&) const = default;

  /// Quotient and remainder by a nonzero divisor.
  std::pair<UnivariatePoly, UnivariatePoly> divmod(const UnivariatePoly& d) const {
    if (d.is_zero()) throw Error("division by the zero polynomial");
    std::vector<Rational> r = c_;
    std::vector<Rational> q(c_.size() >= d.c_.size() ? c_.size() - d.c_.size() + 1 : 0, 0);
    for (std::size_t k = q.size(); k-- > 0;) {
      const Rational f = r[k + d.c_.size() - 1] / d.leading();
      q[k] = f;
      for (std::size_t j = 0; j < d.c_.size(); ++j) r[k + j] -= f * d.c_[j];
    }
    return {UnivariatePoly(std::move(q)), UnivariatePoly(std::move(r))};
  }

  UnivariatePoly derivative() const {
    std::vector<Rational> c;
    for (std::size_t i = 1; i < c_.size(); ++i) c.push_back(c_[i] * static_cast<long>(i));
    return UnivariatePoly(std::move(c));
  }

  UnivariatePoly monic() const { return is_zero() ? *this : *this * (1 / leading()); }

  std::string to_string(const std::string& var = "t") const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (c_[i] == 0) continue;
      if (!out.empty()) out += " + ";
      out += crnbkk::to_string(c_[i]);
      if (i >= 1) out += "*" + var;
      if (i >= 2) out += "^" + std::to_string(i);
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rational> c_;
};

inline UnivariatePoly gcd(UnivariatePoly a, UnivariatePoly b) {
  while (!b.is_zero()) {
    auto r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

inline bool is_squarefree(const UnivariatePoly& p) { return gcd(p, p.derivative()).degree() == 0; }

// ---------------------------------------------------------------------------
// Reports

enum class DegreeMethod { EliminationCD, EliminationE, Groebner };

inline std::string method_name(DegreeMethod m) {
  switch (m) {
    case DegreeMethod::EliminationCD: return "elimination_cd";
    case DegreeMethod::EliminationE: return "elimination_e";
    case DegreeMethod::Groebner: return "groebner";
  }
  return "?";
}

struct DegreeReport {
  bool ok = true;  // false for positive-dimensional ideals or an exhausted budget
  std::string status = "ok";
  int total = 0;
  int toric = 0;
  int boundary = 0;
  DegreeMethod method = DegreeMethod::Groebner;
  std::uint64_t parameters_seed = 0;
  /// Elimination methods: eliminant in the first variable, lowest degree first.
  UnivariatePoly eliminant;
  bool squarefree = true;
  /// Groebner only.
  std::size_t basis_size = 0;
  std::size_t peak_digits = 0;
};

namespace detail {

/// Rational function num / den^power in one variable, as used for
/// back-substitution: every coordinate shares the same denominator.
struct Param {
  UnivariatePoly num;
  int power = 0;
};

/// Numerator of p(coords) after clearing den^(deg p * max power).
inline UnivariatePoly substitute(const Polynomial& p, const std::vector<Param>& coords, const UnivariatePoly& den) {
  int top = 0;
  for (const auto& [m, c] : p.terms()) {
    int w = 0;
    for (std::size_t v = 0; v < m.size(); ++v) w += m[v] * coords[v].power;
    top = std::max(top, w);
  }
  UnivariatePoly out;
  for (const auto& [m, c] : p.terms()) {
    UnivariatePoly term = UnivariatePoly::constant(c);
    int w = 0;
    for (std::size_t v = 0; v < m.size(); ++v)
      for (int e = 0; e < m[v]; ++e) {
        term = term * coords[v].num;
        w += coords[v].power;
      }
    for (int e = w; e < top; ++e) term = term * den;
    out = out + term;
  }
  return out;
}

inline const Polynomial& tagged(const PolySystem& sys, const std::string& tag) { return sys.by_tag(tag); }

inline Monomial mono(std::size_t n, std::initializer_list<std::pair<std::size_t, int>> e) {
  Monomial m(n, 0);
  for (const auto& [v, k] : e) m[v] += k;
  return m;
}

/// Degree of gcd(eliminant, product of coordinate numerators): the number of
/// eliminant roots at which some coordinate vanishes.
inline int boundary_roots(const UnivariatePoly& elim, const std::vector<Param>& coords) {
  UnivariatePoly prod = UnivariatePoly::constant(1);
  for (const auto& c : coords) prod = prod * c.num;
  if (prod.is_zero()) return elim.degree();
  return gcd(elim, prod).degree();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Cell death: substitute the conservation law into xdot_Y

inline DegreeReport ssd_cd(int n, const ParameterAssignment& params) {
  if (n < 2) throw Error("CD_n needs n >= 2");
  const auto net = generate_cd(n);
  const auto sys = drop_dependent(mass_action_system(net, params), Family::CellDeath);
  const auto& f1 = detail::tagged(sys, "f_1");
  const auto& f2 = detail::tagged(sys, "f_2");
  // f_1 = a x_Y + b x_Z + c, so x_Z = -(a x_Y + c) / b.
  const Rational a = f1.coefficient(detail::mono(2, {{0, 1}}));
  const Rational b = f1.coefficient(detail::mono(2, {{1, 1}}));
  const Rational c = f1.coefficient(detail::mono(2, {}));
  if (b == 0 || f1.size() != 3) throw Error("unexpected conservation law for CD_n");
  const UnivariatePoly xy = UnivariatePoly::x();
  const UnivariatePoly xz = UnivariatePoly({-c / b, -a / b});
  const std::vector<detail::Param> coords{{xy, 0}, {xz, 0}};
  const auto g = detail::substitute(f2, coords, UnivariatePoly::constant(1));

  DegreeReport r;
  r.method = DegreeMethod::EliminationCD;
  r.parameters_seed = params.seed;
  r.eliminant = g;
  if (g.degree() != n) throw Error("degenerate parameters: eliminant has degree " + std::to_string(g.degree()));
  r.squarefree = is_squarefree(g);
  if (!r.squarefree) throw Error("degenerate parameters: eliminant has a repeated root");
  r.total = g.degree();
  r.boundary = detail::boundary_roots(g, coords);
  r.toric = r.total - r.boundary;
  return r;
}

// ---------------------------------------------------------------------------
// Edelstein: x_{B_i} bilinear in x_A, x_B; x_B from f_1; a cubic from f_2

inline DegreeReport ssd_edelstein(int n, const ParameterAssignment& params) {
  if (n < 1) throw Error("E_n needs n >= 1");
  const auto net = generate_edelstein(n);
  const auto sys = drop_dependent(mass_action_system(net, params), Family::Edelstein);
  const std::size_t nv = static_cast<std::size_t>(n + 2);
  using detail::mono;

  // f_{i+3} = p_i x_A x_B + q_i x_B - r_i x_{B_i}  =>  x_{B_i} = x_B (alpha_i x_A + beta_i).
  std::vector<Rational> alpha(n), beta(n);
  for (int i = 1; i <= n; ++i) {
    const auto& f = detail::tagged(sys, "f_" + std::to_string(i + 3));
    const std::size_t bi = static_cast<std::size_t>(i + 1);
    const Rational p = f.coefficient(mono(nv, {{0, 1}, {1, 1}}));
    const Rational q = f.coefficient(mono(nv, {{1, 1}}));
    const Rational r = -f.coefficient(mono(nv, {{bi, 1}}));
    if (r == 0 || f.size() != 3) throw Error("unexpected rate equation for B_" + std::to_string(i));
    alpha[i - 1] = p / r;
    beta[i - 1] = q / r;
  }
  // f_1 = x_B + sum x_{B_i} - C  =>  x_B = C / D(x_A), D = 1 + sum beta + (sum alpha) x_A.
  const auto& f1 = detail::tagged(sys, "f_1");
  const Rational C = -f1.coefficient(mono(nv, {}));
  if (f1.coefficient(mono(nv, {{1, 1}})) != 1) throw Error("unexpected conservation law for E_n");
  Rational sa = 0, sb = 1;
  for (int i = 0; i < n; ++i) {
    sa += alpha[i];
    sb += beta[i];
  }
  const UnivariatePoly D({sb, sa});

  std::vector<detail::Param> coords(nv);
  coords[0] = {UnivariatePoly::x(), 0};
  coords[1] = {UnivariatePoly::constant(C), 1};
  for (int i = 0; i < n; ++i) coords[static_cast<std::size_t>(i + 2)] = {UnivariatePoly({C * beta[i], C * alpha[i]}), 1};

  const auto cubic = detail::substitute(detail::tagged(sys, "f_2"), coords, D);
  DegreeReport r;
  r.method = DegreeMethod::EliminationE;
  r.parameters_seed = params.seed;
  r.eliminant = cubic;
  if (cubic.degree() != 3) throw Error("degenerate parameters: eliminant has degree " + std::to_string(cubic.degree()));
  if (gcd(cubic, D).degree() != 0) throw Error("degenerate parameters: a root of the eliminant cancels the denominator");
  r.squarefree = is_squarefree(cubic);
  if (!r.squarefree) throw Error("degenerate parameters: eliminant has a repeated root");
  // Every reduced equation must vanish on the parametrized curve modulo the cubic.
  for (std::size_t k = 0; k < sys.size(); ++k) {
    const auto res = detail::substitute(sys.polys[k], coords, D).divmod(cubic).second;
    if (!res.is_zero()) throw Error("back-substitution leaves a residue in " + sys.tags[k]);
  }
  r.total = cubic.degree();
  r.boundary = detail::boundary_roots(cubic, coords);
  r.toric = r.total - r.boundary;
  return r;
}

// ---------------------------------------------------------------------------
// Groebner

/// Number of solutions (with multiplicity) from the staircase of a grevlex
/// basis; the toric part is the rank of a high power of the multiplication
/// matrix of x_1 ... x_d, i.e. the part of the quotient where the product of
/// the variables is invertible.
inline DegreeReport ssd_groebner(const PolySystem& sys, std::uint64_t seed = 0, std::size_t digit_budget = 1000000) {
  if (sys.nvars() > 10) throw GuardError("Groebner degree computation limited to 10 variables");
  DegreeReport r;
  r.method = DegreeMethod::Groebner;
  r.parameters_seed = seed;
  const auto basis = gb::groebner(sys.polys, digit_budget);
  r.basis_size = basis.polys.size();
  r.peak_digits = basis.peak_digits;
  if (basis.status == gb::Status::BudgetExceeded) {
    r.ok = false;
    r.status = "coefficient budget exceeded";
    return r;
  }
  const auto stdm = gb::standard_monomials(basis);
  if (!stdm) {
    r.ok = false;
    r.status = "positive-dimensional ideal";
    return r;
  }
  const std::size_t D = stdm->size();
  r.total = static_cast<int>(D);
  if (D == 0) return r;
  linalg::Mat prod;
  for (std::size_t v = 0; v < sys.nvars(); ++v) {
    const auto m = gb::multiplication_matrix(basis, *stdm, v);
    prod = prod.empty() ? m : gb::multiply(prod, m);
  }
  // Ranks of powers decrease until the nilpotent part is gone (at most D steps).
  linalg::Mat power = prod;
  std::size_t rank = linalg::rank(power);
  for (std::size_t step = 0; step < D; ++step) {
    power = gb::multiply(power, prod);
    const auto next = linalg::rank(power);
    if (next == rank) break;
    rank = next;
  }
  r.toric = static_cast<int>(rank);
  r.boundary = r.total - r.toric;
  return r;
}

// ---------------------------------------------------------------------------
// Conjecture sweep for PC_n

struct SweepRow {
  int n = 0;
  std::vector<DegreeReport> reports;  // one per seed
  bool seeds_agree = false;
  int expected = 0;  // 2n + 1
  Integer mv;        // closed form (n+1)(n+4)/2 - 1
  bool matches = false;
};

/// Groebner steady-state degree of PC_n for each seed. The reduced system
/// P~_n is used directly: it has one more equation than unknowns, and a
/// generic square randomization spans the same polynomials, so the ideal and
/// the count are the same.
inline std::vector<SweepRow> conjecture_sweep(int max_n, const std::vector<std::uint64_t>& seeds) {
  if (max_n > 2) throw GuardError("conjecture sweep limited to n <= 2");
  std::vector<SweepRow> rows;
  for (int n = 1; n <= max_n; ++n) {
    SweepRow row;
    row.n = n;
    row.expected = 2 * n + 1;
    row.mv = family_formulas(Family::Phosphorylation, n).mv;
    for (auto s : seeds) row.reports.push_back(ssd_groebner(family_system(Family::Phosphorylation, n, s), s));
    row.seeds_agree = std::all_of(row.reports.begin(), row.reports.end(), [&](const DegreeReport& r) {
      return r.ok && r.total == row.reports.front().total && r.toric == row.reports.front().toric;
    });
    row.matches = row.seeds_agree && !row.reports.empty() && row.reports.front().total == row.expected;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace crnbkk
