#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "crnbkk/linalg.hpp"
#include "crnbkk/random.hpp"
#include "crnbkk/rational.hpp"

namespace crnbkk {

/// Exponent vector in the canonical variable order of its system.
using Monomial = std::vector<int>;

inline int total_degree(const Monomial& m) {
  int d = 0;
  for (int e : m) d += e;
  return d;
}

/// Graded lexicographic order, largest first.
struct GrlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const {
    const int da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db;
    return a > b;
  }
};

/// Sparse polynomial over Q. Zero coefficients are never stored.
class Polynomial {
 public:
  using Terms = std::map<Monomial, Rational, GrlexGreater>;

  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const Rational& c) {
    Polynomial p(nvars);
    p.add_term(Monomial(nvars, 0), c);
    return p;
  }
  static Polynomial variable(std::size_t nvars, std::size_t index) {
    Polynomial p(nvars);
    Monomial m(nvars, 0);
    m[index] = 1;
    p.add_term(m, 1);
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(const Monomial& m, const Rational& c) {
    if (m.size() != nvars_) throw Error("monomial length does not match variable count");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Rational coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  int degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, total_degree(m));
    return d;
  }

  Polynomial& operator+=(const Polynomial& o) {
    check(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  Polynomial& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }
  Polynomial operator-() const { return *this * Rational(-1); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check(b);
    Polynomial out(a.nvars_);
    Monomial m(a.nvars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
        out.add_term(m, ca * cb);
      }
    return out;
  }

  bool operator==(const Polynomial& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

 private:
  void check(const Polynomial& o) const {
    if (o.nvars_ != nvars_) throw Error("polynomials live in different rings");
  }

  std::size_t nvars_ = 0;
  Terms terms_;
};

/// Monomials with nonzero coefficient, in graded-lex order (largest first).
inline std::vector<Monomial> support(const Polynomial& p) {
  std::vector<Monomial> out;
  out.reserve(p.size());
  for (const auto& [m, c] : p.terms()) out.push_back(m);
  return out;
}

inline Rational evaluate(const Polynomial& p, const std::vector<Rational>& point) {
  if (point.size() != p.nvars()) throw Error("evaluation point has wrong dimension");
  Rational sum = 0;
  for (const auto& [m, c] : p.terms()) {
    Rational t = c;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      Rational pw;
      mpz_pow_ui(pw.get_num_mpz_t(), point[i].get_num_mpz_t(), static_cast<unsigned long>(m[i]));
      mpz_pow_ui(pw.get_den_mpz_t(), point[i].get_den_mpz_t(), static_cast<unsigned long>(m[i]));
      t *= pw;
    }
    sum += t;
  }
  return sum;
}

/// `coeff*x^a*y^b` terms in graded-lex order, joined by " + ".
inline std::string to_string(const Polynomial& p, const std::vector<std::string>& names) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    if (!first) os << " + ";
    first = false;
    os << c.get_str();
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      os << '*' << names.at(i);
      if (m[i] > 1) os << '^' << m[i];
    }
  }
  return os.str();
}

/// Ordered list of polynomials sharing a variable list, each with a tag
/// naming its role (for example "f_2" or "xdot_E").
struct PolySystem {
  std::vector<Polynomial> polys;
  std::vector<std::string> var_names;
  std::vector<std::string> tags;

  std::size_t nvars() const { return var_names.size(); }
  std::size_t size() const { return polys.size(); }

  void push(Polynomial p, std::string tag) {
    if (p.nvars() != var_names.size()) throw Error("polynomial does not match system variables");
    polys.push_back(std::move(p));
    tags.push_back(std::move(tag));
  }

  const Polynomial& by_tag(const std::string& tag) const {
    for (std::size_t i = 0; i < tags.size(); ++i)
      if (tags[i] == tag) return polys[i];
    throw Error("no polynomial tagged " + tag);
  }

  std::vector<std::vector<Monomial>> supports() const {
    std::vector<std::vector<Monomial>> out;
    for (const auto& p : polys) out.push_back(support(p));
    return out;
  }
};

/// Rate constants by label and initial conditions by species name.
struct ParameterAssignment {
  std::map<std::string, Rational> rates;
  std::map<std::string, Rational> init_conds;
  std::uint64_t seed = 0;
};

/// Coefficient vectors of the polynomials over the union of their supports;
/// used for exact rank tests on linear dependence between polynomials.
inline linalg::Mat coefficient_matrix(const std::vector<Polynomial>& polys) {
  std::set<Monomial, GrlexGreater> monos;
  for (const auto& p : polys)
    for (const auto& [m, c] : p.terms()) monos.insert(m);
  linalg::Mat rows;
  for (const auto& p : polys) {
    linalg::Vec row;
    row.reserve(monos.size());
    for (const auto& m : monos) row.push_back(p.coefficient(m));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Replaces the system by matrix * system; rows of `matrix` must have one
/// entry per polynomial.
inline PolySystem randomize_with(const PolySystem& system, const linalg::Mat& matrix) {
  PolySystem out;
  out.var_names = system.var_names;
  for (std::size_t r = 0; r < matrix.size(); ++r) {
    if (matrix[r].size() != system.size()) throw Error("randomizer has wrong column count");
    Polynomial acc(system.nvars());
    for (std::size_t j = 0; j < system.size(); ++j)
      if (matrix[r][j] != 0) acc += system.polys[j] * matrix[r][j];
    out.push(std::move(acc), "g_" + std::to_string(r + 1));
  }
  return out;
}

/// Random nonzero integer matrix with entries in [-10^6, 10^6].
inline linalg::Mat randomizer_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng = Rng(seed).split("randomize");
  linalg::Mat m(rows, linalg::Vec(cols));
  for (auto& row : m)
    for (auto& x : row) x = Rational(static_cast<long>(rng.nonzero(1'000'000)));
  return m;
}

/// `rows` random linear combinations of the system's polynomials.
inline PolySystem randomize(const PolySystem& system, int rows, std::uint64_t seed) {
  if (rows <= 0) throw Error("randomize: row count must be positive");
  if (static_cast<std::size_t>(rows) > system.size()) throw Error("randomize: more rows than polynomials");
  return randomize_with(system, randomizer_matrix(static_cast<std::size_t>(rows), system.size(), seed));
}

}  // namespace crnbkk
