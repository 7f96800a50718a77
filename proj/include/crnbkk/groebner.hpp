#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "crnbkk/linalg.hpp"
#include "crnbkk/poly.hpp"
#include "crnbkk/rational.hpp"

/// Buchberger's algorithm over Q in graded reverse lexicographic order, with
/// the Gebauer-Moeller pair criteria and the normal selection strategy.
namespace crnbkk::gb {

using Exp = std::vector<int>;

/// Strict grevlex comparison: higher total degree wins, ties go to the
/// monomial with the smaller exponent in the last variable where they differ.
struct GrevlexGreater {
  bool operator()(const Exp& a, const Exp& b) const {
    int da = 0, db = 0;
    for (auto x : a) da += x;
    for (auto x : b) db += x;
    if (da != db) return da > db;
    for (std::size_t i = a.size(); i-- > 0;)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  }
};

using Poly = std::map<Exp, Rational, GrevlexGreater>;

inline bool divides(const Exp& a, const Exp& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline Exp lcm(const Exp& a, const Exp& b) {
  Exp m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i] = std::max(a[i], b[i]);
  return m;
}

inline bool coprime(const Exp& a, const Exp& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > 0 && b[i] > 0) return false;
  return true;
}

inline const Exp& lead(const Poly& p) { return p.begin()->first; }

inline void make_monic(Poly& p) {
  if (p.empty()) return;
  const Rational inv = 1 / p.begin()->second;
  for (auto& [e, c] : p) c *= inv;
}

/// p -= c * x^shift * q
inline void sub_scaled(Poly& p, const Rational& c, const Exp& shift, const Poly& q) {
  Exp m(shift.size());
  for (const auto& [e, qc] : q) {
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = e[i] + shift[i];
    auto [it, fresh] = p.try_emplace(m, 0);
    it->second -= c * qc;
    if (it->second == 0) p.erase(it);
  }
}

/// Full normal form of `p` modulo the polynomials `basis[idx]`.
inline Poly normal_form(Poly p, const std::vector<Poly>& basis, const std::vector<std::size_t>& idx) {
  Poly rem;
  while (!p.empty()) {
    auto it = p.begin();
    const Exp e = it->first;
    bool reduced = false;
    for (auto g : idx) {
      const auto& lg = lead(basis[g]);
      if (!divides(lg, e)) continue;
      Exp shift(e.size());
      for (std::size_t i = 0; i < e.size(); ++i) shift[i] = e[i] - lg[i];
      const Rational c = it->second / basis[g].begin()->second;
      sub_scaled(p, c, shift, basis[g]);
      reduced = true;
      break;
    }
    if (!reduced) {
      rem.insert(p.extract(it));
    }
  }
  return rem;
}

inline Poly from_polynomial(const Polynomial& p) {
  Poly out;
  for (const auto& [m, c] : p.terms()) out.emplace(Exp(m.begin(), m.end()), c);
  return out;
}

inline Polynomial to_polynomial(const Poly& p, std::size_t nvars) {
  Polynomial out(nvars);
  for (const auto& [e, c] : p) out.add_term(Monomial(e.begin(), e.end()), c);
  return out;
}

inline std::size_t digits(const Poly& p) {
  std::size_t d = 0;
  for (const auto& [e, c] : p)
    d += mpz_sizeinbase(c.get_num_mpz_t(), 10) + mpz_sizeinbase(c.get_den_mpz_t(), 10);
  return d;
}

enum class Status { Ok, BudgetExceeded };

struct Basis {
  std::vector<Poly> polys;  // reduced Groebner basis, monic, sorted by leading monomial
  std::size_t nvars = 0;
  Status status = Status::Ok;
  std::size_t pairs_reduced = 0;
  std::size_t peak_digits = 0;
};

namespace detail {

struct Pair {
  std::size_t a, b;
  Exp lcm;
};

}  // namespace detail

inline Basis groebner(const std::vector<Polynomial>& input, std::size_t digit_budget = 1000000) {
  Basis out;
  if (input.empty()) return out;
  out.nvars = input[0].nvars();
  std::vector<Poly> store;
  std::vector<std::size_t> G;
  std::vector<detail::Pair> B;
  GrevlexGreater gt;

  auto update = [&](std::size_t h) {
    const Exp& lh = lead(store[h]);
    std::vector<detail::Pair> C, D;
    for (auto g : G) C.push_back({h, g, lcm(lh, lead(store[g]))});
    while (!C.empty()) {
      auto p = C.back();
      C.pop_back();
      bool keep = coprime(lh, lead(store[p.b]));
      if (!keep) {
        keep = true;
        for (const auto& q : C)
          if (divides(q.lcm, p.lcm)) keep = false;
        for (const auto& q : D)
          if (divides(q.lcm, p.lcm)) keep = false;
      }
      if (keep) D.push_back(std::move(p));
    }
    std::vector<detail::Pair> nb;
    for (auto& p : B) {
      const bool drop = divides(lh, p.lcm) && lcm(lead(store[p.a]), lh) != p.lcm && lcm(lh, lead(store[p.b])) != p.lcm;
      if (!drop) nb.push_back(std::move(p));
    }
    for (auto& p : D)
      if (!coprime(lh, lead(store[p.b]))) nb.push_back(std::move(p));
    B = std::move(nb);
    std::vector<std::size_t> ng;
    for (auto g : G)
      if (!divides(lh, lead(store[g]))) ng.push_back(g);
    ng.push_back(h);
    G = std::move(ng);
  };

  auto over_budget = [&]() {
    std::size_t total = 0;
    for (auto g : G) total += digits(store[g]);
    out.peak_digits = std::max(out.peak_digits, total);
    return total > digit_budget;
  };

  // Start from the inputs reduced against each other one at a time.
  for (const auto& f : input) {
    if (f.nvars() != out.nvars) throw Error("Groebner input lives in different rings");
    Poly p = normal_form(from_polynomial(f), store, G);
    if (p.empty()) continue;
    make_monic(p);
    store.push_back(std::move(p));
    update(store.size() - 1);
  }

  while (!B.empty()) {
    auto best = std::min_element(B.begin(), B.end(), [&](const auto& x, const auto& y) { return gt(y.lcm, x.lcm); });
    const auto pair = *best;
    B.erase(best);
    const auto& f = store[pair.a];
    const auto& g = store[pair.b];
    Poly s;
    {
      Exp sf(pair.lcm.size()), sg(pair.lcm.size());
      for (std::size_t i = 0; i < sf.size(); ++i) {
        sf[i] = pair.lcm[i] - lead(f)[i];
        sg[i] = pair.lcm[i] - lead(g)[i];
      }
      sub_scaled(s, -1, sf, f);
      sub_scaled(s, 1, sg, g);
    }
    ++out.pairs_reduced;
    Poly h = normal_form(std::move(s), store, G);
    if (h.empty()) continue;
    make_monic(h);
    store.push_back(std::move(h));
    update(store.size() - 1);
    if (over_budget()) {
      out.status = Status::BudgetExceeded;
      for (auto i : G) out.polys.push_back(store[i]);
      return out;
    }
  }

  // Reduce: G is already minimal; tail-reduce each element by the others.
  std::vector<Poly> reduced;
  for (std::size_t k = 0; k < G.size(); ++k) {
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < G.size(); ++j)
      if (j != k) others.push_back(G[j]);
    Poly p = store[G[k]];
    const auto lt = *p.begin();
    p.erase(p.begin());
    Poly tail = normal_form(std::move(p), store, others);
    tail.insert(lt);
    make_monic(tail);
    reduced.push_back(std::move(tail));
  }
  std::sort(reduced.begin(), reduced.end(), [&](const Poly& x, const Poly& y) { return gt(lead(y), lead(x)); });
  out.polys = std::move(reduced);
  over_budget();
  return out;
}

/// Standard monomials of a zero-dimensional ideal, or nullopt when some
/// variable has no pure power among the leading monomials.
inline std::optional<std::vector<Exp>> standard_monomials(const Basis& b) {
  const std::size_t n = b.nvars;
  std::vector<Exp> leads;
  for (const auto& p : b.polys) leads.push_back(lead(p));
  for (std::size_t i = 0; i < n; ++i) {
    bool pure = false;
    for (const auto& l : leads) {
      bool only = l[i] > 0;
      for (std::size_t j = 0; j < n && only; ++j)
        if (j != i && l[j] != 0) only = false;
      pure |= only;
    }
    if (!pure) return std::nullopt;
  }
  std::vector<Exp> out;
  std::vector<Exp> frontier{Exp(n, 0)};
  std::set<Exp> seen{Exp(n, 0)};
  auto standard = [&](const Exp& e) {
    return std::none_of(leads.begin(), leads.end(), [&](const Exp& l) { return divides(l, e); });
  };
  if (!standard(frontier[0])) return out;  // the ideal is the whole ring
  while (!frontier.empty()) {
    std::vector<Exp> next;
    for (const auto& e : frontier) {
      out.push_back(e);
      for (std::size_t i = 0; i < n; ++i) {
        Exp f = e;
        ++f[i];
        if (standard(f) && seen.insert(f).second) next.push_back(std::move(f));
      }
    }
    frontier = std::move(next);
  }
  std::sort(out.begin(), out.end(), GrevlexGreater{});
  return out;
}

/// Matrix of multiplication by x_var on the quotient, in the basis `stdm`
/// (column j holds the normal form of x_var * stdm[j]).
inline linalg::Mat multiplication_matrix(const Basis& b, const std::vector<Exp>& stdm, std::size_t var) {
  std::map<Exp, std::size_t> pos;
  for (std::size_t i = 0; i < stdm.size(); ++i) pos[stdm[i]] = i;
  std::vector<std::size_t> all(b.polys.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  linalg::Mat m(stdm.size(), linalg::Vec(stdm.size(), 0));
  for (std::size_t j = 0; j < stdm.size(); ++j) {
    Exp e = stdm[j];
    ++e[var];
    Poly p{{e, Rational(1)}};
    for (const auto& [f, c] : normal_form(std::move(p), b.polys, all)) m[pos.at(f)][j] = c;
  }
  return m;
}

inline linalg::Mat multiply(const linalg::Mat& a, const linalg::Mat& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  linalg::Mat c(n, linalg::Vec(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < k; ++t) {
      if (a[i][t] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][t] * b[t][j];
    }
  return c;
}

}  // namespace crnbkk::gb
