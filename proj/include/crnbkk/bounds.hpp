#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <deque>
#include <tuple>
#include <vector>

#include "crnbkk/crn.hpp"
#include "crnbkk/linalg.hpp"
#include "crnbkk/lp.hpp"
#include "crnbkk/poly.hpp"
#include "crnbkk/polytope.hpp"
#include "crnbkk/random.hpp"
#include "crnbkk/rational.hpp"

namespace crnbkk {

using Support = std::vector<Point>;

// ---------------------------------------------------------------------------
// Bezout

/// Product of total degrees. Overdetermined systems are accepted (the
/// product then runs over every polynomial); underdetermined ones are not.
inline Integer bezout_bound(const PolySystem& sys) {
  if (sys.size() < sys.nvars())
    throw Error("Bezout bound needs at least as many equations as variables (" + std::to_string(sys.size()) +
                " < " + std::to_string(sys.nvars()) + ")");
  Integer b = 1;
  for (const auto& p : sys.polys) {
    if (p.is_zero()) throw Error("Bezout bound of a system containing the zero polynomial");
    b *= static_cast<unsigned long>(p.degree());
  }
  return b;
}

inline Support to_support(const std::vector<Monomial>& monos) {
  Support s;
  for (const auto& m : monos) s.emplace_back(m.begin(), m.end());
  std::sort(s.begin(), s.end());
  return s;
}

inline std::vector<Support> system_supports(const PolySystem& sys) {
  std::vector<Support> out;
  for (const auto& p : sys.polys) out.push_back(to_support(support(p)));
  return out;
}

/// Supports of a square system; an overdetermined one is first replaced by
/// nvars generic combinations of its polynomials.
inline std::vector<Support> square_supports(const PolySystem& sys, std::uint64_t seed) {
  if (sys.size() == sys.nvars()) return system_supports(sys);
  if (sys.size() < sys.nvars()) throw Error("system has fewer equations than variables");
  return system_supports(randomize(sys, static_cast<int>(sys.nvars()), seed));
}

// ---------------------------------------------------------------------------
// Mixed volume by mixed cells

struct LiftedSupport {
  Support points;
  std::vector<std::int64_t> heights;
};

/// One cell of the lower hull. For a fine mixed cell `selection` holds one
/// index pair per support; in the equal-supports case it holds the d+1
/// vertex indices of a simplex of the regular triangulation of support 0.
struct MixedCell {
  std::vector<std::vector<std::size_t>> selection;
  Integer volume;
};

struct MixedCellCertificate {
  enum class Kind { Mixed, Simplicial };
  Kind kind = Kind::Mixed;
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  int attempt = 0;
  std::vector<LiftedSupport> supports;
  std::vector<MixedCell> cells;
  Integer total = 0;
};

struct MixedVolumeResult {
  Integer value;
  MixedCellCertificate certificate;
};

namespace detail {

constexpr int kLiftingRetries = 16;
constexpr std::int64_t kLiftingRange = std::int64_t{1} << 20;

inline std::vector<Support> normalize_supports(const std::vector<Support>& supports) {
  if (supports.empty()) throw Error("mixed volume of an empty family");
  const std::size_t d = supports.size();
  std::vector<Support> out;
  for (const auto& s : supports) {
    if (s.empty()) throw Error("mixed volume with an empty support");
    for (const auto& p : s)
      if (p.size() != d)
        throw Error("support points have dimension " + std::to_string(p.size()) + " but there are " +
                    std::to_string(d) + " supports");
    Support t = s;
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    out.push_back(std::move(t));
  }
  return out;
}

class Degenerate {};

inline std::vector<LiftedSupport> draw_lifting(const std::vector<Support>& supports, std::uint64_t seed, int attempt,
                                               bool shared) {
  Rng rng = Rng(seed).split("lifting").split(static_cast<std::uint64_t>(attempt));
  std::vector<LiftedSupport> out;
  for (const auto& s : supports) {
    LiftedSupport l{s, {}};
    if (shared && !out.empty()) {
      l.heights = out.front().heights;
    } else {
      for (std::size_t i = 0; i < s.size(); ++i) l.heights.push_back(rng.uniform(0, kLiftingRange - 1));
    }
    out.push_back(std::move(l));
  }
  return out;
}

inline linalg::Vec diff(const Point& a, const Point& b) {
  linalg::Vec v(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) v[k] = Rational(static_cast<long>(a[k] - b[k]));
  return v;
}

/// Constraints on alpha saying that (a, b) is an edge of the lower hull of
/// the lifted support with inner normal (alpha, 1).
inline void edge_constraints(const LiftedSupport& l, std::size_t a, std::size_t b, std::vector<lp::Constraint>& out) {
  out.push_back(lp::eq(diff(l.points[a], l.points[b]), Rational(static_cast<long>(l.heights[b] - l.heights[a]))));
  for (std::size_t p = 0; p < l.points.size(); ++p) {
    if (p == a || p == b) continue;
    out.push_back(lp::ge(diff(l.points[p], l.points[a]), Rational(static_cast<long>(l.heights[a] - l.heights[p]))));
  }
}

class MixedCellSearch {
 public:
  explicit MixedCellSearch(const std::vector<LiftedSupport>& lifted) : lifted_(lifted), d_(lifted.size()) {
    // Candidate edges per support: pairs that are lower edges on their own.
    candidates_.resize(d_);
    for (std::size_t i = 0; i < d_; ++i) {
      const auto& l = lifted_[i];
      for (std::size_t a = 0; a < l.points.size(); ++a)
        for (std::size_t b = a + 1; b < l.points.size(); ++b) {
          std::vector<lp::Constraint> cons;
          edge_constraints(l, a, b, cons);
          if (lp::feasible(cons, d_)) candidates_[i].push_back({a, b});
        }
    }
    order_.resize(d_);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t x, std::size_t y) { return candidates_[x].size() < candidates_[y].size(); });
    chosen_.resize(d_);
  }

  std::vector<MixedCell> run() {
    std::vector<lp::Constraint> cons;
    linalg::Mat edges;
    descend(0, cons, edges);
    return cells_;
  }

 private:
  void descend(std::size_t level, std::vector<lp::Constraint>& cons, linalg::Mat& edges) {
    if (level == d_) {
      finish();
      return;
    }
    const std::size_t i = order_[level];
    const auto& l = lifted_[i];
    for (const auto& [a, b] : candidates_[i]) {
      edges.push_back(diff(l.points[b], l.points[a]));
      if (linalg::rank(edges) == edges.size()) {
        const std::size_t mark = cons.size();
        edge_constraints(l, a, b, cons);
        if (lp::feasible(cons, d_)) {
          chosen_[i] = {a, b};
          descend(level + 1, cons, edges);
        }
        cons.resize(mark);
      }
      edges.pop_back();
    }
  }

  // The normal is now pinned down; a cell is fine exactly when no other
  // lifted point is tight.
  void finish() {
    linalg::Mat a;
    linalg::Vec rhs;
    std::vector<linalg::IntVec> rows;
    for (std::size_t i = 0; i < d_; ++i) {
      const auto& l = lifted_[i];
      const auto [p, q] = chosen_[i];
      a.push_back(diff(l.points[p], l.points[q]));
      rhs.push_back(Rational(static_cast<long>(l.heights[q] - l.heights[p])));
      rows.push_back(sub(l.points[q], l.points[p]));
    }
    const auto alpha = linalg::solve(a, rhs);
    if (!alpha) throw Error("mixed cell with singular edge matrix");
    for (std::size_t i = 0; i < d_; ++i) {
      const auto& l = lifted_[i];
      const auto [p, q] = chosen_[i];
      const Rational base = linalg::dot(l.points[p], *alpha) + l.heights[p];
      for (std::size_t r = 0; r < l.points.size(); ++r)
        if (r != p && r != q && linalg::dot(l.points[r], *alpha) + l.heights[r] == base) throw Degenerate{};
    }
    MixedCell cell;
    for (std::size_t i = 0; i < d_; ++i) cell.selection.push_back({chosen_[i].first, chosen_[i].second});
    cell.volume = abs(linalg::determinant(rows));
    cells_.push_back(std::move(cell));
  }

  const std::vector<LiftedSupport>& lifted_;
  std::size_t d_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> candidates_;
  std::vector<std::size_t> order_;
  std::vector<std::pair<std::size_t, std::size_t>> chosen_;
  std::vector<MixedCell> cells_;
};

/// Lower facets of the lifted support, i.e. the regular triangulation
/// induced by the heights. Throws Degenerate if a lower facet is not a simplex.
inline std::vector<MixedCell> lower_simplices(const LiftedSupport& l) {
  const std::size_t d = l.points[0].size();
  std::vector<Point> lifted;
  for (std::size_t i = 0; i < l.points.size(); ++i) {
    Point p = l.points[i];
    p.push_back(l.heights[i]);
    lifted.push_back(std::move(p));
  }
  const auto hull = convex_hull(lifted);
  std::vector<MixedCell> cells;
  if (hull.dim == static_cast<int>(d)) {
    // d+1 affinely independent points: the support is itself one simplex.
    std::vector<std::size_t> all(l.points.size());
    std::iota(all.begin(), all.end(), 0);
    cells.push_back({{all}, simplex_determinant(l.points, all)});
    return cells;
  }
  for (const auto& f : hull.facets) {
    if (f.normal[d] >= 0) continue;
    std::vector<std::size_t> on;
    for (std::size_t i = 0; i < lifted.size(); ++i)
      if (dot128(f.normal, lifted[i]) == f.offset) on.push_back(i);
    if (on.size() != d + 1) throw Degenerate{};
    cells.push_back({{on}, simplex_determinant(l.points, on)});
  }
  std::sort(cells.begin(), cells.end(), [](const MixedCell& a, const MixedCell& b) { return a.selection < b.selection; });
  return cells;
}

inline bool full_dimensional(const Support& s) {
  std::vector<std::size_t> idx(s.size());
  std::iota(idx.begin(), idx.end(), 0);
  return affine_dimension(s, idx) == static_cast<int>(s[0].size());
}

}  // namespace detail

/// Normalized mixed volume of conv(S_1), ..., conv(S_d) in Z^d, summed over
/// the mixed cells of a random regular mixed subdivision.
inline MixedVolumeResult mixed_volume(const std::vector<Support>& supports_in, std::uint64_t seed = 0) {
  const auto supports = detail::normalize_supports(supports_in);
  const std::size_t d = supports.size();
  const bool identical = std::all_of(supports.begin(), supports.end(), [&](const Support& s) { return s == supports[0]; });

  MixedCellCertificate cert;
  cert.dim = d;
  cert.seed = seed;
  cert.kind = identical ? MixedCellCertificate::Kind::Simplicial : MixedCellCertificate::Kind::Mixed;
  if (identical && !detail::full_dimensional(supports[0])) {
    cert.supports = detail::draw_lifting({supports[0]}, seed, 0, true);
    return {0, cert};
  }

  for (int attempt = 0; attempt < detail::kLiftingRetries; ++attempt) {
    auto lifted = detail::draw_lifting(identical ? std::vector<Support>{supports[0]} : supports, seed, attempt, false);
    try {
      std::vector<MixedCell> cells;
      if (identical) {
        cells = detail::lower_simplices(lifted[0]);
      } else {
        cells = detail::MixedCellSearch(lifted).run();
      }
      cert.attempt = attempt;
      cert.supports = std::move(lifted);
      cert.cells = std::move(cells);
      cert.total = 0;
      for (const auto& c : cert.cells) cert.total += c.volume;
      return {cert.total, cert};
    } catch (const detail::Degenerate&) {
      continue;
    }
  }
  throw Error("lifting stayed degenerate after " + std::to_string(detail::kLiftingRetries) + " draws");
}

struct CertificateCheck {
  bool ok = true;
  std::optional<std::size_t> bad_cell;
  std::string message;
  Integer total = 0;
};

/// Recomputes every cell from the lifted supports: the cell volume, that the
/// cell lies on the lower hull with no extra tight points, and the total.
inline CertificateCheck verify_certificate(const MixedCellCertificate& cert) {
  CertificateCheck out;
  auto fail = [&](std::optional<std::size_t> cell, std::string msg) {
    out.ok = false;
    out.bad_cell = cell;
    out.message = std::move(msg);
    return out;
  };
  const std::size_t d = cert.dim;
  for (const auto& l : cert.supports) {
    if (l.points.size() != l.heights.size()) return fail(std::nullopt, "heights do not match points");
    for (const auto& p : l.points)
      if (p.size() != d) return fail(std::nullopt, "point of wrong dimension");
  }
  const bool simplicial = cert.kind == MixedCellCertificate::Kind::Simplicial;
  if (simplicial ? cert.supports.size() != 1 : cert.supports.size() != d)
    return fail(std::nullopt, "wrong number of supports");

  for (std::size_t c = 0; c < cert.cells.size(); ++c) {
    const auto& cell = cert.cells[c];
    linalg::Mat a;
    linalg::Vec rhs;
    std::vector<linalg::IntVec> rows;
    // Each tight group is (support, indices that must lie on the cell).
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> tight;
    if (simplicial) {
      if (cell.selection.size() != 1 || cell.selection[0].size() != d + 1)
        return fail(c, "simplex cell needs d+1 vertices");
      tight.push_back({0, cell.selection[0]});
    } else {
      if (cell.selection.size() != d) return fail(c, "mixed cell needs one pair per support");
      for (std::size_t i = 0; i < d; ++i) {
        if (cell.selection[i].size() != 2) return fail(c, "mixed cell needs one pair per support");
        tight.push_back({i, cell.selection[i]});
      }
    }
    for (const auto& [i, idx] : tight) {
      const auto& l = cert.supports[i];
      for (auto k : idx)
        if (k >= l.points.size()) return fail(c, "cell refers to a missing point");
      for (std::size_t k = 1; k < idx.size(); ++k) {
        a.push_back(detail::diff(l.points[idx[0]], l.points[idx[k]]));
        rhs.push_back(Rational(static_cast<long>(l.heights[idx[k]] - l.heights[idx[0]])));
        rows.push_back(detail::sub(l.points[idx[k]], l.points[idx[0]]));
      }
    }
    const Integer vol = abs(linalg::determinant(rows));
    if (vol == 0) return fail(c, "cell is not full-dimensional");
    if (vol != cell.volume) return fail(c, "cell volume " + cell.volume.get_str() + " but determinant is " + vol.get_str());
    const auto alpha = linalg::solve(a, rhs);
    if (!alpha) return fail(c, "cell has no lifting normal");
    for (const auto& [i, idx] : tight) {
      const auto& l = cert.supports[i];
      const Rational base = linalg::dot(l.points[idx[0]], *alpha) + l.heights[idx[0]];
      for (std::size_t r = 0; r < l.points.size(); ++r) {
        if (std::find(idx.begin(), idx.end(), r) != idx.end()) continue;
        if (linalg::dot(l.points[r], *alpha) + l.heights[r] <= base) return fail(c, "cell is not a lower cell");
      }
    }
    out.total += vol;
  }
  if (out.total != cert.total) return fail(std::nullopt, "cells sum to " + out.total.get_str() + ", certificate says " + cert.total.get_str());
  return out;
}

// ---------------------------------------------------------------------------
// Inclusion-exclusion oracle

namespace oracle {

// The oracle keeps its own polytope machinery: facets come from double
// description on the cone of valid inequalities and volumes from a pulling
// recursion over the face lattice. Nothing here touches the placing code.

/// Extreme rays of the pointed cone {y : rows . y >= 0} by double
/// description, in integer arithmetic with zero sets kept as bitsets.
inline std::vector<std::vector<Integer>> cone_rays(const std::vector<std::vector<Integer>>& rows, std::size_t cols) {
  using Ray = std::vector<Integer>;
  const std::size_t words = (rows.size() + 63) / 64;
  using Bits = std::vector<std::uint64_t>;
  auto set_bit = [](Bits& b, std::size_t i) { b[i / 64] |= std::uint64_t{1} << (i % 64); };
  auto popcount = [](const Bits& b) {
    std::size_t c = 0;
    for (auto w : b) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  };
  auto normalize = [](Ray& r) {
    Integer g = 0;
    for (const auto& x : r) g = gcd(g, x);
    if (g > 1)
      for (auto& x : r) x /= g;
  };
  auto dot = [&](const std::vector<Integer>& a, const Ray& r) {
    Integer s = 0;
    for (std::size_t c = 0; c < cols; ++c) s += a[c] * r[c];
    return s;
  };

  std::vector<std::size_t> initial;
  {
    crnbkk::detail::SpanBuilder span(cols);
    for (std::size_t i = 0; i < rows.size() && initial.size() < cols; ++i) {
      linalg::Vec v;
      for (const auto& x : rows[i]) v.push_back(Rational(x));
      if (span.add(v)) initial.push_back(i);
    }
  }
  if (initial.size() != cols) throw Error("cone is not pointed");
  linalg::Mat square;
  for (auto i : initial) {
    linalg::Vec v;
    for (const auto& x : rows[i]) v.push_back(Rational(x));
    square.push_back(std::move(v));
  }
  std::vector<Ray> rays;
  std::vector<Bits> zeros;
  for (std::size_t c = 0; c < cols; ++c) {
    linalg::Vec e(cols, 0);
    e[c] = 1;
    const auto x = linalg::solve(square, e);
    Integer den = 1;
    for (const auto& q : *x) den = lcm(den, q.get_den());
    Ray r;
    for (const auto& q : *x) r.push_back(Integer(q * den));
    normalize(r);
    Bits z(words, 0);
    for (std::size_t k = 0; k < cols; ++k)
      if (k != c) set_bit(z, initial[k]);
    rays.push_back(std::move(r));
    zeros.push_back(std::move(z));
  }
  std::vector<bool> done(rows.size(), false);
  for (auto i : initial) done[i] = true;

  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (done[i]) continue;
    done[i] = true;
    std::vector<Integer> val(rays.size());
    std::vector<std::size_t> pos, neg;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      val[r] = dot(rows[i], rays[r]);
      if (val[r] > 0) pos.push_back(r);
      else if (val[r] < 0) neg.push_back(r);
      else set_bit(zeros[r], i);
    }
    if (neg.empty()) continue;
    std::vector<Ray> next_rays;
    std::vector<Bits> next_zeros;
    for (std::size_t r = 0; r < rays.size(); ++r)
      if (val[r] >= 0) {
        next_rays.push_back(rays[r]);
        next_zeros.push_back(zeros[r]);
      }
    Bits common(words);
    for (auto p : pos)
      for (auto n : neg) {
        for (std::size_t w = 0; w < words; ++w) common[w] = zeros[p][w] & zeros[n][w];
        if (popcount(common) + 2 < cols) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == n) continue;
          bool contains = true;
          for (std::size_t w = 0; w < words && contains; ++w) contains = (zeros[r][w] & common[w]) == common[w];
          if (contains) adjacent = false;
        }
        if (!adjacent) continue;
        Ray combo(cols);
        for (std::size_t c = 0; c < cols; ++c) combo[c] = val[p] * rays[n][c] - val[n] * rays[p][c];
        normalize(combo);
        Bits z = common;
        set_bit(z, i);
        next_rays.push_back(std::move(combo));
        next_zeros.push_back(std::move(z));
      }
    rays = std::move(next_rays);
    zeros = std::move(next_zeros);
  }
  return rays;
}

struct VPoly {
  std::vector<Point> vertices;
  std::size_t dim = 0;
  std::vector<std::pair<linalg::Vec, Rational>> facets;  // a.x <= b, ambient coordinates
};

inline VPoly make_vpoly(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  VPoly out;
  const auto frame = crnbkk::detail::affine_frame(pts);
  const std::size_t k = frame.coords.size();
  out.dim = k;
  if (k == 0) {
    out.vertices = {pts[0]};
    return out;
  }
  const std::size_t d = pts[0].size();
  // Rays (b, a) of {b - a.v >= 0 for all v} in projected coordinates.
  std::vector<std::vector<Integer>> rows;
  for (const auto& p : pts) {
    std::vector<Integer> r(k + 1);
    r[0] = 1;
    for (std::size_t j = 0; j < k; ++j) r[j + 1] = static_cast<long>(-p[frame.coords[j]]);
    rows.push_back(std::move(r));
  }
  std::vector<linalg::Vec> normals;
  for (const auto& ray : cone_rays(rows, k + 1)) {
    if (std::all_of(ray.begin() + 1, ray.end(), [](const Integer& x) { return x == 0; })) continue;
    linalg::Vec a(d, 0), proj;
    for (std::size_t j = 0; j < k; ++j) {
      a[frame.coords[j]] = Rational(ray[j + 1]);
      proj.push_back(Rational(ray[j + 1]));
    }
    normals.push_back(std::move(proj));
    out.facets.push_back({std::move(a), Rational(ray[0])});
  }
  for (const auto& p : pts) {
    linalg::Mat tight;
    for (std::size_t f = 0; f < normals.size(); ++f)
      if (linalg::dot(p, out.facets[f].first) == out.facets[f].second) tight.push_back(normals[f]);
    if (tight.size() >= k && linalg::rank(tight) == k) out.vertices.push_back(p);
  }
  return out;
}

inline VPoly minkowski(const VPoly& a, const VPoly& b) {
  std::vector<Point> sums;
  for (const auto& p : a.vertices)
    for (const auto& q : b.vertices) {
      Point s = p;
      for (std::size_t j = 0; j < s.size(); ++j) s[j] += q[j];
      sums.push_back(std::move(s));
    }
  return make_vpoly(std::move(sums));
}

/// Reduced echelon basis of the directions spanned by `pts`, with its pivot
/// columns. Elimination runs in 64-bit integers and only the few surviving
/// rows are converted to rationals.
inline std::pair<linalg::Mat, std::vector<std::size_t>> direction_basis(const std::vector<Point>& pts) {
  const std::size_t d = pts[0].size();
  std::vector<linalg::IntVec> rows;
  std::vector<std::size_t> pivots;
  bool overflow = false;
  for (std::size_t i = 1; i < pts.size() && rows.size() < d && !overflow; ++i) {
    auto v = crnbkk::detail::sub(pts[i], pts[0]);
    for (std::size_t r = 0; r < rows.size() && !overflow; ++r) {
      const auto c = pivots[r];
      if (v[c] == 0) continue;
      const std::int64_t f = v[c], g = rows[r][c];
      std::int64_t gg = 0;
      for (std::size_t j = 0; j < d; ++j) {
        std::int64_t x, y;
        overflow |= __builtin_mul_overflow(v[j], g, &x) || __builtin_mul_overflow(rows[r][j], f, &y) ||
                    __builtin_sub_overflow(x, y, &v[j]);
        gg = std::gcd(gg, v[j]);
      }
      if (gg > 1)
        for (auto& x : v) x /= gg;
    }
    std::size_t c = 0;
    while (c < d && v[c] == 0) ++c;
    if (c == d) continue;
    rows.push_back(std::move(v));
    pivots.push_back(c);
  }
  crnbkk::detail::SpanBuilder span(d);
  if (overflow) {
    for (std::size_t i = 1; i < pts.size(); ++i) span.add(linalg::to_rational(crnbkk::detail::sub(pts[i], pts[0])));
  } else {
    for (const auto& r : rows) span.add(linalg::to_rational(r));
  }
  return {span.rows(), span.sorted_pivots()};
}

/// Euclidean volume of a full-dimensional VPoly. Each face G carries the
/// volume of its projection onto the pivot coordinates of its direction
/// space; a facet F of G not containing the apex contributes the pyramid
/// h / (k |a_j|) times the volume of F projected along coordinate j.
inline Rational volume(const VPoly& p) {
  const std::size_t d = p.vertices.empty() ? 0 : p.vertices[0].size();
  if (p.dim != d || d == 0) return 0;
  const auto& V = p.vertices;
  const std::size_t words = (V.size() + 63) / 64;
  using Bits = std::vector<std::uint64_t>;
  auto has = [](const Bits& b, std::size_t i) { return (b[i / 64] >> (i % 64) & 1) != 0; };
  auto meet = [&](const Bits& a, const Bits& b) {
    Bits c(words);
    bool any = false;
    for (std::size_t w = 0; w < words; ++w) any |= (c[w] = a[w] & b[w]) != 0;
    return any ? c : Bits{};
  };

  std::vector<Bits> facets;
  {
    std::set<Bits> seen;
    for (const auto& [a, b] : p.facets) {
      Bits on(words, 0);
      for (std::size_t i = 0; i < V.size(); ++i)
        if (linalg::dot(V[i], a) == b) on[i / 64] |= std::uint64_t{1} << (i % 64);
      if (seen.insert(on).second) facets.push_back(std::move(on));
    }
  }

  struct Node {
    Bits verts;
    std::size_t first = 0;  // lowest vertex index, used as the apex
    linalg::Mat basis;      // reduced echelon rows: identity on the pivot columns
    std::vector<std::size_t> pivots;
    Rational vol;
  };
  std::deque<Node> nodes;
  std::map<Bits, std::size_t> index;
  auto add_node = [&](Bits b) {
    auto [it, fresh] = index.emplace(b, nodes.size());
    if (!fresh) return false;
    Node n;
    n.verts = std::move(b);
    std::vector<Point> members;
    for (std::size_t i = 0; i < V.size(); ++i)
      if (has(n.verts, i)) members.push_back(V[i]);
    n.first = 0;
    while (!has(n.verts, n.first)) ++n.first;
    std::tie(n.basis, n.pivots) = direction_basis(members);
    nodes.push_back(std::move(n));
    return true;
  };

  add_node(Bits(words, ~std::uint64_t{0}));
  std::vector<Bits> frontier;
  for (const auto& f : facets)
    if (add_node(f)) frontier.push_back(f);
  while (!frontier.empty()) {
    std::vector<Bits> next;
    for (const auto& x : frontier)
      for (const auto& y : facets) {
        auto c = meet(x, y);
        if (!c.empty() && add_node(c)) next.push_back(std::move(c));
      }
    frontier = std::move(next);
  }
  // The whole polytope's bitset has stray high bits; fix its apex.
  nodes[0].first = 0;

  std::vector<std::size_t> order(nodes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return nodes[a].pivots.size() < nodes[b].pivots.size(); });

  for (auto gi : order) {
    auto& g = nodes[gi];
    const std::size_t k = g.pivots.size();
    if (k == 0) {
      g.vol = 1;
      continue;
    }
    const Point& apex = V[g.first];
    Rational total = 0;
    std::set<std::size_t> used;
    for (const auto& y : facets) {
      const auto c = meet(g.verts, y);
      if (c.empty() || has(c, g.first)) continue;
      const auto it = index.find(c);
      if (it == index.end()) throw Error("oracle face lattice is not closed");
      const auto& f = nodes[it->second];
      if (f.pivots.size() + 1 != k || !used.insert(it->second).second) continue;
      // Facet normal inside g's pivot coordinates.
      linalg::Mat proj;
      for (const auto& row : f.basis) {
        linalg::Vec r;
        for (auto c2 : g.pivots) r.push_back(row[c2]);
        proj.push_back(std::move(r));
      }
      const auto ker = linalg::kernel(proj, k);
      if (ker.size() != 1) throw Error("oracle face lattice is inconsistent");
      const auto& a = ker[0];
      const Point& on = V[f.first];
      Rational h = 0;
      for (std::size_t j = 0; j < k; ++j) h += a[j] * static_cast<long>(on[g.pivots[j]] - apex[g.pivots[j]]);
      std::size_t jj = 0;
      while (a[jj] == 0) ++jj;
      // Volume of f projected onto g's pivots minus coordinate jj, from f's own projection.
      Rational jac = 1;
      if (k > 1) {
        linalg::Mat sq;
        for (const auto& row : f.basis) {
          linalg::Vec r;
          for (std::size_t j = 0; j < k; ++j)
            if (j != jj) r.push_back(row[g.pivots[j]]);
          sq.push_back(std::move(r));
        }
        jac = abs(linalg::determinant(sq));
      }
      total += abs(h) * jac * f.vol / abs(a[jj]);
    }
    g.vol = total / static_cast<long>(k);
  }
  return nodes[0].vol;
}

}  // namespace oracle

/// MV = sum over nonempty S of (-1)^{d-|S|} vol(sum_{i in S} P_i). Sums are
/// cached by the multiset of distinct supports involved.
inline Integer mixed_volume_oracle(const std::vector<Support>& supports_in, int max_dim = 12) {
  const auto supports = detail::normalize_supports(supports_in);
  const std::size_t d = supports.size();
  if (d > static_cast<std::size_t>(max_dim))
    throw GuardError("inclusion-exclusion oracle limited to dimension " + std::to_string(max_dim));

  std::vector<std::size_t> kind(d);
  std::vector<oracle::VPoly> hulls;
  {
    std::map<Support, std::size_t> ids;
    for (std::size_t i = 0; i < d; ++i) {
      auto [it, fresh] = ids.emplace(supports[i], hulls.size());
      if (fresh) hulls.push_back(oracle::make_vpoly(supports[i]));
      kind[i] = it->second;
    }
  }
  std::map<std::vector<int>, oracle::VPoly> sums;
  std::map<std::vector<int>, Rational> volumes;
  auto sum_of = [&](auto&& self, const std::vector<int>& key) -> const oracle::VPoly& {
    if (auto it = sums.find(key); it != sums.end()) return it->second;
    std::size_t last = key.size();
    while (key[last - 1] == 0) --last;
    std::vector<int> rest = key;
    --rest[last - 1];
    oracle::VPoly p = std::all_of(rest.begin(), rest.end(), [](int c) { return c == 0; })
                          ? hulls[last - 1]
                          : oracle::minkowski(self(self, rest), hulls[last - 1]);
    return sums.emplace(key, std::move(p)).first->second;
  };

  Rational mv = 0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << d); ++mask) {
    std::vector<int> key(hulls.size(), 0);
    int size = 0;
    for (std::size_t i = 0; i < d; ++i)
      if (mask >> i & 1) {
        ++key[kind[i]];
        ++size;
      }
    auto vit = volumes.find(key);
    if (vit == volumes.end()) vit = volumes.emplace(key, oracle::volume(sum_of(sum_of, key))).first;
    if ((d - static_cast<std::size_t>(size)) % 2 == 0)
      mv += vit->second;
    else
      mv -= vit->second;
  }
  if (mv.get_den() != 1) throw Error("inclusion-exclusion produced a non-integer mixed volume " + to_string(mv));
  return mv.get_num();
}

// ---------------------------------------------------------------------------
// Chen's conditions

enum class ChenTheorem { Thm1, Thm2, Cor1 };

inline std::string theorem_name(ChenTheorem t) {
  switch (t) {
    case ChenTheorem::Thm1: return "thm1";
    case ChenTheorem::Thm2: return "thm2";
    case ChenTheorem::Cor1: return "cor1";
  }
  return "?";
}

struct FaceDiagnostic {
  std::size_t group = 0;
  std::vector<Point> points;
  int dim = 0;
  std::vector<std::size_t> hits;  // |F cap S_i| per support of the group
  std::string condition;          // first satisfied condition, or "none"
  bool ok = true;
};

struct ChenReport {
  ChenTheorem theorem = ChenTheorem::Thm1;
  bool holds = true;
  std::vector<FaceDiagnostic> faces;
  std::optional<std::size_t> witness;  // index into faces of the first failure
  std::string violation;
};

namespace detail {

struct UnionHull {
  Support points;
  std::vector<std::vector<bool>> member;  // member[i][p]: point p is in S_i
  LatticePolytope hull;
};

inline UnionHull union_hull(const std::vector<Support>& supports) {
  UnionHull u;
  std::set<Point> all;
  for (const auto& s : supports) all.insert(s.begin(), s.end());
  u.points.assign(all.begin(), all.end());
  for (const auto& s : supports) {
    const std::set<Point> in(s.begin(), s.end());
    std::vector<bool> m;
    for (const auto& p : u.points) m.push_back(in.count(p) > 0);
    u.member.push_back(std::move(m));
  }
  u.hull = convex_hull(u.points);
  return u;
}

/// Positive-dimensional faces; `include_whole` adds the polytope itself.
inline std::vector<Face> positive_faces(const UnionHull& u, bool include_whole) {
  std::vector<Face> out;
  if (include_whole && u.hull.dim > 0) {
    Face whole{std::vector<std::size_t>(u.points.size()), u.hull.dim};
    std::iota(whole.points.begin(), whole.points.end(), 0);
    out.push_back(std::move(whole));
  }
  if (u.hull.dim > 0)
    for (auto& f : proper_faces(u.hull))
      if (f.dim > 0) out.push_back(std::move(f));
  return out;
}

inline FaceDiagnostic describe(const UnionHull& u, const Face& f, std::size_t group = 0) {
  FaceDiagnostic diag;
  diag.group = group;
  diag.dim = f.dim;
  for (auto p : f.points) diag.points.push_back(u.points[p]);
  for (const auto& m : u.member) {
    std::size_t c = 0;
    for (auto p : f.points) c += m[p] ? 1 : 0;
    diag.hits.push_back(c);
  }
  return diag;
}

inline bool meets_all(const FaceDiagnostic& f) {
  return std::all_of(f.hits.begin(), f.hits.end(), [](std::size_t h) { return h > 0; });
}

/// Condition (iii): the points of F cap S_i (i in I) lie in one coordinate
/// subspace of dimension |I| onto which F projects with dimension < |I|.
inline bool coordinate_condition(const UnionHull& u, const Face& f) {
  const std::size_t d = u.points[0].size();
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < u.member.size(); ++i)
    if (std::any_of(f.points.begin(), f.points.end(), [&](std::size_t p) { return u.member[i][p]; })) active.push_back(i);
  const std::size_t k = active.size();
  if (k == 0 || k > d) return false;
  std::vector<bool> used(d, false);
  for (auto i : active)
    for (auto p : f.points)
      if (u.member[i][p])
        for (std::size_t c = 0; c < d; ++c)
          if (u.points[p][c] != 0) used[c] = true;
  std::vector<std::size_t> base, spare;
  for (std::size_t c = 0; c < d; ++c) (used[c] ? base : spare).push_back(c);
  if (base.size() > k) return false;

  // Try every way of padding the used coordinates up to k.
  const std::size_t extra = k - base.size();
  std::vector<bool> pick(spare.size(), false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(extra), true);
  do {
    std::vector<std::size_t> coords = base;
    for (std::size_t s = 0; s < spare.size(); ++s)
      if (pick[s]) coords.push_back(spare[s]);
    std::vector<Point> proj;
    for (auto p : f.points) {
      Point q;
      for (auto c : coords) q.push_back(u.points[p][c]);
      proj.push_back(std::move(q));
    }
    std::vector<std::size_t> idx(proj.size());
    std::iota(idx.begin(), idx.end(), 0);
    if (affine_dimension(proj, idx) < static_cast<int>(k)) return true;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return false;
}

inline void finish_report(ChenReport& r) {
  for (std::size_t i = 0; i < r.faces.size(); ++i)
    if (!r.faces[i].ok) {
      r.holds = false;
      r.witness = i;
      return;
    }
}

}  // namespace detail

/// Every proper positive-dimensional face of conv(S_1 cup ... cup S_n) meets
/// every S_i.
inline ChenReport check_chen_thm1(const std::vector<Support>& supports) {
  ChenReport r;
  r.theorem = ChenTheorem::Thm1;
  const auto u = detail::union_hull(supports);
  for (const auto& f : detail::positive_faces(u, false)) {
    auto diag = detail::describe(u, f);
    diag.ok = detail::meets_all(diag);
    diag.condition = diag.ok ? "meets-all" : "none";
    r.faces.push_back(std::move(diag));
  }
  detail::finish_report(r);
  if (!r.holds) r.violation = "face misses some support";
  return r;
}

/// Every positive-dimensional face satisfies (i) meets every S_i, (ii) meets
/// some S_i in exactly one point, or (iii) the coordinate-subspace condition.
inline ChenReport check_chen_thm2(const std::vector<Support>& supports) {
  ChenReport r;
  r.theorem = ChenTheorem::Thm2;
  const auto u = detail::union_hull(supports);
  for (const auto& f : detail::positive_faces(u, true)) {
    auto diag = detail::describe(u, f);
    if (detail::meets_all(diag))
      diag.condition = "i";
    else if (std::find(diag.hits.begin(), diag.hits.end(), 1u) != diag.hits.end())
      diag.condition = "ii";
    else if (detail::coordinate_condition(u, f))
      diag.condition = "iii";
    else
      diag.condition = "none";
    diag.ok = diag.condition != "none";
    r.faces.push_back(std::move(diag));
  }
  detail::finish_report(r);
  if (!r.holds) r.violation = "face satisfies none of (i), (ii), (iii)";
  return r;
}

/// Per group, every positive-dimensional face of the hull of the group's
/// union that meets one member in two or more points meets all members.
inline ChenReport check_chen_cor1(const std::vector<std::vector<Support>>& groups) {
  ChenReport r;
  r.theorem = ChenTheorem::Cor1;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) throw Error("empty group in semi-mixed reduction");
    const auto u = detail::union_hull(groups[g]);
    for (const auto& f : detail::positive_faces(u, true)) {
      auto diag = detail::describe(u, f, g);
      const bool heavy = std::any_of(diag.hits.begin(), diag.hits.end(), [](std::size_t h) { return h >= 2; });
      if (!heavy) {
        diag.condition = "vacuous";
      } else {
        diag.ok = detail::meets_all(diag);
        diag.condition = diag.ok ? "meets-all" : "none";
      }
      r.faces.push_back(std::move(diag));
    }
  }
  detail::finish_report(r);
  if (!r.holds) r.violation = "face meets one member in two points but misses another";
  return r;
}

/// Replaces each group by k_i copies of the hull of its union (as a support).
inline std::vector<Support> semi_mixed_supports(const std::vector<std::vector<Support>>& groups) {
  std::vector<Support> out;
  for (const auto& g : groups) {
    std::set<Point> all;
    for (const auto& s : g) all.insert(s.begin(), s.end());
    for (std::size_t k = 0; k < g.size(); ++k) out.emplace_back(all.begin(), all.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Closed forms

struct FamilyFormulas {
  Integer bezout;
  Integer mv;
  Integer ssd;
  bool ssd_conjectured = false;
};

inline FamilyFormulas family_formulas(Family family, int n) {
  FamilyFormulas f;
  switch (family) {
    case Family::CellDeath:
      if (n < 2) throw Error("CD_n needs n >= 2");
      f.bezout = n;
      f.mv = n - 2;
      f.ssd = n;
      return f;
    case Family::Edelstein:
      if (n < 1) throw Error("E_n needs n >= 1");
      mpz_ui_pow_ui(f.bezout.get_mpz_t(), 2, static_cast<unsigned long>(n + 1));
      f.mv = 3;
      f.ssd = 3;
      return f;
    case Family::Phosphorylation:
      if (n < 1) throw Error("PC_n needs n >= 1");
      mpz_ui_pow_ui(f.bezout.get_mpz_t(), 2, static_cast<unsigned long>(3 * n + 1));
      f.mv = (n + 1) * (n + 4) / 2 - 1;
      f.ssd = 2 * n + 1;
      f.ssd_conjectured = true;
      return f;
    case Family::None:
      break;
  }
  throw Error("closed forms exist only for the cd, e and pc families");
}

/// Reduced steady-state system of a family member under sampled parameters.
inline PolySystem family_system(Family family, int n, std::uint64_t seed) {
  const auto net = generate(family, n);
  return drop_dependent(mass_action_system(net, sample_parameters(net, seed)), family);
}

}  // namespace crnbkk
