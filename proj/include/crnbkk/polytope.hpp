#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "crnbkk/crn.hpp"
#include "crnbkk/linalg.hpp"
#include "crnbkk/lp.hpp"
#include "crnbkk/rational.hpp"

namespace crnbkk {

using Point = linalg::IntVec;

/// normal . x <= offset for facets, normal . x == offset for equations.
struct Halfspace {
  linalg::IntVec normal;
  std::int64_t offset = 0;
  auto operator<=>(const Halfspace&) const = default;
};

/// Simplices are sorted index lists into an accompanying point list.
struct Triangulation {
  std::vector<std::size_t> order;
  std::vector<std::vector<std::size_t>> simplices;
};

struct LatticePolytope {
  std::vector<Point> points;
  std::vector<std::size_t> vertices;
  std::vector<Halfspace> facets;
  std::vector<Halfspace> equations;
  int dim = -1;
  std::size_t ambient_dim = 0;
  /// Placing triangulation in point order, produced while building the hull.
  Triangulation triangulation;

  std::vector<Point> vertex_points() const {
    std::vector<Point> out;
    for (auto i : vertices) out.push_back(points[i]);
    std::sort(out.begin(), out.end());
    return out;
  }
};

/// Inequality description; bounded by assumption.
struct HPolytope {
  std::size_t dim = 0;
  std::vector<Halfspace> inequalities;
  std::vector<Halfspace> equations;
};

inline bool same_polytope(const LatticePolytope& a, const LatticePolytope& b) {
  return a.ambient_dim == b.ambient_dim && a.vertex_points() == b.vertex_points();
}

namespace detail {

inline __int128 dot128(const Point& a, const Point& b) {
  __int128 s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<__int128>(a[i]) * b[i];
  return s;
}

inline Point sub(const Point& a, const Point& b) {
  Point d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

/// Row echelon basis of a growing linear span.
class SpanBuilder {
 public:
  explicit SpanBuilder(std::size_t dim) : dim_(dim) {}

  /// Returns the reduced vector; zero iff `v` already lies in the span.
  linalg::Vec reduce(linalg::Vec v) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const auto c = pivots_[r];
      if (v[c] == 0) continue;
      const Rational f = v[c];
      for (std::size_t j = 0; j < dim_; ++j) v[j] -= f * rows_[r][j];
    }
    return v;
  }
  bool contains(const linalg::Vec& v) const {
    const auto r = reduce(v);
    return std::all_of(r.begin(), r.end(), [](const Rational& x) { return x == 0; });
  }
  bool add(const linalg::Vec& v) {
    auto r = reduce(v);
    std::size_t c = 0;
    while (c < dim_ && r[c] == 0) ++c;
    if (c == dim_) return false;
    const Rational inv = 1 / r[c];
    for (auto& x : r) x *= inv;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (rows_[i][c] == 0) continue;
      const Rational f = rows_[i][c];
      for (std::size_t j = 0; j < dim_; ++j) rows_[i][j] -= f * r[j];
    }
    rows_.push_back(std::move(r));
    pivots_.push_back(c);
    return true;
  }
  std::size_t rank() const { return rows_.size(); }
  std::vector<std::size_t> sorted_pivots() const {
    auto p = pivots_;
    std::sort(p.begin(), p.end());
    return p;
  }
  const linalg::Mat& rows() const { return rows_; }

 private:
  std::size_t dim_;
  linalg::Mat rows_;
  std::vector<std::size_t> pivots_;
};

/// Affine span of a point set: a base point, the coordinates on which the
/// projection is injective, and integer equations cutting out the span.
struct AffineFrame {
  std::size_t base = 0;
  std::vector<std::size_t> coords;
  std::vector<Halfspace> equations;
};

inline AffineFrame affine_frame(const std::vector<Point>& pts) {
  AffineFrame frame;
  const std::size_t d = pts[0].size();
  SpanBuilder span(d);
  for (std::size_t i = 1; i < pts.size(); ++i) span.add(linalg::to_rational(sub(pts[i], pts[0])));
  frame.coords = span.sorted_pivots();
  linalg::Mat rows = span.rows();
  for (const auto& w : linalg::kernel(rows, d)) {
    Halfspace h{linalg::primitive(w), 0};
    h.offset = static_cast<std::int64_t>(dot128(h.normal, pts[0]));
    frame.equations.push_back(std::move(h));
  }
  return frame;
}

/// Beneath-beyond placing in a full-dimensional coordinate space, with
/// dimension raising while the placed points span a proper affine subspace.
/// Boundary faces carry an outward normal inside the current span.
class Placer {
 public:
  struct Face {
    Point normal;
    std::int64_t offset = 0;
    std::size_t opposite = 0;
  };

  explicit Placer(const std::vector<Point>& pts) : pts_(pts), span_(pts.empty() ? 0 : pts[0].size()) {}

  /// Places point i; returns false when it adds nothing to the hull.
  bool place(std::size_t i) {
    const Point& p = pts_[i];
    if (!started_) {
      started_ = true;
      base_ = i;
      simplices_.push_back({i});
      return true;
    }
    const linalg::Vec dir = linalg::to_rational(sub(p, pts_[base_]));
    if (!span_.contains(dir)) {
      raise(i, dir);
      return true;
    }
    std::vector<std::vector<std::size_t>> visible;
    for (const auto& [face, f] : boundary_)
      if (dot128(f.normal, p) > f.offset) visible.push_back(face);
    if (visible.empty()) return false;

    std::map<std::vector<std::size_t>, std::pair<int, std::size_t>> fresh;
    for (const auto& face : visible) {
      boundary_.erase(face);
      auto simplex = face;
      simplex.push_back(i);
      std::sort(simplex.begin(), simplex.end());
      simplices_.push_back(simplex);
      for (std::size_t drop = 0; drop < face.size(); ++drop) {
        std::vector<std::size_t> g;
        for (std::size_t t = 0; t < face.size(); ++t)
          if (t != drop) g.push_back(face[t]);
        g.push_back(i);
        std::sort(g.begin(), g.end());
        auto& slot = fresh[g];
        ++slot.first;
        slot.second = face[drop];
      }
    }
    for (auto& [g, info] : fresh)
      if (info.first == 1) boundary_[g] = make_face(g, info.second);
    return true;
  }

  std::size_t dim() const { return span_.rank(); }
  const std::vector<std::vector<std::size_t>>& simplices() const { return simplices_; }
  const std::map<std::vector<std::size_t>, Face>& boundary() const { return boundary_; }

 private:
  void raise(std::size_t i, const linalg::Vec& dir) {
    const std::size_t k = span_.rank();
    std::map<std::vector<std::size_t>, std::size_t> faces;  // face -> opposite
    for (const auto& s : simplices_) faces[s] = i;
    if (k == 0) {
      faces[{i}] = simplices_[0][0];
    } else {
      for (const auto& [face, f] : boundary_) {
        auto g = face;
        g.push_back(i);
        std::sort(g.begin(), g.end());
        faces[g] = f.opposite;
      }
    }
    for (auto& s : simplices_) {
      s.push_back(i);
      std::sort(s.begin(), s.end());
    }
    span_.add(dir);
    basis_.push_back(dir);
    boundary_.clear();
    for (const auto& [face, opp] : faces) boundary_[face] = make_face(face, opp);
  }

  Face make_face(const std::vector<std::size_t>& face, std::size_t opp) const {
    const std::size_t k = basis_.size();
    const Point& f0 = pts_[face[0]];
    linalg::Mat m;
    for (std::size_t j = 1; j < face.size(); ++j) {
      const auto e = sub(pts_[face[j]], f0);
      linalg::Vec row(k);
      for (std::size_t b = 0; b < k; ++b) row[b] = linalg::dot(e, basis_[b]);
      m.push_back(std::move(row));
    }
    const auto ker = linalg::kernel(m, k);
    if (ker.size() != 1) throw Error("placing: degenerate boundary face");
    linalg::Vec a(pts_[0].size(), 0);
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t j = 0; j < a.size(); ++j) a[j] += ker[0][b] * basis_[b][j];
    Face out;
    out.normal = linalg::primitive(a);
    out.opposite = opp;
    const __int128 side = dot128(out.normal, sub(pts_[opp], f0));
    if (side == 0) throw Error("placing: opposite vertex lies on face hyperplane");
    if (side > 0)
      for (auto& x : out.normal) x = -x;
    out.offset = static_cast<std::int64_t>(dot128(out.normal, f0));
    return out;
  }

  const std::vector<Point>& pts_;
  SpanBuilder span_;
  linalg::Mat basis_;
  bool started_ = false;
  std::size_t base_ = 0;
  std::vector<std::vector<std::size_t>> simplices_;
  std::map<std::vector<std::size_t>, Face> boundary_;
};

inline std::vector<Point> project(const std::vector<Point>& pts, const std::vector<std::size_t>& coords) {
  std::vector<Point> out;
  out.reserve(pts.size());
  for (const auto& p : pts) {
    Point q;
    for (auto c : coords) q.push_back(p[c]);
    out.push_back(std::move(q));
  }
  return out;
}

inline void check_points(const std::vector<Point>& pts) {
  if (pts.empty()) throw Error("polytope needs at least one point");
  for (const auto& p : pts)
    if (p.size() != pts[0].size()) throw Error("points have different dimensions");
}

}  // namespace detail

/// Runs the placing procedure over `order` (default: input order). Points
/// that are not beyond any boundary face of the current hull are skipped.
inline Triangulation placing_triangulation(const std::vector<Point>& pts, std::vector<std::size_t> order = {}) {
  detail::check_points(pts);
  if (order.empty()) {
    order.resize(pts.size());
    std::iota(order.begin(), order.end(), 0);
  }
  const auto frame = detail::affine_frame(pts);
  const auto proj = detail::project(pts, frame.coords);
  detail::Placer placer(proj);
  Triangulation t;
  for (auto i : order) {
    if (i >= pts.size()) throw Error("placing order refers to a missing point");
    if (placer.place(i)) t.order.push_back(i);
  }
  t.simplices = placer.simplices();
  return t;
}

/// Exact convex hull. For lower-dimensional inputs the facets are computed
/// inside the affine span and reported with zero weight on the coordinates
/// eliminated by the span equations.
inline LatticePolytope convex_hull(const std::vector<Point>& pts) {
  detail::check_points(pts);
  LatticePolytope P;
  P.points = pts;
  P.ambient_dim = pts[0].size();
  const auto frame = detail::affine_frame(pts);
  P.equations = frame.equations;
  P.dim = static_cast<int>(frame.coords.size());
  const auto proj = detail::project(pts, frame.coords);
  detail::Placer placer(proj);
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (placer.place(i)) P.triangulation.order.push_back(i);
  P.triangulation.simplices = placer.simplices();

  std::set<std::pair<Point, std::int64_t>> facets;
  for (const auto& [face, f] : placer.boundary()) facets.insert({f.normal, f.offset});
  std::vector<std::pair<Point, std::int64_t>> projected(facets.begin(), facets.end());
  for (const auto& [normal, offset] : projected) {
    Halfspace h{Point(P.ambient_dim, 0), offset};
    for (std::size_t j = 0; j < frame.coords.size(); ++j) h.normal[frame.coords[j]] = normal[j];
    P.facets.push_back(std::move(h));
  }

  if (P.dim == 0) {
    P.vertices = {0};
    return P;
  }
  std::set<Point> seen;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (seen.count(pts[i])) continue;
    linalg::Mat tight;
    for (const auto& [normal, offset] : projected)
      if (detail::dot128(normal, proj[i]) == offset) tight.push_back(linalg::to_rational(normal));
    if (tight.size() >= static_cast<std::size_t>(P.dim) && linalg::rank(tight) == static_cast<std::size_t>(P.dim)) {
      P.vertices.push_back(i);
      seen.insert(pts[i]);
    }
  }
  return P;
}

inline std::vector<Point> vertex_sums(const LatticePolytope& a, const LatticePolytope& b) {
  std::set<Point> sums;
  for (auto i : a.vertices)
    for (auto j : b.vertices) {
      Point s(a.ambient_dim);
      for (std::size_t k = 0; k < s.size(); ++k) s[k] = a.points[i][k] + b.points[j][k];
      sums.insert(std::move(s));
    }
  return {sums.begin(), sums.end()};
}

inline LatticePolytope minkowski_sum(const LatticePolytope& a, const LatticePolytope& b) {
  if (a.ambient_dim != b.ambient_dim) throw Error("Minkowski sum of polytopes in different dimensions");
  return convex_hull(vertex_sums(a, b));
}

/// |det| of the edge matrix of each simplex, i.e. d! times its volume, for
/// full-dimensional simplices in the ambient space.
inline Integer simplex_determinant(const std::vector<Point>& pts, const std::vector<std::size_t>& s) {
  std::vector<linalg::IntVec> rows;
  for (std::size_t j = 1; j < s.size(); ++j) rows.push_back(detail::sub(pts[s[j]], pts[s[0]]));
  if (rows.empty() || rows.size() != pts[0].size()) return 0;
  return abs(linalg::determinant(rows));
}

/// Normalized volume of a simplex relative to the lattice of its affine span.
inline Integer simplex_relative_volume(const std::vector<Point>& pts, const std::vector<std::size_t>& s) {
  std::vector<linalg::IntVec> rows;
  for (std::size_t j = 1; j < s.size(); ++j) rows.push_back(detail::sub(pts[s[j]], pts[s[0]]));
  if (rows.empty()) return 1;
  return linalg::lattice_index(rows);
}

inline Integer factorial(std::size_t n) {
  Integer f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<unsigned long>(i);
  return f;
}

/// Volume in the ambient space; zero for lower-dimensional polytopes.
inline Rational euclidean_volume(const LatticePolytope& p) {
  if (p.dim != static_cast<int>(p.ambient_dim)) return 0;
  Integer sum = 0;
  for (const auto& s : p.triangulation.simplices) sum += simplex_determinant(p.points, s);
  Rational v(sum, factorial(p.ambient_dim));
  v.canonicalize();
  return v;
}

/// d! vol in the lattice of the affine span (d = dim p).
inline Integer relative_normalized_volume(const LatticePolytope& p) {
  Integer sum = 0;
  for (const auto& s : p.triangulation.simplices) sum += simplex_relative_volume(p.points, s);
  return sum;
}

/// Euclidean volume inside the affine span, measured against its lattice.
inline Rational relative_euclidean_volume(const LatticePolytope& p) {
  Rational v(relative_normalized_volume(p), factorial(static_cast<std::size_t>(std::max(p.dim, 0))));
  v.canonicalize();
  return v;
}

struct UnimodularityReport {
  bool unimodular = true;
  std::optional<std::size_t> first_bad;
  Integer bad_volume = 0;
};

inline UnimodularityReport is_unimodular(const std::vector<Point>& pts, const Triangulation& t) {
  UnimodularityReport r;
  for (std::size_t i = 0; i < t.simplices.size(); ++i) {
    const auto v = simplex_relative_volume(pts, t.simplices[i]);
    if (v != 1) {
      r.unimodular = false;
      r.first_bad = i;
      r.bad_volume = v;
      return r;
    }
  }
  return r;
}

/// Adds each apex to every simplex in turn. The apexes are appended to the
/// point list; each must lie outside the affine span reached so far.
inline std::pair<std::vector<Point>, Triangulation> cone_lift(std::vector<Point> pts, Triangulation t,
                                                             const std::vector<Point>& apexes) {
  detail::check_points(pts);
  detail::SpanBuilder span(pts[0].size());
  for (const auto& s : t.simplices)
    for (auto v : s) span.add(linalg::to_rational(detail::sub(pts[v], pts[t.simplices[0][0]])));
  for (const auto& a : apexes) {
    if (a.size() != pts[0].size()) throw Error("apex has wrong dimension");
    if (!span.add(linalg::to_rational(detail::sub(a, pts[t.simplices[0][0]]))))
      throw Error("cone_lift: apex lies in the current affine hull");
    pts.push_back(a);
    const std::size_t idx = pts.size() - 1;
    for (auto& s : t.simplices) s.push_back(idx);
    t.order.push_back(idx);
  }
  return {std::move(pts), std::move(t)};
}

/// Reindexes points into a larger space: coordinate i goes to positions[i].
inline std::vector<Point> embed(const std::vector<Point>& pts, std::size_t dim,
                                const std::vector<std::size_t>& positions) {
  std::vector<Point> out;
  for (const auto& p : pts) {
    if (p.size() != positions.size()) throw Error("embed: position map has wrong length");
    Point q(dim, 0);
    for (std::size_t i = 0; i < p.size(); ++i) q.at(positions[i]) = p[i];
    out.push_back(std::move(q));
  }
  return out;
}

/// True when conv(s) and conv(t) meet in the common face conv(s n t): some
/// hyperplane contains the shared vertices and strictly separates the rest.
inline bool intersect_properly(const std::vector<Point>& pts, const std::vector<std::size_t>& s,
                               const std::vector<std::size_t>& t) {
  const std::size_t d = pts[0].size();
  std::vector<lp::Constraint> cons;
  auto row = [&](std::size_t v) {
    linalg::Vec r = linalg::to_rational(pts[v]);
    r.push_back(-1);
    return r;
  };
  for (auto v : s) {
    if (std::binary_search(t.begin(), t.end(), v)) cons.push_back(lp::eq(row(v), 0));
    else {
      auto r = row(v);
      for (auto& x : r) x = -x;
      cons.push_back(lp::ge(r, 1));
    }
  }
  for (auto v : t)
    if (!std::binary_search(s.begin(), s.end(), v)) cons.push_back(lp::ge(row(v), 1));
  return lp::feasible(cons, d + 1);
}

/// First pair of simplices that fail to meet in a common face, if any.
inline std::optional<std::pair<std::size_t, std::size_t>> check_face_to_face(const std::vector<Point>& pts,
                                                                             const Triangulation& t) {
  for (std::size_t i = 0; i < t.simplices.size(); ++i)
    for (std::size_t j = i + 1; j < t.simplices.size(); ++j)
      if (!intersect_properly(pts, t.simplices[i], t.simplices[j])) return std::make_pair(i, j);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// H to V

namespace detail {

/// Double description over the homogenized cone {(t, x) : t b - a x >= 0, t >= 0}.
inline std::vector<linalg::Vec> extreme_rays(const linalg::Mat& rows, std::size_t cols) {
  std::vector<std::size_t> initial;
  {
    SpanBuilder span(cols);
    for (std::size_t i = 0; i < rows.size() && initial.size() < cols; ++i)
      if (span.add(rows[i])) initial.push_back(i);
  }
  if (initial.size() != cols) throw Error("H-representation does not define a pointed cone");
  linalg::Mat square;
  for (auto i : initial) square.push_back(rows[i]);
  // Columns of the inverse are the initial rays.
  std::vector<linalg::Vec> rays;
  for (std::size_t c = 0; c < cols; ++c) {
    linalg::Vec e(cols, 0);
    e[c] = 1;
    auto x = linalg::solve(square, e);
    rays.push_back(std::move(*x));
  }
  std::vector<std::size_t> added = initial;
  std::vector<bool> in_added(rows.size(), false);
  for (auto i : initial) in_added[i] = true;

  auto zero_set = [&](const linalg::Vec& r) {
    std::vector<std::size_t> z;
    for (auto i : added)
      if (linalg::dot(rows[i], r) == 0) z.push_back(i);
    return z;
  };

  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (in_added[i]) continue;
    std::vector<Rational> val(rays.size());
    std::vector<std::size_t> pos, neg, zero;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      val[r] = linalg::dot(rows[i], rays[r]);
      (val[r] > 0 ? pos : val[r] < 0 ? neg : zero).push_back(r);
    }
    if (neg.empty()) {
      added.push_back(i);
      in_added[i] = true;
      continue;
    }
    std::vector<std::vector<std::size_t>> zs(rays.size());
    for (std::size_t r = 0; r < rays.size(); ++r) zs[r] = zero_set(rays[r]);
    std::vector<linalg::Vec> next;
    for (auto r : pos) next.push_back(rays[r]);
    for (auto r : zero) next.push_back(rays[r]);
    for (auto p : pos)
      for (auto n : neg) {
        std::vector<std::size_t> common;
        std::set_intersection(zs[p].begin(), zs[p].end(), zs[n].begin(), zs[n].end(), std::back_inserter(common));
        if (common.size() + 2 < cols) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == n) continue;
          if (std::includes(zs[r].begin(), zs[r].end(), common.begin(), common.end())) adjacent = false;
        }
        if (!adjacent) continue;
        linalg::Vec combo(cols);
        for (std::size_t c = 0; c < cols; ++c) combo[c] = val[p] * rays[n][c] - val[n] * rays[p][c];
        next.push_back(std::move(combo));
      }
    rays = std::move(next);
    added.push_back(i);
    std::sort(added.begin(), added.end());
    in_added[i] = true;
  }
  return rays;
}

}  // namespace detail

/// Vertices of a bounded H-polytope by double description (independent of
/// the hull code). Sorted, duplicates removed.
inline std::vector<Point> vertices_from_hrep(const HPolytope& h) {
  const std::size_t d = h.dim;
  linalg::Mat rows;
  auto homog = [&](const Halfspace& s, int sign) {
    if (s.normal.size() != d) throw Error("inequality has wrong dimension");
    linalg::Vec r(d + 1);
    r[0] = Rational(static_cast<long>(s.offset)) * sign;
    for (std::size_t j = 0; j < d; ++j) r[j + 1] = Rational(static_cast<long>(-s.normal[j])) * sign;
    return r;
  };
  {
    linalg::Vec t(d + 1, 0);
    t[0] = 1;
    rows.push_back(t);
  }
  for (const auto& s : h.equations) {
    rows.push_back(homog(s, 1));
    rows.push_back(homog(s, -1));
  }
  for (const auto& s : h.inequalities) rows.push_back(homog(s, 1));
  std::set<Point> out;
  for (const auto& r : detail::extreme_rays(rows, d + 1)) {
    if (r[0] == 0) throw Error("H-representation is unbounded");
    Point p(d);
    for (std::size_t j = 0; j < d; ++j) {
      const Rational x = r[j + 1] / r[0];
      if (x.get_den() != 1) throw Error("H-polytope has a non-lattice vertex");
      p[j] = to_int64(x);
    }
    out.insert(std::move(p));
  }
  return {out.begin(), out.end()};
}

/// Facets of `p` as a canonical set, for comparison with an H-description.
inline std::set<Halfspace> facet_set(const LatticePolytope& p) { return {p.facets.begin(), p.facets.end()}; }
inline std::set<Halfspace> facet_set(const HPolytope& h) { return {h.inequalities.begin(), h.inequalities.end()}; }

// ---------------------------------------------------------------------------
// Faces

struct Face {
  std::vector<std::size_t> points;  // indices of input points lying on the face
  int dim = 0;
};

inline int affine_dimension(const std::vector<Point>& pts, const std::vector<std::size_t>& idx) {
  if (idx.empty()) return -1;
  detail::SpanBuilder span(pts[0].size());
  for (auto i : idx) span.add(linalg::to_rational(detail::sub(pts[i], pts[idx[0]])));
  return static_cast<int>(span.rank());
}

/// All nonempty proper faces, generated from facets by intersection.
inline std::vector<Face> proper_faces(const LatticePolytope& p, int max_dim = 12) {
  if (p.dim > max_dim) throw GuardError("face enumeration limited to dimension " + std::to_string(max_dim));
  std::set<std::vector<std::size_t>> found;
  std::vector<std::vector<std::size_t>> frontier;
  for (const auto& f : p.facets) {
    std::vector<std::size_t> on;
    for (std::size_t i = 0; i < p.points.size(); ++i)
      if (detail::dot128(f.normal, p.points[i]) == f.offset) on.push_back(i);
    if (found.insert(on).second) frontier.push_back(on);
  }
  const std::vector<std::vector<std::size_t>> facets(found.begin(), found.end());
  while (!frontier.empty()) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& a : frontier)
      for (const auto& b : facets) {
        std::vector<std::size_t> c;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(c));
        if (!c.empty() && found.insert(c).second) next.push_back(std::move(c));
      }
    frontier = std::move(next);
  }
  std::vector<Face> out;
  for (const auto& f : found) out.push_back({f, affine_dimension(p.points, f)});
  std::sort(out.begin(), out.end(), [](const Face& a, const Face& b) {
    return a.dim != b.dim ? a.dim > b.dim : a.points < b.points;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Phosphorylation polytopes

/// Newton polytope points V_n in R^{3n+3}: the origin, all unit vectors,
/// E + S_j (j = 0..n-1) and F + S_j (j = 1..n), coordinates in species order.
inline std::vector<Point> vn_points(int n) {
  if (n < 1) throw Error("V_n needs n >= 1");
  const std::size_t d = static_cast<std::size_t>(3 * n + 3);
  std::vector<Point> out;
  out.emplace_back(d, 0);
  for (std::size_t i = 0; i < d; ++i) {
    Point e(d, 0);
    e[i] = 1;
    out.push_back(e);
  }
  for (int j = 0; j < n; ++j) {
    Point e(d, 0);
    e[pc_enzyme_e()] = 1;
    e[pc_substrate(j)] = 1;
    out.push_back(e);
  }
  for (int j = 1; j <= n; ++j) {
    Point e(d, 0);
    e[pc_enzyme_f()] = 1;
    e[pc_substrate(j)] = 1;
    out.push_back(e);
  }
  return out;
}

inline Halfspace le_one(std::size_t dim, const std::vector<std::size_t>& coords) {
  Halfspace h{Point(dim, 0), 1};
  for (auto c : coords) h.normal[c] += 1;
  return h;
}

inline void add_nonnegativity(HPolytope& h) {
  for (std::size_t i = 0; i < h.dim; ++i) {
    Halfspace s{Point(h.dim, 0), 0};
    s.normal[i] = -1;
    h.inequalities.push_back(s);
  }
}

/// The four multivariate inequalities and nonnegativity describing Q_n,
/// transcribed with 1-based coordinates x_1..x_{3n+3}.
inline HPolytope hrep_qn(int n) {
  if (n < 2) throw Error("hrep_qn needs n >= 2");
  const std::size_t d = static_cast<std::size_t>(3 * n + 3);
  auto x = [](int i) { return static_cast<std::size_t>(i - 1); };
  std::vector<std::size_t> a{x(1), x(3), x(4)}, middle;
  for (int i = 6; i <= 3 * n + 3; ++i) a.push_back(x(i));
  for (int i = 2; i <= n; ++i) {
    middle.push_back(x(3 * i));
    middle.push_back(x(3 * i + 1));
  }
  auto with = [&](std::initializer_list<int> extra) {
    auto v = middle;
    for (int i : extra) v.push_back(x(i));
    return v;
  };
  HPolytope h;
  h.dim = d;
  h.inequalities = {le_one(d, a), le_one(d, with({1, 3, 5, 3 * n + 3})), le_one(d, with({2, 3, 5, 3 * n + 3})),
                    le_one(d, with({2, 3, 3 * n + 2, 3 * n + 3}))};
  add_nonnegativity(h);
  return h;
}

/// Coordinates of Q_n kept by the projection to K_n: S_0, E, S_1, F, S_2..S_n.
inline std::vector<std::size_t> kn_coordinates(int n) {
  std::vector<std::size_t> c{pc_substrate(0), pc_enzyme_e(), pc_substrate(1), pc_enzyme_f()};
  for (int j = 2; j <= n; ++j) c.push_back(pc_substrate(j));
  return c;
}

/// 0-based coordinate of S_j in K_n.
inline std::size_t kn_substrate(int j) { return j == 0 ? 0 : j == 1 ? 2 : static_cast<std::size_t>(j + 2); }

/// Projects V_n to K_n, discarding the unit vectors of the removed X_j and
/// Y_j coordinates. Output order: v_0, v_1..v_{n+3}, E-type, F-type.
inline std::vector<Point> project_kn(const std::vector<Point>& vn, int n) {
  const std::size_t d = static_cast<std::size_t>(3 * n + 3);
  if (vn.size() != static_cast<std::size_t>(5 * n + 4)) throw Error("project_kn: expected 5n+4 points");
  const auto keep = kn_coordinates(n);
  std::vector<bool> kept(d, false);
  for (auto c : keep) kept[c] = true;
  std::vector<Point> out;
  for (const auto& p : vn) {
    if (p.size() != d) throw Error("project_kn: point has wrong dimension");
    int dropped_mass = 0, kept_mass = 0;
    for (std::size_t i = 0; i < d; ++i) {
      if (p[i] < 0 || p[i] > 1) throw Error("project_kn: input is not a 0/1 configuration");
      (kept[i] ? kept_mass : dropped_mass) += static_cast<int>(p[i]);
    }
    if (dropped_mass > 0 && kept_mass > 0) throw Error("project_kn: point mixes projected and kept coordinates");
    if (dropped_mass > 0) continue;
    Point q;
    for (auto c : keep) q.push_back(p[c]);
    out.push_back(std::move(q));
  }
  if (out.size() != static_cast<std::size_t>(3 * n + 4)) throw Error("project_kn: input is not V_n");
  return out;
}

inline std::vector<Point> kn_points(int n) { return project_kn(vn_points(n), n); }

/// Index of v_{a,b} style points inside kn_points(n).
struct KnIndex {
  int n;
  std::size_t origin() const { return 0; }
  std::size_t unit(std::size_t coord) const { return 1 + coord; }
  std::size_t e_type(int j) const { return static_cast<std::size_t>(n + 4 + j); }          // E + S_j, j < n
  std::size_t f_type(int j) const { return static_cast<std::size_t>(2 * n + 4 + j - 1); }  // F + S_j, j >= 1
};

/// Placement order used for T_n: v_0..v_4, v_12, v_34, then for each
/// j = 2..n the unit vector of S_j, E + S_{j-1}, F + S_j.
inline std::vector<std::size_t> tn_order(int n) {
  const KnIndex k{n};
  std::vector<std::size_t> order{0, k.unit(0), k.unit(1), k.unit(2), k.unit(3), k.e_type(0), k.f_type(1)};
  for (int j = 2; j <= n; ++j) {
    order.push_back(k.unit(kn_substrate(j)));
    order.push_back(k.e_type(j - 1));
    order.push_back(k.f_type(j));
  }
  return order;
}

inline std::size_t tn_simplex_count(int n) {
  std::size_t k = 4;
  for (int j = 1; j < n; ++j) k += static_cast<std::size_t>(j + 3);
  return k;
}

enum class KnStage { Star, Tilde };

/// Intermediate hulls during the T_n construction, in K_n coordinates.
/// The S_{n-1} coordinate is x_3 (1-based) when n = 2.
inline HPolytope hrep_intermediate(int n, KnStage stage) {
  if (n < 2) throw Error("hrep_intermediate needs n >= 2");
  const std::size_t d = static_cast<std::size_t>(n + 3);
  const std::size_t x1 = 0, x2 = 1, x3 = 2, x4 = 3;
  const std::size_t last = kn_substrate(n), prev = kn_substrate(n - 1);
  std::vector<std::size_t> first{x1, x3};
  for (int j = 2; j <= n; ++j) first.push_back(kn_substrate(j));
  HPolytope h;
  h.dim = d;
  h.inequalities = {le_one(d, first), le_one(d, {x1, x4, last}), le_one(d, {x2, x4, last})};
  if (stage == KnStage::Star) h.inequalities.push_back(le_one(d, {x2, prev, last}));
  add_nonnegativity(h);
  return h;
}

/// T_n lifted to Q_n: coordinates embedded back into R^{3n+3} and coned
/// with the unit vectors of X_1, Y_1, then X_j, Y_j for j >= 2.
inline std::pair<std::vector<Point>, Triangulation> qn_triangulation(int n) {
  const auto kn = kn_points(n);
  const auto tn = placing_triangulation(kn, tn_order(n));
  const std::size_t d = static_cast<std::size_t>(3 * n + 3);
  std::vector<Point> apexes;
  for (int j = 1; j <= n; ++j)
    for (std::size_t c : {pc_x(j), pc_y(j)}) {
      Point e(d, 0);
      e[c] = 1;
      apexes.push_back(e);
    }
  return cone_lift(embed(kn, d, kn_coordinates(n)), tn, apexes);
}

}  // namespace crnbkk
