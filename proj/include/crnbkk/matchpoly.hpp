#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "crnbkk/crn.hpp"
#include "crnbkk/polytope.hpp"
#include "crnbkk/rational.hpp"

namespace crnbkk {

struct Edge {
  std::size_t a = 0, b = 0;
  std::string label;  // t_1 .. t_m
};

/// Undirected multigraph; edge k carries label t_{k+1} and is coordinate k of
/// incidence vectors.
struct Multigraph {
  std::size_t vertex_count = 0;
  std::vector<Edge> edges;

  void validate() const {
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const auto& e = edges[k];
      if (e.a >= vertex_count || e.b >= vertex_count) throw Error("edge " + e.label + " has an invalid endpoint");
      if (e.a == e.b) throw Error("edge " + e.label + " is a loop");
      if (e.label != "t_" + std::to_string(k + 1)) throw Error("edge labels must run t_1..t_m in order");
    }
  }
};

/// A matching as the sorted list of its edge indices.
using Matching = std::vector<std::size_t>;

namespace detail {

inline Multigraph labeled(std::size_t vertices, const std::vector<std::pair<std::size_t, std::size_t>>& ends) {
  Multigraph g;
  g.vertex_count = vertices;
  for (std::size_t k = 0; k < ends.size(); ++k) g.edges.push_back({ends[k].first, ends[k].second, "t_" + std::to_string(k + 1)});
  g.validate();
  return g;
}

// Vertices of the four-cycle; pendant leaves follow.
constexpr std::size_t s1 = 0, s2 = 1, s3 = 2, s4 = 3;

/// Endpoints of the edge standing for S_j in G_n: S_0 closes the cycle at
/// s_4, S_n is the cycle edge s_1 s_2, the rest hang off s_1.
inline std::pair<std::size_t, std::size_t> substrate_edge(int j, int n) {
  if (j == 0) return {s4, s1};
  if (j == n) return {s1, s2};
  return {s1, static_cast<std::size_t>(3 + j)};
}

}  // namespace detail

/// G_n: four-cycle s_1 s_2 s_3 s_4 with E = s_2 s_3 and F = s_3 s_4, the
/// substrates as above, and X_j, Y_j as parallel diagonals s_1 s_3. Edge k
/// stands for species k of PC_n.
inline Multigraph build_gn(int n) {
  if (n < 1) throw Error("G_n needs n >= 1");
  std::vector<std::pair<std::size_t, std::size_t>> ends(static_cast<std::size_t>(3 * n + 3));
  ends[pc_enzyme_e()] = {detail::s2, detail::s3};
  ends[pc_enzyme_f()] = {detail::s3, detail::s4};
  for (int j = 0; j <= n; ++j) ends[pc_substrate(j)] = detail::substrate_edge(j, n);
  for (int j = 1; j <= n; ++j) {
    ends[pc_x(j)] = {detail::s1, detail::s3};
    ends[pc_y(j)] = {detail::s1, detail::s3};
  }
  return detail::labeled(static_cast<std::size_t>(n + 3), ends);
}

/// G_n without the parallel diagonals; edge k stands for coordinate k of K_n
/// (S_0, E, S_1, F, S_2, ..., S_n).
inline Multigraph build_gn_tilde(int n) {
  if (n < 1) throw Error("G~_n needs n >= 1");
  const auto gn = build_gn(n);
  std::vector<std::pair<std::size_t, std::size_t>> ends;
  for (auto c : kn_coordinates(n)) ends.push_back({gn.edges[c].a, gn.edges[c].b});
  return detail::labeled(static_cast<std::size_t>(n + 3), ends);
}

/// Every matching including the empty one, in order of size then
/// lexicographically.
inline std::vector<Matching> matchings(const Multigraph& g) {
  g.validate();
  std::vector<Matching> out;
  std::vector<bool> used(g.vertex_count, false);
  Matching cur;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    out.push_back(cur);
    for (std::size_t k = from; k < g.edges.size(); ++k) {
      const auto& e = g.edges[k];
      if (used[e.a] || used[e.b]) continue;
      used[e.a] = used[e.b] = true;
      cur.push_back(k);
      self(self, k + 1);
      cur.pop_back();
      used[e.a] = used[e.b] = false;
    }
  };
  rec(rec, 0);
  std::stable_sort(out.begin(), out.end(), [](const Matching& x, const Matching& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
  return out;
}

inline Point incidence_vector(const Multigraph& g, const Matching& m) {
  Point p(g.edges.size(), 0);
  for (auto k : m) p[k] = 1;
  return p;
}

inline std::vector<Point> matching_points(const Multigraph& g) {
  std::vector<Point> out;
  for (const auto& m : matchings(g)) out.push_back(incidence_vector(g, m));
  return out;
}

inline LatticePolytope matching_polytope(const Multigraph& g) { return convex_hull(matching_points(g)); }

struct MatchingCheck {
  int n = 0;
  bool tilde = false;
  std::size_t matchings = 0;
  std::size_t two_edge = 0;
  bool vertex_sets_equal = false;
  bool polytopes_equal = false;
  bool ok() const { return vertex_sets_equal && polytopes_equal; }
};

/// Compares P_MA(G_n) with conv V_n, or P_MA(G~_n) with K_n.
inline MatchingCheck check_matching_polytope(int n, bool tilde) {
  MatchingCheck r;
  r.n = n;
  r.tilde = tilde;
  const auto g = tilde ? build_gn_tilde(n) : build_gn(n);
  const auto ms = matchings(g);
  r.matchings = ms.size();
  r.two_edge = static_cast<std::size_t>(std::count_if(ms.begin(), ms.end(), [](const Matching& m) { return m.size() == 2; }));
  auto got = matching_points(g);
  auto want = tilde ? kn_points(n) : vn_points(n);
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  r.vertex_sets_equal = got == want;
  const auto pg = convex_hull(got), pw = convex_hull(want);
  r.polytopes_equal = same_polytope(pg, pw);
  return r;
}

}  // namespace crnbkk
