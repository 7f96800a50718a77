#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "crnbkk/linalg.hpp"
#include "crnbkk/rational.hpp"

/// Exact rational linear feasibility over free variables.
///
/// Constraints are `coeffs . t >= rhs` or `coeffs . t == rhs`. Equalities and
/// free variables are pivoted out first, which leaves a dictionary whose size
/// is (#inequalities) x (#free directions). The remaining phase-1 problem is
/// solved with the single-artificial-variable method and Bland's rule, so it
/// always terminates.
namespace crnbkk::lp {

enum class Sense { GreaterEq, Equal };

struct Constraint {
  linalg::Vec coeffs;
  Rational rhs;
  Sense sense = Sense::GreaterEq;
};

inline Constraint ge(linalg::Vec coeffs, Rational rhs) {
  return {std::move(coeffs), std::move(rhs), Sense::GreaterEq};
}
inline Constraint eq(linalg::Vec coeffs, Rational rhs) {
  return {std::move(coeffs), std::move(rhs), Sense::Equal};
}

namespace detail {

// x_basic[r] = constant[r] + sum_c coef[r][c] * x_nonbasic[c]
class Dictionary {
 public:
  std::vector<int> basic, nonbasic;
  std::vector<Rational> constant;
  std::vector<std::vector<Rational>> coef;
  Rational obj_constant = 0;
  std::vector<Rational> obj_coef;

  void pivot(std::size_t r, std::size_t c) {
    const Rational d = coef[r][c];
    const std::size_t cols = nonbasic.size();
    std::vector<Rational> nrow(cols);
    for (std::size_t j = 0; j < cols; ++j) nrow[j] = (j == c) ? Rational(1 / d) : Rational(-coef[r][j] / d);
    const Rational nconst = -constant[r] / d;
    auto substitute = [&](Rational& k, std::vector<Rational>& row) {
      const Rational f = row[c];
      if (f == 0) return;
      k += f * nconst;
      for (std::size_t j = 0; j < cols; ++j) {
        if (j == c) row[j] = f * nrow[j];
        else if (nrow[j] != 0) row[j] += f * nrow[j];
      }
    };
    for (std::size_t i = 0; i < basic.size(); ++i)
      if (i != r) substitute(constant[i], coef[i]);
    if (!obj_coef.empty()) substitute(obj_constant, obj_coef);
    coef[r] = std::move(nrow);
    constant[r] = nconst;
    std::swap(basic[r], nonbasic[c]);
  }

  void drop_column(std::size_t c) {
    for (auto& row : coef) row.erase(row.begin() + static_cast<long>(c));
    if (!obj_coef.empty()) obj_coef.erase(obj_coef.begin() + static_cast<long>(c));
    nonbasic.erase(nonbasic.begin() + static_cast<long>(c));
  }

  void drop_row(std::size_t r) {
    basic.erase(basic.begin() + static_cast<long>(r));
    constant.erase(constant.begin() + static_cast<long>(r));
    coef.erase(coef.begin() + static_cast<long>(r));
  }
};

}  // namespace detail

/// Returns a feasible point, or nullopt if the system is infeasible.
inline std::optional<linalg::Vec> feasible_point(const std::vector<Constraint>& cons, std::size_t nvars) {
  using detail::Dictionary;
  const int m = static_cast<int>(cons.size());
  const int var_base = m + 1;  // ids: slacks 0..m-1, artificial m, free vars m+1..
  Dictionary dict;
  std::vector<bool> is_equality(cons.size());
  for (int i = 0; i < m; ++i) {
    dict.basic.push_back(i);
    dict.constant.push_back(-cons[i].rhs);
    dict.coef.push_back(cons[i].coeffs);
    dict.coef.back().resize(nvars, 0);
    is_equality[i] = cons[i].sense == Sense::Equal;
  }
  for (std::size_t j = 0; j < nvars; ++j) dict.nonbasic.push_back(var_base + static_cast<int>(j));

  auto is_free = [&](int id) { return id >= var_base; };
  auto is_slack = [&](int id) { return id < m; };
  std::vector<std::size_t> free_rows;  // rows that hold a free variable

  auto find_column_for_row = [&](std::size_t r) -> std::optional<std::size_t> {
    for (std::size_t c = 0; c < dict.nonbasic.size(); ++c)
      if (is_free(dict.nonbasic[c]) && dict.coef[r][c] != 0) return c;
    return std::nullopt;
  };

  // Equalities: pivot a free variable in, then pin the slack at zero.
  for (std::size_t r = 0; r < dict.basic.size();) {
    const int id = dict.basic[r];
    if (!is_slack(id) || !is_equality[static_cast<std::size_t>(id)]) {
      ++r;
      continue;
    }
    if (auto c = find_column_for_row(r)) {
      dict.pivot(r, *c);
      const auto col = static_cast<std::size_t>(*c);
      dict.drop_column(col);
      ++r;
    } else {
      bool constant_row = true;
      for (std::size_t c = 0; c < dict.nonbasic.size(); ++c)
        if (dict.coef[r][c] != 0) constant_row = false;
      if (constant_row) {
        if (dict.constant[r] != 0) return std::nullopt;
        dict.drop_row(r);
      } else {
        ++r;
      }
    }
  }
  // Remaining free variables: pivot each into the basis through an inequality.
  for (std::size_t c = 0; c < dict.nonbasic.size();) {
    if (!is_free(dict.nonbasic[c])) {
      ++c;
      continue;
    }
    std::optional<std::size_t> row;
    for (std::size_t r = 0; r < dict.basic.size(); ++r)
      if (is_slack(dict.basic[r]) && dict.coef[r][c] != 0) {
        row = r;
        break;
      }
    if (row) {
      dict.pivot(*row, c);
      c = 0;
    } else {
      // Direction invisible to every inequality; fix it at zero.
      dict.drop_column(c);
    }
  }
  // Any equality still basic with only fixed columns left is a constant row.
  for (std::size_t r = 0; r < dict.basic.size(); ++r) {
    const int id = dict.basic[r];
    if (is_slack(id) && is_equality[static_cast<std::size_t>(id)]) {
      bool constant_row = true;
      for (const auto& x : dict.coef[r])
        if (x != 0) constant_row = false;
      if (!constant_row || dict.constant[r] != 0) return std::nullopt;
    }
  }

  auto slack_rows = [&]() {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < dict.basic.size(); ++r)
      if (!is_free(dict.basic[r])) rows.push_back(r);
    return rows;
  };

  std::size_t worst = dict.basic.size();
  for (auto r : slack_rows())
    if (dict.constant[r] < 0 && (worst == dict.basic.size() || dict.constant[r] < dict.constant[worst])) worst = r;

  if (worst != dict.basic.size()) {
    // Phase 1: x0 added to every inequality row, maximize -x0.
    const int artificial = m;
    dict.nonbasic.push_back(artificial);
    for (std::size_t r = 0; r < dict.basic.size(); ++r)
      dict.coef[r].push_back(is_free(dict.basic[r]) ? Rational(0) : Rational(1));
    dict.obj_coef.assign(dict.nonbasic.size(), 0);
    dict.obj_coef.back() = -1;
    dict.obj_constant = 0;
    dict.pivot(worst, dict.nonbasic.size() - 1);

    for (;;) {
      // Bland: lowest-id nonbasic with positive reduced cost enters.
      std::optional<std::size_t> enter;
      for (std::size_t c = 0; c < dict.nonbasic.size(); ++c)
        if (dict.obj_coef[c] > 0 && (!enter || dict.nonbasic[c] < dict.nonbasic[*enter])) enter = c;
      if (!enter) break;
      const std::size_t c = *enter;
      std::optional<std::size_t> leave;
      Rational best;
      for (auto r : slack_rows()) {
        if (dict.coef[r][c] >= 0) continue;
        Rational ratio = dict.constant[r] / -dict.coef[r][c];
        if (!leave || ratio < best || (ratio == best && dict.basic[r] < dict.basic[*leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (!leave) break;  // unbounded in -x0 cannot happen; x0 >= 0
      dict.pivot(*leave, c);
    }
    if (dict.obj_constant < 0) return std::nullopt;
  }

  // Nonbasic variables sit at zero; read free variables from their rows.
  linalg::Vec point(nvars, 0);
  for (std::size_t r = 0; r < dict.basic.size(); ++r)
    if (is_free(dict.basic[r])) point[static_cast<std::size_t>(dict.basic[r] - var_base)] = dict.constant[r];
  return point;
}

inline bool feasible(const std::vector<Constraint>& cons, std::size_t nvars) {
  return feasible_point(cons, nvars).has_value();
}

}  // namespace crnbkk::lp
