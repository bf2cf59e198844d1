#include "drsub/lp.hpp"

#include <cmath>
#include <vector>

namespace drsub {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kLexTol = 1e-7;  // "stays on the optimal face" threshold
constexpr int kMaxPivots = 50000;

// Tableau rows: M constraints over Ns structural + M slack (+ na artificial)
// columns, rhs kept in the last column. Objective rows are carried separately
// and eliminated with the same pivots.
struct Tableau {
  Mat t;                   // M x (ncols + 1)
  std::vector<int> basis;  // column index basic in each row
  int ns = 0;              // structural columns
  int ncols = 0;           // columns excluding rhs
  int art_begin = 0;       // first artificial column (== ncols if none)
  int pivots = 0;

  void pivot(int row, int col, std::vector<Vec>& objs) {
    const double piv = t(row, col);
    t.row(row) /= piv;
    for (int r = 0; r < t.rows(); ++r) {
      if (r == row) continue;
      const double f = t(r, col);
      if (f != 0.0) t.row(r) -= f * t.row(row);
    }
    for (Vec& obj : objs) {
      const double f = obj(col);
      if (f != 0.0) obj -= f * t.row(row).transpose();
    }
    basis[static_cast<std::size_t>(row)] = col;
    ++pivots;
  }

  // reduce a fresh objective row against the current basis
  void reduce(Vec& obj) const {
    for (int r = 0; r < t.rows(); ++r) {
      const double f = obj(basis[static_cast<std::size_t>(r)]);
      if (f != 0.0) obj -= f * t.row(r).transpose();
    }
  }

  // Run Bland-rule pivots maximizing `obj` while keeping every row in
  // `frozen` constant (|coefficient| <= kLexTol) and never touching
  // artificial columns.
  void optimize(Vec& obj, const std::vector<Vec>& frozen, std::vector<Vec>& all_objs) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < art_begin; ++j) {
        if (obj(j) <= kPivotTol) continue;
        bool ok = true;
        for (const Vec& fr : frozen) {
          if (std::abs(fr(j)) > kLexTol) {
            ok = false;
            break;
          }
        }
        if (ok) {
          enter = j;
          break;  // Bland: smallest eligible index
        }
      }
      if (enter < 0) return;  // optimal on the restricted face

      int leave = -1;
      double best_ratio = 0.0;
      for (int r = 0; r < t.rows(); ++r) {
        const double a = t(r, enter);
        if (a <= kPivotTol) continue;
        const double ratio = t(r, ncols) / a;
        if (leave < 0 || ratio < best_ratio - kPivotTol ||
            (std::abs(ratio - best_ratio) <= kPivotTol &&
             basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave < 0) throw LpError("lex_linear_maximize: unbounded direction");
      if (pivots >= kMaxPivots)
        throw LpError("lex_linear_maximize: pivot cap exceeded (degeneracy)");
      pivot(leave, enter, all_objs);
    }
  }
};

}  // namespace

LexLpResult lex_linear_maximize(const Mat& C, const Vec& b, const Vec& lower,
                                const Vec& upper, const Vec& direction,
                                double tol) {
  const int n = static_cast<int>(lower.size());
  const int m = static_cast<int>(C.rows());
  if (direction.size() != n) throw DimensionError("lex_linear_maximize: direction dim");
  if (!direction.allFinite()) throw ParamError("lex_linear_maximize: non-finite direction");
  (void)tol;

  // shift y = x - lower >= 0; rows: C y <= b - C lower, y <= upper - lower
  const int M = m + n;
  Vec rhs(M);
  if (m > 0) rhs.head(m) = b - C * lower;
  rhs.tail(n) = upper - lower;

  Tableau tab;
  tab.ns = n;
  // count artificials: rows with negative rhs
  std::vector<int> art_rows;
  for (int i = 0; i < M; ++i)
    if (rhs(i) < 0.0) art_rows.push_back(i);
  const int na = static_cast<int>(art_rows.size());
  tab.ncols = n + M + na;
  tab.art_begin = n + M;
  tab.t = Mat::Zero(M, tab.ncols + 1);
  tab.basis.assign(static_cast<std::size_t>(M), -1);

  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < n; ++j)
      tab.t(i, j) = (i < m) ? C(i, j) : (i - m == j ? 1.0 : 0.0);
    tab.t(i, n + i) = 1.0;  // slack
    tab.t(i, tab.ncols) = rhs(i);
  }
  for (int k = 0; k < na; ++k) {
    const int i = art_rows[static_cast<std::size_t>(k)];
    tab.t.row(i) *= -1.0;                    // make rhs nonnegative
    tab.t(i, tab.art_begin + k) = 1.0;       // artificial basic
    tab.basis[static_cast<std::size_t>(i)] = tab.art_begin + k;
  }
  for (int i = 0; i < M; ++i)
    if (tab.basis[static_cast<std::size_t>(i)] < 0)
      tab.basis[static_cast<std::size_t>(i)] = n + i;

  std::vector<Vec> frozen;
  std::vector<Vec> objs;  // live objective rows updated by pivots

  // phase 1: drive artificials to zero
  if (na > 0) {
    Vec p1 = Vec::Zero(tab.ncols + 1);
    for (int i : art_rows) p1 += tab.t.row(i).transpose();
    for (int k = 0; k < na; ++k) p1(tab.art_begin + k) = 0.0;
    objs.assign(1, p1);
    // temporarily allow pivoting anywhere except artificials
    tab.optimize(objs[0], frozen, objs);
    if (objs[0](tab.ncols) > 1e-7)
      throw LpError("lex_linear_maximize: infeasible constraint system");
    // pivot remaining degenerate artificials out of the basis; rows whose
    // non-artificial part is entirely zero are redundant and inert
    for (int r = 0; r < M; ++r) {
      if (tab.basis[static_cast<std::size_t>(r)] < tab.art_begin) continue;
      for (int j = 0; j < tab.art_begin; ++j) {
        if (std::abs(tab.t(r, j)) > kPivotTol) {
          tab.pivot(r, j, objs);
          break;
        }
      }
    }
    objs.clear();
  }

  // phase 2: the caller's direction
  Vec obj = Vec::Zero(tab.ncols + 1);
  obj.head(n) = direction;
  tab.reduce(obj);
  objs.push_back(obj);
  tab.optimize(objs[0], frozen, objs);
  frozen.push_back(objs[0]);

  // lexicographic refinement: minimize each coordinate on the optimal face
  for (int i = 0; i < n; ++i) {
    Vec oi = Vec::Zero(tab.ncols + 1);
    oi(i) = -1.0;
    tab.reduce(oi);
    objs.push_back(oi);
    tab.optimize(objs.back(), frozen, objs);
    frozen.push_back(objs.back());
  }

  Vec y = Vec::Zero(n);
  for (int r = 0; r < M; ++r) {
    const int c = tab.basis[static_cast<std::size_t>(r)];
    if (c < n) y(c) = tab.t(r, tab.ncols);
  }
  LexLpResult res;
  res.x = y + lower;
  res.value = direction.dot(res.x);
  res.pivots = tab.pivots;
  return res;
}

}  // namespace drsub
