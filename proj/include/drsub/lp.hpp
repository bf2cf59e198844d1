#pragma once

#include "drsub/common.hpp"

namespace drsub {

// Dense two-phase simplex with Bland's rule, specialised to
//   maximize d'x   s.t.   C x <= b,  l <= x <= u.
// Ties between optimal vertices are broken by a lexicographic pass: among
// maximizers, minimize x_0, then x_1, ... (restricted pivoting on the optimal
// face), so identical inputs always produce bit-identical vertex outputs.
// Throws LpError on infeasible/unbounded input or when the pivot cap is hit
// (numerical degeneracy); neither can occur for a valid bounded domain.
struct LexLpResult {
  Vec x;
  double value;
  int pivots;
};

LexLpResult lex_linear_maximize(const Mat& C, const Vec& b, const Vec& lower,
                                const Vec& upper, const Vec& direction,
                                double tol = 1e-9);

}  // namespace drsub
