#pragma once

#include "drsub/common.hpp"
#include "drsub/domain.hpp"
#include "drsub/objective.hpp"

namespace drsub {

// Offline comparator with its provenance. `value` is always f(x_out)
// recomputed exactly. For the grid method, `grid_slack` is the certified gap
// bound beta * step * sqrt(n) (beta = certified gradient sup): true max <=
// value + grid_slack, valid for domains whose inequality rows are
// entrywise nonnegative (floor-rounding any point stays feasible there).
struct OfflineResult {
  enum class Method { kFw, kGrid };
  Vec x_out;
  double value = 0.0;
  int K_used = 0;
  Method method = Method::kFw;
  double grid_step = 0.0;
  double grid_slack = 0.0;
};

// Frank-Wolfe ascent: x^(1) = 0, v_k = linear_maximize(grad f(x^(k))),
// x^(k+1) = x^(k) + v_k / K; returns x^(K+1) with the guarantee
// f(x_out) >= (1 - 1/e) f(x*) - L R^2 / (2K) for monotone DR-submodular f
OfflineResult offline_fw(const ObjectiveFunction& f, const PolytopeDomain& domain, int K);

// brute-force maximization over the lattice (lower + step * Z^n) intersected
// with the domain; refuses n > 4; ties broken toward the lexicographically
// smallest point; chunked evaluation parallelizes deterministically
OfflineResult grid_maximize(const ObjectiveFunction& f, const PolytopeDomain& domain,
                            double step);

// the better of offline_fw(fw_K) and (for n <= 4) a dimension-scaled grid
// search; used as the regret comparator x*
OfflineResult best_comparator(const ObjectiveFunction& f, const PolytopeDomain& domain,
                              int fw_K = 2000);

}  // namespace drsub
