#pragma once

#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "drsub/common.hpp"

namespace drsub {

// Downward-closed-style feasible region {x : C x <= b, lower <= x <= upper}.
// Invariants checked at construction: finite bounds, lower <= upper, the
// all-zeros point feasible (b >= 0, lower <= 0 <= upper). Instances are
// immutable and safe to share across threads; diameters are precomputed.
class PolytopeDomain {
 public:
  PolytopeDomain(Mat C, Vec b, Vec lower, Vec upper);

  // unit box [0,1]^n
  static PolytopeDomain unit_box(int dim);
  // {1'x <= budget, 0 <= x <= 1}
  static PolytopeDomain budgeted_box(int dim, double budget);

  static PolytopeDomain from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  int dim() const { return static_cast<int>(lower_.size()); }
  int rows() const { return static_cast<int>(C_.rows()); }
  const Mat& ineq_matrix() const { return C_; }
  const Vec& ineq_rhs() const { return b_; }
  const Vec& lower() const { return lower_; }
  const Vec& upper() const { return upper_; }

  bool contains(const Vec& x, double tol = 1e-9) const;

  // cached at construction: exact (vertex enumeration) when the vertex count
  // is small enough, otherwise the box-corner bound ||upper - lower||
  double diameter(Norm norm) const { return norm == Norm::L1 ? diam_l1_ : diam_l2_; }
  bool diameter_exact() const { return diam_exact_; }

  // sup of ||x||_1 over the domain (used by certified noise bounds)
  double support_l1() const { return support_l1_; }

  // argmax <direction, x>; among optimal vertices returns the
  // lexicographically smallest coordinate vector
  Vec linear_maximize(const Vec& direction, double tol = 1e-9) const;

  // Euclidean projection via Dykstra's alternating projections over the
  // half-space rows and the box; stops once an entire sweep moves the iterate
  // by <= tol AND the inequality rows hold to tol (displacement alone can
  // stall on a vertex), throws ProjectionError when the sweep budget runs
  // out; the budget is max_iter, raised automatically for far-away targets
  // whose corrections need proportionally many sweeps to drain
  Vec project(const Vec& y, double tol = 1e-9, int max_iter = 10000) const;

  // enumerated vertices (empty when enumeration was skipped as too large)
  const std::vector<Vec>& vertices() const { return vertices_; }

 private:
  Mat C_;
  Vec b_;
  Vec lower_;
  Vec upper_;
  Vec row_sqnorm_;
  std::vector<Vec> vertices_;
  double diam_l1_ = 0.0;
  double diam_l2_ = 0.0;
  double support_l1_ = 0.0;
  bool diam_exact_ = false;
};

}  // namespace drsub
