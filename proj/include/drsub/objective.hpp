#pragma once

#include <memory>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "drsub/common.hpp"

namespace drsub {

// Continuous utility f : K -> R with exact analytic gradient. Certified
// bounds (smoothness L, gradient sup beta) are interval-arithmetic style
// worst cases over the given box, never sampled estimates; they may be +inf
// when the family genuinely admits no finite bound (power terms near 0).
class ObjectiveFunction {
 public:
  virtual ~ObjectiveFunction() = default;
  virtual int dim() const = 0;
  virtual double value(const Vec& x) const = 0;
  virtual Vec gradient(const Vec& x) const = 0;
  virtual bool has_hessian() const { return false; }
  virtual Mat hessian(const Vec& x) const;
  // certified smoothness constant w.r.t. the requested norm over [lower,upper]
  virtual double smoothness_bound(const Vec& lower, const Vec& upper, Norm norm) const = 0;
  // certified sup of ||grad f||_2 over [lower,upper]
  virtual double gradient_sup_bound(const Vec& lower, const Vec& upper) const = 0;
};

// f(x) = 1/2 x'Ax + a'x + c with A symmetric
class QuadraticUtility final : public ObjectiveFunction {
 public:
  enum Flags : unsigned { kNone = 0, kRequireSubmodular = 1, kRequireNormalized = 2 };

  QuadraticUtility(Mat A, Vec a, double c = 0.0, unsigned flags = kNone);

  const Mat& quad() const { return A_; }
  const Vec& lin() const { return a_; }
  double constant() const { return c_; }

  int dim() const override { return static_cast<int>(a_.size()); }
  double value(const Vec& x) const override;
  Vec gradient(const Vec& x) const override;
  bool has_hessian() const override { return true; }
  Mat hessian(const Vec& x) const override;
  double smoothness_bound(const Vec& lower, const Vec& upper, Norm norm) const override;
  double gradient_sup_bound(const Vec& lower, const Vec& upper) const override;

  // exact closed-form weighted sum of quadratics
  static QuadraticUtility weighted_sum(const std::vector<const QuadraticUtility*>& fs,
                                       const std::vector<double>& w);

 private:
  Mat A_;
  Vec a_;
  double c_;
};

// f(x) = scale * sum_i ln(1 + R_i x_i) + sum_{i<j} theta_ij x_i x_j,
// theta symmetric with nonpositive entries (each unordered pair counted once)
class LogDiversityUtility final : public ObjectiveFunction {
 public:
  LogDiversityUtility(Vec weights, Mat pair_penalties, double scale = 5.0);

  const Vec& weights() const { return R_; }
  const Mat& pair_penalties() const { return theta_; }
  double scale() const { return scale_; }

  int dim() const override { return static_cast<int>(R_.size()); }
  double value(const Vec& x) const override;
  Vec gradient(const Vec& x) const override;
  bool has_hessian() const override { return true; }
  Mat hessian(const Vec& x) const override;
  double smoothness_bound(const Vec& lower, const Vec& upper, Norm norm) const override;
  double gradient_sup_bound(const Vec& lower, const Vec& upper) const override;

 private:
  Vec R_;
  Mat theta_;
  double scale_;
};

// separable concave terms plus nonpositive multilinear interactions:
// f(x) = sum_i h_i(x_i) + sum_terms theta * prod_{i in term} x_i
class ConcaveNegDepUtility final : public ObjectiveFunction {
 public:
  struct ScalarTerm {
    enum Kind { kLog, kQuad, kPower } kind = kLog;
    double w = 1.0;      // log: ln(1 + w x)
    double q = 0.0;      // quad: -q x^2/2 + p x
    double p = 0.0;
    double gamma = 1.0;  // power: x^gamma, gamma in (0,1]
  };
  struct InteractionTerm {
    std::vector<int> indices;  // strictly increasing, size >= 2
    double theta = 0.0;        // <= 0
  };

  ConcaveNegDepUtility(std::vector<ScalarTerm> per_coordinate,
                       std::vector<InteractionTerm> interactions);

  const std::vector<ScalarTerm>& per_coordinate() const { return terms_; }
  const std::vector<InteractionTerm>& interactions() const { return inter_; }

  int dim() const override { return static_cast<int>(terms_.size()); }
  double value(const Vec& x) const override;
  Vec gradient(const Vec& x) const override;
  bool has_hessian() const override { return true; }
  Mat hessian(const Vec& x) const override;
  double smoothness_bound(const Vec& lower, const Vec& upper, Norm norm) const override;
  double gradient_sup_bound(const Vec& lower, const Vec& upper) const override;

 private:
  std::vector<ScalarTerm> terms_;
  std::vector<InteractionTerm> inter_;
};

// weighted sum of shared functions; used to materialize block averages and
// hindsight sums for families without a closed-form sum
class ScaledSumFunction final : public ObjectiveFunction {
 public:
  ScaledSumFunction(std::vector<std::shared_ptr<const ObjectiveFunction>> fs,
                    std::vector<double> weights);

  int dim() const override;
  double value(const Vec& x) const override;
  Vec gradient(const Vec& x) const override;
  bool has_hessian() const override;
  Mat hessian(const Vec& x) const override;
  double smoothness_bound(const Vec& lower, const Vec& upper, Norm norm) const override;
  double gradient_sup_bound(const Vec& lower, const Vec& upper) const override;

 private:
  std::vector<std::shared_ptr<const ObjectiveFunction>> fs_;
  std::vector<double> w_;
};

// single function representing sum_t fs[t] (exact quadratic sum when all
// members are quadratics, generic weighted sum otherwise)
std::shared_ptr<const ObjectiveFunction> materialize_sum(
    const std::vector<std::shared_ptr<const ObjectiveFunction>>& fs,
    const std::vector<double>& weights);

// tagged-record (de)serialization: {"family": "quadratic"|"log_diversity"|
// "concave_negdep", ...} with matrices as row-major nested arrays
std::shared_ptr<const ObjectiveFunction> function_from_json(const nlohmann::json& j);
nlohmann::json function_to_json(const ObjectiveFunction& f);

}  // namespace drsub
