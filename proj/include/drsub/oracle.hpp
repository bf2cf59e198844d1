#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "drsub/common.hpp"
#include "drsub/domain.hpp"
#include "drsub/objective.hpp"
#include "drsub/rng.hpp"

namespace drsub {

// An i.i.d. stream of quadratic utilities f_t whose mean is a fixed expected
// function F. Round t is materialized deterministically from
// derive_seed(seed, t) and retained, so any past round can be re-queried at
// new points and the same realization can be evaluated at two points.
//
// Noise rules:
//   kHessianSymmetric  base must be symmetric; f_t(x) = 1/2 x'(A + N_t)x + a'x
//                      with N_t symmetric, entries uniform on [-nu, nu]
//                      (upper triangle drawn row-major, mirrored), so the
//                      noisy gradient is exactly (A + N_t)x + a.
//   kBilinear          f_t(x) = (x/2 - 1)'(A + N_t)x with N_t dense, entries
//                      uniform on [-nu, nu] drawn row-major; stored in
//                      canonical form (Hessian sym(A + N_t), linear
//                      -(A + N_t)'1).
class IidQuadraticStream {
 public:
  enum class NoiseRule { kHessianSymmetric, kBilinear };

  IidQuadraticStream(Mat base, Vec lin, NoiseRule rule, double nu, std::uint64_t seed);

  // convenience for the bilinear family, where the linear term is derived
  static IidQuadraticStream bilinear(Mat base, double nu, std::uint64_t seed);

  int dim() const { return static_cast<int>(base_.rows()); }
  NoiseRule rule() const { return rule_; }
  double nu() const { return nu_; }
  std::uint64_t seed() const { return seed_; }

  // F = E[f_t]
  const QuadraticUtility& expected() const { return *expected_; }

  // the round-t realization (t >= 1); materialized on first access, retained
  const QuadraticUtility& realized(int t);

  // certified sigma with ||grad f_t(x) - grad F(x)||_2 <= sigma for all
  // feasible x (worst case over noise realizations, never sampled)
  double sigma_bound(const PolytopeDomain& domain) const;

 private:
  Mat base_;
  Vec lin_;
  NoiseRule rule_;
  double nu_;
  std::uint64_t seed_;
  std::unique_ptr<QuadraticUtility> expected_;
  std::vector<std::unique_ptr<QuadraticUtility>> realized_;  // index t-1
};

// Unbiased stochastic gradient access to a stream, with exact call counting.
// Single-owner per run: the call counter and the stream's retention cache
// are mutated by queries.
class NoisyGradientOracle {
 public:
  NoisyGradientOracle(std::shared_ptr<IidQuadraticStream> stream, const PolytopeDomain& domain);

  // one draw of grad f_t at x; same (seed, t) always yields the same f_t
  Vec stochastic_gradient(int t, const Vec& x);

  // realized round-t utility f_t(x), for trace columns (not counted as a
  // gradient call)
  double realized_value(int t, const Vec& x);

  const QuadraticUtility& base() const { return stream_->expected(); }
  double sigma_bound() const { return sigma_; }

  long long calls() const { return calls_; }
  void reset_calls() { calls_ = 0; }

 private:
  std::shared_ptr<IidQuadraticStream> stream_;
  double sigma_;
  long long calls_ = 0;
};

}  // namespace drsub
