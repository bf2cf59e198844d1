#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "drsub/common.hpp"
#include "drsub/objective.hpp"
#include "drsub/rng.hpp"

namespace drsub {

// Arrival-order machinery and the random-order block-size threshold W0.
// (I.i.d. stream generation lives in oracle.hpp; adversarial and
// random-order streams are plain function lists, optionally permuted here.)

// uniform Fisher-Yates permutation of 0..n-1
std::vector<int> permuted_indices(int n, std::uint64_t seed);

template <class T>
std::vector<T> permute(const std::vector<T>& items, std::uint64_t seed) {
  const std::vector<int> idx = permuted_indices(static_cast<int>(items.size()), seed);
  std::vector<T> out;
  out.reserve(items.size());
  for (int i : idx) out.push_back(items[static_cast<std::size_t>(i)]);
  return out;
}

// theta = (5/2) ln 3 - 2/3, the constant in the W0 formulas
double w0_theta();

// W0 = ceil((128 theta L^2 / eps^2) ln(4 n T / delta)); requires the
// sub-Gaussian branch eps <= min(mu/2, 6 theta L)
long long compute_w0_quadratic(double mu, double L, double epsilon, double delta, int n,
                               int T);

// discretization-aware variant with the degraded strong-DR modulus
// mu - eps - gamma * H (H = Lipschitz constant of block-averaged second
// derivatives, gamma = discretization pitch)
struct W0Discretized {
  long long w0 = 0;
  double degraded_mu = 0.0;
};

W0Discretized compute_w0_discretized(double mu, double L, double epsilon, double delta,
                                     double gamma, double H, const Vec& R_coords, int T);

// Monte-Carlo check of the blocking premise: over `trials` uniform
// permutations of `fs`, verify every length-W block's averaged Hessian
// diagonal stays <= -mu/2; reports the fraction of permutations containing
// any violation. Trials parallelize with per-trial derived seeds.
struct BlockValidationReport {
  int trials = 0;
  int violating_trials = 0;
  double violation_rate = 0.0;
};

BlockValidationReport validate_block_strong_dr(
    const std::vector<std::shared_ptr<const QuadraticUtility>>& fs, int W, double mu,
    int trials, std::uint64_t seed);

}  // namespace drsub
