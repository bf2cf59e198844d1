#include "drsub/streams.hpp"

#include <cmath>
#include <numeric>

namespace drsub {

std::vector<int> permuted_indices(int n, std::uint64_t seed) {
  if (n < 1) throw ParamError("permuted_indices: n must be >= 1");
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  rng.shuffle(idx);
  return idx;
}

double w0_theta() { return 2.5 * std::log(3.0) - 2.0 / 3.0; }

long long compute_w0_quadratic(double mu, double L, double epsilon, double delta, int n,
                               int T) {
  if (mu <= 0.0) throw ParamError("compute_w0_quadratic: mu must be > 0");
  if (L <= 0.0) throw ParamError("compute_w0_quadratic: L must be > 0");
  if (delta <= 0.0 || delta >= 1.0)
    throw ParamError("compute_w0_quadratic: delta must lie in (0,1)");
  if (n < 1 || T < 1) throw ParamError("compute_w0_quadratic: n and T must be >= 1");
  const double theta = w0_theta();
  if (epsilon <= 0.0) throw ParamError("compute_w0_quadratic: epsilon must be > 0");
  if (epsilon > 0.5 * mu)
    throw ParamError("compute_w0_quadratic: epsilon must be <= mu/2 (sub-Gaussian branch)");
  if (epsilon > 6.0 * theta * L)
    throw ParamError(
        "compute_w0_quadratic: epsilon must be <= 6*theta*L (sub-Gaussian branch)");
  const double w0 = (128.0 * theta * L * L / (epsilon * epsilon)) *
                    std::log(4.0 * n * static_cast<double>(T) / delta);
  return static_cast<long long>(std::ceil(w0));
}

W0Discretized compute_w0_discretized(double mu, double L, double epsilon, double delta,
                                     double gamma, double H, const Vec& R_coords, int T) {
  if (mu <= 0.0) throw ParamError("compute_w0_discretized: mu must be > 0");
  if (L <= 0.0) throw ParamError("compute_w0_discretized: L must be > 0");
  if (delta <= 0.0 || delta >= 1.0)
    throw ParamError("compute_w0_discretized: delta must lie in (0,1)");
  if (epsilon <= 0.0) throw ParamError("compute_w0_discretized: epsilon must be > 0");
  if (gamma <= 0.0) throw ParamError("compute_w0_discretized: gamma must be > 0");
  if (H < 0.0) throw ParamError("compute_w0_discretized: H must be >= 0");
  if (T < 1) throw ParamError("compute_w0_discretized: T must be >= 1");
  if (R_coords.size() < 1 || R_coords.minCoeff() <= 0.0)
    throw ParamError("compute_w0_discretized: coordinate ranges must be positive");
  W0Discretized out;
  out.degraded_mu = mu - epsilon - gamma * H;
  if (out.degraded_mu <= 0.0)
    throw ParamError(
        "compute_w0_discretized: mu - epsilon - gamma*H <= 0 (parameters destroy strong "
        "DR-submodularity)");
  const double theta = w0_theta();
  const double sum_r = R_coords.sum();
  const double w0 = (128.0 * theta * L * L / (epsilon * epsilon)) *
                    std::log(4.0 * static_cast<double>(T) * sum_r / (2.0 * gamma * delta));
  out.w0 = static_cast<long long>(std::ceil(w0));
  return out;
}

BlockValidationReport validate_block_strong_dr(
    const std::vector<std::shared_ptr<const QuadraticUtility>>& fs, int W, double mu,
    int trials, std::uint64_t seed) {
  const int T = static_cast<int>(fs.size());
  if (T < 1) throw ParamError("validate_block_strong_dr: empty function list");
  if (W < 1 || W > T) throw ParamError("validate_block_strong_dr: W must lie in [1, T]");
  if (trials < 1) throw ParamError("validate_block_strong_dr: trials must be >= 1");
  const int n = fs.front()->dim();
  // constant Hessians: extract the diagonals once
  std::vector<Vec> diags;
  diags.reserve(fs.size());
  for (const auto& f : fs) {
    if (!f || f->dim() != n)
      throw DimensionError("validate_block_strong_dr: dimension mismatch");
    diags.push_back(f->quad().diagonal());
  }

  int violating = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : violating)
#endif
  for (int trial = 0; trial < trials; ++trial) {
    const std::vector<int> order =
        permuted_indices(T, derive_seed(seed, static_cast<std::uint64_t>(trial)));
    bool violated = false;
    for (int begin = 0; begin < T && !violated; begin += W) {
      const int end = std::min(begin + W, T);
      Vec avg = Vec::Zero(n);
      for (int i = begin; i < end; ++i)
        avg += diags[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
      avg /= static_cast<double>(end - begin);
      if (avg.maxCoeff() > -0.5 * mu) violated = true;
    }
    if (violated) ++violating;
  }

  BlockValidationReport rep;
  rep.trials = trials;
  rep.violating_trials = violating;
  rep.violation_rate = static_cast<double>(violating) / static_cast<double>(trials);
  return rep;
}

}  // namespace drsub
