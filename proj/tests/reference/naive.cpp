#include "reference/naive.hpp"

#include <algorithm>
#include <cmath>

#include "drsub/rng.hpp"

namespace drsub::reference {

std::vector<double> naive_alg1_interval(
    const std::vector<std::function<double(double)>>& grad_fns, double lo, double hi,
    double mu, int K) {
  const int T = static_cast<int>(grad_fns.size());
  std::vector<double> grad_sum(static_cast<std::size_t>(K), 0.0);
  std::vector<int> seen(static_cast<std::size_t>(K), 0);
  std::vector<double> played;
  played.reserve(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    // leader of each instance, clamped to the interval
    std::vector<double> v(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
      if (seen[static_cast<std::size_t>(k)] == 0) {
        v[static_cast<std::size_t>(k)] = std::min(std::max(0.0, lo), hi);
      } else {
        const double leader =
            grad_sum[static_cast<std::size_t>(k)] / (mu * seen[static_cast<std::size_t>(k)]);
        v[static_cast<std::size_t>(k)] = std::min(std::max(leader, lo), hi);
      }
    }
    // chain x^(k+1) = x^(k) + v_k / K from x^(1) = 0, play x^(K+1)
    std::vector<double> x(static_cast<std::size_t>(K) + 1, 0.0);
    for (int k = 0; k < K; ++k)
      x[static_cast<std::size_t>(k) + 1] =
          x[static_cast<std::size_t>(k)] + v[static_cast<std::size_t>(k)] / K;
    played.push_back(x[static_cast<std::size_t>(K)]);
    // feed the round-t gradient at x^(k) back to instance k
    for (int k = 0; k < K; ++k) {
      grad_sum[static_cast<std::size_t>(k)] +=
          grad_fns[static_cast<std::size_t>(t)](x[static_cast<std::size_t>(k)]);
      ++seen[static_cast<std::size_t>(k)];
    }
  }
  return played;
}

NaiveGridResult naive_grid_maximize(const ObjectiveFunction& f, const PolytopeDomain& domain,
                                    double step) {
  const int n = domain.dim();
  std::vector<long long> counts(static_cast<std::size_t>(n));
  long long total = 1;
  for (int i = 0; i < n; ++i) {
    const double span = domain.upper()(i) - domain.lower()(i);
    counts[static_cast<std::size_t>(i)] =
        static_cast<long long>(std::floor(span / step + 1e-9)) + 1;
    total *= counts[static_cast<std::size_t>(i)];
  }
  NaiveGridResult best;
  bool any = false;
  Vec p(n);
  for (long long flat = 0; flat < total; ++flat) {
    long long rem = flat;
    for (int i = n - 1; i >= 0; --i) {
      const long long k = rem % counts[static_cast<std::size_t>(i)];
      rem /= counts[static_cast<std::size_t>(i)];
      p(i) = domain.lower()(i) + static_cast<double>(k) * step;
    }
    if (!domain.contains(p, 1e-9)) continue;
    const double v = f.value(p);
    bool better = !any || v > best.value;
    if (!better && v == best.value) {
      for (int i = 0; i < n; ++i) {
        if (p(i) < best.x(i)) {
          better = true;
          break;
        }
        if (p(i) > best.x(i)) break;
      }
    }
    if (better) {
      any = true;
      best.value = v;
      best.x = p;
    }
  }
  if (!any) throw DomainError("naive_grid_maximize: no feasible grid point");
  return best;
}

double naive_block_violation_rate(
    const std::vector<std::shared_ptr<const QuadraticUtility>>& fs, int W, double mu,
    int trials, std::uint64_t seed) {
  const int T = static_cast<int>(fs.size());
  const int n = fs.front()->dim();
  int violating = 0;
  for (int trial = 0; trial < trials; ++trial) {
    // same per-trial seed derivation as the library, own everything else
    std::vector<int> order(static_cast<std::size_t>(T));
    for (int i = 0; i < T; ++i) order[static_cast<std::size_t>(i)] = i;
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(trial)));
    rng.shuffle(order);
    bool violated = false;
    for (int begin = 0; begin < T && !violated; begin += W) {
      const int end = std::min(begin + W, T);
      for (int coord = 0; coord < n && !violated; ++coord) {
        Vec acc = Vec::Zero(n);
        for (int i = begin; i < end; ++i)
          acc += fs[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]
                     ->quad()
                     .diagonal();
        acc /= static_cast<double>(end - begin);
        if (acc(coord) > -0.5 * mu) violated = true;
      }
    }
    if (violated) ++violating;
  }
  return static_cast<double>(violating) / static_cast<double>(trials);
}

long long naive_w0_quadratic(double mu, double L, double epsilon, double delta, int n, int T) {
  (void)mu;  // the threshold formula itself does not involve mu
  const long double theta = 2.5L * logl(3.0L) - 2.0L / 3.0L;
  const long double w = 128.0L * theta * static_cast<long double>(L) *
                        static_cast<long double>(L) /
                        (static_cast<long double>(epsilon) * static_cast<long double>(epsilon)) *
                        logl(4.0L * static_cast<long double>(n) * static_cast<long double>(T) /
                             static_cast<long double>(delta));
  return static_cast<long long>(ceill(w));
}

}  // namespace drsub::reference
