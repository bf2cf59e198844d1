#include "drsub/offline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace drsub {
namespace {

constexpr std::int64_t kMaxGridPoints = 50'000'000;
constexpr int kGridChunks = 256;  // fixed chunk count keeps the reduction
                                  // order independent of the thread count

bool lex_less(const Vec& a, const Vec& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return false;
}

struct GridBest {
  bool any = false;
  double value = 0.0;
  Vec x;
  void offer(double v, const Vec& p) {
    if (!any || v > value || (v == value && lex_less(p, x))) {
      any = true;
      value = v;
      x = p;
    }
  }
};

}  // namespace

OfflineResult offline_fw(const ObjectiveFunction& f, const PolytopeDomain& domain, int K) {
  if (K < 1) throw ParamError("offline_fw: K must be >= 1");
  if (f.dim() != domain.dim()) throw DimensionError("offline_fw: dimension mismatch");
  Vec x = Vec::Zero(domain.dim());
  for (int k = 0; k < K; ++k) {
    const Vec v = domain.linear_maximize(f.gradient(x));
    x += v / static_cast<double>(K);
  }
  OfflineResult res;
  res.x_out = x;
  res.value = f.value(x);
  res.K_used = K;
  res.method = OfflineResult::Method::kFw;
  return res;
}

OfflineResult grid_maximize(const ObjectiveFunction& f, const PolytopeDomain& domain,
                            double step) {
  const int n = domain.dim();
  if (f.dim() != n) throw DimensionError("grid_maximize: dimension mismatch");
  if (n > 4) throw DomainError("grid_maximize: refusing n > 4 (cost guard)");
  if (step <= 0.0) throw ParamError("grid_maximize: step must be positive");

  std::vector<std::int64_t> counts(static_cast<std::size_t>(n));
  std::int64_t total = 1;
  for (int i = 0; i < n; ++i) {
    const double span = domain.upper()(i) - domain.lower()(i);
    counts[static_cast<std::size_t>(i)] =
        static_cast<std::int64_t>(std::floor(span / step + 1e-9)) + 1;
    total *= counts[static_cast<std::size_t>(i)];
    if (total > kMaxGridPoints) throw DomainError("grid_maximize: grid too large");
  }

  std::vector<GridBest> chunk_best(kGridChunks);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int c = 0; c < kGridChunks; ++c) {
    const std::int64_t begin = total * c / kGridChunks;
    const std::int64_t end = total * (c + 1) / kGridChunks;
    Vec p(n);
    GridBest local;
    for (std::int64_t flat = begin; flat < end; ++flat) {
      std::int64_t rem = flat;
      for (int i = n - 1; i >= 0; --i) {
        const std::int64_t k = rem % counts[static_cast<std::size_t>(i)];
        rem /= counts[static_cast<std::size_t>(i)];
        p(i) = domain.lower()(i) + static_cast<double>(k) * step;
      }
      if (!domain.contains(p, 1e-9)) continue;
      local.offer(f.value(p), p);
    }
    chunk_best[static_cast<std::size_t>(c)] = std::move(local);
  }

  GridBest best;
  for (const GridBest& g : chunk_best)
    if (g.any) best.offer(g.value, g.x);
  if (!best.any) throw DomainError("grid_maximize: no feasible grid point");

  OfflineResult res;
  res.x_out = best.x;
  res.value = best.value;
  res.K_used = 0;
  res.method = OfflineResult::Method::kGrid;
  res.grid_step = step;
  res.grid_slack =
      f.gradient_sup_bound(domain.lower(), domain.upper()) * step * std::sqrt(n);
  return res;
}

OfflineResult best_comparator(const ObjectiveFunction& f, const PolytopeDomain& domain,
                              int fw_K) {
  OfflineResult fw = offline_fw(f, domain, fw_K);
  const int n = domain.dim();
  if (n > 4) return fw;
  const double step = n <= 2 ? 0.005 : (n == 3 ? 0.02 : 0.05);
  OfflineResult grid = grid_maximize(f, domain, step);
  return grid.value > fw.value ? grid : fw;
}

}  // namespace drsub
