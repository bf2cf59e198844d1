// Times the OpenMP-parallel kernels against their serial reference
// implementations and the meta algorithm at 1 vs all threads. Results are
// wall-clock; every pair also cross-checks outputs so a speedup never hides
// a divergence.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "drsub/domain.hpp"
#include "drsub/experiments.hpp"
#include "drsub/objective.hpp"
#include "drsub/offline.hpp"
#include "drsub/online.hpp"
#include "drsub/rng.hpp"
#include "drsub/streams.hpp"
#include "reference/naive.hpp"

using namespace drsub;

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch())
      .count();
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

void report(const char* name, double serial_ms, double parallel_ms, bool agree) {
  std::printf("%-34s serial %9.1f ms   parallel %9.1f ms   speedup %5.2fx   %s\n", name,
              serial_ms, parallel_ms, serial_ms / parallel_ms,
              agree ? "outputs agree" : "OUTPUTS DIVERGE");
}

}  // namespace

int main() {
  std::printf("threads available: %d\n\n", max_threads());

  // ---- lattice maximization: 4-d grid, ~4.5M lattice points -------------
  {
    Rng rng(7);
    Mat A(4, 4);
    for (int i = 0; i < 4; ++i) {
      A(i, i) = rng.uniform(-3.0, -1.0);
      for (int j = i + 1; j < 4; ++j) A(i, j) = A(j, i) = rng.uniform(-0.5, 0.0);
    }
    const QuadraticUtility f(A, -(A.transpose() * Vec::Ones(4)));
    const PolytopeDomain dom = PolytopeDomain::budgeted_box(4, 2.0);
    const double step = 0.022;

    const double t0 = now_ms();
    const reference::NaiveGridResult ref = reference::naive_grid_maximize(f, dom, step);
    const double t1 = now_ms();
    const OfflineResult par = grid_maximize(f, dom, step);
    const double t2 = now_ms();
    report("grid_maximize (n=4)", t1 - t0, t2 - t1,
           par.value == ref.value && (par.x_out - ref.x).cwiseAbs().maxCoeff() == 0.0);
  }

  // ---- block-premise Monte-Carlo: 2*10^5 permutation trials -------------
  {
    const auto fs = exp2_functions(100, 3);
    const int trials = 200000;
    const double t0 = now_ms();
    const double ref = reference::naive_block_violation_rate(fs, 5, 1.25, trials, 11);
    const double t1 = now_ms();
    const BlockValidationReport rep = validate_block_strong_dr(fs, 5, 1.25, trials, 11);
    const double t2 = now_ms();
    report("validate_block_strong_dr", t1 - t0, t2 - t1, rep.violation_rate == ref);
  }

  // ---- meta algorithm round loop: K selections in parallel --------------
  {
    const PolytopeDomain dom = exp1_domain();
    const auto fs = exp1_synthetic_functions(dom.dim(), 60, 5);
    const auto run = [&] {
      std::vector<double> comp(fs.size(), 0.0);
      return run_alg1(fs, dom, 1.0, 100, comp, 1.0 - std::exp(-1.0));
    };
    set_threads(1);
    const double t0 = now_ms();
    const RegretTrace serial = run();
    const double t1 = now_ms();
    set_threads(max_threads());
    const double t2 = now_ms();
    const RegretTrace parallel = run();
    const double t3 = now_ms();
    bool agree = serial.rows.size() == parallel.rows.size();
    for (std::size_t i = 0; agree && i < serial.rows.size(); ++i)
      agree = (serial.rows[i].x - parallel.rows[i].x).cwiseAbs().maxCoeff() == 0.0 &&
              serial.rows[i].utility == parallel.rows[i].utility;
    report("run_alg1 (n=17, T=60, K=100)", t1 - t0, t3 - t2, agree);
  }

  return 0;
}
