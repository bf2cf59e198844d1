// End-to-end acceptance gate: one [PASS]/[FAIL] line per criterion, exit
// code 1 if any criterion fails. Tolerances are pinned here, not tunable.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "drsub/checks.hpp"
#include "drsub/domain.hpp"
#include "drsub/experiments.hpp"
#include "drsub/iid_online.hpp"
#include "drsub/objective.hpp"
#include "drsub/offline.hpp"
#include "drsub/online.hpp"
#include "drsub/oracle.hpp"
#include "drsub/rng.hpp"
#include "drsub/streams.hpp"
#include "reference/naive.hpp"

using namespace drsub;

namespace {

constexpr double kAlphaE = 0.63212055882855767;  // 1 - 1/e

// hygiene flags accumulated while the comparative criteria run
struct Hygiene {
  bool all_feasible = true;
  long long points_checked = 0;
  double worst_tol = 0.0;     // smallest tolerance that would accept every point
  std::string worst_source;
};

Hygiene g_hygiene;

void track_feasibility(const RegretTrace& trace, const PolytopeDomain& domain,
                       const char* source) {
  for (const RegretRow& row : trace.rows) {
    ++g_hygiene.points_checked;
    if (!domain.contains(row.x, 1e-7)) {
      g_hygiene.all_feasible = false;
      double lo = 1e-7, hi = 1.0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (domain.contains(row.x, mid) ? hi : lo) = mid;
      }
      if (hi > g_hygiene.worst_tol) {
        g_hygiene.worst_tol = hi;
        g_hygiene.worst_source = std::string(source) + " t=" + std::to_string(row.t);
      }
    }
  }
}

std::shared_ptr<const QuadraticUtility> random_dr_quadratic(Rng& rng, int n,
                                                            double diag_lo, double diag_hi,
                                                            double off_lo) {
  Mat A(n, n);
  for (int i = 0; i < n; ++i) {
    A(i, i) = rng.uniform(diag_lo, diag_hi);
    for (int j = i + 1; j < n; ++j) A(i, j) = A(j, i) = rng.uniform(off_lo, 0.0);
  }
  Vec a = -(A.transpose() * Vec::Ones(n));
  return std::make_shared<const QuadraticUtility>(std::move(A), std::move(a));
}

// least-squares SSE of y ~ a + b * g over equal-length vectors
double fit_sse(const std::vector<double>& g, const std::vector<double>& y) {
  const std::size_t n = g.size();
  double sg = 0, sy = 0, sgg = 0, sgy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sg += g[i];
    sy += y[i];
    sgg += g[i] * g[i];
    sgy += g[i] * y[i];
  }
  const double denom = n * sgg - sg * sg;
  const double b = denom == 0.0 ? 0.0 : (n * sgy - sg * sy) / denom;
  const double a = (sy - b * sg) / n;
  double sse = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (a + b * g[i]);
    sse += r * r;
  }
  return sse;
}

// ---------------------------------------------------------------------------

bool criterion1() {
  const PolytopeDomain dom = PolytopeDomain::budgeted_box(2, 1.0);
  const double R = dom.diameter(Norm::L2);
  Rng rng(101);
  int violations = 0;
  for (int inst = 0; inst < 50; ++inst) {
    const auto f = random_dr_quadratic(rng, 2, -2.0, -0.2, -0.5);
    const double L = f->smoothness_bound(dom.lower(), dom.upper(), Norm::L2);
    const OfflineResult fw = offline_fw(*f, dom, 1000);
    const OfflineResult grid = grid_maximize(*f, dom, 0.005);
    const double floor =
        kAlphaE * grid.value - L * R * R / 2000.0 - grid.grid_slack;
    if (fw.value < floor) ++violations;
  }
  std::printf("    offline fw vs grid oracle: %d/50 violations\n", violations);
  return violations == 0;
}

bool criterion2() {
  Rng rng(202);
  int violations = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const int n = 2 + static_cast<int>(rng.bounded(3));
    const auto f = random_dr_quadratic(rng, n, -3.0, -0.5, -0.5);
    const double mu = (-f->quad().diagonal()).minCoeff();
    const PolytopeDomain dom = PolytopeDomain::unit_box(n);
    const CheckReport rep =
        check_strong_dr(*f, dom, mu, Norm::L2, 500, 3000 + static_cast<std::uint64_t>(inst));
    if (!rep.hessian_ok || !rep.definitional_ok) ++violations;
  }
  std::printf("    hessian criterion -> definitional criterion: %d/200 violations\n",
              violations);
  return violations == 0;
}

// KNOWN FAIL: this check asserts a positive, log-growing (1-1/e)-regret. At
// stationarity each sub-learner selects Proj(grad_avg/mu), so the play chain
// discretizes the flow dx/dt = grad f(x)/mu over unit time and lands at
// value (1-1/e^2) f* for quadratics — above the (1-1/e) f* comparator — so
// the final regret is negative and shrinking for any such family. The check
// is kept as written rather than loosened.
bool criterion3() {
  const int n = 3;
  const PolytopeDomain dom = PolytopeDomain::budgeted_box(n, 1.5);
  const double mu = 2.0;
  const double R = dom.diameter(Norm::L2);
  int seeds_passing = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::vector<double> regrets, lnT, sqT;
    bool seed_ok = true;
    for (const int T : {100, 200, 400}) {
      Rng rng(derive_seed(303, seed * 1000 + static_cast<std::uint64_t>(T)));
      std::vector<std::shared_ptr<const ObjectiveFunction>> fs;
      double L = 0.0, beta = 0.0;
      for (int t = 0; t < T; ++t) {
        auto f = random_dr_quadratic(rng, n, -3.0, -2.0, -1.0);
        L = std::max(L, f->smoothness_bound(dom.lower(), dom.upper(), Norm::L2));
        beta = std::max(beta, f->gradient_sup_bound(dom.lower(), dom.upper()));
        fs.push_back(std::move(f));
      }
      const auto sum_f = materialize_sum(fs, std::vector<double>(fs.size(), 1.0));
      const OfflineResult comp = best_comparator(*sum_f, dom);
      std::vector<double> comp_rounds;
      for (const auto& f : fs) comp_rounds.push_back(f->value(comp.x_out));
      const int K = alg1_default_K(T);
      const RegretTrace trace = run_alg1(fs, dom, mu, K, comp_rounds, kAlphaE);
      track_feasibility(trace, dom, "c3");
      const double regret = trace.rows.back().alpha_regret;
      const double bound = theorem1_bound(L, R, beta, mu, T, K);
      if (!(regret > 0.0 && regret <= bound)) seed_ok = false;
      regrets.push_back(regret);
      lnT.push_back(std::log(static_cast<double>(T)));
      sqT.push_back(std::sqrt(static_cast<double>(T)));
    }
    for (int i = 0; i + 1 < 3; ++i)
      if (!(regrets[static_cast<std::size_t>(i)] > 0.0 &&
            regrets[static_cast<std::size_t>(i) + 1] /
                    regrets[static_cast<std::size_t>(i)] <=
                1.6))
        seed_ok = false;
    if (fit_sse(lnT, regrets) > fit_sse(sqT, regrets)) seed_ok = false;
    if (seed == 1)
      std::printf("    seed 1 final regrets (T=100,200,400): %.4g, %.4g, %.4g\n",
                  regrets[0], regrets[1], regrets[2]);
    if (seed_ok) ++seeds_passing;
  }
  std::printf("    log-growth signature: %d/10 seeds\n", seeds_passing);
  return seeds_passing >= 9;
}

bool criterion4() {
  const ExperimentConfig config = exp1_preset();
  const PolytopeDomain dom = PolytopeDomain::from_json(config.domain);
  int seeds_passing = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::vector<RegretTrace> traces = run_config_seed(config, seed);
    track_feasibility(traces[0], dom, "c4-alg1");
    track_feasibility(traces[1], dom, "c4-metafw");
    const double r_alg1 = traces[0].rows.back().alpha_regret;
    const double r_meta = traces[1].rows.back().alpha_regret;
    if (r_alg1 <= 0.9 * r_meta) ++seeds_passing;
  }
  std::printf("    alg1 regret <= 0.9 x meta-fw regret: %d/10 seeds\n", seeds_passing);
  return seeds_passing >= 8;
}

// KNOWN FAIL: the blocked runner's first block replays the cold-start zero
// play for W rounds and it makes ceil(T/W) coarser decisions than the
// unblocked run makes rounds, which at T=100, W=5 costs ~7% cumulative
// utility on every domain geometry swept (60 draws x 10 seeds). Its
// steady-state play is as good or better; the handicap dominates at this
// horizon. Kept as written rather than loosened.
bool criterion5() {
  const ExperimentConfig config = exp2_preset();
  const PolytopeDomain dom = PolytopeDomain::from_json(config.domain);
  int seeds_passing = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::vector<RegretTrace> traces = run_config_seed(config, seed);
    track_feasibility(traces[0], dom, "c5-alg1");
    track_feasibility(traces[1], dom, "c5-blocked");
    const double cum_unblocked = traces[0].rows.back().cum_utility;
    const double cum_blocked = traces[1].rows.back().cum_utility;
    if (cum_blocked >= cum_unblocked) ++seeds_passing;
  }
  std::printf("    blocked random-order utility >= adversarial-order: %d/10 seeds\n",
              seeds_passing);
  return seeds_passing >= 8;
}

bool criterion6() {
  const int T = 100;
  const auto fs = exp2_functions(T, 1);
  const double mu = 1.25;
  const long long w0 = compute_w0_quadratic(mu, 10.0, mu / 2.0, 0.1, 4, T);
  const int W = static_cast<int>(std::max<long long>(5, std::min<long long>(w0, T)));
  const BlockValidationReport premise = validate_block_strong_dr(fs, W, mu, 10000, 404);
  const BlockValidationReport power = validate_block_strong_dr(fs, 1, mu, 10000, 404);
  std::printf("    W=%d violation rate %.4f (<= 0.1); W=1 rate %.4f (> 0.3)\n", W,
              premise.violation_rate, power.violation_rate);
  return premise.violation_rate <= 0.1 && power.violation_rate > 0.3;
}

bool criterion7() {
  const ExperimentConfig config = exp3_preset();
  const PolytopeDomain dom = PolytopeDomain::from_json(config.domain);
  std::vector<double> avg2, avg3, avgo;
  int alg2_top = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::vector<RegretTrace> traces = run_config_seed(config, seed);
    for (const RegretTrace& tr : traces) track_feasibility(tr, dom, "c7");
    const double a2 = traces[0].rows.back().cum_utility / config.T;
    const double a3 = traces[1].rows.back().cum_utility / config.T;
    const double ao = traces[2].rows.back().cum_utility / config.T;
    avg2.push_back(a2);
    avg3.push_back(a3);
    avgo.push_back(ao);
    if (a2 > a3 && a2 > ao) ++alg2_top;
  }
  const auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  const auto paired_se = [&](const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> d;
    for (std::size_t i = 0; i < a.size(); ++i) d.push_back(a[i] - b[i]);
    const double m = mean(d);
    double var = 0;
    for (double x : d) var += (x - m) * (x - m);
    var /= static_cast<double>(d.size() - 1);
    return std::sqrt(var / static_cast<double>(d.size()));
  };
  const double m2 = mean(avg2), m3 = mean(avg3), mo = mean(avgo);
  std::printf("    mean running-average utility: alg2 %.4f, alg3 %.4f, osfw %.4f; "
              "alg2 top in %d/10 seeds\n",
              m2, m3, mo, alg2_top);
  return m2 >= m3 - paired_se(avg2, avg3) && m3 >= mo - paired_se(avg3, avgo) &&
         alg2_top >= 7;
}

bool criterion8() {
  const int T = 100;
  const PolytopeDomain dom = exp23_domain(1);
  std::vector<double> mean_scaled(static_cast<std::size_t>(T), 0.0);
  double sigma = 0.0, L = 0.0;
  const int S = 50;
  for (std::uint64_t seed = 1; seed <= S; ++seed) {
    auto stream = exp3_stream(seed);
    NoisyGradientOracle oracle(stream, dom);
    sigma = oracle.sigma_bound();
    // realized curvature certificate: base smoothness plus the noise radius
    L = std::max(L, stream->expected().smoothness_bound(dom.lower(), dom.upper(),
                                                        Norm::L2) +
                        stream->dim() * stream->nu());
    const IidRunResult res = run_alg3(dom, oracle, T, 1.0, std::exp(-1.0));
    track_feasibility(res.trace, dom, "c8-alg3");
    for (int t = 0; t < T; ++t)
      mean_scaled[static_cast<std::size_t>(t)] +=
          res.eps_norm[static_cast<std::size_t>(t)] * std::sqrt(t + 2.0);
  }
  for (double& v : mean_scaled) v /= static_cast<double>(S);

  std::vector<double> ts, ys;
  double peak = 0.0;
  for (int t = 10; t <= T; ++t) {
    ts.push_back(static_cast<double>(t));
    ys.push_back(mean_scaled[static_cast<std::size_t>(t - 1)]);
    peak = std::max(peak, mean_scaled[static_cast<std::size_t>(t - 1)]);
  }
  double sg = 0, sy = 0, sgg = 0, sgy = 0;
  const double n = static_cast<double>(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    sg += ts[i];
    sy += ys[i];
    sgg += ts[i] * ts[i];
    sgy += ts[i] * ys[i];
  }
  const double slope = (n * sgy - sg * sy) / (n * sgg - sg * sg);
  const double R = dom.diameter(Norm::L2);
  const double cap = 4.0 * (2.0 * L * R + 2.0 * sigma) * std::sqrt(std::log(80.0 * T));
  std::printf("    scaled estimator error: fit slope %.5f (<= 0), peak %.3f (cap %.3f)\n",
              slope, peak, cap);
  return slope <= 0.0 && peak <= cap;
}

bool criterion9() {
  const int T = 100;
  const PolytopeDomain dom = exp23_domain(1);
  long long expected2 = 0;
  for (int t = 1; t <= T; ++t)
    expected2 += static_cast<long long>(t) *
                 static_cast<long long>(std::ceil(std::sqrt(static_cast<double>(t))));
  bool ok = alg2_expected_calls(T) == expected2 && alg3_expected_calls(T) == 2 * T - 1 &&
            osfw_expected_calls(T) == T;
  {
    auto stream = exp3_stream(1);
    NoisyGradientOracle oracle(stream, dom);
    ok = ok && run_alg2(dom, oracle, T, 1.0, kAlphaE).trace.gradient_calls == expected2;
  }
  {
    auto stream = exp3_stream(1);
    NoisyGradientOracle oracle(stream, dom);
    ok = ok &&
         run_alg3(dom, oracle, T, 1.0, std::exp(-1.0)).trace.gradient_calls == 2 * T - 1;
  }
  {
    auto stream = exp3_stream(1);
    NoisyGradientOracle oracle(stream, dom);
    ok = ok && run_osfw(dom, oracle, T, 1.0, std::exp(-1.0)).trace.gradient_calls == T;
  }
  std::printf("    gradient calls at T=100: alg2 %lld, alg3 %d, osfw %d\n", expected2,
              2 * T - 1, T);
  return ok;
}

bool criterion10() {
  // (a) gradient vs central finite differences on every family
  bool fd_ok = true;
  Rng rng(1010);
  {
    Mat A(2, 2);
    A << -2.0, -0.4, -0.4, -1.0;
    const QuadraticUtility quad(A, -(A.transpose() * Vec::Ones(2)));
    Vec w(2);
    w << 0.9, 0.6;
    Mat theta = Mat::Zero(2, 2);
    theta(0, 1) = theta(1, 0) = -0.35;
    const LogDiversityUtility logdiv(w, theta, 5.0);
    using S = ConcaveNegDepUtility::ScalarTerm;
    std::vector<S> terms(2);
    terms[0] = {S::kLog, 1.5, 0.0, 0.0, 1.0};
    terms[1] = {S::kPower, 0.0, 0.0, 0.0, 0.75};
    const ConcaveNegDepUtility concave(terms, {{{0, 1}, -0.2}});
    const std::vector<const ObjectiveFunction*> fams{&quad, &logdiv, &concave};
    for (const ObjectiveFunction* f : fams) {
      for (int trial = 0; trial < 50; ++trial) {
        Vec x(f->dim());
        for (int i = 0; i < f->dim(); ++i) x(i) = rng.uniform(0.05, 0.95);
        const Vec g = f->gradient(x);
        for (int i = 0; i < f->dim(); ++i) {
          Vec lo = x, hi = x;
          lo(i) -= 1e-5;
          hi(i) += 1e-5;
          const double fd = (f->value(hi) - f->value(lo)) / 2e-5;
          if (std::abs(fd - g(i)) > 1e-6 * std::max(1.0, std::abs(g(i)))) fd_ok = false;
        }
      }
    }
  }

  // (b) feasibility flag accumulated across every comparative criterion above
  const bool feasible_ok = g_hygiene.all_feasible;

  // (c) repeated runs serialize to identical bytes
  bool csv_ok = true;
  {
    namespace fsys = std::filesystem;
    const ExperimentConfig config = exp2_preset();
    const fsys::path dir = fsys::temp_directory_path() / "drsub_acceptance";
    fsys::create_directories(dir);
    std::string hashes[2];
    for (int rep = 0; rep < 2; ++rep) {
      const std::vector<RegretTrace> traces = run_config_seed(config, 4);
      const fsys::path p = dir / ("hygiene_rep" + std::to_string(rep) + ".csv");
      write_trace_csv(traces[1], p.string());
      std::ifstream in(p, std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      hashes[rep] = ss.str();
    }
    csv_ok = !hashes[0].empty() && hashes[0] == hashes[1];
  }
  std::printf("    finite differences %s; %lld played points feasible %s; csv bytes %s\n",
              fd_ok ? "ok" : "FAILED", g_hygiene.points_checked,
              feasible_ok ? "ok" : "FAILED", csv_ok ? "stable" : "UNSTABLE");
  if (!feasible_ok)
    std::printf("    worst violation needs tol %.3e (%s)\n", g_hygiene.worst_tol,
                g_hygiene.worst_source.c_str());
  return fd_ok && feasible_ok && csv_ok;
}

bool criterion11() {
  const bool w0_ok = compute_w0_quadratic(1.0, 1.0, 0.5, 0.1, 2, 100) == 9571 &&
                     reference::naive_w0_quadratic(1.0, 1.0, 0.5, 0.1, 2, 100) == 9571;
  const bool theta_ok = std::abs(w0_theta() - 2.079864055003608) <= 1e-12;
  std::printf("    w0(1,1,0.5,0.1,2,100) = %lld; theta = %.15f\n",
              compute_w0_quadratic(1.0, 1.0, 0.5, 0.1, 2, 100), w0_theta());
  return w0_ok && theta_ok;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    std::function<bool()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "offline approximation bound", criterion1},
      {2, "hessian criterion implies definitional strong dr-submodularity", criterion2},
      {3, "logarithmic regret signature of the strongly dr-submodular meta algorithm",
       criterion3},
      {4, "recommendation benchmark: meta algorithm beats the linear-learner baseline",
       criterion4},
      {5, "random-order blocking beats adversarial order on cumulative utility",
       criterion5},
      {6, "block-averaging premise holds at the computed block size", criterion6},
      {7, "i.i.d. benchmark: averaged-gradient fw leads, one-sample fw trails",
       criterion7},
      {8, "variance-reduced estimator error decays like 1/sqrt(t)", criterion8},
      {9, "exact gradient-call accounting", criterion9},
      {10, "numerical hygiene: finite differences, feasibility, determinism",
       criterion10},
      {11, "block-threshold arithmetic", criterion11},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    bool ok = false;
    try {
      ok = c.run();
    } catch (const std::exception& e) {
      std::printf("    exception: %s\n", e.what());
      ok = false;
    }
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", c.number, c.name);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (failures > 0) std::printf("%d of 11 criteria failed\n", failures);
  return failures > 0 ? 1 : 0;
}
