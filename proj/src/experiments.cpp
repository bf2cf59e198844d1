#include "drsub/experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "drsub/iid_online.hpp"
#include "drsub/movielens.hpp"
#include "drsub/offline.hpp"
#include "drsub/plot.hpp"
#include "drsub/rng.hpp"
#include "drsub/streams.hpp"

namespace drsub {
namespace {

// Both quadratic experiments share one randomly drawn polytope (pinned seed),
// so trial seeds vary only the function draws.
constexpr std::uint64_t kExp23DomainSeed = 1;
// derivation index for the block permutation; far above any round index t
constexpr std::uint64_t kPermIndex = 1000003;

double default_grid_step(int n) {
  if (n <= 2) return 0.005;
  if (n == 3) return 0.02;
  return 0.05;
}

const char* method_name(OfflineResult::Method m) {
  return m == OfflineResult::Method::kFw ? "fw" : "grid";
}

OfflineResult compute_comparator(const ObjectiveFunction& f, const PolytopeDomain& domain,
                                 const ComparatorSpec& spec) {
  if (spec.method == "fw") return offline_fw(f, domain, spec.fw_K);
  if (spec.method == "grid") {
    const double step = spec.grid_step > 0.0 ? spec.grid_step : default_grid_step(f.dim());
    return grid_maximize(f, domain, step);
  }
  // "best": the grid refuses n > 4, so high dimensions fall back to FW alone
  if (f.dim() > 4) return offline_fw(f, domain, spec.fw_K);
  return best_comparator(f, domain, spec.fw_K);
}

std::vector<double> per_round_values(
    const std::vector<std::shared_ptr<const ObjectiveFunction>>& fs, const Vec& x) {
  std::vector<double> vals(fs.size());
  for (std::size_t t = 0; t < fs.size(); ++t) vals[t] = fs[t]->value(x);
  return vals;
}

// ordered-sequence generators (everything except exp3_bilinear)
std::vector<std::shared_ptr<const ObjectiveFunction>> build_sequence(
    const ExperimentConfig& config, const PolytopeDomain& domain, std::uint64_t seed) {
  const StreamSpec& s = config.stream;
  if (s.generator == "exp1_synthetic")
    return exp1_synthetic_functions(domain.dim(), config.T, seed);
  if (s.generator == "movielens") {
    const MovieLensExtract extract =
        ingest_movielens(s.ratings_path, s.movies_path, domain.dim(), config.T, seed);
    return movielens_functions(extract);
  }
  if (s.generator == "exp2_quadratics") {
    std::vector<std::shared_ptr<const ObjectiveFunction>> fs;
    for (auto& q : exp2_functions(config.T, seed, domain.dim())) fs.push_back(std::move(q));
    return fs;
  }
  if (s.generator == "explicit") {
    if (!s.functions.is_array() || static_cast<int>(s.functions.size()) < config.T)
      throw ConfigError("stream.functions: need at least T function records");
    std::vector<std::shared_ptr<const ObjectiveFunction>> fs;
    for (int t = 0; t < config.T; ++t) {
      auto f = function_from_json(s.functions.at(static_cast<std::size_t>(t)));
      if (f->dim() != domain.dim())
        throw ConfigError("stream.functions: dimension mismatch at index " + std::to_string(t));
      fs.push_back(std::move(f));
    }
    return fs;
  }
  throw ConfigError("generator '" + s.generator + "' does not produce an ordered sequence");
}

int blocked_default_W(int T) {
  return std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(T)))));
}

// exact gradient-evaluation budgets of the ordered-model runners
long long ordered_gradient_calls(const AlgorithmSpec& spec, int T) {
  if (spec.name == "alg1") {
    const int K = spec.K > 0 ? spec.K : alg1_default_K(T);
    return static_cast<long long>(K) * T;
  }
  if (spec.name == "metafw") {
    const int K = spec.K > 0 ? spec.K : metafw_default_K(T);
    return static_cast<long long>(K) * T;
  }
  const int W = spec.W > 0 ? spec.W : blocked_default_W(T);
  const int blocks = (T + W - 1) / W;
  const int K = spec.K > 0 ? spec.K : alg1_default_K(blocks);
  return static_cast<long long>(K) * blocks;
}

}  // namespace

// ---------------------------------------------------------------------------
// instance builders

PolytopeDomain exp1_domain(int n, double budget) {
  return PolytopeDomain::budgeted_box(n, budget);
}

std::vector<std::shared_ptr<const ObjectiveFunction>> exp1_synthetic_functions(
    int n, int T, std::uint64_t seed) {
  if (n < 1 || T < 1) throw ParamError("exp1_synthetic_functions: n and T must be positive");
  constexpr int kGenres = 5;
  std::vector<std::shared_ptr<const ObjectiveFunction>> fs;
  fs.reserve(static_cast<std::size_t>(T));
  for (int t = 1; t <= T; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    Vec w(n);
    for (int i = 0; i < n; ++i) w(i) = rng.uniform01();
    Mat theta = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (i % kGenres == j % kGenres) {
          theta(i, j) = -rng.uniform01();
          theta(j, i) = theta(i, j);
        }
    fs.push_back(std::make_shared<LogDiversityUtility>(std::move(w), std::move(theta)));
  }
  return fs;
}

PolytopeDomain exp23_domain(std::uint64_t seed, int n, int m) {
  if (n < 1 || m < 0) throw ParamError("exp23_domain: bad shape");
  Rng rng(seed);
  Mat C(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) C(i, j) = rng.uniform01();
  return PolytopeDomain(std::move(C), Vec::Ones(m), Vec::Zero(n), Vec::Ones(n));
}

std::vector<std::shared_ptr<const QuadraticUtility>> exp2_functions(int T, std::uint64_t seed,
                                                                    int n) {
  if (n < 1 || T < 1) throw ParamError("exp2_functions: n and T must be positive");
  std::vector<std::shared_ptr<const QuadraticUtility>> fs;
  fs.reserve(static_cast<std::size_t>(T));
  for (int t = 1; t <= T; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    Mat A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double v = (i == j)
                             ? (t <= T / 2 ? rng.uniform(-10.0, 0.0) : rng.uniform(0.0, 5.0))
                             : rng.uniform(-10.0, 0.0);
        A(i, j) = v;
        A(j, i) = v;
      }
    Vec a = -(A * Vec::Ones(n));
    fs.push_back(std::make_shared<QuadraticUtility>(std::move(A), std::move(a), 0.0,
                                                    QuadraticUtility::kRequireSubmodular));
  }
  return fs;
}

std::shared_ptr<IidQuadraticStream> exp3_stream(std::uint64_t seed, int n, double nu) {
  if (n < 1) throw ParamError("exp3_stream: n must be positive");
  Rng rng(derive_seed(seed, 0));
  Mat A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = rng.uniform(-1.0, 0.0);
  return std::make_shared<IidQuadraticStream>(
      IidQuadraticStream::bilinear(std::move(A), nu, derive_seed(seed, 1)));
}

// ---------------------------------------------------------------------------
// presets

namespace {
std::vector<std::uint64_t> default_seeds() {
  std::vector<std::uint64_t> s(10);
  for (int i = 0; i < 10; ++i) s[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(i + 1);
  return s;
}
}  // namespace

ExperimentConfig exp1_preset() {
  ExperimentConfig c;
  c.experiment = "exp1";
  c.T = 100;
  c.seeds = default_seeds();
  c.out_dir = "out/exp1";
  c.domain = exp1_domain().to_json();
  c.stream.model = "adversarial";
  c.stream.generator = "exp1_synthetic";
  c.algorithms = {{"alg1", 100, 0, 1.0}, {"metafw", 100, 0, 0.0}};
  return c;
}

ExperimentConfig exp2_preset() {
  ExperimentConfig c;
  c.experiment = "exp2";
  c.T = 100;
  c.seeds = default_seeds();
  c.out_dir = "out/exp2";
  c.domain = exp23_domain(kExp23DomainSeed).to_json();
  c.stream.model = "random_order";
  c.stream.generator = "exp2_quadratics";
  // unblocked run on the arrival order vs W=5 blocks of a random permutation;
  // the block averages concentrate, so the blocked run certifies half the
  // single-round modulus
  c.algorithms = {{"alg1", 0, 0, 1.25}, {"blocked", 0, 5, 0.625}};
  return c;
}

ExperimentConfig exp3_preset() {
  ExperimentConfig c;
  c.experiment = "exp3";
  c.T = 100;
  c.seeds = default_seeds();
  c.out_dir = "out/exp3";
  c.domain = exp23_domain(kExp23DomainSeed).to_json();
  c.stream.model = "iid";
  c.stream.generator = "exp3_bilinear";
  c.stream.nu = 4.0;
  c.algorithms = {{"alg2", 0, 0, 0.0}, {"alg3", 0, 0, 0.0}, {"osfw", 0, 0, 0.0}};
  return c;
}

// ---------------------------------------------------------------------------
// orchestration

std::vector<RegretTrace> run_config_seed(const ExperimentConfig& config, std::uint64_t seed) {
  const PolytopeDomain domain = PolytopeDomain::from_json(config.domain);
  const int T = config.T;
  std::vector<RegretTrace> out;
  out.reserve(config.algorithms.size());

  if (config.stream.model == "iid") {
    if (config.stream.generator != "exp3_bilinear")
      throw ConfigError("iid model requires the exp3_bilinear generator");
    // all entries share one stream, so algorithms face identical realizations
    auto stream = exp3_stream(seed, domain.dim(), config.stream.nu);
    NoisyGradientOracle oracle(stream, domain);
    const OfflineResult comp =
        compute_comparator(stream->expected(), domain, config.comparator);
    for (const AlgorithmSpec& spec : config.algorithms) {
      IidRunResult res;
      if (spec.name == "alg2") {
        res = run_alg2(domain, oracle, T, comp.value, 1.0 - std::exp(-1.0));
      } else if (spec.name == "alg3") {
        res = run_alg3(domain, oracle, T, comp.value, std::exp(-1.0));
      } else if (spec.name == "osfw") {
        res = run_osfw(domain, oracle, T, comp.value, std::exp(-1.0));
      } else {
        throw ConfigError("algorithm '" + spec.name + "' needs an ordered stream, not iid");
      }
      res.trace.seed = seed;
      res.trace.comparator_x = comp.x_out;
      res.trace.comparator_value = comp.value;
      res.trace.comparator_method = method_name(comp.method);
      out.push_back(std::move(res.trace));
    }
    return out;
  }

  // ordered models: alg1/metafw consume the sequence as generated, while the
  // blocked runner receives a seed-derived permutation under random_order
  const auto fs = build_sequence(config, domain, seed);
  const auto sum_f = materialize_sum(fs, std::vector<double>(fs.size(), 1.0));
  const OfflineResult comp = compute_comparator(*sum_f, domain, config.comparator);
  const double alpha = 1.0 - std::exp(-1.0);

  for (const AlgorithmSpec& spec : config.algorithms) {
    RegretTrace trace;
    if (spec.name == "alg1") {
      trace = run_alg1(fs, domain, spec.mu, spec.K, per_round_values(fs, comp.x_out), alpha);
    } else if (spec.name == "metafw") {
      trace = run_metafw(fs, domain, spec.K, nullptr, per_round_values(fs, comp.x_out), alpha);
    } else if (spec.name == "blocked") {
      const auto seq = config.stream.model == "random_order"
                           ? permute(fs, derive_seed(seed, kPermIndex))
                           : fs;
      const int W = spec.W > 0 ? spec.W : blocked_default_W(T);
      trace = blocked_random_order_run(seq, domain, W, spec.mu, spec.K,
                                       per_round_values(seq, comp.x_out), alpha);
    } else {
      throw ConfigError("algorithm '" + spec.name + "' needs an i.i.d. stream");
    }
    trace.seed = seed;
    trace.comparator_x = comp.x_out;
    trace.comparator_value = comp.value;
    trace.comparator_method = method_name(comp.method);
    trace.gradient_calls = ordered_gradient_calls(spec, T);
    out.push_back(std::move(trace));
  }
  return out;
}

nlohmann::json run_experiment(const ExperimentConfig& config) {
  namespace fsys = std::filesystem;
  if (config.seeds.empty()) throw ConfigError("run_experiment: no seeds");
  {
    std::set<std::string> names;
    for (const auto& a : config.algorithms)
      if (!names.insert(a.name).second)
        throw ConfigError("run_experiment: duplicate algorithm '" + a.name +
                          "' would collide in output paths");
  }
  fsys::create_directories(config.out_dir);

  const int S = static_cast<int>(config.seeds.size());
  std::vector<std::vector<RegretTrace>> per_seed(static_cast<std::size_t>(S));
  std::vector<std::exception_ptr> errs(static_cast<std::size_t>(S));
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < S; ++i) {
    try {
      per_seed[static_cast<std::size_t>(i)] =
          run_config_seed(config, config.seeds[static_cast<std::size_t>(i)]);
    } catch (...) {
      errs[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errs)
    if (e) std::rethrow_exception(e);

  const fsys::path dir(config.out_dir);
  for (int i = 0; i < S; ++i)
    for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
      const RegretTrace& tr = per_seed[static_cast<std::size_t>(i)][a];
      const std::string stem = config.experiment + "_" + config.algorithms[a].name + "_seed" +
                               std::to_string(config.seeds[static_cast<std::size_t>(i)]);
      write_trace_csv(tr, (dir / (stem + ".csv")).string());
      write_trace_sidecar(tr, (dir / (stem + ".meta.json")).string());
    }

  // one figure per experiment, from the first seed: regret curves for
  // adversarial streams, cumulative utility under random order, running
  // average utility for i.i.d. streams
  {
    std::vector<PlotSeries> series;
    std::string y_label;
    for (const auto& tr : per_seed[0]) {
      PlotSeries s;
      s.label = tr.algorithm;
      s.y.reserve(tr.rows.size());
      for (std::size_t t = 0; t < tr.rows.size(); ++t) {
        if (config.stream.model == "adversarial") {
          s.y.push_back(tr.rows[t].alpha_regret);
        } else if (config.stream.model == "random_order") {
          s.y.push_back(tr.rows[t].cum_utility);
        } else {
          s.y.push_back(tr.rows[t].cum_utility / static_cast<double>(t + 1));
        }
      }
      series.push_back(std::move(s));
    }
    y_label = config.stream.model == "adversarial"
                  ? "alpha-regret"
                  : (config.stream.model == "random_order" ? "cumulative utility"
                                                           : "average utility");
    write_text_file(render_line_plot(series, config.experiment, "round", y_label),
                    (dir / (config.experiment + ".svg")).string());
  }

  // Theorem-1 style bound report for the strongly-concave-surrogate runs,
  // instantiated on the first seed's sequence (worst-case constants over t);
  // the sup-gradient bound is an l2 bound, hence also valid for the l-inf
  // beta in the l1-pair instantiation
  double l2_smooth = 0.0, l1_smooth = 0.0, beta_sup = 0.0;
  const PolytopeDomain domain = PolytopeDomain::from_json(config.domain);
  if (config.stream.model != "iid") {
    const auto fs0 = build_sequence(config, domain, config.seeds[0]);
    for (const auto& f : fs0) {
      l2_smooth = std::max(l2_smooth, f->smoothness_bound(domain.lower(), domain.upper(), Norm::L2));
      l1_smooth = std::max(l1_smooth, f->smoothness_bound(domain.lower(), domain.upper(), Norm::L1));
      beta_sup = std::max(beta_sup, f->gradient_sup_bound(domain.lower(), domain.upper()));
    }
  }

  nlohmann::json summary;
  summary["experiment"] = config.experiment;
  summary["T"] = config.T;
  summary["seeds"] = config.seeds;
  summary["model"] = config.stream.model;
  nlohmann::json algs = nlohmann::json::array();

  std::printf("experiment %s (T=%d, %d seed%s)\n", config.experiment.c_str(), config.T, S,
              S == 1 ? "" : "s");
  std::printf("%-22s %18s %18s %14s\n", "algorithm", "mean final regret", "mean avg utility",
              "grad calls");
  for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
    const AlgorithmSpec& spec = config.algorithms[a];
    nlohmann::json ja;
    ja["name"] = spec.name;
    nlohmann::json rows = nlohmann::json::array();
    double sum_regret = 0.0, sum_avg_util = 0.0;
    long long calls = 0;
    std::string algorithm_id;
    for (int i = 0; i < S; ++i) {
      const RegretTrace& tr = per_seed[static_cast<std::size_t>(i)][a];
      algorithm_id = tr.algorithm;
      const RegretRow& last = tr.rows.back();
      const double avg_util = last.cum_utility / static_cast<double>(tr.rows.size());
      sum_regret += last.alpha_regret;
      sum_avg_util += avg_util;
      calls = tr.gradient_calls;
      nlohmann::json jr;
      jr["seed"] = tr.seed;
      jr["final_regret"] = last.alpha_regret;
      jr["final_cum_utility"] = last.cum_utility;
      jr["avg_utility"] = avg_util;
      jr["gradient_calls"] = tr.gradient_calls;
      jr["comparator_value"] = tr.comparator_value;
      jr["comparator_method"] = tr.comparator_method;
      rows.push_back(std::move(jr));
    }
    ja["algorithm_id"] = algorithm_id;
    ja["per_seed"] = std::move(rows);
    ja["mean_final_regret"] = sum_regret / S;
    ja["mean_avg_utility"] = sum_avg_util / S;
    if (config.stream.model != "iid" && (spec.name == "alg1" || spec.name == "blocked")) {
      const int W = spec.name == "blocked" ? (spec.W > 0 ? spec.W : blocked_default_W(config.T))
                                           : 1;
      const int T_eff = spec.name == "blocked" ? (config.T + W - 1) / W : config.T;
      const int K_eff = spec.K > 0 ? spec.K : alg1_default_K(T_eff);
      ja["theorem1_bound_l2"] =
          theorem1_bound(l2_smooth, domain.diameter(Norm::L2), beta_sup, spec.mu, T_eff, K_eff);
      ja["theorem1_bound_l1"] =
          theorem1_bound(l1_smooth, domain.diameter(Norm::L1), beta_sup, spec.mu, T_eff, K_eff);
    }
    std::printf("%-22s %18.6g %18.6g %14lld\n", algorithm_id.c_str(), sum_regret / S,
                sum_avg_util / S, calls);
    algs.push_back(std::move(ja));
  }
  summary["algorithms"] = std::move(algs);

  const std::string summary_text = summary.dump(2) + "\n";
  write_text_file(summary_text, (dir / "summary.json").string());
  std::printf("wrote %s\n", (dir / "summary.json").string().c_str());
  return summary;
}

}  // namespace drsub
