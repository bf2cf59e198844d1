// drsub: benchmark harness for the online DR-submodular maximization library.
//
//   drsub run --config <path> [--seed-override N] [--out DIR]
//   drsub reproduce exp1|exp2|exp3 [--movielens-ratings P --movielens-movies P]
//   drsub check-function --config <path>
//   drsub w0 --mu M --L L --eps E --delta D --n N --T T
//
// DRSUB_THREADS caps OpenMP parallelism. Exit codes: 0 success, 1 a property
// check failed (check-function only), 2 usage/config/runtime error.

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "drsub/checks.hpp"
#include "drsub/config.hpp"
#include "drsub/experiments.hpp"
#include "drsub/streams.hpp"

namespace {

void apply_thread_cap() {
#ifdef _OPENMP
  const char* env = std::getenv("DRSUB_THREADS");
  if (env == nullptr || *env == '\0') return;
  const int n = std::atoi(env);
  if (n > 0) omp_set_num_threads(n);
#endif
}

int cmd_run(const std::string& config_path, long long seed_override, const std::string& out) {
  drsub::ExperimentConfig config = drsub::load_config(config_path);
  if (seed_override >= 0) config.seeds = {static_cast<std::uint64_t>(seed_override)};
  if (!out.empty()) config.out_dir = out;
  drsub::run_experiment(config);
  return 0;
}

int cmd_reproduce(const std::string& which, const std::string& ratings,
                  const std::string& movies) {
  drsub::ExperimentConfig config;
  if (which == "exp1") {
    config = drsub::exp1_preset();
    if (!ratings.empty() || !movies.empty()) {
      if (ratings.empty() || movies.empty())
        throw drsub::ConfigError("exp1 with MovieLens needs both --movielens-ratings and "
                                 "--movielens-movies");
      config.stream.generator = "movielens";
      config.stream.ratings_path = ratings;
      config.stream.movies_path = movies;
    }
  } else if (which == "exp2") {
    config = drsub::exp2_preset();
  } else if (which == "exp3") {
    config = drsub::exp3_preset();
  } else {
    throw drsub::ConfigError("unknown experiment '" + which + "' (expected exp1|exp2|exp3)");
  }
  drsub::run_experiment(config);
  return 0;
}

void print_report(const char* name, const drsub::CheckReport& rep) {
  std::printf("%-14s %s", name, rep.holds ? "holds" : "FAILS");
  if (!rep.detail.empty()) std::printf("  (%s)", rep.detail.c_str());
  std::printf("\n");
  if (!rep.holds && rep.witness) {
    const auto& [x, y] = *rep.witness;
    std::printf("  witness x =");
    for (int i = 0; i < x.size(); ++i) std::printf(" %.17g", x(i));
    std::printf("\n  witness y =");
    for (int i = 0; i < y.size(); ++i) std::printf(" %.17g", y(i));
    std::printf("\n");
  }
}

// config document: {"function": <record>, "domain": <record>, optional
// "mu" (adds the strong-DR check), "L" (default: certified bound),
// "samples" (1000), "tol" (1e-9), "seed" (1)}
int cmd_check_function(const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) throw drsub::ConfigError("cannot open " + config_path);
  nlohmann::json j = nlohmann::json::parse(in);
  if (!j.contains("function") || !j.contains("domain"))
    throw drsub::ConfigError("check-function config needs 'function' and 'domain'");
  const auto f = drsub::function_from_json(j.at("function"));
  const drsub::PolytopeDomain domain = drsub::PolytopeDomain::from_json(j.at("domain"));
  if (f->dim() != domain.dim())
    throw drsub::ConfigError("function/domain dimension mismatch");
  const int samples = j.value("samples", 1000);
  const double tol = j.value("tol", 1e-9);
  const std::uint64_t seed = j.value("seed", std::uint64_t{1});
  const double L = j.contains("L")
                       ? j.at("L").get<double>()
                       : f->smoothness_bound(domain.lower(), domain.upper(), drsub::Norm::L2);

  bool all_hold = true;
  const auto mono = drsub::check_monotone(*f, domain, samples, seed, tol);
  print_report("monotone", mono);
  all_hold = all_hold && mono.holds;
  const auto dr = drsub::check_dr_submodular(*f, domain, samples, seed, tol);
  print_report("dr-submodular", dr);
  all_hold = all_hold && dr.holds;
  const auto smooth = drsub::check_smoothness(*f, domain, L, drsub::Norm::L2, samples, seed, tol);
  std::printf("%-14s ", "smooth");
  std::printf("L=%.17g %s\n", L, smooth.holds ? "holds" : "FAILS");
  all_hold = all_hold && smooth.holds;
  if (j.contains("mu")) {
    const double mu = j.at("mu").get<double>();
    const auto strong = drsub::check_strong_dr(*f, domain, mu, drsub::Norm::L2, samples, seed, tol);
    print_report("strong-dr", strong);
    all_hold = all_hold && strong.holds;
  }
  return all_hold ? 0 : 1;
}

int cmd_w0(double mu, double L, double eps, double delta, int n, int T) {
  std::printf("%lld\n", drsub::compute_w0_quadratic(mu, L, eps, delta, n, T));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap();

  CLI::App app{"online DR-submodular maximization benchmarks"};
  app.require_subcommand(1);

  std::string config_path, out_dir, which, ratings, movies;
  long long seed_override = -1;

  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("--config", config_path, "config JSON path")->required();
  run->add_option("--seed-override", seed_override, "replace the seed list with this seed");
  run->add_option("--out", out_dir, "override the output directory");

  auto* repro = app.add_subcommand("reproduce", "run a built-in experiment preset");
  repro->add_option("experiment", which, "exp1|exp2|exp3")->required();
  repro->add_option("--movielens-ratings", ratings, "MovieLens ratings.dat path (exp1)");
  repro->add_option("--movielens-movies", movies, "MovieLens movies.dat path (exp1)");

  auto* check = app.add_subcommand("check-function", "run the property checkers");
  check->add_option("--config", config_path, "function+domain JSON path")->required();

  auto* w0 = app.add_subcommand("w0", "random-order block-size threshold");
  double mu = 0.0, L = 0.0, eps = 0.0, delta = 0.0;
  int n = 0, T = 0;
  w0->add_option("--mu", mu)->required();
  w0->add_option("--L", L)->required();
  w0->add_option("--eps", eps)->required();
  w0->add_option("--delta", delta)->required();
  w0->add_option("--n", n)->required();
  w0->add_option("--T", T)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, seed_override, out_dir);
    if (repro->parsed()) return cmd_reproduce(which, ratings, movies);
    if (check->parsed()) return cmd_check_function(config_path);
    return cmd_w0(mu, L, eps, delta, n, T);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
