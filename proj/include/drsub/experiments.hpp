#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "drsub/config.hpp"
#include "drsub/domain.hpp"
#include "drsub/objective.hpp"
#include "drsub/online.hpp"
#include "drsub/oracle.hpp"

namespace drsub {

// ---------------------------------------------------------------------------
// instance builders (also used directly by tests)

// recommendation domain: n movies, pick at most `budget` in total
PolytopeDomain exp1_domain(int n = 17, double budget = 4.0);

// synthetic stand-in for the ratings data: per user, movie weights uniform
// in [0,1]; movies fall round-robin into 5 genres; same-genre pair penalties
// uniform in [-1,0], cross-genre pairs 0
std::vector<std::shared_ptr<const ObjectiveFunction>> exp1_synthetic_functions(
    int n, int T, std::uint64_t seed);

// n=4, m=2 polytope with C entries uniform in [0,1] and b = 1
PolytopeDomain exp23_domain(std::uint64_t seed, int n = 4, int m = 2);

// submodular quadratics with off-diagonals uniform in [-10,0]; diagonals
// uniform in [-10,0] for t <= T/2 and in [0,5] afterwards; a = -A'1
std::vector<std::shared_ptr<const QuadraticUtility>> exp2_functions(int T,
                                                                    std::uint64_t seed,
                                                                    int n = 4);

// i.i.d. stream around f(x) = (x/2 - 1)'Ax with A entries uniform in [-1,0]
// and per-round Hessian noise uniform in [-nu, nu]
std::shared_ptr<IidQuadraticStream> exp3_stream(std::uint64_t seed, int n = 4,
                                                double nu = 4.0);

// ---------------------------------------------------------------------------
// presets (seeds 1..10, T = 100)

ExperimentConfig exp1_preset();
ExperimentConfig exp2_preset();
ExperimentConfig exp3_preset();

// ---------------------------------------------------------------------------
// orchestration

// all traces for one seed, in config.algorithms order, metadata filled;
// writes no files
std::vector<RegretTrace> run_config_seed(const ExperimentConfig& config,
                                         std::uint64_t seed);

// full sweep: per (seed, algorithm) trace CSV + JSON sidecar, one SVG per
// experiment, summary.json, and a summary table on stdout; returns the
// summary document
nlohmann::json run_experiment(const ExperimentConfig& config);

}  // namespace drsub
