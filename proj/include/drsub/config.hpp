#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "drsub/common.hpp"

namespace drsub {

// one learner to run, with its tunables; K = 0 and W = 0 mean "use the
// algorithm's default for the horizon"; mu is required for alg1/blocked
struct AlgorithmSpec {
  std::string name;  // alg1 | metafw | blocked | alg2 | alg3 | osfw
  int K = 0;
  int W = 0;
  double mu = 0.0;
};

// how the function sequence is produced
struct StreamSpec {
  std::string model;      // adversarial | random_order | iid
  std::string generator;  // exp1_synthetic | movielens | exp2_quadratics |
                          // exp3_bilinear | explicit
  double nu = 0.0;        // i.i.d. noise half-width
  nlohmann::json functions;   // explicit generator: array of function records
  std::string ratings_path;   // movielens generator
  std::string movies_path;
};

struct ComparatorSpec {
  std::string method = "best";  // fw | grid | best
  int fw_K = 2000;
  double grid_step = 0.0;       // 0 = dimension-scaled default
};

struct ExperimentConfig {
  std::string experiment;
  int T = 100;
  std::vector<std::uint64_t> seeds;
  std::string out_dir = "out";
  nlohmann::json domain;  // {dim, C, b, lower, upper}
  StreamSpec stream;
  std::vector<AlgorithmSpec> algorithms;
  ComparatorSpec comparator;
};

// schema-validated (required keys, known names/models, nonempty seeds and
// algorithm list); parse -> serialize -> parse is the identity
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);

ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& config, const std::string& path);

}  // namespace drsub
