#include "drsub/config.hpp"

#include <fstream>
#include <set>

namespace drsub {
namespace {

const std::set<std::string> kAlgorithms = {"alg1", "metafw", "blocked",
                                           "alg2", "alg3",   "osfw"};
const std::set<std::string> kModels = {"adversarial", "random_order", "iid"};
const std::set<std::string> kGenerators = {"exp1_synthetic", "movielens",
                                           "exp2_quadratics", "exp3_bilinear",
                                           "explicit"};
const std::set<std::string> kComparatorMethods = {"fw", "grid", "best"};

void require(bool condition, const std::string& message) {
  if (!condition) throw ConfigError(message);
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  require(j.is_object(), "config: expected a JSON object");
  c.experiment = j.at("experiment").get<std::string>();
  c.T = j.at("T").get<int>();
  require(c.T >= 1, "config: T must be >= 1");
  c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  require(!c.seeds.empty(), "config: seeds must be nonempty");
  c.out_dir = j.value("out_dir", std::string("out"));
  c.domain = j.at("domain");
  require(c.domain.is_object() && c.domain.contains("dim"),
          "config: domain must carry at least {dim}");

  const nlohmann::json& sj = j.at("stream");
  c.stream.model = sj.at("model").get<std::string>();
  require(kModels.count(c.stream.model) > 0,
          "config: unknown stream model '" + c.stream.model + "'");
  c.stream.generator = sj.at("generator").get<std::string>();
  require(kGenerators.count(c.stream.generator) > 0,
          "config: unknown generator '" + c.stream.generator + "'");
  c.stream.nu = sj.value("nu", 0.0);
  require(c.stream.nu >= 0.0, "config: nu must be >= 0");
  if (sj.contains("functions")) c.stream.functions = sj.at("functions");
  if (c.stream.generator == "explicit")
    require(c.stream.functions.is_array() && !c.stream.functions.empty(),
            "config: explicit generator requires a nonempty functions array");
  c.stream.ratings_path = sj.value("ratings_path", std::string());
  c.stream.movies_path = sj.value("movies_path", std::string());

  require(j.at("algorithms").is_array() && !j.at("algorithms").empty(),
          "config: algorithms must be a nonempty array");
  for (const auto& aj : j.at("algorithms")) {
    AlgorithmSpec a;
    a.name = aj.at("name").get<std::string>();
    require(kAlgorithms.count(a.name) > 0, "config: unknown algorithm '" + a.name + "'");
    a.K = aj.value("K", 0);
    a.W = aj.value("W", 0);
    a.mu = aj.value("mu", 0.0);
    require(a.K >= 0, "config: K must be >= 0");
    require(a.W >= 0, "config: W must be >= 0");
    if (a.name == "alg1" || a.name == "blocked")
      require(a.mu > 0.0, "config: " + a.name + " requires mu > 0");
    c.algorithms.push_back(std::move(a));
  }

  if (j.contains("comparator")) {
    const nlohmann::json& cj = j.at("comparator");
    c.comparator.method = cj.value("method", std::string("best"));
    require(kComparatorMethods.count(c.comparator.method) > 0,
            "config: unknown comparator method '" + c.comparator.method + "'");
    c.comparator.fw_K = cj.value("fw_K", 2000);
    require(c.comparator.fw_K >= 1, "config: comparator fw_K must be >= 1");
    c.comparator.grid_step = cj.value("grid_step", 0.0);
    require(c.comparator.grid_step >= 0.0, "config: grid_step must be >= 0");
  }
  return c;
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
  nlohmann::json j;
  j["experiment"] = config.experiment;
  j["T"] = config.T;
  j["seeds"] = config.seeds;
  j["out_dir"] = config.out_dir;
  j["domain"] = config.domain;
  nlohmann::json sj;
  sj["model"] = config.stream.model;
  sj["generator"] = config.stream.generator;
  sj["nu"] = config.stream.nu;
  if (!config.stream.functions.is_null()) sj["functions"] = config.stream.functions;
  if (!config.stream.ratings_path.empty()) sj["ratings_path"] = config.stream.ratings_path;
  if (!config.stream.movies_path.empty()) sj["movies_path"] = config.stream.movies_path;
  j["stream"] = std::move(sj);
  nlohmann::json algs = nlohmann::json::array();
  for (const AlgorithmSpec& a : config.algorithms) {
    nlohmann::json aj;
    aj["name"] = a.name;
    aj["K"] = a.K;
    aj["W"] = a.W;
    aj["mu"] = a.mu;
    algs.push_back(std::move(aj));
  }
  j["algorithms"] = std::move(algs);
  nlohmann::json cj;
  cj["method"] = config.comparator.method;
  cj["fw_K"] = config.comparator.fw_K;
  cj["grid_step"] = config.comparator.grid_step;
  j["comparator"] = std::move(cj);
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return config_from_json(j);
}

void save_config(const ExperimentConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file " + path);
  out << config_to_json(config).dump(2) << '\n';
}

}  // namespace drsub
