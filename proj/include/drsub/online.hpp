#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "drsub/common.hpp"
#include "drsub/domain.hpp"
#include "drsub/objective.hpp"

namespace drsub {

// ---------------------------------------------------------------------------
// sub-learners

// Follow-the-leader on strongly concave surrogate payoffs
// g_s(v) = <v, b_s> - (mu/2)||v||_2^2. The leader has the closed form
// Proj_K(grad_sum / (mu * rounds_seen)); with no data it plays all-zeros.
struct FtlState {
  Vec grad_sum;
  int rounds_seen = 0;
  double mu = 1.0;
};

FtlState ftl_init(int dim, double mu);
Vec ftl_select(const FtlState& state, const PolytopeDomain& domain);
void ftl_update(FtlState& state, const Vec& payoff_gradient_linear_part);

// Follow-the-regularized-leader on linear payoffs <v, b_s>:
// plays Proj_K(eta(rounds_seen) * grad_sum), all-zeros before any data.
struct FtrlLinearState {
  Vec grad_sum;
  int rounds_seen = 0;
  std::function<double(int rounds_seen)> eta;
};

FtrlLinearState ftrl_init(int dim, std::function<double(int)> eta);
Vec ftrl_select(const FtrlLinearState& state, const PolytopeDomain& domain);
void ftrl_update(FtrlLinearState& state, const Vec& payoff_gradient);

// constant step size eta = R / (beta * sqrt(T)) used by the Meta-FW baseline
std::function<double(int)> metafw_default_eta(double R, double beta, int T);

// ---------------------------------------------------------------------------
// meta algorithms (adversarial / random-order)

// one inner Frank-Wolfe step of a meta round, captured for the per-step
// progress invariant: entry k holds the state before applying v_k; a final
// entry holds only x_before/f_before for the played point
struct InnerStep {
  Vec v;
  Vec x_before;
  double f_before = 0.0;
  double inner = 0.0;    // <v, grad f_t(x_before)>
  double v_norm2 = 0.0;  // ||v||_2
};

struct Alg1State {
  int K = 1;
  std::vector<FtlState> instances;
  int round = 0;  // rounds completed
};

struct MetaFwState {
  int K = 1;
  std::vector<FtrlLinearState> instances;
  int round = 0;
};

// K = max(1, ceil(T / ln T)) for the strongly DR-submodular meta algorithm
int alg1_default_K(int T);
// K = ceil(sqrt(T)) for the Meta-FW baseline
int metafw_default_K(int T);

Alg1State alg1_init(int dim, int K, double mu);
MetaFwState metafw_init(int dim, int K, std::function<double(int)> eta);

// one round: query all K sub-learners, chain x^(k+1) = x^(k) + v_k / K from
// x^(1) = 0, play x^(K+1), feed grad f_t(x^(k)) back to learner k
Vec alg1_round(Alg1State& state, const PolytopeDomain& domain,
               const ObjectiveFunction& f_t, std::vector<InnerStep>* trace = nullptr);
Vec metafw_round(MetaFwState& state, const PolytopeDomain& domain,
                 const ObjectiveFunction& f_t, std::vector<InnerStep>* trace = nullptr);

// ---------------------------------------------------------------------------
// traces

struct RegretRow {
  int t = 0;
  Vec x;
  double utility = 0.0;   // drives cumulative utility and regret
  double realized = 0.0;  // f_t(x_t); equals utility outside i.i.d. mode
  double cum_utility = 0.0;
  double alpha_regret = 0.0;
};

struct RegretTrace {
  std::vector<RegretRow> rows;
  std::string algorithm;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  Vec comparator_x;
  double comparator_value = 0.0;
  std::string comparator_method;
  long long gradient_calls = 0;  // stochastic-oracle calls (i.i.d. runs)
};

// running alpha-regret: alpha * prefix-sum(comparator) - prefix-sum(utility)
std::vector<double> compute_regret(const std::vector<double>& utilities,
                                   const std::vector<double>& comparator_value_per_round,
                                   double alpha);

// header `t,x_0,...,x_{n-1},utility,cum_utility,alpha_regret`, %.17g values
void write_trace_csv(const RegretTrace& trace, const std::string& path);
// JSON sidecar with seed, algorithm, alpha, comparator
void write_trace_sidecar(const RegretTrace& trace, const std::string& path);

// ---------------------------------------------------------------------------
// sequence runners

// Algorithm 1 / Meta-FW over a fixed (already ordered) function sequence;
// comparator_per_round holds f_t(x*) for the hindsight comparator x*
RegretTrace run_alg1(const std::vector<std::shared_ptr<const ObjectiveFunction>>& fs,
                     const PolytopeDomain& domain, double mu, int K,
                     const std::vector<double>& comparator_per_round, double alpha);
RegretTrace run_metafw(const std::vector<std::shared_ptr<const ObjectiveFunction>>& fs,
                       const PolytopeDomain& domain, int K, std::function<double(int)> eta,
                       const std::vector<double>& comparator_per_round, double alpha);

// random-order blocking: partition the (already permuted) sequence into
// ceil(T/W) blocks, run Algorithm 1 on the block averages, replay each block
// decision z_tau for every round of its block; rows record f_t(z_tau)
RegretTrace blocked_random_order_run(
    const std::vector<std::shared_ptr<const ObjectiveFunction>>& fs,
    const PolytopeDomain& domain, int W, double mu, int K,
    const std::vector<double>& comparator_per_round, double alpha);

// regret upper bound of Theorem 1: L R^2 T / (2K) + (beta + mu R)^2 ln T / (2 mu)
double theorem1_bound(double L, double R, double beta, double mu, int T, int K);

}  // namespace drsub
