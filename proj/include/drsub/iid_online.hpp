#pragma once

#include "drsub/common.hpp"
#include "drsub/domain.hpp"
#include "drsub/online.hpp"
#include "drsub/oracle.hpp"

namespace drsub {

// Averaged-gradient Frank-Wolfe: at round t, rebuild the next play from
// scratch with K_t = ceil(sqrt(t)) FW steps, averaging stochastic gradients
// of all t observed functions at each inner iterate (t * K_t oracle calls).
// The point played at round t is the one prepared at round t-1; round 1
// plays all-zeros.
struct Alg2State {
  Vec x_next;
  int round = 0;
};

Alg2State alg2_init(int dim);
// consume round t's feedback and return x_{t+1} (also stored in the state)
Vec alg2_round(Alg2State& state, const PolytopeDomain& domain, int t,
               NoisyGradientOracle& oracle);

// Recursive variance-reduced Frank-Wolfe:
// d_t = grad~f_t(x_t) + (1 - rho_t)(d_{t-1} - grad~f_t(x_{t-1})),
// rho_t = 1/(t+1), x_{t+1} = x_t + LMO(d_t)/T. The same round-t realization
// is queried at both x_t and x_{t-1} (2 calls per round, 1 at t=1).
struct Alg3State {
  Vec d;
  Vec x;
  Vec x_prev;
  int round = 0;
};

Alg3State alg3_init(int dim);
Vec alg3_round(Alg3State& state, const PolytopeDomain& domain, int t,
               NoisyGradientOracle& oracle, int T);

// one-sample baseline: d_t = grad~f_t(x_t), x_{t+1} = x_t + LMO(d_t)/T
struct OsfwState {
  Vec x;
  int round = 0;
};

OsfwState osfw_init(int dim);
Vec osfw_round(OsfwState& state, const PolytopeDomain& domain, int t,
               NoisyGradientOracle& oracle, int T);

// Full-horizon runs against the stream behind `oracle`. Rows carry the
// expected utility F(x_t) in `utility` (stochastic regret is measured
// against F) and the realized f_t(x_t) in `realized`; regret uses the
// constant per-round comparator value alpha * F(x*). The oracle's call
// counter is reset on entry and its final value stored on the trace.
struct IidRunResult {
  RegretTrace trace;
  std::vector<double> eps_norm;  // ||d_t - grad F(x_t)||_2 per round (alg3 only)
};

IidRunResult run_alg2(const PolytopeDomain& domain, NoisyGradientOracle& oracle, int T,
                      double comparator_value, double alpha);
IidRunResult run_alg3(const PolytopeDomain& domain, NoisyGradientOracle& oracle, int T,
                      double comparator_value, double alpha);
IidRunResult run_osfw(const PolytopeDomain& domain, NoisyGradientOracle& oracle, int T,
                      double comparator_value, double alpha);

// exact oracle-call budgets asserted by tests
long long alg2_expected_calls(int T);  // sum_{t<=T} t * ceil(sqrt(t))
long long alg3_expected_calls(int T);  // 2T - 1
long long osfw_expected_calls(int T);  // T

}  // namespace drsub
