#include "drsub/iid_online.hpp"

#include <cmath>

namespace drsub {
namespace {

int ceil_sqrt(int t) {
  int k = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(t))));
  while (static_cast<long long>(k) * k < t) ++k;          // guard fp rounding
  while (k > 1 && static_cast<long long>(k - 1) * (k - 1) >= t) --k;
  return k;
}

template <class Step>
IidRunResult run_iid(const PolytopeDomain& domain, NoisyGradientOracle& oracle, int T,
                     double comparator_value, double alpha, const char* name, Step step,
                     bool track_eps) {
  if (T < 1) throw ParamError("iid run: T must be >= 1");
  oracle.reset_calls();
  IidRunResult res;
  res.trace.algorithm = name;
  res.trace.rows.reserve(static_cast<std::size_t>(T));
  Vec x_play = Vec::Zero(domain.dim());
  for (int t = 1; t <= T; ++t) {
    RegretRow row;
    row.t = t;
    row.x = x_play;
    row.utility = oracle.base().value(x_play);
    row.realized = oracle.realized_value(t, x_play);
    res.trace.rows.push_back(row);
    x_play = step(t, x_play, res);
  }
  std::vector<double> utilities, comparator(static_cast<std::size_t>(T), comparator_value);
  utilities.reserve(static_cast<std::size_t>(T));
  for (const RegretRow& r : res.trace.rows) utilities.push_back(r.utility);
  const std::vector<double> regret = compute_regret(utilities, comparator, alpha);
  double cum = 0.0;
  for (std::size_t i = 0; i < res.trace.rows.size(); ++i) {
    cum += res.trace.rows[i].utility;
    res.trace.rows[i].cum_utility = cum;
    res.trace.rows[i].alpha_regret = regret[i];
  }
  res.trace.alpha = alpha;
  res.trace.comparator_value = comparator_value;
  res.trace.gradient_calls = oracle.calls();
  if (track_eps && res.eps_norm.size() != static_cast<std::size_t>(T))
    throw Error("iid run: estimator diagnostics incomplete");
  return res;
}

}  // namespace

Alg2State alg2_init(int dim) {
  if (dim < 1) throw DimensionError("alg2_init: dim must be >= 1");
  return Alg2State{Vec::Zero(dim), 0};
}

Vec alg2_round(Alg2State& state, const PolytopeDomain& domain, int t,
               NoisyGradientOracle& oracle) {
  if (t < 1) throw ParamError("alg2_round: rounds are 1-based");
  const int Kt = ceil_sqrt(t);
  Vec x = Vec::Zero(domain.dim());
  for (int k = 0; k < Kt; ++k) {
    Vec d = Vec::Zero(domain.dim());
    for (int tau = 1; tau <= t; ++tau) d += oracle.stochastic_gradient(tau, x);
    d /= static_cast<double>(t);
    const Vec v = domain.linear_maximize(d);
    x += v / static_cast<double>(Kt);
  }
  state.x_next = x;
  ++state.round;
  return x;
}

Alg3State alg3_init(int dim) {
  if (dim < 1) throw DimensionError("alg3_init: dim must be >= 1");
  Alg3State state;
  state.d = Vec::Zero(dim);
  state.x = Vec::Zero(dim);
  state.x_prev = Vec::Zero(dim);
  return state;
}

Vec alg3_round(Alg3State& state, const PolytopeDomain& domain, int t,
               NoisyGradientOracle& oracle, int T) {
  if (t < 1) throw ParamError("alg3_round: rounds are 1-based");
  if (T < 1) throw ParamError("alg3_round: horizon must be >= 1");
  if (t == 1) {
    state.d = oracle.stochastic_gradient(1, state.x);
  } else {
    const double rho = 1.0 / (t + 1.0);
    const Vec g_cur = oracle.stochastic_gradient(t, state.x);
    const Vec g_prev = oracle.stochastic_gradient(t, state.x_prev);
    state.d = g_cur + (1.0 - rho) * (state.d - g_prev);
  }
  const Vec v = domain.linear_maximize(state.d);
  state.x_prev = state.x;
  state.x = state.x + v / static_cast<double>(T);
  ++state.round;
  return state.x;
}

OsfwState osfw_init(int dim) {
  if (dim < 1) throw DimensionError("osfw_init: dim must be >= 1");
  return OsfwState{Vec::Zero(dim), 0};
}

Vec osfw_round(OsfwState& state, const PolytopeDomain& domain, int t,
               NoisyGradientOracle& oracle, int T) {
  if (t < 1) throw ParamError("osfw_round: rounds are 1-based");
  if (T < 1) throw ParamError("osfw_round: horizon must be >= 1");
  const Vec d = oracle.stochastic_gradient(t, state.x);
  const Vec v = domain.linear_maximize(d);
  state.x = state.x + v / static_cast<double>(T);
  ++state.round;
  return state.x;
}

IidRunResult run_alg2(const PolytopeDomain& domain, NoisyGradientOracle& oracle, int T,
                      double comparator_value, double alpha) {
  Alg2State state = alg2_init(domain.dim());
  return run_iid(
      domain, oracle, T, comparator_value, alpha, "alg2",
      [&](int t, const Vec&, IidRunResult&) { return alg2_round(state, domain, t, oracle); },
      false);
}

IidRunResult run_alg3(const PolytopeDomain& domain, NoisyGradientOracle& oracle, int T,
                      double comparator_value, double alpha) {
  Alg3State state = alg3_init(domain.dim());
  return run_iid(
      domain, oracle, T, comparator_value, alpha, "alg3",
      [&](int t, const Vec& x_play, IidRunResult& res) {
        const Vec x_next = alg3_round(state, domain, t, oracle, T);
        res.eps_norm.push_back((state.d - oracle.base().gradient(x_play)).norm());
        return x_next;
      },
      true);
}

IidRunResult run_osfw(const PolytopeDomain& domain, NoisyGradientOracle& oracle, int T,
                      double comparator_value, double alpha) {
  OsfwState state = osfw_init(domain.dim());
  return run_iid(
      domain, oracle, T, comparator_value, alpha, "osfw",
      [&](int t, const Vec&, IidRunResult&) { return osfw_round(state, domain, t, oracle, T); },
      false);
}

long long alg2_expected_calls(int T) {
  long long total = 0;
  for (int t = 1; t <= T; ++t) total += static_cast<long long>(t) * ceil_sqrt(t);
  return total;
}

long long alg3_expected_calls(int T) { return 2LL * T - 1; }

long long osfw_expected_calls(int T) { return T; }

}  // namespace drsub
