#include "drsub/online.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <utility>

namespace drsub {
namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Shared inner loop of Algorithm 1 and Meta-FW: the K selections depend only
// on their own learner state, so they evaluate in parallel into fixed slots;
// the iterate chain, feedback order, and trace are strictly sequential in k.
template <class Select, class Update>
Vec meta_round(int K, int dim, const PolytopeDomain& domain, const ObjectiveFunction& f_t,
               Select select, Update update, std::vector<InnerStep>* trace) {
  std::vector<Vec> vs(static_cast<std::size_t>(K));
  std::vector<std::exception_ptr> errs(static_cast<std::size_t>(K));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int k = 0; k < K; ++k) {
    try {
      vs[static_cast<std::size_t>(k)] = select(k);
    } catch (...) {
      errs[static_cast<std::size_t>(k)] = std::current_exception();
    }
  }
  for (const auto& e : errs)
    if (e) std::rethrow_exception(e);

  std::vector<Vec> xs(static_cast<std::size_t>(K) + 1);
  xs[0] = Vec::Zero(dim);
  for (int k = 0; k < K; ++k)
    xs[static_cast<std::size_t>(k) + 1] =
        xs[static_cast<std::size_t>(k)] + vs[static_cast<std::size_t>(k)] / K;

  std::vector<Vec> grads(static_cast<std::size_t>(K));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int k = 0; k < K; ++k) {
    try {
      grads[static_cast<std::size_t>(k)] = f_t.gradient(xs[static_cast<std::size_t>(k)]);
    } catch (...) {
      errs[static_cast<std::size_t>(k)] = std::current_exception();
    }
  }
  for (const auto& e : errs)
    if (e) std::rethrow_exception(e);

  for (int k = 0; k < K; ++k) update(k, grads[static_cast<std::size_t>(k)]);

  if (trace) {
    trace->clear();
    trace->resize(static_cast<std::size_t>(K) + 1);
    for (int k = 0; k < K; ++k) {
      InnerStep& step = (*trace)[static_cast<std::size_t>(k)];
      step.v = vs[static_cast<std::size_t>(k)];
      step.x_before = xs[static_cast<std::size_t>(k)];
      step.f_before = f_t.value(xs[static_cast<std::size_t>(k)]);
      step.inner = step.v.dot(grads[static_cast<std::size_t>(k)]);
      step.v_norm2 = step.v.norm();
    }
    InnerStep& last = (*trace)[static_cast<std::size_t>(K)];
    last.x_before = xs[static_cast<std::size_t>(K)];
    last.f_before = f_t.value(xs[static_cast<std::size_t>(K)]);
  }
  return xs[static_cast<std::size_t>(K)];
}

void finalize_rows(RegretTrace& trace, const std::vector<double>& comparator_per_round,
                   double alpha) {
  std::vector<double> utilities;
  utilities.reserve(trace.rows.size());
  for (const RegretRow& r : trace.rows) utilities.push_back(r.utility);
  const std::vector<double> regret = compute_regret(utilities, comparator_per_round, alpha);
  double cum = 0.0;
  for (std::size_t i = 0; i < trace.rows.size(); ++i) {
    cum += trace.rows[i].utility;
    trace.rows[i].cum_utility = cum;
    trace.rows[i].alpha_regret = regret[i];
  }
  trace.alpha = alpha;
}

}  // namespace

// ---------------------------------------------------------------------------
// sub-learners

FtlState ftl_init(int dim, double mu) {
  if (dim < 1) throw DimensionError("ftl_init: dim must be >= 1");
  if (mu <= 0.0) throw ParamError("ftl_init: mu must be > 0");
  return FtlState{Vec::Zero(dim), 0, mu};
}

Vec ftl_select(const FtlState& state, const PolytopeDomain& domain) {
  if (state.rounds_seen == 0) return Vec::Zero(domain.dim());
  return domain.project(state.grad_sum / (state.mu * state.rounds_seen));
}

void ftl_update(FtlState& state, const Vec& payoff_gradient_linear_part) {
  if (payoff_gradient_linear_part.size() != state.grad_sum.size())
    throw DimensionError("ftl_update: gradient dimension mismatch");
  state.grad_sum += payoff_gradient_linear_part;
  ++state.rounds_seen;
}

FtrlLinearState ftrl_init(int dim, std::function<double(int)> eta) {
  if (dim < 1) throw DimensionError("ftrl_init: dim must be >= 1");
  if (!eta) throw ParamError("ftrl_init: eta schedule required");
  return FtrlLinearState{Vec::Zero(dim), 0, std::move(eta)};
}

Vec ftrl_select(const FtrlLinearState& state, const PolytopeDomain& domain) {
  if (state.rounds_seen == 0) return Vec::Zero(domain.dim());
  return domain.project(state.eta(state.rounds_seen) * state.grad_sum);
}

void ftrl_update(FtrlLinearState& state, const Vec& payoff_gradient) {
  if (payoff_gradient.size() != state.grad_sum.size())
    throw DimensionError("ftrl_update: gradient dimension mismatch");
  state.grad_sum += payoff_gradient;
  ++state.rounds_seen;
}

std::function<double(int)> metafw_default_eta(double R, double beta, int T) {
  if (T < 1) throw ParamError("metafw_default_eta: T must be >= 1");
  const double denom = std::max(beta, 1e-12) * std::sqrt(static_cast<double>(T));
  const double eta = R / denom;
  return [eta](int) { return eta; };
}

// ---------------------------------------------------------------------------
// meta algorithms

int alg1_default_K(int T) {
  if (T < 1) throw ParamError("alg1_default_K: T must be >= 1");
  if (T == 1) return 1;
  return std::max(1, static_cast<int>(std::ceil(T / std::log(static_cast<double>(T)))));
}

int metafw_default_K(int T) {
  if (T < 1) throw ParamError("metafw_default_K: T must be >= 1");
  return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(T))));
}

Alg1State alg1_init(int dim, int K, double mu) {
  if (K < 1) throw ParamError("alg1_init: K must be >= 1");
  Alg1State state;
  state.K = K;
  state.instances.assign(static_cast<std::size_t>(K), ftl_init(dim, mu));
  return state;
}

MetaFwState metafw_init(int dim, int K, std::function<double(int)> eta) {
  if (K < 1) throw ParamError("metafw_init: K must be >= 1");
  MetaFwState state;
  state.K = K;
  state.instances.reserve(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) state.instances.push_back(ftrl_init(dim, eta));
  return state;
}

Vec alg1_round(Alg1State& state, const PolytopeDomain& domain,
               const ObjectiveFunction& f_t, std::vector<InnerStep>* trace) {
  const Vec x = meta_round(
      state.K, domain.dim(), domain, f_t,
      [&](int k) { return ftl_select(state.instances[static_cast<std::size_t>(k)], domain); },
      [&](int k, const Vec& g) { ftl_update(state.instances[static_cast<std::size_t>(k)], g); },
      trace);
  ++state.round;
  return x;
}

Vec metafw_round(MetaFwState& state, const PolytopeDomain& domain,
                 const ObjectiveFunction& f_t, std::vector<InnerStep>* trace) {
  const Vec x = meta_round(
      state.K, domain.dim(), domain, f_t,
      [&](int k) { return ftrl_select(state.instances[static_cast<std::size_t>(k)], domain); },
      [&](int k, const Vec& g) { ftrl_update(state.instances[static_cast<std::size_t>(k)], g); },
      trace);
  ++state.round;
  return x;
}

// ---------------------------------------------------------------------------
// traces

std::vector<double> compute_regret(const std::vector<double>& utilities,
                                   const std::vector<double>& comparator_value_per_round,
                                   double alpha) {
  if (utilities.size() != comparator_value_per_round.size())
    throw DimensionError("compute_regret: series length mismatch");
  std::vector<double> out(utilities.size());
  double cum_u = 0.0, cum_c = 0.0;
  for (std::size_t i = 0; i < utilities.size(); ++i) {
    cum_u += utilities[i];
    cum_c += comparator_value_per_round[i];
    out[i] = alpha * cum_c - cum_u;
  }
  return out;
}

void write_trace_csv(const RegretTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("write_trace_csv: cannot open " + path);
  const int n = trace.rows.empty() ? 0 : static_cast<int>(trace.rows.front().x.size());
  out << "t";
  for (int i = 0; i < n; ++i) out << ",x_" << i;
  out << ",utility,cum_utility,alpha_regret\n";
  for (const RegretRow& r : trace.rows) {
    out << r.t;
    for (int i = 0; i < n; ++i) out << ',' << fmt17(r.x(i));
    out << ',' << fmt17(r.utility) << ',' << fmt17(r.cum_utility) << ','
        << fmt17(r.alpha_regret) << '\n';
  }
  if (!out) throw Error("write_trace_csv: write failed for " + path);
}

void write_trace_sidecar(const RegretTrace& trace, const std::string& path) {
  nlohmann::json j;
  j["algorithm"] = trace.algorithm;
  j["seed"] = trace.seed;
  j["alpha"] = trace.alpha;
  j["comparator_value"] = trace.comparator_value;
  j["comparator_method"] = trace.comparator_method;
  j["comparator_x"] =
      std::vector<double>(trace.comparator_x.data(),
                          trace.comparator_x.data() + trace.comparator_x.size());
  j["gradient_calls"] = trace.gradient_calls;
  j["rounds"] = trace.rows.size();
  std::ofstream out(path);
  if (!out) throw Error("write_trace_sidecar: cannot open " + path);
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// sequence runners

RegretTrace run_alg1(const std::vector<std::shared_ptr<const ObjectiveFunction>>& fs,
                     const PolytopeDomain& domain, double mu, int K,
                     const std::vector<double>& comparator_per_round, double alpha) {
  const int T = static_cast<int>(fs.size());
  if (T < 1) throw ParamError("run_alg1: empty sequence");
  if (K <= 0) K = alg1_default_K(T);
  Alg1State state = alg1_init(domain.dim(), K, mu);
  RegretTrace trace;
  trace.algorithm = "alg1";
  trace.rows.reserve(static_cast<std::size_t>(T));
  for (int t = 1; t <= T; ++t) {
    const ObjectiveFunction& f_t = *fs[static_cast<std::size_t>(t - 1)];
    RegretRow row;
    row.t = t;
    row.x = alg1_round(state, domain, f_t);
    row.utility = row.realized = f_t.value(row.x);
    trace.rows.push_back(std::move(row));
  }
  finalize_rows(trace, comparator_per_round, alpha);
  return trace;
}

RegretTrace run_metafw(const std::vector<std::shared_ptr<const ObjectiveFunction>>& fs,
                       const PolytopeDomain& domain, int K, std::function<double(int)> eta,
                       const std::vector<double>& comparator_per_round, double alpha) {
  const int T = static_cast<int>(fs.size());
  if (T < 1) throw ParamError("run_metafw: empty sequence");
  if (K <= 0) K = metafw_default_K(T);
  if (!eta) {
    double beta = 0.0;
    for (const auto& f : fs)
      beta = std::max(beta, f->gradient_sup_bound(domain.lower(), domain.upper()));
    eta = metafw_default_eta(domain.diameter(Norm::L2), beta, T);
  }
  MetaFwState state = metafw_init(domain.dim(), K, std::move(eta));
  RegretTrace trace;
  trace.algorithm = "metafw";
  trace.rows.reserve(static_cast<std::size_t>(T));
  for (int t = 1; t <= T; ++t) {
    const ObjectiveFunction& f_t = *fs[static_cast<std::size_t>(t - 1)];
    RegretRow row;
    row.t = t;
    row.x = metafw_round(state, domain, f_t);
    row.utility = row.realized = f_t.value(row.x);
    trace.rows.push_back(std::move(row));
  }
  finalize_rows(trace, comparator_per_round, alpha);
  return trace;
}

RegretTrace blocked_random_order_run(
    const std::vector<std::shared_ptr<const ObjectiveFunction>>& fs,
    const PolytopeDomain& domain, int W, double mu, int K,
    const std::vector<double>& comparator_per_round, double alpha) {
  const int T = static_cast<int>(fs.size());
  if (T < 1) throw ParamError("blocked_random_order_run: empty sequence");
  if (W < 1 || W > T)
    throw ParamError("blocked_random_order_run: W must lie in [1, T]");
  const int blocks = (T + W - 1) / W;
  if (K <= 0) K = alg1_default_K(blocks);
  Alg1State state = alg1_init(domain.dim(), K, mu);
  RegretTrace trace;
  trace.algorithm = "alg1_blocked_W" + std::to_string(W);
  trace.rows.reserve(static_cast<std::size_t>(T));
  for (int tau = 0; tau < blocks; ++tau) {
    const int begin = tau * W;
    const int end = std::min((tau + 1) * W, T);
    std::vector<std::shared_ptr<const ObjectiveFunction>> block(
        fs.begin() + begin, fs.begin() + end);
    const std::vector<double> weights(block.size(), 1.0 / static_cast<double>(block.size()));
    const auto avg = materialize_sum(block, weights);
    const Vec z = alg1_round(state, domain, *avg);
    for (int t = begin; t < end; ++t) {
      RegretRow row;
      row.t = t + 1;
      row.x = z;
      row.utility = row.realized = fs[static_cast<std::size_t>(t)]->value(z);
      trace.rows.push_back(std::move(row));
    }
  }
  finalize_rows(trace, comparator_per_round, alpha);
  return trace;
}

double theorem1_bound(double L, double R, double beta, double mu, int T, int K) {
  if (T < 1 || K < 1 || mu <= 0.0) throw ParamError("theorem1_bound: invalid parameters");
  return L * R * R * T / (2.0 * K) +
         (beta + mu * R) * (beta + mu * R) * std::log(static_cast<double>(T)) / (2.0 * mu);
}

}  // namespace drsub
