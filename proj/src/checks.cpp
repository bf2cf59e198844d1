#include "drsub/checks.hpp"

#include <cmath>
#include <sstream>

namespace drsub {
namespace {

std::string describe_coord(const char* what, int i, double got, double bound) {
  std::ostringstream os;
  os << what << " at coordinate " << i << ": " << got << " vs bound " << bound;
  return os.str();
}

}  // namespace

Vec sample_feasible(const PolytopeDomain& domain, Rng& rng) {
  const int n = domain.dim();
  Vec u(n);
  for (int i = 0; i < n; ++i) u(i) = rng.uniform(domain.lower()(i), domain.upper()(i));
  const double s = rng.uniform01();
  if (domain.rows() == 0) return u;
  // scale toward the (feasible) origin until every violated row is satisfied;
  // box feasibility is preserved because lower <= 0 <= upper
  double cap = 1.0;
  bool violated = false;
  const Vec r = domain.ineq_matrix() * u;
  for (int i = 0; i < domain.rows(); ++i) {
    if (r(i) > domain.ineq_rhs()(i)) {
      violated = true;
      cap = std::min(cap, domain.ineq_rhs()(i) / r(i));
    }
  }
  if (!violated) return u;
  return Vec(s * cap * u);
}

std::pair<Vec, Vec> sample_ordered_pair(const PolytopeDomain& domain, Rng& rng) {
  const int n = domain.dim();
  Vec x = sample_feasible(domain, rng);
  Vec w(n);
  for (int i = 0; i < n; ++i) w(i) = rng.uniform(0.0, domain.upper()(i) - x(i));
  const double s = rng.uniform01();
  double cap = 1.0;
  if (domain.rows() > 0) {
    const Vec rw = domain.ineq_matrix() * w;
    const Vec rx = domain.ineq_matrix() * x;
    for (int i = 0; i < domain.rows(); ++i)
      if (rw(i) > 0.0) cap = std::min(cap, (domain.ineq_rhs()(i) - rx(i)) / rw(i));
  }
  cap = std::max(cap, 0.0);
  return {x, Vec(x + s * cap * w)};
}

CheckReport check_dr_submodular(const ObjectiveFunction& f, const PolytopeDomain& domain,
                                int samples, std::uint64_t seed, double tol) {
  if (samples < 1) throw ParamError("check_dr_submodular: samples must be >= 1");
  CheckReport rep;
  rep.hessian_available = f.has_hessian();
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    auto [x, y] = sample_ordered_pair(domain, rng);
    const Vec gx = f.gradient(x), gy = f.gradient(y);
    for (int i = 0; i < domain.dim(); ++i) {
      if (gy(i) > gx(i) + tol) {
        rep.holds = false;
        rep.definitional_ok = false;
        rep.witness = {x, y};
        rep.detail = describe_coord("gradient not order-reversing", i, gy(i), gx(i));
        return rep;
      }
    }
    if (rep.hessian_available) {
      const Mat H = f.hessian(x);
      for (int i = 0; i < domain.dim(); ++i)
        for (int j = 0; j < domain.dim(); ++j)
          if (H(i, j) > tol) {
            rep.holds = false;
            rep.hessian_ok = false;
            rep.witness = {x, x};
            rep.detail = describe_coord("positive Hessian entry", i, H(i, j), 0.0);
            return rep;
          }
    }
  }
  return rep;
}

CheckReport check_strong_dr(const ObjectiveFunction& f, const PolytopeDomain& domain,
                            double mu, Norm norm, int samples, std::uint64_t seed,
                            double tol) {
  if (samples < 1) throw ParamError("check_strong_dr: samples must be >= 1");
  if (mu < 0.0) throw ParamError("check_strong_dr: mu must be >= 0");
  CheckReport rep;
  rep.hessian_available = f.has_hessian();
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    auto [x, y] = sample_ordered_pair(domain, rng);
    const Vec v = y - x;
    if (rep.hessian_available && rep.hessian_ok) {
      const Mat H = f.hessian(x);
      for (int i = 0; i < domain.dim() && rep.hessian_ok; ++i)
        for (int j = 0; j < domain.dim(); ++j) {
          const double bound = i == j ? -mu : 0.0;
          if (H(i, j) > bound + tol) {
            rep.hessian_ok = false;
            rep.holds = false;
            if (!rep.witness) rep.witness = {x, x};
            rep.detail = describe_coord("Hessian criterion violated", i, H(i, j), bound);
            break;
          }
        }
    }
    const double nv = norm_of(v, norm);
    const double lhs = f.value(y);
    const double rhs = f.value(x) + f.gradient(x).dot(v) - 0.5 * mu * nv * nv;
    if (lhs > rhs + tol) {
      rep.definitional_ok = false;
      rep.holds = false;
      rep.witness = {x, y};
      std::ostringstream os;
      os << "definitional inequality violated: f(x+v) = " << lhs
         << " exceeds quadratic upper bound " << rhs;
      rep.detail = os.str();
      return rep;
    }
  }
  return rep;
}

CheckReport check_smoothness(const ObjectiveFunction& f, const PolytopeDomain& domain,
                             double L, Norm norm, int samples, std::uint64_t seed,
                             double tol) {
  if (samples < 1) throw ParamError("check_smoothness: samples must be >= 1");
  if (L < 0.0) throw ParamError("check_smoothness: L must be >= 0");
  CheckReport rep;
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    auto [x, y] = sample_ordered_pair(domain, rng);
    const Vec d = y - x;
    const double nd = norm_of(d, norm);
    const double lhs = f.value(y) - f.value(x);
    const double rhs = f.gradient(x).dot(d) - 0.5 * L * nd * nd;
    if (lhs < rhs - tol) {
      rep.holds = false;
      rep.definitional_ok = false;
      rep.witness = {x, y};
      std::ostringstream os;
      os << "smoothness lower bound violated: f(y) - f(x) = " << lhs << " below " << rhs;
      rep.detail = os.str();
      return rep;
    }
  }
  return rep;
}

CheckReport check_monotone(const ObjectiveFunction& f, const PolytopeDomain& domain,
                           int samples, std::uint64_t seed, double tol) {
  if (samples < 1) throw ParamError("check_monotone: samples must be >= 1");
  CheckReport rep;
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    const Vec x = sample_feasible(domain, rng);
    const Vec g = f.gradient(x);
    for (int i = 0; i < domain.dim(); ++i)
      if (g(i) < -tol) {
        rep.holds = false;
        rep.definitional_ok = false;
        rep.witness = {x, x};
        rep.detail = describe_coord("negative gradient", i, g(i), 0.0);
        return rep;
      }
  }
  return rep;
}

}  // namespace drsub
