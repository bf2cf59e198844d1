#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "drsub/common.hpp"
#include "drsub/domain.hpp"
#include "drsub/objective.hpp"
#include "drsub/rng.hpp"

namespace drsub {

// Sampled-witness certificate from one property checker. `holds` is the
// overall verdict; a failing check carries the offending point pair (y = x
// for single-point criteria) and a human-readable note. For strong
// DR-submodularity the two sub-verdicts are reported separately:
// `hessian_ok` is the Hessian criterion (diag <= -mu, off-diag <= 0) and
// `definitional_ok` the sampled quadratic-upper-bound inequality;
// `hessian_available` is false when the family has no Hessian, in which case
// only the definitional sub-check ran.
struct CheckReport {
  bool holds = true;
  bool hessian_available = false;
  bool hessian_ok = true;
  bool definitional_ok = true;
  std::optional<std::pair<Vec, Vec>> witness;
  std::string detail;
};

// deterministic random feasible point / ordered feasible pair (x, y) with
// x <= y componentwise; exposed so tests can reuse the exact sampler
Vec sample_feasible(const PolytopeDomain& domain, Rng& rng);
std::pair<Vec, Vec> sample_ordered_pair(const PolytopeDomain& domain, Rng& rng);

// gradient antitone over sampled ordered pairs; Hessian entrywise
// nonpositivity at sampled points when available
CheckReport check_dr_submodular(const ObjectiveFunction& f, const PolytopeDomain& domain,
                                int samples, std::uint64_t seed, double tol = 1e-9);

// (a) Hessian criterion at sampled points: diag <= -mu, off-diag <= 0;
// (b) definitional: f(x+v) <= f(x) + <grad f(x), v> - (mu/2)||v||^2 + tol
// for sampled x and v >= 0 with x + v feasible, in the requested norm
CheckReport check_strong_dr(const ObjectiveFunction& f, const PolytopeDomain& domain,
                            double mu, Norm norm, int samples, std::uint64_t seed,
                            double tol = 1e-9);

// f(y) - f(x) >= <grad f(x), y - x> - (L/2)||y - x||^2 - tol over sampled
// ordered pairs
CheckReport check_smoothness(const ObjectiveFunction& f, const PolytopeDomain& domain,
                             double L, Norm norm, int samples, std::uint64_t seed,
                             double tol = 1e-9);

// nonnegative gradient at sampled points (sufficient for monotonicity on a
// box-connected domain)
CheckReport check_monotone(const ObjectiveFunction& f, const PolytopeDomain& domain,
                           int samples, std::uint64_t seed, double tol = 1e-9);

}  // namespace drsub
