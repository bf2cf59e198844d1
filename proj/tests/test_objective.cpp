#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include <nlohmann/json.hpp>

#include "drsub/domain.hpp"
#include "drsub/objective.hpp"
#include "drsub/rng.hpp"

using namespace drsub;

namespace {

QuadraticUtility diag_quadratic() {
  Mat A(2, 2);
  A << -1.0, 0.0, 0.0, -1.0;
  Vec a(2);
  a << 1.0, 1.0;
  return QuadraticUtility(A, a);
}

LogDiversityUtility pair_log_diversity() {
  Vec w(2);
  w << 1.0, 1.0;
  Mat theta(2, 2);
  theta << 0.0, -1.0, -1.0, 0.0;
  return LogDiversityUtility(w, theta, 5.0);
}

ConcaveNegDepUtility mixed_concave() {
  using S = ConcaveNegDepUtility::ScalarTerm;
  std::vector<S> terms(3);
  terms[0] = {S::kLog, 2.0, 0.0, 0.0, 1.0};
  terms[1] = {S::kQuad, 0.0, 1.5, 0.7, 1.0};
  terms[2] = {S::kPower, 0.0, 0.0, 0.0, 0.5};
  std::vector<ConcaveNegDepUtility::InteractionTerm> inter;
  inter.push_back({{0, 1}, -0.3});
  inter.push_back({{0, 1, 2}, -0.1});
  return ConcaveNegDepUtility(terms, inter);
}

// central-difference gradient check at x; relative error vs max(1, |g_i|)
void check_fd(const ObjectiveFunction& f, const Vec& x, double rel_tol) {
  const double h = 1e-5;
  const Vec g = f.gradient(x);
  for (int i = 0; i < f.dim(); ++i) {
    Vec lo = x, hi = x;
    lo(i) -= h;
    hi(i) += h;
    const double fd = (f.value(hi) - f.value(lo)) / (2 * h);
    CHECK(std::abs(fd - g(i)) <= rel_tol * std::max(1.0, std::abs(g(i))));
  }
}

}  // namespace

TEST_CASE("quadratic: values and gradients at pinned points") {
  const QuadraticUtility f = diag_quadratic();
  CHECK(f.value(Vec::Zero(2)) == 0.0);
  CHECK(f.value(Vec::Ones(2)) == 1.0);  // -1 from the quadratic term, +2 linear
  const Vec g0 = f.gradient(Vec::Zero(2));
  CHECK(g0(0) == 1.0);
  CHECK(g0(1) == 1.0);
  const Vec g1 = f.gradient((Vec(2) << 1.0, 0.0).finished());
  CHECK(g1(0) == 0.0);
  CHECK(g1(1) == 1.0);
}

TEST_CASE("quadratic: constructor flags") {
  Mat A(2, 2);
  A << -1.0, 0.5, 0.5, -1.0;
  Vec a = Vec::Ones(2);
  CHECK_THROWS_AS(QuadraticUtility(A, a, 0.0, QuadraticUtility::kRequireSubmodular),
                  ParamError);
  A(0, 1) = A(1, 0) = -0.5;
  CHECK_NOTHROW(QuadraticUtility(A, a, 0.0, QuadraticUtility::kRequireSubmodular));
  CHECK_THROWS_AS(QuadraticUtility(A, a, 0.3, QuadraticUtility::kRequireNormalized),
                  ParamError);
  Mat Asym(2, 2);
  Asym << -1.0, 0.2, -0.2, -1.0;
  CHECK_THROWS_AS(QuadraticUtility(Asym, a), ParamError);
}

TEST_CASE("log-diversity: pinned value and origin behavior") {
  const LogDiversityUtility f = pair_log_diversity();
  CHECK(f.value(Vec::Zero(2)) == 0.0);
  CHECK(f.value(Vec::Ones(2)) ==
        doctest::Approx(10.0 * std::log(2.0) - 1.0).epsilon(1e-14));
}

TEST_CASE("log-diversity: parameter validation") {
  Vec w(2);
  w << 0.5, 1.5;  // out of [0,1]
  Mat theta = Mat::Zero(2, 2);
  CHECK_THROWS_AS(LogDiversityUtility(w, theta), ParamError);
  w << 0.5, 1.0;
  theta(0, 1) = theta(1, 0) = 0.25;  // positive penalty
  CHECK_THROWS_AS(LogDiversityUtility(w, theta), ParamError);
  theta(0, 1) = theta(1, 0) = -0.25;
  theta(0, 0) = 0.1;  // nonzero diagonal
  CHECK_THROWS_AS(LogDiversityUtility(w, theta), ParamError);
}

TEST_CASE("concave-negdep: value matches the closed forms") {
  const ConcaveNegDepUtility f = mixed_concave();
  const Vec x = (Vec(3) << 0.5, 0.4, 0.25).finished();
  const double expect = std::log1p(2.0 * 0.5) + (-1.5 * 0.4 * 0.4 / 2 + 0.7 * 0.4) +
                        std::pow(0.25, 0.5) + (-0.3) * 0.5 * 0.4 +
                        (-0.1) * 0.5 * 0.4 * 0.25;
  CHECK(f.value(x) == doctest::Approx(expect).epsilon(1e-14));
  CHECK_THROWS_AS(
      ConcaveNegDepUtility({ConcaveNegDepUtility::ScalarTerm{}},
                           {ConcaveNegDepUtility::InteractionTerm{{0, 0}, 0.5}}),
      ParamError);
}

TEST_CASE("gradients agree with central finite differences") {
  const PolytopeDomain box2 = PolytopeDomain::unit_box(2);
  Rng rng(77);
  const QuadraticUtility q = diag_quadratic();
  const LogDiversityUtility ld = pair_log_diversity();
  const ConcaveNegDepUtility cn = mixed_concave();
  for (int trial = 0; trial < 50; ++trial) {
    Vec x2(2);
    for (int i = 0; i < 2; ++i) x2(i) = rng.uniform(0.0, 1.0);
    check_fd(q, x2, 1e-6);
    check_fd(ld, x2, 1e-6);
    // inset from 0 so the x^gamma derivative stays finite-difference friendly
    Vec x3(3);
    for (int i = 0; i < 3; ++i) x3(i) = rng.uniform(0.05, 0.95);
    check_fd(cn, x3, 1e-6);
  }
}

TEST_CASE("scaled sum evaluates the weighted combination") {
  auto f1 = std::make_shared<const QuadraticUtility>(diag_quadratic());
  auto f2 = std::make_shared<const LogDiversityUtility>(pair_log_diversity());
  const ScaledSumFunction sum({f1, f2}, {0.25, 2.0});
  const Vec x = (Vec(2) << 0.5, 1.0).finished();
  CHECK(sum.value(x) ==
        doctest::Approx(0.25 * f1->value(x) + 2.0 * f2->value(x)).epsilon(1e-14));
  const Vec g = sum.gradient(x);
  const Vec ge = 0.25 * f1->gradient(x) + 2.0 * f2->gradient(x);
  CHECK((g - ge).lpNorm<Eigen::Infinity>() <= 1e-14);
}

TEST_CASE("json round-trip reproduces each family exactly") {
  Rng rng(99);
  std::vector<std::shared_ptr<const ObjectiveFunction>> fs;
  fs.push_back(std::make_shared<const QuadraticUtility>(diag_quadratic()));
  fs.push_back(std::make_shared<const LogDiversityUtility>(pair_log_diversity()));
  fs.push_back(std::make_shared<const ConcaveNegDepUtility>(mixed_concave()));
  for (const auto& f : fs) {
    const auto back = function_from_json(function_to_json(*f));
    REQUIRE(back->dim() == f->dim());
    for (int trial = 0; trial < 20; ++trial) {
      Vec x(f->dim());
      for (int i = 0; i < f->dim(); ++i) x(i) = rng.uniform(0.01, 1.0);
      CHECK(back->value(x) == f->value(x));
      CHECK((back->gradient(x) - f->gradient(x)).lpNorm<Eigen::Infinity>() == 0.0);
    }
  }
}
