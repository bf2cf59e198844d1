#include "drsub/domain.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "drsub/lp.hpp"

namespace drsub {
namespace {

// combinations cap before vertex enumeration is abandoned for the box bound
constexpr double kEnumWorkCap = 200000.0;
constexpr int kVertexCap = 1024;

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / i;
  return r;
}

}  // namespace

PolytopeDomain::PolytopeDomain(Mat C, Vec b, Vec lower, Vec upper)
    : C_(std::move(C)), b_(std::move(b)), lower_(std::move(lower)), upper_(std::move(upper)) {
  const int n = static_cast<int>(lower_.size());
  const int m = static_cast<int>(C_.rows());
  if (upper_.size() != n || (m > 0 && C_.cols() != n) || b_.size() != m)
    throw DimensionError("PolytopeDomain: inconsistent dimensions");
  if (!lower_.allFinite() || !upper_.allFinite() || !C_.allFinite() || !b_.allFinite())
    throw DomainError("PolytopeDomain: non-finite data");
  for (int i = 0; i < n; ++i) {
    if (lower_(i) > upper_(i)) throw DomainError("PolytopeDomain: lower > upper");
    if (lower_(i) > 0.0 || upper_(i) < 0.0)
      throw DomainError("PolytopeDomain: all-zeros point must satisfy the box");
  }
  for (int i = 0; i < m; ++i)
    if (b_(i) < 0.0) throw DomainError("PolytopeDomain: all-zeros point violates C x <= b");

  row_sqnorm_ = Vec::Zero(m);
  for (int i = 0; i < m; ++i) row_sqnorm_(i) = C_.row(i).squaredNorm();

  // vertex enumeration: active sets of n rows among {C; x<=u; -x<=-l}
  const int total = m + 2 * n;
  if (binomial(total, n) <= kEnumWorkCap) {
    Mat rowsA(total, n);
    Vec rowsB(total);
    for (int i = 0; i < m; ++i) {
      rowsA.row(i) = C_.row(i);
      rowsB(i) = b_(i);
    }
    for (int j = 0; j < n; ++j) {
      rowsA.row(m + j) = Vec::Unit(n, j).transpose();
      rowsB(m + j) = upper_(j);
      rowsA.row(m + n + j) = -Vec::Unit(n, j).transpose();
      rowsB(m + n + j) = -lower_(j);
    }
    std::vector<int> pick(static_cast<std::size_t>(n));
    std::vector<Vec> verts;
    // iterate over all n-subsets in lexicographic order
    for (int i = 0; i < n; ++i) pick[static_cast<std::size_t>(i)] = i;
    bool more = n <= total;
    while (more && static_cast<int>(verts.size()) <= kVertexCap) {
      Mat A(n, n);
      Vec rb(n);
      for (int i = 0; i < n; ++i) {
        A.row(i) = rowsA.row(pick[static_cast<std::size_t>(i)]);
        rb(i) = rowsB(pick[static_cast<std::size_t>(i)]);
      }
      Eigen::FullPivLU<Mat> lu(A);
      if (lu.isInvertible()) {
        Vec v = lu.solve(rb);
        if (contains(v, 1e-9)) {
          bool dup = false;
          for (const Vec& w : verts)
            if ((w - v).lpNorm<Eigen::Infinity>() <= 1e-9) {
              dup = true;
              break;
            }
          if (!dup) verts.push_back(std::move(v));
        }
      }
      // advance combination
      int i = n - 1;
      while (i >= 0 && pick[static_cast<std::size_t>(i)] == total - n + i) --i;
      if (i < 0) {
        more = false;
      } else {
        ++pick[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j)
          pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
    if (static_cast<int>(verts.size()) <= kVertexCap && !verts.empty()) {
      vertices_ = std::move(verts);
      diam_exact_ = true;
      for (std::size_t i = 0; i < vertices_.size(); ++i) {
        for (std::size_t j = i + 1; j < vertices_.size(); ++j) {
          diam_l1_ = std::max(diam_l1_, (vertices_[i] - vertices_[j]).lpNorm<1>());
          diam_l2_ = std::max(diam_l2_, (vertices_[i] - vertices_[j]).norm());
        }
        support_l1_ = std::max(support_l1_, vertices_[i].lpNorm<1>());
      }
    }
  }
  if (!diam_exact_) {
    diam_l1_ = (upper_ - lower_).lpNorm<1>();
    diam_l2_ = (upper_ - lower_).norm();
    if (lower_.minCoeff() >= 0.0) {
      // nonnegative orthant: sup ||x||_1 = max 1'x, attained at an LMO vertex
      support_l1_ = linear_maximize(Vec::Ones(n)).lpNorm<1>();
    } else {
      for (int i = 0; i < n; ++i)
        support_l1_ += std::max(std::abs(lower_(i)), std::abs(upper_(i)));
    }
  }
}

PolytopeDomain PolytopeDomain::unit_box(int dim) {
  return PolytopeDomain(Mat::Zero(0, dim), Vec::Zero(0), Vec::Zero(dim), Vec::Ones(dim));
}

PolytopeDomain PolytopeDomain::budgeted_box(int dim, double budget) {
  Mat C = Mat::Ones(1, dim);
  Vec b = Vec::Constant(1, budget);
  return PolytopeDomain(std::move(C), std::move(b), Vec::Zero(dim), Vec::Ones(dim));
}

PolytopeDomain PolytopeDomain::from_json(const nlohmann::json& j) {
  if (!j.contains("dim")) throw ConfigError("domain: missing dim");
  const int n = j.at("dim").get<int>();
  if (n <= 0) throw ConfigError("domain: dim must be positive");
  auto vec = [n](const nlohmann::json& a, const char* name) {
    if (!a.is_array() || static_cast<int>(a.size()) != n)
      throw ConfigError(std::string("domain: bad length for ") + name);
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = a.at(static_cast<std::size_t>(i)).get<double>();
    return v;
  };
  Vec lower = j.contains("lower") ? vec(j.at("lower"), "lower") : Vec::Zero(n);
  Vec upper = j.contains("upper") ? vec(j.at("upper"), "upper") : Vec::Ones(n);
  Mat C(0, n);
  Vec b(0);
  if (j.contains("C")) {
    const auto& rows = j.at("C");
    const auto& rhs = j.at("b");
    if (!rows.is_array() || !rhs.is_array() || rows.size() != rhs.size())
      throw ConfigError("domain: C/b shape mismatch");
    C.resize(static_cast<int>(rows.size()), n);
    b.resize(static_cast<int>(rhs.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      C.row(static_cast<int>(i)) = vec(rows.at(i), "C row").transpose();
      b(static_cast<int>(i)) = rhs.at(i).get<double>();
    }
  }
  return PolytopeDomain(std::move(C), std::move(b), std::move(lower), std::move(upper));
}

nlohmann::json PolytopeDomain::to_json() const {
  nlohmann::json j;
  j["dim"] = dim();
  j["lower"] = std::vector<double>(lower_.data(), lower_.data() + dim());
  j["upper"] = std::vector<double>(upper_.data(), upper_.data() + dim());
  nlohmann::json ineq_rows = nlohmann::json::array();
  nlohmann::json ineq_rhs = nlohmann::json::array();
  for (int i = 0; i < rows(); ++i) {
    const Vec row = C_.row(i).transpose();
    ineq_rows.push_back(std::vector<double>(row.data(), row.data() + dim()));
    ineq_rhs.push_back(b_(i));
  }
  j["C"] = std::move(ineq_rows);
  j["b"] = std::move(ineq_rhs);
  return j;
}

bool PolytopeDomain::contains(const Vec& x, double tol) const {
  if (x.size() != dim()) throw DimensionError("contains: dimension mismatch");
  for (int i = 0; i < dim(); ++i)
    if (x(i) < lower_(i) - tol || x(i) > upper_(i) + tol) return false;
  for (int i = 0; i < rows(); ++i)
    if (C_.row(i).dot(x) > b_(i) + tol) return false;
  return true;
}

Vec PolytopeDomain::linear_maximize(const Vec& direction, double tol) const {
  return lex_linear_maximize(C_, b_, lower_, upper_, direction, tol).x;
}

Vec PolytopeDomain::project(const Vec& y, double tol, int max_iter) const {
  if (y.size() != dim()) throw DimensionError("project: dimension mismatch");
  const int m = rows();
  // Dykstra's correction terms drain at a bounded rate per sweep, so the
  // sweep count needed grows linearly with the target's distance from the
  // box; budget for that instead of failing on far-away targets
  const Vec clamped = y.cwiseMax(lower_).cwiseMin(upper_);
  const double far = (y - clamped).norm();
  const long long budget =
      std::max<long long>(max_iter, 1000 + 400 * static_cast<long long>(std::ceil(far)));
  Vec x = y;
  std::vector<Vec> corr(static_cast<std::size_t>(m) + 1, Vec::Zero(dim()));
  double resid = 0.0;
  for (long long sweep = 0; sweep < budget; ++sweep) {
    const Vec x_prev = x;
    for (int i = 0; i <= m; ++i) {
      Vec w = x + corr[static_cast<std::size_t>(i)];
      Vec px;
      if (i < m) {
        const double viol = C_.row(i).dot(w) - b_(i);
        px = (viol > 0.0 && row_sqnorm_(i) > 0.0)
                 ? Vec(w - (viol / row_sqnorm_(i)) * C_.row(i).transpose())
                 : w;
      } else {
        px = w.cwiseMax(lower_).cwiseMin(upper_);
      }
      corr[static_cast<std::size_t>(i)] = w - px;
      x = std::move(px);
    }
    resid = (x - x_prev).norm();
    // small displacement alone is not a certificate: the iterate can park on
    // a vertex for many sweeps while only the correction terms move, so
    // require the inequality rows to actually hold before accepting
    if (resid <= tol) {
      double worst = 0.0;
      for (int i = 0; i < m; ++i)
        worst = std::max(worst, C_.row(i).dot(x) - b_(i));
      if (worst <= tol) return x;
    }
  }
  throw ProjectionError("project: Dykstra did not converge", x, resid);
}

}  // namespace drsub
