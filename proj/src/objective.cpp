#include "drsub/objective.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace drsub {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Mat mat_from_json(const nlohmann::json& a, const char* name) {
  if (!a.is_array() || a.empty()) throw ConfigError(std::string("bad matrix: ") + name);
  const int r = static_cast<int>(a.size());
  const int c = static_cast<int>(a.at(0).size());
  Mat M(r, c);
  for (int i = 0; i < r; ++i) {
    const auto& row = a.at(static_cast<std::size_t>(i));
    if (static_cast<int>(row.size()) != c)
      throw ConfigError(std::string("ragged matrix: ") + name);
    for (int j = 0; j < c; ++j) M(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
  }
  return M;
}

Vec vec_from_json(const nlohmann::json& a, const char* name) {
  if (!a.is_array()) throw ConfigError(std::string("bad vector: ") + name);
  Vec v(static_cast<int>(a.size()));
  for (int i = 0; i < v.size(); ++i) v(i) = a.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

nlohmann::json mat_to_json(const Mat& M) {
  nlohmann::json a = nlohmann::json::array();
  for (int i = 0; i < M.rows(); ++i) {
    const Vec row = M.row(i).transpose();
    a.push_back(std::vector<double>(row.data(), row.data() + row.size()));
  }
  return a;
}

std::vector<double> vec_to_std(const Vec& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

// interval [lo,hi] of a linear form sum_j M_ij x_j over the box
void linear_interval(const Mat& M, const Vec& l, const Vec& u, Vec& lo, Vec& hi) {
  const int n = static_cast<int>(M.rows());
  lo = Vec::Zero(n);
  hi = Vec::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < M.cols(); ++j) {
      const double a = M(i, j) * l(j), b = M(i, j) * u(j);
      lo(i) += std::min(a, b);
      hi(i) += std::max(a, b);
    }
}

}  // namespace

Mat ObjectiveFunction::hessian(const Vec&) const {
  throw Error("hessian: not available for this function");
}

// ---------------------------------------------------------------------------
// QuadraticUtility

QuadraticUtility::QuadraticUtility(Mat A, Vec a, double c, unsigned flags)
    : A_(std::move(A)), a_(std::move(a)), c_(c) {
  const int n = static_cast<int>(a_.size());
  if (A_.rows() != n || A_.cols() != n)
    throw DimensionError("QuadraticUtility: A must be n x n");
  if (!A_.allFinite() || !a_.allFinite() || !std::isfinite(c_))
    throw ParamError("QuadraticUtility: non-finite data");
  if ((A_ - A_.transpose()).lpNorm<Eigen::Infinity>() > 1e-9)
    throw ParamError("QuadraticUtility: A must be symmetric");
  if (flags & kRequireSubmodular) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && A_(i, j) > 0.0)
          throw ParamError("QuadraticUtility: submodularity requires off-diagonal <= 0");
  }
  if ((flags & kRequireNormalized) && c_ != 0.0)
    throw ParamError("QuadraticUtility: normalization requires c = 0");
}

double QuadraticUtility::value(const Vec& x) const {
  return 0.5 * x.dot(A_ * x) + a_.dot(x) + c_;
}

Vec QuadraticUtility::gradient(const Vec& x) const { return A_ * x + a_; }

Mat QuadraticUtility::hessian(const Vec&) const { return A_; }

double QuadraticUtility::smoothness_bound(const Vec&, const Vec&, Norm norm) const {
  if (norm == Norm::L1) return A_.lpNorm<Eigen::Infinity>();  // max |A_ij|
  // Gershgorin bound on the spectral norm
  double best = 0.0;
  for (int i = 0; i < A_.rows(); ++i) best = std::max(best, A_.row(i).lpNorm<1>());
  return best;
}

double QuadraticUtility::gradient_sup_bound(const Vec& lower, const Vec& upper) const {
  Vec lo, hi;
  linear_interval(A_, lower, upper, lo, hi);
  double s = 0.0;
  for (int i = 0; i < dim(); ++i) {
    const double m = std::max(std::abs(lo(i) + a_(i)), std::abs(hi(i) + a_(i)));
    s += m * m;
  }
  return std::sqrt(s);
}

QuadraticUtility QuadraticUtility::weighted_sum(
    const std::vector<const QuadraticUtility*>& fs, const std::vector<double>& w) {
  if (fs.empty() || fs.size() != w.size())
    throw ParamError("QuadraticUtility::weighted_sum: empty or mismatched inputs");
  Mat A = Mat::Zero(fs[0]->dim(), fs[0]->dim());
  Vec a = Vec::Zero(fs[0]->dim());
  double c = 0.0;
  for (std::size_t k = 0; k < fs.size(); ++k) {
    A += w[k] * fs[k]->quad();
    a += w[k] * fs[k]->lin();
    c += w[k] * fs[k]->constant();
  }
  return QuadraticUtility(std::move(A), std::move(a), c);
}

// ---------------------------------------------------------------------------
// LogDiversityUtility

LogDiversityUtility::LogDiversityUtility(Vec weights, Mat pair_penalties, double scale)
    : R_(std::move(weights)), theta_(std::move(pair_penalties)), scale_(scale) {
  const int n = static_cast<int>(R_.size());
  if (theta_.rows() != n || theta_.cols() != n)
    throw DimensionError("LogDiversityUtility: penalty matrix must be n x n");
  if ((theta_ - theta_.transpose()).lpNorm<Eigen::Infinity>() > 1e-9)
    throw ParamError("LogDiversityUtility: penalties must be symmetric");
  for (int i = 0; i < n; ++i) {
    if (R_(i) < 0.0 || R_(i) > 1.0)
      throw ParamError("LogDiversityUtility: weights must lie in [0,1]");
    if (theta_(i, i) != 0.0)
      throw ParamError("LogDiversityUtility: penalty diagonal must be zero");
    for (int j = 0; j < n; ++j)
      if (theta_(i, j) > 0.0 || theta_(i, j) < -1.0)
        throw ParamError("LogDiversityUtility: penalties must lie in [-1,0]");
  }
  if (scale_ <= 0.0) throw ParamError("LogDiversityUtility: scale must be positive");
}

double LogDiversityUtility::value(const Vec& x) const {
  double v = 0.0;
  for (int i = 0; i < dim(); ++i) v += scale_ * std::log1p(R_(i) * x(i));
  for (int i = 0; i < dim(); ++i)
    for (int j = i + 1; j < dim(); ++j) v += theta_(i, j) * x(i) * x(j);
  return v;
}

Vec LogDiversityUtility::gradient(const Vec& x) const {
  Vec g = theta_ * x;  // diagonal is zero, so this is sum_{j != i} theta_ij x_j
  for (int i = 0; i < dim(); ++i) g(i) += scale_ * R_(i) / (1.0 + R_(i) * x(i));
  return g;
}

Mat LogDiversityUtility::hessian(const Vec& x) const {
  Mat H = theta_;
  for (int i = 0; i < dim(); ++i) {
    const double d = 1.0 + R_(i) * x(i);
    H(i, i) = -scale_ * R_(i) * R_(i) / (d * d);
  }
  return H;
}

double LogDiversityUtility::smoothness_bound(const Vec& lower, const Vec&, Norm norm) const {
  // |H_ii| is maximal at the lower box corner; off-diagonals are constant
  double max_entry = 0.0, max_row = 0.0;
  for (int i = 0; i < dim(); ++i) {
    const double d = 1.0 + R_(i) * lower(i);
    if (d <= 0.0) return kInf;
    const double dii = scale_ * R_(i) * R_(i) / (d * d);
    max_entry = std::max(max_entry, dii);
    max_row = std::max(max_row, dii + theta_.row(i).lpNorm<1>());
  }
  for (int i = 0; i < dim(); ++i)
    max_entry = std::max(max_entry, theta_.row(i).lpNorm<Eigen::Infinity>());
  return norm == Norm::L1 ? max_entry : max_row;
}

double LogDiversityUtility::gradient_sup_bound(const Vec& lower, const Vec& upper) const {
  Vec lo, hi;
  linear_interval(theta_, lower, upper, lo, hi);
  double s = 0.0;
  for (int i = 0; i < dim(); ++i) {
    const double dl = 1.0 + R_(i) * lower(i);
    if (dl <= 0.0) return kInf;
    const double log_hi = scale_ * R_(i) / dl;
    const double log_lo = scale_ * R_(i) / (1.0 + R_(i) * upper(i));
    const double m = std::max(std::abs(log_lo + lo(i)), std::abs(log_hi + hi(i)));
    s += m * m;
  }
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// ConcaveNegDepUtility

ConcaveNegDepUtility::ConcaveNegDepUtility(std::vector<ScalarTerm> per_coordinate,
                                           std::vector<InteractionTerm> interactions)
    : terms_(std::move(per_coordinate)), inter_(std::move(interactions)) {
  const int n = dim();
  if (n == 0) throw ParamError("ConcaveNegDepUtility: empty coordinate list");
  for (const ScalarTerm& t : terms_) {
    if (t.kind == ScalarTerm::kLog && t.w < 0.0)
      throw ParamError("ConcaveNegDepUtility: log weight must be >= 0");
    if (t.kind == ScalarTerm::kQuad && t.q < 0.0)
      throw ParamError("ConcaveNegDepUtility: quadratic curvature must be >= 0");
    if (t.kind == ScalarTerm::kPower && (t.gamma <= 0.0 || t.gamma > 1.0))
      throw ParamError("ConcaveNegDepUtility: power exponent must lie in (0,1]");
  }
  for (const InteractionTerm& t : inter_) {
    if (t.theta > 0.0) throw ParamError("ConcaveNegDepUtility: interactions must be <= 0");
    if (t.indices.size() < 2 || t.indices.size() > static_cast<std::size_t>(n))
      throw ParamError("ConcaveNegDepUtility: interaction order out of range");
    for (std::size_t k = 0; k < t.indices.size(); ++k) {
      if (t.indices[k] < 0 || t.indices[k] >= n)
        throw ParamError("ConcaveNegDepUtility: interaction index out of range");
      if (k > 0 && t.indices[k] <= t.indices[k - 1])
        throw ParamError("ConcaveNegDepUtility: interaction indices must be increasing");
    }
  }
}

namespace {

double scalar_value(const ConcaveNegDepUtility::ScalarTerm& t, double x) {
  switch (t.kind) {
    case ConcaveNegDepUtility::ScalarTerm::kLog:
      return std::log1p(t.w * x);
    case ConcaveNegDepUtility::ScalarTerm::kQuad:
      return -0.5 * t.q * x * x + t.p * x;
    case ConcaveNegDepUtility::ScalarTerm::kPower:
      return std::pow(x, t.gamma);
  }
  return 0.0;
}

double scalar_deriv(const ConcaveNegDepUtility::ScalarTerm& t, double x) {
  switch (t.kind) {
    case ConcaveNegDepUtility::ScalarTerm::kLog:
      return t.w / (1.0 + t.w * x);
    case ConcaveNegDepUtility::ScalarTerm::kQuad:
      return -t.q * x + t.p;
    case ConcaveNegDepUtility::ScalarTerm::kPower:
      return t.gamma == 1.0 ? 1.0 : t.gamma * std::pow(x, t.gamma - 1.0);
  }
  return 0.0;
}

double scalar_second(const ConcaveNegDepUtility::ScalarTerm& t, double x) {
  switch (t.kind) {
    case ConcaveNegDepUtility::ScalarTerm::kLog: {
      const double d = 1.0 + t.w * x;
      return -t.w * t.w / (d * d);
    }
    case ConcaveNegDepUtility::ScalarTerm::kQuad:
      return -t.q;
    case ConcaveNegDepUtility::ScalarTerm::kPower:
      return t.gamma == 1.0 ? 0.0 : t.gamma * (t.gamma - 1.0) * std::pow(x, t.gamma - 2.0);
  }
  return 0.0;
}

}  // namespace

double ConcaveNegDepUtility::value(const Vec& x) const {
  double v = 0.0;
  for (int i = 0; i < dim(); ++i) v += scalar_value(terms_[static_cast<std::size_t>(i)], x(i));
  for (const InteractionTerm& t : inter_) {
    double p = t.theta;
    for (int i : t.indices) p *= x(i);
    v += p;
  }
  return v;
}

Vec ConcaveNegDepUtility::gradient(const Vec& x) const {
  Vec g(dim());
  for (int i = 0; i < dim(); ++i) g(i) = scalar_deriv(terms_[static_cast<std::size_t>(i)], x(i));
  for (const InteractionTerm& t : inter_) {
    for (std::size_t k = 0; k < t.indices.size(); ++k) {
      double p = t.theta;
      for (std::size_t j = 0; j < t.indices.size(); ++j)
        if (j != k) p *= x(t.indices[j]);
      g(t.indices[k]) += p;
    }
  }
  return g;
}

Mat ConcaveNegDepUtility::hessian(const Vec& x) const {
  Mat H = Mat::Zero(dim(), dim());
  for (int i = 0; i < dim(); ++i) H(i, i) = scalar_second(terms_[static_cast<std::size_t>(i)], x(i));
  for (const InteractionTerm& t : inter_) {
    for (std::size_t a = 0; a < t.indices.size(); ++a)
      for (std::size_t b = a + 1; b < t.indices.size(); ++b) {
        double p = t.theta;
        for (std::size_t j = 0; j < t.indices.size(); ++j)
          if (j != a && j != b) p *= x(t.indices[j]);
        H(t.indices[a], t.indices[b]) += p;
        H(t.indices[b], t.indices[a]) += p;
      }
  }
  return H;
}

double ConcaveNegDepUtility::smoothness_bound(const Vec& lower, const Vec& upper,
                                              Norm norm) const {
  const int n = dim();
  // worst-case |H_ij| over the box; multilinear parts peak at the corner with
  // the largest absolute coordinate products
  Mat bound = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const ScalarTerm& t = terms_[static_cast<std::size_t>(i)];
    double d2 = 0.0;
    switch (t.kind) {
      case ScalarTerm::kLog: {
        const double d = 1.0 + t.w * lower(i);
        if (d <= 0.0) return kInf;
        d2 = t.w * t.w / (d * d);
        break;
      }
      case ScalarTerm::kQuad:
        d2 = t.q;
        break;
      case ScalarTerm::kPower:
        if (t.gamma == 1.0) {
          d2 = 0.0;
        } else if (lower(i) <= 0.0) {
          return kInf;
        } else {
          d2 = t.gamma * (1.0 - t.gamma) * std::pow(lower(i), t.gamma - 2.0);
        }
        break;
    }
    bound(i, i) = d2;
  }
  for (const InteractionTerm& t : inter_) {
    for (std::size_t a = 0; a < t.indices.size(); ++a)
      for (std::size_t b = a + 1; b < t.indices.size(); ++b) {
        double p = std::abs(t.theta);
        for (std::size_t j = 0; j < t.indices.size(); ++j)
          if (j != a && j != b)
            p *= std::max(std::abs(lower(t.indices[j])), std::abs(upper(t.indices[j])));
        bound(t.indices[a], t.indices[b]) += p;
        bound(t.indices[b], t.indices[a]) += p;
      }
  }
  if (norm == Norm::L1) return bound.maxCoeff();
  double best = 0.0;
  for (int i = 0; i < n; ++i) best = std::max(best, bound.row(i).sum());
  return best;
}

double ConcaveNegDepUtility::gradient_sup_bound(const Vec& lower, const Vec& upper) const {
  const int n = dim();
  Vec lo = Vec::Zero(n), hi = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    const ScalarTerm& t = terms_[static_cast<std::size_t>(i)];
    switch (t.kind) {
      case ScalarTerm::kLog: {
        const double d = 1.0 + t.w * lower(i);
        if (d <= 0.0) return kInf;
        lo(i) = t.w / (1.0 + t.w * upper(i));
        hi(i) = t.w / d;
        break;
      }
      case ScalarTerm::kQuad:
        lo(i) = std::min(t.p - t.q * lower(i), t.p - t.q * upper(i));
        hi(i) = std::max(t.p - t.q * lower(i), t.p - t.q * upper(i));
        break;
      case ScalarTerm::kPower:
        if (t.gamma == 1.0) {
          lo(i) = hi(i) = 1.0;
        } else if (lower(i) <= 0.0) {
          return kInf;
        } else {
          lo(i) = t.gamma * std::pow(upper(i), t.gamma - 1.0);
          hi(i) = t.gamma * std::pow(lower(i), t.gamma - 1.0);
        }
        break;
    }
  }
  for (const InteractionTerm& t : inter_) {
    for (std::size_t k = 0; k < t.indices.size(); ++k) {
      double p = std::abs(t.theta);
      for (std::size_t j = 0; j < t.indices.size(); ++j)
        if (j != k)
          p *= std::max(std::abs(lower(t.indices[j])), std::abs(upper(t.indices[j])));
      lo(t.indices[k]) -= p;  // theta <= 0 can only pull the derivative down
    }
  }
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double m = std::max(std::abs(lo(i)), std::abs(hi(i)));
    s += m * m;
  }
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// ScaledSumFunction

ScaledSumFunction::ScaledSumFunction(std::vector<std::shared_ptr<const ObjectiveFunction>> fs,
                                     std::vector<double> weights)
    : fs_(std::move(fs)), w_(std::move(weights)) {
  if (fs_.empty() || fs_.size() != w_.size())
    throw ParamError("ScaledSumFunction: empty or mismatched inputs");
  for (const auto& f : fs_)
    if (f->dim() != fs_[0]->dim())
      throw DimensionError("ScaledSumFunction: member dimension mismatch");
}

int ScaledSumFunction::dim() const { return fs_[0]->dim(); }

double ScaledSumFunction::value(const Vec& x) const {
  double v = 0.0;
  for (std::size_t k = 0; k < fs_.size(); ++k) v += w_[k] * fs_[k]->value(x);
  return v;
}

Vec ScaledSumFunction::gradient(const Vec& x) const {
  Vec g = Vec::Zero(dim());
  for (std::size_t k = 0; k < fs_.size(); ++k) g += w_[k] * fs_[k]->gradient(x);
  return g;
}

bool ScaledSumFunction::has_hessian() const {
  for (const auto& f : fs_)
    if (!f->has_hessian()) return false;
  return true;
}

Mat ScaledSumFunction::hessian(const Vec& x) const {
  Mat H = Mat::Zero(dim(), dim());
  for (std::size_t k = 0; k < fs_.size(); ++k) H += w_[k] * fs_[k]->hessian(x);
  return H;
}

double ScaledSumFunction::smoothness_bound(const Vec& lower, const Vec& upper, Norm norm) const {
  double s = 0.0;
  for (std::size_t k = 0; k < fs_.size(); ++k)
    s += std::abs(w_[k]) * fs_[k]->smoothness_bound(lower, upper, norm);
  return s;
}

double ScaledSumFunction::gradient_sup_bound(const Vec& lower, const Vec& upper) const {
  double s = 0.0;
  for (std::size_t k = 0; k < fs_.size(); ++k)
    s += std::abs(w_[k]) * fs_[k]->gradient_sup_bound(lower, upper);
  return s;
}

std::shared_ptr<const ObjectiveFunction> materialize_sum(
    const std::vector<std::shared_ptr<const ObjectiveFunction>>& fs,
    const std::vector<double>& weights) {
  if (fs.empty() || fs.size() != weights.size())
    throw ParamError("materialize_sum: empty or mismatched inputs");
  std::vector<const QuadraticUtility*> quads;
  quads.reserve(fs.size());
  for (const auto& f : fs) {
    const auto* q = dynamic_cast<const QuadraticUtility*>(f.get());
    if (!q) break;
    quads.push_back(q);
  }
  if (quads.size() == fs.size())
    return std::make_shared<QuadraticUtility>(QuadraticUtility::weighted_sum(quads, weights));
  return std::make_shared<ScaledSumFunction>(fs, weights);
}

// ---------------------------------------------------------------------------
// serialization

std::shared_ptr<const ObjectiveFunction> function_from_json(const nlohmann::json& j) {
  const std::string family = j.at("family").get<std::string>();
  if (family == "quadratic") {
    return std::make_shared<QuadraticUtility>(
        mat_from_json(j.at("A"), "A"), vec_from_json(j.at("a"), "a"),
        j.value("c", 0.0));
  }
  if (family == "log_diversity") {
    return std::make_shared<LogDiversityUtility>(
        vec_from_json(j.at("weights"), "weights"),
        mat_from_json(j.at("pair_penalties"), "pair_penalties"), j.value("scale", 5.0));
  }
  if (family == "concave_negdep") {
    std::vector<ConcaveNegDepUtility::ScalarTerm> terms;
    for (const auto& tj : j.at("per_coordinate")) {
      ConcaveNegDepUtility::ScalarTerm t;
      const std::string form = tj.at("form").get<std::string>();
      if (form == "log") {
        t.kind = ConcaveNegDepUtility::ScalarTerm::kLog;
        t.w = tj.at("w").get<double>();
      } else if (form == "quad") {
        t.kind = ConcaveNegDepUtility::ScalarTerm::kQuad;
        t.q = tj.at("q").get<double>();
        t.p = tj.at("p").get<double>();
      } else if (form == "power") {
        t.kind = ConcaveNegDepUtility::ScalarTerm::kPower;
        t.gamma = tj.at("gamma").get<double>();
      } else {
        throw ConfigError("concave_negdep: unknown form " + form);
      }
      terms.push_back(t);
    }
    std::vector<ConcaveNegDepUtility::InteractionTerm> inter;
    if (j.contains("interactions")) {
      for (const auto& ij : j.at("interactions")) {
        ConcaveNegDepUtility::InteractionTerm t;
        t.indices = ij.at("indices").get<std::vector<int>>();
        t.theta = ij.at("theta").get<double>();
        inter.push_back(std::move(t));
      }
    }
    return std::make_shared<ConcaveNegDepUtility>(std::move(terms), std::move(inter));
  }
  throw ConfigError("unknown function family: " + family);
}

nlohmann::json function_to_json(const ObjectiveFunction& f) {
  nlohmann::json j;
  if (const auto* q = dynamic_cast<const QuadraticUtility*>(&f)) {
    j["family"] = "quadratic";
    j["A"] = mat_to_json(q->quad());
    j["a"] = vec_to_std(q->lin());
    j["c"] = q->constant();
    return j;
  }
  if (const auto* ld = dynamic_cast<const LogDiversityUtility*>(&f)) {
    j["family"] = "log_diversity";
    j["weights"] = vec_to_std(ld->weights());
    j["pair_penalties"] = mat_to_json(ld->pair_penalties());
    j["scale"] = ld->scale();
    return j;
  }
  if (const auto* cn = dynamic_cast<const ConcaveNegDepUtility*>(&f)) {
    j["family"] = "concave_negdep";
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : cn->per_coordinate()) {
      nlohmann::json tj;
      switch (t.kind) {
        case ConcaveNegDepUtility::ScalarTerm::kLog:
          tj["form"] = "log";
          tj["w"] = t.w;
          break;
        case ConcaveNegDepUtility::ScalarTerm::kQuad:
          tj["form"] = "quad";
          tj["q"] = t.q;
          tj["p"] = t.p;
          break;
        case ConcaveNegDepUtility::ScalarTerm::kPower:
          tj["form"] = "power";
          tj["gamma"] = t.gamma;
          break;
      }
      terms.push_back(std::move(tj));
    }
    j["per_coordinate"] = std::move(terms);
    nlohmann::json inter = nlohmann::json::array();
    for (const auto& t : cn->interactions()) {
      nlohmann::json tj;
      tj["indices"] = t.indices;
      tj["theta"] = t.theta;
      inter.push_back(std::move(tj));
    }
    j["interactions"] = std::move(inter);
    return j;
  }
  throw ConfigError("function_to_json: unsupported function type");
}

}  // namespace drsub
