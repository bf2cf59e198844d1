#include "drsub/oracle.hpp"

#include <cmath>
#include <utility>

namespace drsub {

IidQuadraticStream::IidQuadraticStream(Mat base, Vec lin, NoiseRule rule, double nu,
                                       std::uint64_t seed)
    : base_(std::move(base)), lin_(std::move(lin)), rule_(rule), nu_(nu), seed_(seed) {
  const int n = static_cast<int>(base_.rows());
  if (base_.cols() != n) throw DimensionError("IidQuadraticStream: base must be square");
  if (nu_ < 0.0) throw ParamError("IidQuadraticStream: nu must be >= 0");
  if (rule_ == NoiseRule::kHessianSymmetric) {
    if (lin_.size() != n)
      throw DimensionError("IidQuadraticStream: linear term dimension mismatch");
    expected_ = std::make_unique<QuadraticUtility>(base_, lin_);  // ctor checks symmetry
  } else {
    if (lin_.size() != 0)
      throw ParamError("IidQuadraticStream: bilinear rule derives its own linear term");
    const Mat sym = 0.5 * (base_ + base_.transpose());
    expected_ = std::make_unique<QuadraticUtility>(
        sym, Vec(-base_.transpose() * Vec::Ones(n)));
  }
}

IidQuadraticStream IidQuadraticStream::bilinear(Mat base, double nu, std::uint64_t seed) {
  return IidQuadraticStream(std::move(base), Vec(), NoiseRule::kBilinear, nu, seed);
}

const QuadraticUtility& IidQuadraticStream::realized(int t) {
  if (t < 1) throw ParamError("IidQuadraticStream: rounds are 1-based");
  if (static_cast<std::size_t>(t) > realized_.size())
    realized_.resize(static_cast<std::size_t>(t));
  auto& slot = realized_[static_cast<std::size_t>(t - 1)];
  if (!slot) {
    const int n = dim();
    Rng rng(derive_seed(seed_, static_cast<std::uint64_t>(t)));
    Mat noise(n, n);
    if (rule_ == NoiseRule::kHessianSymmetric) {
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          const double z = rng.uniform(-nu_, nu_);
          noise(i, j) = z;
          noise(j, i) = z;
        }
      slot = std::make_unique<QuadraticUtility>(Mat(base_ + noise), lin_);
    } else {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) noise(i, j) = rng.uniform(-nu_, nu_);
      const Mat At = base_ + noise;
      slot = std::make_unique<QuadraticUtility>(
          Mat(0.5 * (At + At.transpose())), Vec(-At.transpose() * Vec::Ones(n)));
    }
  }
  return *slot;
}

double IidQuadraticStream::sigma_bound(const PolytopeDomain& domain) const {
  if (domain.dim() != dim())
    throw DimensionError("IidQuadraticStream: domain dimension mismatch");
  const double n = static_cast<double>(dim());
  const double s1 = domain.support_l1();
  // per coordinate i of the gradient deviation:
  //   kHessianSymmetric: |(N x)_i| <= nu ||x||_1
  //   kBilinear: |(sym(N) x)_i - (N'1)_i| <= nu ||x||_1 + nu n
  // summing squares over n coordinates gives the certified l2 bound
  const double per_coord =
      rule_ == NoiseRule::kHessianSymmetric ? nu_ * s1 : nu_ * (s1 + n);
  return std::sqrt(n) * per_coord;
}

NoisyGradientOracle::NoisyGradientOracle(std::shared_ptr<IidQuadraticStream> stream,
                                         const PolytopeDomain& domain)
    : stream_(std::move(stream)) {
  if (!stream_) throw ParamError("NoisyGradientOracle: null stream");
  sigma_ = stream_->sigma_bound(domain);
}

Vec NoisyGradientOracle::stochastic_gradient(int t, const Vec& x) {
  ++calls_;
  return stream_->realized(t).gradient(x);
}

double NoisyGradientOracle::realized_value(int t, const Vec& x) {
  return stream_->realized(t).value(x);
}

}  // namespace drsub
