#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace drsub {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class Norm { L1, L2 };

inline double norm_of(const Vec& v, Norm n) {
  return n == Norm::L1 ? v.lpNorm<1>() : v.norm();
}

// base for all structured errors thrown by the library
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

class LpError : public Error {
 public:
  explicit LpError(const std::string& what) : Error(what) {}
};

// projection failed to reach tolerance; carries the last iterate
class ProjectionError : public Error {
 public:
  ProjectionError(const std::string& what, Vec last_iterate, double residual)
      : Error(what), last_iterate(std::move(last_iterate)), residual(residual) {}
  Vec last_iterate;
  double residual;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

class ParamError : public Error {
 public:
  explicit ParamError(const std::string& what) : Error(what) {}
};

}  // namespace drsub
