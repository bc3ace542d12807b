#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace sensornet {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// All numeric work is done in 64-bit floating point.

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Sensor coincident with a point source, or an evaluation point on one.
class SingularGeometryError : public Error {
 public:
  using Error::Error;
};

// The bound problem has optimum ~0: q is not estimable from this network.
class UnboundedPrecisionError : public Error {
 public:
  using Error::Error;
};

// G^T w = alpha has no solution (alpha outside the row space of G).
class InconsistentConstraintError : public Error {
 public:
  using Error::Error;
};

class PhaseWrapError : public Error {
 public:
  using Error::Error;
};

class NewtonDivergenceError : public Error {
 public:
  using Error::Error;
};

class InstanceTooLargeError : public Error {
 public:
  using Error::Error;
};

class RankDeficientError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace sensornet
