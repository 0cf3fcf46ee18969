#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace bsr {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Block-sparse unknown X. Row k is block k (a position), column m is a measurement.
using MMVSignal = Matrix;

/// Observed data, one column per measurement (convolution case) or a single
/// column (dense case).
using MeasurementSet = Matrix;

struct Shape {
  Index rows = 0;
  Index cols = 0;

  friend bool operator==(const Shape&, const Shape&) = default;
};

inline Shape shape_of(const Matrix& m) { return {m.rows(), m.cols()}; }

std::string to_string(Shape s);

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed configuration, schema violation or invalid parameter value.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite values encountered during an iterative computation.
class NumericalAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void require_shape(const Matrix& m, Shape expected, const char* what);

}  // namespace bsr
