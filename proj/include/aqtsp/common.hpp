#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace aqtsp {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXcd;

/// Base class for all library errors. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: instance documents, configs, out-of-range arguments.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A truncated space or a requested computation does not fit the memory budget.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// An iterative method failed to converge, or a propagation lost unitarity.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// An embedded consistency check failed at run time.
class InvariantError : public Error {
public:
    using Error::Error;
};

} // namespace aqtsp
