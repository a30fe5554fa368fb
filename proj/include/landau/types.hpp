#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace landau {

using Complex = std::complex<double>;
using Index = Eigen::Index;

// Sampled fields are flat vectors, row-major over (x1, x2).
using Field = Eigen::VectorXcd;
using RealField = Eigen::VectorXd;
using Point = Eigen::Vector2d;

using Basis = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor, int>;

// Bad input: the message names the offending argument or field.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative method ran out of budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace landau
