#pragma once

#include <cstddef>
#include <vector>

#include "ipg/vector_ops.hpp"

namespace ipg {

/* Row-major dense matrix. */
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  Vector apply(const Vector& x) const;            // A x
  Vector apply_transpose(const Vector& y) const;  // A^T y
  DenseMatrix gram() const;                       // A^T A
};

/*
 * Largest singular value, estimated by power iteration on A^T A from the
 * normalized all-ones start vector. Deterministic for fixed input. Throws
 * NotConvergedError (carrying the last estimate) if the relative change of
 * the estimate stays above tol for max_iter iterations, and
 * std::invalid_argument for an all-zero matrix.
 */
double operator_norm(const DenseMatrix& a, double tol = 1e-10, int max_iter = 10000);

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  DenseMatrix vectors;         // column j pairs with values[j]
};

/* Cyclic Jacobi eigendecomposition of a symmetric matrix. */
SymmetricEigen symmetric_eigen(const DenseMatrix& g);

/*
 * Smallest eigenvalue of symmetric positive semidefinite g above the rank
 * cut 1e-10 * lambda_max. Throws std::invalid_argument when no eigenvalue
 * clears the cut.
 */
double smallest_positive_eigenvalue(const DenseMatrix& g);

/* Least-squares solution of min ||Ax - b|| via eigendecomposition of A^T A. */
Vector solve_least_squares(const DenseMatrix& a, const Vector& b);

/* lambda_max / lambda_min of A^T A; +inf when rank deficient. */
double gram_condition(const DenseMatrix& a);

}  // namespace ipg
