// Copyright (c) eigencert contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef EIGENCERT_EIGENSOLVE_HPP
#define EIGENCERT_EIGENSOLVE_HPP

#include "eigencert/fem.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace eigencert {

/// Lowest discrete eigenpairs of A x = lambda M x.
///
/// `vectors` holds one M-orthonormal column per eigenvalue. For repeated eigenvalues
/// only the spanned invariant subspace is meaningful, never an individual column.
struct EigenSolution {
  Eigen::VectorXd values;                ///< ascending
  Eigen::MatrixXd vectors;               ///< dimension x k
  std::vector<double> residual_norms;    ///< |A v - lambda M v| / |A v|
  std::vector<std::string> warnings;

  std::size_t k() const noexcept { return static_cast<std::size_t>(values.size()); }
  /// 1-based eigenvalue, as in lambda_{h,i}.
  double value(std::size_t i) const;
  /// Columns for the 1-based inclusive index range [first, last].
  Eigen::MatrixXd basis(std::size_t first, std::size_t last) const;
};

struct DenseOptions {
  std::size_t max_dimension = 4000;
};

/// Full symmetric-definite reduction; the reference path for the iterative solver.
/// Throws DefinitenessError when M is not SPD, InvalidParameter when k or the size is out of range.
EigenSolution solve_dense(const SymSparseMatrix& a, const SymSparseMatrix& m, std::size_t k,
                          const DenseOptions& options = {});

struct IterativeOptions {
  double shift = 0.0;                 ///< the k eigenvalues nearest to the shift are returned
  double tol = 1e-10;                 ///< relative residual target, >= 1e-12
  std::size_t max_iterations = 2000;
  std::size_t block_size = 0;         ///< 0 selects max(2k, k + 8)
  std::uint64_t seed = 20220531;
};

/// Shift-invert block subspace iteration with Rayleigh-Ritz extraction on a sparse
/// LDL^T factorization of A - shift M. Throws ConvergenceError carrying the achieved
/// residuals when the iteration budget runs out.
EigenSolution solve_iterative(const SymSparseMatrix& a, const SymSparseMatrix& m, std::size_t k,
                              const IterativeOptions& options = {});

/// Relative residuals |A v_i - lambda_i M v_i| / |A v_i| for each column.
std::vector<double> relative_residuals(const SymSparseMatrix& a, const SymSparseMatrix& m,
                                       const Eigen::VectorXd& values, const Eigen::MatrixXd& vectors);

/// Basis of span(basis) orthonormal in the inner product x^T S y.
/// Throws RankError when the columns are numerically dependent.
Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& basis, const SymSparseMatrix& inner);

/// max over span(basis) of v^T A v / v^T M v.
double rayleigh_quotient_max(const Eigen::MatrixXd& basis, const SymSparseMatrix& a,
                             const SymSparseMatrix& m);

/// `index,value,residual` with a header line, 1-based indices.
void write_eigenvalues_csv(const EigenSolution& solution, std::ostream& out);

}  // namespace eigencert

#endif  // EIGENCERT_EIGENSOLVE_HPP
