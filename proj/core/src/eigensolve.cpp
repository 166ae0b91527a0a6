// Copyright (c) eigencert contributors
// SPDX-License-Identifier: Apache-2.0

#include "eigencert/eigensolve.hpp"

#include "eigencert/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

namespace eigencert {

double EigenSolution::value(std::size_t i) const {
  if (i == 0 || i > k()) throw InvalidParameter("eigenvalue index " + std::to_string(i) + " out of range");
  return values[static_cast<Eigen::Index>(i - 1)];
}

Eigen::MatrixXd EigenSolution::basis(std::size_t first, std::size_t last) const {
  if (first == 0 || first > last || last > k())
    throw InvalidParameter("basis range [" + std::to_string(first) + ", " + std::to_string(last) +
                           "] outside the computed eigenpairs");
  return vectors.middleCols(static_cast<Eigen::Index>(first - 1), static_cast<Eigen::Index>(last - first + 1));
}

std::vector<double> relative_residuals(const SymSparseMatrix& a, const SymSparseMatrix& m,
                                       const Eigen::VectorXd& values, const Eigen::MatrixXd& vectors) {
  const Eigen::MatrixXd av = a.matrix() * vectors;
  const Eigen::MatrixXd mv = m.matrix() * vectors;
  std::vector<double> out(static_cast<std::size_t>(values.size()));
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double denom = av.col(i).norm();
    const double r = (av.col(i) - values[i] * mv.col(i)).norm();
    out[static_cast<std::size_t>(i)] = denom > 0.0 ? r / denom : r;
  }
  return out;
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& basis, const SymSparseMatrix& inner) {
  if (basis.cols() == 0) return basis;
  if (static_cast<std::size_t>(basis.rows()) != inner.dimension())
    throw InvalidParameter("basis and inner-product matrix dimensions differ");
  const Eigen::MatrixXd gram = basis.transpose() * (inner.matrix() * basis);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const Eigen::VectorXd d = eig.eigenvalues();
  if (!(d.minCoeff() > 1e-12 * d.maxCoeff()) || !(d.maxCoeff() > 0.0))
    throw RankError("basis is numerically rank deficient");
  // B V D^{-1/2}; one more pass cleans up the rounding left by ill-conditioned Grams.
  Eigen::MatrixXd q = basis * eig.eigenvectors() * d.cwiseInverse().cwiseSqrt().asDiagonal();
  const Eigen::MatrixXd g2 = q.transpose() * (inner.matrix() * q);
  Eigen::LLT<Eigen::MatrixXd> llt(g2);
  if (llt.info() != Eigen::Success) throw RankError("basis is numerically rank deficient");
  q = llt.matrixU().solve<Eigen::OnTheRight>(q);
  return q;
}

double rayleigh_quotient_max(const Eigen::MatrixXd& basis, const SymSparseMatrix& a,
                             const SymSparseMatrix& m) {
  if (basis.cols() == 0) throw RankError("empty basis");
  const Eigen::MatrixXd q = orthonormalize(basis, m);
  const Eigen::MatrixXd h = q.transpose() * (a.matrix() * q);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (h + h.transpose()), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

EigenSolution solve_dense(const SymSparseMatrix& a, const SymSparseMatrix& m, std::size_t k,
                          const DenseOptions& options) {
  const std::size_t n = a.dimension();
  if (m.dimension() != n) throw InvalidParameter("stiffness and mass dimensions differ");
  if (n > options.max_dimension)
    throw InvalidParameter("dimension " + std::to_string(n) + " exceeds the dense cap " +
                           std::to_string(options.max_dimension));
  if (k > n) throw InvalidParameter("k exceeds the problem dimension");

  EigenSolution out;
  if (k == 0) {
    out.values.resize(0);
    out.vectors.resize(static_cast<Eigen::Index>(n), 0);
    return out;
  }
  const Eigen::MatrixXd ad = a.to_dense();
  const Eigen::MatrixXd md = m.to_dense();
  if (Eigen::LLT<Eigen::MatrixXd>(md).info() != Eigen::Success)
    throw DefinitenessError("mass matrix is not positive definite");

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(ad, md, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (eig.info() != Eigen::Success) throw DefinitenessError("generalized eigensolver failed");

  const auto kk = static_cast<Eigen::Index>(k);
  out.values = eig.eigenvalues().head(kk);
  out.vectors = eig.eigenvectors().leftCols(kk);
  out.residual_norms = relative_residuals(a, m, out.values, out.vectors);
  return out;
}

EigenSolution solve_iterative(const SymSparseMatrix& a, const SymSparseMatrix& m, std::size_t k,
                              const IterativeOptions& options) {
  const std::size_t n = a.dimension();
  if (m.dimension() != n) throw InvalidParameter("stiffness and mass dimensions differ");
  if (k > n) throw InvalidParameter("k exceeds the problem dimension");
  if (!(options.tol >= 1e-12)) throw InvalidParameter("tolerance must be at least 1e-12");

  EigenSolution out;
  if (k == 0) {
    out.values.resize(0);
    out.vectors.resize(static_cast<Eigen::Index>(n), 0);
    return out;
  }

  const std::size_t p = std::min(n, options.block_size ? std::max(options.block_size, k) : std::max(2 * k, k + 8));
  // A shift on top of an eigenvalue collapses the block after one solve, so it is moved
  // down in small steps until the LDL^T pivots are no longer tiny.
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor;
  double shift = options.shift;
  for (int attempt = 0;; ++attempt) {
    factor.compute(a.matrix() - shift * m.matrix());
    if (factor.info() != Eigen::Success) throw DefinitenessError("factorization of A - shift M failed");
    const Eigen::VectorXd d = factor.vectorD().cwiseAbs();
    if (d.minCoeff() > 1e-10 * d.maxCoeff() || attempt == 5) break;
    if (attempt == 0) out.warnings.push_back("shift is close to an eigenvalue; factorization is ill-conditioned");
    shift -= 1e-3 * std::max(std::abs(options.shift), 1.0);
  }

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, j) = normal(rng);
  x = orthonormalize(x, m);

  const auto kk = static_cast<Eigen::Index>(k);
  std::vector<double> residuals;
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    Eigen::MatrixXd y = factor.solve(m.matrix() * x);
    y = orthonormalize(y, m);
    const Eigen::MatrixXd h = y.transpose() * (a.matrix() * y);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(0.5 * (h + h.transpose()));

    // Order Ritz pairs by distance to the shift, keep the nearest k ascending.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const Eigen::VectorXd theta = ritz.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
      return std::abs(theta[i] - options.shift) < std::abs(theta[j] - options.shift);
    });
    std::stable_sort(order.begin(), order.begin() + kk, [&](Eigen::Index i, Eigen::Index j) { return theta[i] < theta[j]; });
    Eigen::MatrixXd q(ritz.eigenvectors().rows(), static_cast<Eigen::Index>(p));
    Eigen::VectorXd sorted(static_cast<Eigen::Index>(p));
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(p); ++j) {
      q.col(j) = ritz.eigenvectors().col(order[static_cast<std::size_t>(j)]);
      sorted[j] = theta[order[static_cast<std::size_t>(j)]];
    }
    x = y * q;

    out.values = sorted.head(kk);
    residuals = relative_residuals(a, m, out.values, x.leftCols(kk));
    if (std::all_of(residuals.begin(), residuals.end(), [&](double r) { return r <= options.tol; })) {
      out.vectors = x.leftCols(kk);
      out.residual_norms = std::move(residuals);
      return out;
    }
  }
  throw ConvergenceError("subspace iteration did not reach the residual tolerance within " +
                             std::to_string(options.max_iterations) + " iterations",
                         std::move(residuals));
}

void write_eigenvalues_csv(const EigenSolution& solution, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "index,value,residual\n";
  for (std::size_t i = 0; i < solution.k(); ++i) {
    out << i + 1 << ',' << solution.values[static_cast<Eigen::Index>(i)] << ','
        << (i < solution.residual_norms.size() ? solution.residual_norms[i] : 0.0) << '\n';
  }
  out.precision(old_precision);
}

}  // namespace eigencert
