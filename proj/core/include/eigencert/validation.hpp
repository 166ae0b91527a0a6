// Copyright (c) eigencert contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef EIGENCERT_VALIDATION_HPP
#define EIGENCERT_VALIDATION_HPP

#include "eigencert/eigensolve.hpp"
#include "eigencert/enclosures.hpp"
#include "eigencert/fem.hpp"
#include "eigencert/quadrature.hpp"

#include <Eigen/SparseCore>

#include <array>
#include <span>
#include <vector>

namespace eigencert {

/// L2-normalized Dirichlet eigenfunction 2 sin(i pi x) sin(j pi y) of the unit square.
struct AnalyticEigenfunction {
  int i = 1;
  int j = 1;

  double eigenvalue() const noexcept;
  double value(double x, double y) const noexcept;
  std::array<double, 2> gradient(double x, double y) const noexcept;
};

/// Exact eigenvalues (i^2 + j^2) pi^2 of the unit square in ascending order, with multiplicity.
std::vector<double> square_eigenvalues(std::size_t count);

/// Analytic eigenfunctions spanning the exact eigenspace of `cluster` on the unit square.
/// Throws InvalidParameter if the index range splits a multiple eigenvalue.
std::vector<AnalyticEigenfunction> square_cluster_modes(const ClusterSpec& cluster);

enum class InnerProduct { l2, energy };

/// Degree below which quadrature is refused unless explicitly allowed.
inline constexpr int min_validation_degree = 10;

/// G(p, q) = <analytic p, discrete q> by per-triangle quadrature, in the L2 or energy
/// inner product; `discrete` holds dof coefficient columns. No normalization is applied.
/// Throws InvalidParameter when `rule.degree` < `min_degree`.
Eigen::MatrixXd cross_gram(std::span<const AnalyticEigenfunction> analytic, const Eigen::MatrixXd& discrete,
                           const Mesh& mesh, const DofMap& dofs, const QuadratureRule& rule, InnerProduct inner,
                           int min_degree = min_validation_degree);

/// Directed distance from span(rows) to span(cols) given the cross-Gram of two orthonormal
/// bases: sqrt(1 - sigma_min^2), or 1 when the target space has lower dimension.
/// Throws GramInconsistency when a singular value exceeds 1 + 1e-10.
double directed_distance_from_gram(const Eigen::MatrixXd& gram);

/// True directed distance from the exact eigenspace to span(discrete). The discrete basis is
/// M- or A-orthonormalized internally; analytic modes are scaled by 1/sqrt(lambda) for energy.
double true_delta(std::span<const AnalyticEigenfunction> analytic, const Eigen::MatrixXd& discrete,
                  const Mesh& mesh, const Discretization& disc, InnerProduct norm,
                  const QuadratureRule& rule = triangle_rule(min_validation_degree),
                  int min_degree = min_validation_degree);

/// Sparse interpolation matrix (fine dofs x coarse dofs) embedding coarse P1 functions into a
/// nested fine P1 space. Throws NestingError unless every fine triangle lies in one coarse triangle.
Eigen::SparseMatrix<double> prolongation(const Mesh& coarse, const DofMap& coarse_dofs, const Mesh& fine,
                                         const DofMap& fine_dofs);

struct ProxyDistances {
  double delta_b = 0.0;
  double delta_a = 0.0;
};

/// Truth proxy without analytic eigenfunctions: the directed distance from the fine cluster
/// space to the embedded coarse one. Not a guaranteed quantity. The fine mesh must be at
/// least `min_refinement` times finer (InvalidParameter) and nested (NestingError).
ProxyDistances reference_proxy(const ClusterSpec& cluster, const Mesh& coarse, const Discretization& coarse_disc,
                               const EigenSolution& coarse_solution, const Mesh& fine,
                               const Discretization& fine_disc, const EigenSolution& fine_solution,
                               double min_refinement = 4.0);

}  // namespace eigencert

#endif  // EIGENCERT_VALIDATION_HPP
