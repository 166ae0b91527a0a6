// Copyright (c) eigencert contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef EIGENCERT_CLUSTER_BOUNDS_HPP
#define EIGENCERT_CLUSTER_BOUNDS_HPP

#include "eigencert/eigensolve.hpp"
#include "eigencert/enclosures.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace eigencert {

// Bounds on the directed distances between the exact eigenspace E of a cluster
// {n..N} and its finite element counterpart E_h:
//   delta_b: L2 distance, delta_a: energy distance.
//
// Everything is evaluated from eigenvalue enclosures by taking, for each formula,
// the enclosure endpoint that makes the result largest, so every value returned
// here is an upper bound whenever the enclosures are valid.

/// Relative cluster width (lambda_N^hi - lambda_n^lo) / lambda_n^lo, floored at 0.
/// Throws InvalidEnclosure if lambda_n^lo <= 0.
double compute_xi(const EnclosureTable& enclosures, const ClusterSpec& cluster);

struct GapFactors {
  double tau = 0.0;    ///< max lambda_j / |lambda_{h,i} - lambda_j|
  double tau_h = 0.0;  ///< max lambda_{h,i} / |lambda_{h,i} - lambda_j|
};

/// Upper bounds of the gap factors over j in the cluster and every discrete index i
/// outside it. Only i = n-1 and i = N+1 can attain the maxima because both ratios
/// shrink as |lambda_{h,i} - lambda_j| grows and the discrete values are sorted.
/// Throws BoundNotApplicable when the cluster is not separated.
GapFactors compute_tau_tauh(const EnclosureTable& enclosures, const EigenSolution& discrete,
                            const ClusterSpec& cluster);

struct BetaBound {
  double beta = 0.0;
  bool sharper_applicable = false;
};

/// beta <= tau * sqrt(m) in general, and beta <= tau / (1 - tau_h xi) when
/// tau_h xi < 1 - m^{-1/2}. For m = 1 the condition is taken to hold when xi == 0.
BetaBound compute_beta(double tau, double tau_h, double xi, std::size_t m);

/// (1 + beta) lambda_N C_h^2, the projection-error bound on delta_b.
double delta_b_projection(double beta, double lambda_N_hi, double ch);

/// sqrt(2 - 2 lambda_n sqrt((1 - delta_b^2) / (lambda_N lambda_{h,N}))) with lambda_n at its
/// lower and lambda_N at its upper endpoint. Empty when delta_b >= 1 or the radicand is negative
/// beyond rounding.
std::optional<double> delta_a_from_delta_b(double delta_b, double lambda_n_lo, double lambda_N_hi,
                                           double lambda_hN);

struct Nonorthogonality {
  double zeta_hat = 0.0;     ///< energy inner product
  double epsilon_hat = 0.0;  ///< L2 inner product
};

/// Largest cosines between span(first) and span(second): the top singular values of the
/// cross-Grams of A- and M-orthonormalized bases. Throws RankError for dependent columns.
Nonorthogonality nonorthogonality(const Eigen::MatrixXd& first, const Eigen::MatrixXd& second,
                                  const SymSparseMatrix& a, const SymSparseMatrix& m);

/// Bounds certified earlier for a cluster, consumed by the comparison recursion.
struct CertifiedDistances {
  std::optional<double> delta_a;
  std::optional<double> delta_b;
};

struct RayleighBounds {
  bool ok = false;
  std::string message;  ///< reason when !ok
  double rho = 0.0;
  double lambda_hat = 0.0;
  double vartheta = 0.0;
  double theta = 0.0;
  double delta_a = 0.0;
  double delta_b = 0.0;
};

/// Rayleigh-quotient bounds processed cluster by cluster with rho = lambda_{N+1}^lo.
///
/// Clusters must be ordered and contiguous from index 1: the bound for cluster k
/// needs every earlier cluster. `earlier` optionally supplies bounds from another
/// route per cluster; the recursion uses the smaller of the two for each earlier
/// cluster. A cluster whose bound cannot be formed gets ok = false with a message and
/// invalidates the clusters after it.
std::vector<RayleighBounds> algorithm1_bounds(std::span<const ClusterSpec> clusters, const EnclosureTable& enclosures,
                                              const EigenSolution& discrete, const SymSparseMatrix& a,
                                              const SymSparseMatrix& m,
                                              std::span<const CertifiedDistances> earlier = {});

/// Evaluation of the two Rayleigh-quotient formulas for one cluster with the endpoint
/// choice made internally. Throws InadmissibleShift unless rho > lambda_n^hi.
struct RayleighFormulaInput {
  double rho = 0.0;
  double lambda_hat = 0.0;
  Enclosure lambda_n;
  double vartheta = 0.0;
  double theta = 0.0;
};
double rayleigh_delta_b_squared(const RayleighFormulaInput& in);
double rayleigh_delta_a_squared(const RayleighFormulaInput& in);

struct ClusterQuantities {
  double tau = 0.0;
  double tau_h = 0.0;
  double xi = 0.0;
  double beta = 0.0;
  bool sharper_applicable = false;
  double lambda_n_lo = 0.0;
  double lambda_N_hi = 0.0;
  ProjectionConstant ch;
};

/// Everything certified for one cluster. Bound fields are empty when not available.
struct ClusterReport {
  ClusterSpec spec;
  bool separation_ok = false;
  double left_margin = 0.0;
  double right_margin = 0.0;
  std::optional<ClusterQuantities> quantities;
  std::optional<double> delta_b_projection;
  std::optional<double> delta_a_from_b;
  std::optional<double> delta_b_alg1;
  std::optional<double> delta_a_alg1;
  double rho = 0.0;
  double lambda_hat = 0.0;
  double theta = 0.0;
  double vartheta = 0.0;
  std::vector<std::string> diagnostics;

  /// True when both projection-route bounds were produced.
  bool certified() const noexcept { return delta_b_projection.has_value(); }
};

/// Runs separation, gap factors, beta, the projection bound and its energy lift for
/// each cluster, then the Rayleigh-quotient recursion. Failures are recorded in the
/// report of the affected cluster and never abort the others.
std::vector<ClusterReport> build_cluster_reports(std::span<const ClusterSpec> clusters,
                                                 const EnclosureTable& enclosures, const EigenSolution& discrete,
                                                 const SymSparseMatrix& a, const SymSparseMatrix& m,
                                                 const ProjectionConstant& ch);

/// Groups consecutive discrete eigenvalues whose relative gap is below `relative_gap`.
/// Returns up to `count` clusters, never one that reaches the last computed eigenvalue
/// (its right neighbour is needed for separation).
std::vector<ClusterSpec> auto_clusters(const EigenSolution& discrete, std::size_t count,
                                       double relative_gap = 1e-6);

}  // namespace eigencert

#endif  // EIGENCERT_CLUSTER_BOUNDS_HPP
