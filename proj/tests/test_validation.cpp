// Copyright (c) eigencert contributors
// SPDX-License-Identifier: Apache-2.0

#include <eigencert/errors.hpp>
#include <eigencert/validation.hpp>

#include <Eigen/QR>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace {

using namespace eigencert;

struct Problem {
  Mesh mesh;
  Discretization disc;
  EigenSolution solution;
};

Problem solve(Mesh mesh, std::size_t k) {
  Discretization disc = assemble(mesh);
  EigenSolution s = disc.dofs.n_dofs() <= 1500 ? solve_dense(disc.stiffness, disc.mass, k)
                                              : solve_iterative(disc.stiffness, disc.mass, k);
  return {std::move(mesh), std::move(disc), std::move(s)};
}

// Squared L2 norm of u - c v_h by direct quadrature, v_h given by dof coefficients.
double squared_error(const AnalyticEigenfunction& u, const Eigen::VectorXd& coeffs, double c, const Problem& p,
                     const QuadratureRule& rule) {
  const Eigen::VectorXd vertex = p.disc.dofs.to_vertex_values(coeffs);
  double sum = 0.0;
  for (std::size_t t = 0; t < p.mesh.num_triangles(); ++t) {
    const auto [a, b, d] = triangle_coords(p.mesh, t);
    const auto& tri = p.mesh.triangles()[t];
    const double jac = std::abs((b[0] - a[0]) * (d[1] - a[1]) - (d[0] - a[0]) * (b[1] - a[1]));
    for (const auto& q : rule.points) {
      const double x = a[0] + q.xi * (b[0] - a[0]) + q.eta * (d[0] - a[0]);
      const double y = a[1] + q.xi * (b[1] - a[1]) + q.eta * (d[1] - a[1]);
      const double vh = (1 - q.xi - q.eta) * vertex(tri[0]) + q.xi * vertex(tri[1]) + q.eta * vertex(tri[2]);
      const double e = u.value(x, y) - c * vh;
      sum += q.weight * jac * e * e;
    }
  }
  return sum;
}

TEST(Validation, AnalyticModes) {
  const AnalyticEigenfunction u{2, 1};
  EXPECT_NEAR(u.eigenvalue(), 5 * std::numbers::pi * std::numbers::pi, 1e-12);
  EXPECT_NEAR(u.value(0.25, 0.5), 2.0, 1e-15);
  EXPECT_NEAR(u.gradient(0.0, 0.5)[0], 4 * std::numbers::pi, 1e-12);
  const auto ev = square_eigenvalues(6);
  const double expected[] = {2, 5, 5, 8, 10, 10};
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(ev[i], expected[i] * std::numbers::pi * std::numbers::pi, 1e-12);
  EXPECT_EQ(square_cluster_modes({2, 3}).size(), 2u);
  EXPECT_THROW(square_cluster_modes({2, 2}), InvalidParameter);
}

TEST(Validation, CrossGramDiagonalAndOrthogonality) {
  double previous = 1.0;
  for (std::size_t n : {8u, 16u, 32u}) {
    const Problem p = solve(build_unit_square_mesh(n), 1);
    const AnalyticEigenfunction modes[] = {{1, 1}, {1, 2}, {2, 2}};
    const Eigen::MatrixXd g = cross_gram(modes, p.solution.vectors, p.mesh, p.disc.dofs, triangle_rule(10), InnerProduct::l2);
    const double gap = 1.0 - std::abs(g(0, 0));
    EXPECT_GE(gap, -1e-12);
    EXPECT_LT(gap, previous);
    previous = gap;
    // The mesh is invariant under (x, y) -> (1 - x, 1 - y); u12 is odd under it, v1 even.
    EXPECT_LT(std::abs(g(1, 0)), 1e-12);
    EXPECT_LT(std::abs(g(2, 0)), 2.0 / static_cast<double>(n * n));
  }
  EXPECT_LT(previous, 1e-3);
}

TEST(Validation, CrossGramIsQuadratureConverged) {
  const Problem p = solve(build_unit_square_mesh(8), 3);
  const auto modes = square_cluster_modes({2, 3});
  for (InnerProduct ip : {InnerProduct::l2, InnerProduct::energy}) {
    const Eigen::MatrixXd a = cross_gram(modes, p.solution.vectors, p.mesh, p.disc.dofs, triangle_rule(10), ip);
    const Eigen::MatrixXd b =
        cross_gram(modes, p.solution.vectors, p.mesh, p.disc.dofs, triangle_rule(10).refined().refined(), ip);
    EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-10);
  }
  EXPECT_THROW(cross_gram(modes, p.solution.vectors, p.mesh, p.disc.dofs, triangle_rule(6), InnerProduct::l2),
               InvalidParameter);
  EXPECT_NO_THROW(cross_gram(modes, p.solution.vectors, p.mesh, p.disc.dofs, triangle_rule(6), InnerProduct::l2, 6));
}

TEST(Validation, SingleModeDistanceMatchesBruteForce) {
  const Problem p = solve(build_unit_square_mesh(8), 1);
  const QuadratureRule rule = triangle_rule(10);
  for (const AnalyticEigenfunction u : {AnalyticEigenfunction{1, 1}, AnalyticEigenfunction{1, 2}}) {
    const AnalyticEigenfunction one[] = {u};
    const double delta = true_delta(one, p.solution.vectors, p.mesh, p.disc, InnerProduct::l2);
    double best = 1e300;
    for (int s = -20000; s <= 20000; ++s) best = std::min(best, squared_error(u, p.solution.vectors.col(0), s * 1e-4, p, rule));
    EXPECT_NEAR(delta * delta, best, 1e-8);
  }
}

TEST(Validation, GramDistanceMatchesSphereScan) {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    // Orthonormal rows spanning a 2-D subspace, projected onto orthonormal columns of R^5.
    Eigen::MatrixXd r(5, 4);
    for (auto& x : r.reshaped()) x = g(rng);
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(r).householderQ() * Eigen::MatrixXd::Identity(5, 4);
    Eigen::MatrixXd s(5, 2);
    for (auto& x : s.reshaped()) x = g(rng);
    const Eigen::MatrixXd e = Eigen::HouseholderQR<Eigen::MatrixXd>(s).householderQ() * Eigen::MatrixXd::Identity(5, 2);
    const Eigen::MatrixXd target = q.leftCols(2 + trial % 3);
    const Eigen::MatrixXd gram = e.transpose() * target;
    double scan = 0.0;
    for (int i = 0; i < 20000; ++i) {
      const double t = std::numbers::pi * i / 20000.0;
      const Eigen::VectorXd u = e.col(0) * std::cos(t) + e.col(1) * std::sin(t);
      const Eigen::VectorXd residual = u - target * (target.transpose() * u);
      scan = std::max(scan, residual.norm());
    }
    EXPECT_NEAR(directed_distance_from_gram(gram), scan, 1e-6);
  }
  EXPECT_EQ(directed_distance_from_gram(Eigen::MatrixXd::Identity(3, 2)), 1.0);
  EXPECT_EQ(directed_distance_from_gram(Eigen::MatrixXd(0, 2)), 0.0);
  EXPECT_THROW(directed_distance_from_gram(Eigen::MatrixXd::Constant(1, 1, 1.1)), GramInconsistency);
}

TEST(Validation, TrueDistanceRates) {
  std::vector<double> db, da;
  for (std::size_t n : {8u, 16u, 32u}) {
    const Problem p = solve(build_unit_square_mesh(n), 3);
    const auto modes = square_cluster_modes({2, 3});
    db.push_back(true_delta(modes, p.solution.basis(2, 3), p.mesh, p.disc, InnerProduct::l2));
    da.push_back(true_delta(modes, p.solution.basis(2, 3), p.mesh, p.disc, InnerProduct::energy));
  }
  for (std::size_t i = 1; i < db.size(); ++i) {
    EXPECT_NEAR(std::log2(db[i - 1] / db[i]), 2.0, 0.15);
    EXPECT_NEAR(std::log2(da[i - 1] / da[i]), 1.0, 0.15);
  }
}

TEST(Validation, ProlongationReproducesLinearFunctions) {
  const Mesh coarse = build_lshape_mesh(2);
  const Mesh fine = refine_uniform(refine_uniform(coarse));
  const DofMap cd(coarse), fd(fine);
  const Eigen::SparseMatrix<double> p = prolongation(coarse, cd, fine, fd);
  ASSERT_EQ(p.rows(), static_cast<Eigen::Index>(fd.n_dofs()));
  ASSERT_EQ(p.cols(), static_cast<Eigen::Index>(cd.n_dofs()));
  // The coarse hats sum to one in the interior; interpolated values stay in [0, 1].
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(cd.n_dofs()));
  const Eigen::VectorXd fine_values = fd.to_vertex_values(p * ones);
  for (std::size_t v = 0; v < fine.num_vertices(); ++v) {
    EXPECT_GE(fine_values(static_cast<Eigen::Index>(v)), -1e-14);
    EXPECT_LE(fine_values(static_cast<Eigen::Index>(v)), 1 + 1e-14);
  }
  // Coarse vertices keep their values under refinement.
  for (std::size_t d = 0; d < cd.n_dofs(); ++d) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cd.n_dofs()));
    e(static_cast<Eigen::Index>(d)) = 1.0;
    EXPECT_NEAR(fd.to_vertex_values(p * e)(static_cast<Eigen::Index>(cd.vertex(d))), 1.0, 1e-14);
  }
}

TEST(Validation, ProlongationRejectsNonNestedMeshes) {
  const Mesh coarse = build_unit_square_mesh(4);
  const Mesh fine = build_unit_square_mesh(6);
  EXPECT_THROW(prolongation(coarse, DofMap(coarse), fine, DofMap(fine)), NestingError);
}

TEST(Validation, ProxyOfIdenticalMeshesVanishes) {
  const Problem p = solve(build_unit_square_mesh(8), 4);
  const ProxyDistances d = reference_proxy({2, 3}, p.mesh, p.disc, p.solution, p.mesh, p.disc, p.solution, 1.0);
  EXPECT_NEAR(d.delta_b, 0.0, 1e-7);
  EXPECT_NEAR(d.delta_a, 0.0, 1e-7);
  EXPECT_THROW(reference_proxy({2, 3}, p.mesh, p.disc, p.solution, p.mesh, p.disc, p.solution), InvalidParameter);
}

TEST(Validation, SquareProxyTracksTrueDistance) {
  const Problem fine = solve(build_unit_square_mesh(64), 4);
  for (std::size_t n : {8u, 16u}) {
    const Problem coarse = solve(build_unit_square_mesh(n), 4);
    const ProxyDistances proxy =
        reference_proxy({2, 3}, coarse.mesh, coarse.disc, coarse.solution, fine.mesh, fine.disc, fine.solution);
    const auto modes = square_cluster_modes({2, 3});
    const double tb = true_delta(modes, coarse.solution.basis(2, 3), coarse.mesh, coarse.disc, InnerProduct::l2);
    const double ta = true_delta(modes, coarse.solution.basis(2, 3), coarse.mesh, coarse.disc, InnerProduct::energy);
    EXPECT_NEAR(proxy.delta_b / tb, 1.0, 0.15) << "n=" << n;
    EXPECT_NEAR(proxy.delta_a / ta, 1.0, 0.15) << "n=" << n;
  }
}

TEST(Validation, LShapeProxyRate) {
  const Problem fine = solve(build_lshape_mesh(64), 2);
  std::vector<double> db;
  for (std::size_t n : {4u, 8u, 16u}) {
    const Problem coarse = solve(build_lshape_mesh(n), 2);
    db.push_back(reference_proxy({1, 1}, coarse.mesh, coarse.disc, coarse.solution, fine.mesh, fine.disc, fine.solution)
                     .delta_b);
  }
  for (std::size_t i = 1; i < db.size(); ++i) {
    const double rate = std::log2(db[i - 1] / db[i]);
    EXPECT_GT(rate, 1.2) << i;
    EXPECT_LT(rate, 2.0) << i;
  }
}

}  // namespace
