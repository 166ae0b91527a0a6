// Copyright (c) eigencert contributors
// SPDX-License-Identifier: Apache-2.0

#include "eigencert/validation.hpp"

#include "eigencert/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <tuple>

namespace eigencert {

double AnalyticEigenfunction::eigenvalue() const noexcept {
  return static_cast<double>(i * i + j * j) * std::numbers::pi * std::numbers::pi;
}

double AnalyticEigenfunction::value(double x, double y) const noexcept {
  constexpr double pi = std::numbers::pi;
  return 2.0 * std::sin(i * pi * x) * std::sin(j * pi * y);
}

std::array<double, 2> AnalyticEigenfunction::gradient(double x, double y) const noexcept {
  constexpr double pi = std::numbers::pi;
  return {2.0 * i * pi * std::cos(i * pi * x) * std::sin(j * pi * y),
          2.0 * j * pi * std::sin(i * pi * x) * std::cos(j * pi * y)};
}

namespace {

// Modes (i, j) ordered by i^2 + j^2, ties by i; enough of them to cover `count` indices
// and the mode right after.
std::vector<AnalyticEigenfunction> ordered_modes(std::size_t count) {
  int side = 1;
  while (static_cast<std::size_t>(side * side) < count + 2) ++side;
  // Every mode with i^2 + j^2 <= side^2 appears in the (side x side) box... extend to be safe.
  side *= 2;
  std::vector<AnalyticEigenfunction> modes;
  for (int i = 1; i <= side; ++i)
    for (int j = 1; j <= side; ++j) modes.push_back({i, j});
  std::sort(modes.begin(), modes.end(), [](const auto& a, const auto& b) {
    return std::make_tuple(a.i * a.i + a.j * a.j, a.i) < std::make_tuple(b.i * b.i + b.j * b.j, b.i);
  });
  modes.resize(count + 1);
  return modes;
}

}  // namespace

std::vector<double> square_eigenvalues(std::size_t count) {
  std::vector<double> out;
  for (const auto& m : ordered_modes(count)) out.push_back(m.eigenvalue());
  out.resize(count);
  return out;
}

std::vector<AnalyticEigenfunction> square_cluster_modes(const ClusterSpec& cluster) {
  check_cluster(cluster);
  const auto modes = ordered_modes(cluster.last);
  auto level = [&](std::size_t index) { return modes[index - 1].i * modes[index - 1].i + modes[index - 1].j * modes[index - 1].j; };
  if ((cluster.first > 1 && level(cluster.first - 1) == level(cluster.first)) ||
      level(cluster.last) == level(cluster.last + 1))
    throw InvalidParameter("cluster splits a multiple eigenvalue of the unit square");
  return {modes.begin() + static_cast<std::ptrdiff_t>(cluster.first - 1),
          modes.begin() + static_cast<std::ptrdiff_t>(cluster.last)};
}

Eigen::MatrixXd cross_gram(std::span<const AnalyticEigenfunction> analytic, const Eigen::MatrixXd& discrete,
                           const Mesh& mesh, const DofMap& dofs, const QuadratureRule& rule, InnerProduct inner,
                           int min_degree) {
  if (rule.degree < min_degree)
    throw InvalidParameter("quadrature degree " + std::to_string(rule.degree) + " is below the required " +
                           std::to_string(min_degree));
  if (static_cast<std::size_t>(discrete.rows()) != dofs.n_dofs())
    throw InvalidParameter("discrete basis does not match the dof count");

  const auto m = static_cast<Eigen::Index>(analytic.size());
  Eigen::MatrixXd load = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dofs.n_dofs()), m);
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto tri = triangle_coords(mesh, t);
    const auto& ids = mesh.triangles()[t];
    std::array<std::optional<std::size_t>, 3> dof;
    for (int a = 0; a < 3; ++a) dof[a] = dofs.dof(ids[a]);
    if (!dof[0] && !dof[1] && !dof[2]) continue;

    const auto& [p0, p1, p2] = tri;
    const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
    const double jac = std::abs(det);
    std::array<std::array<double, 2>, 3> grad;
    for (int a = 0; a < 3; ++a) {
      const auto& p = tri[(a + 1) % 3];
      const auto& q = tri[(a + 2) % 3];
      grad[a] = {(p[1] - q[1]) / det, (q[0] - p[0]) / det};
    }
    for (const auto& qp : rule.points) {
      const double x = p0[0] + (p1[0] - p0[0]) * qp.xi + (p2[0] - p0[0]) * qp.eta;
      const double y = p0[1] + (p1[1] - p0[1]) * qp.xi + (p2[1] - p0[1]) * qp.eta;
      const std::array<double, 3> shape{1.0 - qp.xi - qp.eta, qp.xi, qp.eta};
      const double w = qp.weight * jac;
      for (Eigen::Index p = 0; p < m; ++p) {
        const auto& mode = analytic[static_cast<std::size_t>(p)];
        if (inner == InnerProduct::l2) {
          const double u = w * mode.value(x, y);
          for (int a = 0; a < 3; ++a)
            if (dof[a]) load(static_cast<Eigen::Index>(*dof[a]), p) += u * shape[a];
        } else {
          const auto g = mode.gradient(x, y);
          for (int a = 0; a < 3; ++a)
            if (dof[a]) load(static_cast<Eigen::Index>(*dof[a]), p) += w * (g[0] * grad[a][0] + g[1] * grad[a][1]);
        }
      }
    }
  }
  return load.transpose() * discrete;
}

double directed_distance_from_gram(const Eigen::MatrixXd& gram) {
  if (gram.rows() == 0) return 0.0;
  if (gram.cols() == 0) return 1.0;
  const Eigen::VectorXd sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(gram).singularValues();
  if (sigma(0) > 1.0 + 1e-10)
    throw GramInconsistency("cross-Gram singular value " + std::to_string(sigma(0)) +
                            " exceeds 1: bases are not orthonormal or quadrature is inaccurate");
  if (gram.rows() > gram.cols()) return 1.0;
  const double s = std::min(1.0, sigma(sigma.size() - 1));
  return std::sqrt(std::max(0.0, 1.0 - s * s));
}

double true_delta(std::span<const AnalyticEigenfunction> analytic, const Eigen::MatrixXd& discrete,
                  const Mesh& mesh, const Discretization& disc, InnerProduct norm, const QuadratureRule& rule,
                  int min_degree) {
  if (analytic.size() != static_cast<std::size_t>(discrete.cols()))
    throw InvalidParameter("analytic and discrete spaces must have the same dimension");
  const Eigen::MatrixXd q = orthonormalize(discrete, norm == InnerProduct::l2 ? disc.mass : disc.stiffness);
  Eigen::MatrixXd gram = cross_gram(analytic, q, mesh, disc.dofs, rule, norm, min_degree);
  if (norm == InnerProduct::energy)
    for (Eigen::Index p = 0; p < gram.rows(); ++p)
      gram.row(p) /= std::sqrt(analytic[static_cast<std::size_t>(p)].eigenvalue());
  return directed_distance_from_gram(gram);
}

namespace {

// Uniform bucket grid over triangle bounding boxes for point location.
class TriangleLocator {
public:
  explicit TriangleLocator(const Mesh& mesh) : mesh_(mesh) {
    xmin_ = ymin_ = std::numeric_limits<double>::infinity();
    double xmax = -xmin_, ymax = -ymin_;
    for (const auto& v : mesh.vertices()) {
      xmin_ = std::min(xmin_, v.x);
      ymin_ = std::min(ymin_, v.y);
      xmax = std::max(xmax, v.x);
      ymax = std::max(ymax, v.y);
    }
    cells_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(mesh.num_triangles()))));
    dx_ = std::max(xmax - xmin_, 1e-300) / static_cast<double>(cells_);
    dy_ = std::max(ymax - ymin_, 1e-300) / static_cast<double>(cells_);
    buckets_.resize(cells_ * cells_);
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
      const auto tri = triangle_coords(mesh, t);
      double bx0 = tri[0][0], bx1 = tri[0][0], by0 = tri[0][1], by1 = tri[0][1];
      for (const auto& p : tri) {
        bx0 = std::min(bx0, p[0]);
        bx1 = std::max(bx1, p[0]);
        by0 = std::min(by0, p[1]);
        by1 = std::max(by1, p[1]);
      }
      for (std::size_t j = cell_y(by0); j <= cell_y(by1); ++j)
        for (std::size_t i = cell_x(bx0); i <= cell_x(bx1); ++i) buckets_[j * cells_ + i].push_back(t);
    }
  }

  struct Hit {
    std::size_t triangle;
    std::array<double, 3> bary;
  };

  std::optional<Hit> locate(double x, double y) const {
    if (x < xmin_ - tol || y < ymin_ - tol) return std::nullopt;
    const std::size_t i = cell_x(x), j = cell_y(y);
    for (std::size_t t : buckets_[j * cells_ + i]) {
      const auto b = barycentric(t, x, y);
      if (b[0] >= -tol && b[1] >= -tol && b[2] >= -tol) return Hit{t, b};
    }
    return std::nullopt;
  }

  std::array<double, 3> barycentric(std::size_t t, double x, double y) const {
    const auto [a, b, c] = triangle_coords(mesh_, t);
    const double det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
    const double l1 = ((x - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (y - a[1])) / det;
    const double l2 = ((b[0] - a[0]) * (y - a[1]) - (x - a[0]) * (b[1] - a[1])) / det;
    return {1.0 - l1 - l2, l1, l2};
  }

  static constexpr double tol = 1e-10;

private:
  std::size_t cell_x(double x) const {
    const double c = std::floor((x - xmin_) / dx_);
    return static_cast<std::size_t>(std::clamp(c, 0.0, static_cast<double>(cells_ - 1)));
  }
  std::size_t cell_y(double y) const {
    const double c = std::floor((y - ymin_) / dy_);
    return static_cast<std::size_t>(std::clamp(c, 0.0, static_cast<double>(cells_ - 1)));
  }

  const Mesh& mesh_;
  double xmin_, ymin_, dx_, dy_;
  std::size_t cells_;
  std::vector<std::vector<std::size_t>> buckets_;
};

}  // namespace

Eigen::SparseMatrix<double> prolongation(const Mesh& coarse, const DofMap& coarse_dofs, const Mesh& fine,
                                         const DofMap& fine_dofs) {
  const TriangleLocator locator(coarse);
  std::vector<std::optional<std::size_t>> parent(fine.num_vertices());

  for (std::size_t t = 0; t < fine.num_triangles(); ++t) {
    const auto tri = triangle_coords(fine, t);
    const double cx = (tri[0][0] + tri[1][0] + tri[2][0]) / 3.0;
    const double cy = (tri[0][1] + tri[1][1] + tri[2][1]) / 3.0;
    const auto hit = locator.locate(cx, cy);
    if (!hit) throw NestingError("fine triangle " + std::to_string(t) + " lies outside the coarse mesh");
    for (int a = 0; a < 3; ++a) {
      const auto b = locator.barycentric(hit->triangle, tri[a][0], tri[a][1]);
      if (b[0] < -TriangleLocator::tol || b[1] < -TriangleLocator::tol || b[2] < -TriangleLocator::tol)
        throw NestingError("fine triangle " + std::to_string(t) + " straddles coarse triangles");
      parent[fine.triangles()[t][a]] = hit->triangle;
    }
  }

  std::vector<Eigen::Triplet<double>> entries;
  for (std::size_t d = 0; d < fine_dofs.n_dofs(); ++d) {
    const std::size_t v = fine_dofs.vertex(d);
    const std::size_t ct = *parent[v];
    const auto& vert = fine.vertices()[v];
    const auto b = locator.barycentric(ct, vert.x, vert.y);
    for (int a = 0; a < 3; ++a) {
      const auto cd = coarse_dofs.dof(coarse.triangles()[ct][a]);
      if (cd && std::abs(b[a]) > 1e-14)
        entries.emplace_back(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(*cd), b[a]);
    }
  }
  Eigen::SparseMatrix<double> p(static_cast<Eigen::Index>(fine_dofs.n_dofs()),
                                static_cast<Eigen::Index>(coarse_dofs.n_dofs()));
  p.setFromTriplets(entries.begin(), entries.end());
  return p;
}

ProxyDistances reference_proxy(const ClusterSpec& cluster, const Mesh& coarse, const Discretization& coarse_disc,
                               const EigenSolution& coarse_solution, const Mesh& fine,
                               const Discretization& fine_disc, const EigenSolution& fine_solution,
                               double min_refinement) {
  check_cluster(cluster);
  if (coarse.h() < min_refinement * fine.h() * (1.0 - 1e-9))
    throw InvalidParameter("reference mesh must be at least " + std::to_string(min_refinement) + "x finer");
  const Eigen::SparseMatrix<double> p = prolongation(coarse, coarse_disc.dofs, fine, fine_disc.dofs);
  const Eigen::MatrixXd embedded = p * coarse_solution.basis(cluster.first, cluster.last);
  const Eigen::MatrixXd reference = fine_solution.basis(cluster.first, cluster.last);

  auto distance = [&](const SymSparseMatrix& inner) {
    const Eigen::MatrixXd qf = orthonormalize(reference, inner);
    const Eigen::MatrixXd qc = orthonormalize(embedded, inner);
    return directed_distance_from_gram(qf.transpose() * (inner.matrix() * qc));
  };
  return {distance(fine_disc.mass), distance(fine_disc.stiffness)};
}

}  // namespace eigencert
