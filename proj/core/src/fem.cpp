// Copyright (c) eigencert contributors
// SPDX-License-Identifier: Apache-2.0

#include "eigencert/fem.hpp"

#include "eigencert/errors.hpp"

#include <cmath>
#include <ostream>
#include <string>

namespace eigencert {

DofMap::DofMap(const Mesh& mesh) : vertex_to_dof_(mesh.num_vertices(), no_dof) {
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    if (mesh.vertices()[v].on_boundary) continue;
    vertex_to_dof_[v] = dof_to_vertex_.size();
    dof_to_vertex_.push_back(v);
  }
}

std::optional<std::size_t> DofMap::dof(std::size_t vertex) const {
  const std::size_t d = vertex_to_dof_.at(vertex);
  if (d == no_dof) return std::nullopt;
  return d;
}

Eigen::VectorXd DofMap::to_vertex_values(const Eigen::Ref<const Eigen::VectorXd>& dofs) const {
  if (static_cast<std::size_t>(dofs.size()) != n_dofs()) throw InvalidParameter("dof vector has wrong length");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_vertices()));
  for (std::size_t d = 0; d < n_dofs(); ++d) out[static_cast<Eigen::Index>(dof_to_vertex_[d])] = dofs[static_cast<Eigen::Index>(d)];
  return out;
}

Eigen::VectorXd DofMap::to_dof_values(const Eigen::Ref<const Eigen::VectorXd>& vertex_values) const {
  if (static_cast<std::size_t>(vertex_values.size()) != n_vertices())
    throw InvalidParameter("vertex vector has wrong length");
  Eigen::VectorXd out(static_cast<Eigen::Index>(n_dofs()));
  for (std::size_t d = 0; d < n_dofs(); ++d) out[static_cast<Eigen::Index>(d)] = vertex_values[static_cast<Eigen::Index>(dof_to_vertex_[d])];
  return out;
}

SymSparseMatrix::SymSparseMatrix(Eigen::SparseMatrix<double> m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw ValidationError("symmetric matrix must be square");
  m_.makeCompressed();
  const Eigen::SparseMatrix<double> diff = m_ - Eigen::SparseMatrix<double>(m_.transpose());
  for (int k = 0; k < diff.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, k); it; ++it)
      if (it.value() != 0.0) throw ValidationError("matrix is not exactly symmetric");
}

namespace {

double signed_area(const TriangleCoords& tri) {
  const auto& [a, b, c] = tri;
  return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

double checked_area(const TriangleCoords& tri) {
  const double area = std::abs(signed_area(tri));
  double longest = 0.0;
  for (int e = 0; e < 3; ++e) {
    const auto& p = tri[e];
    const auto& q = tri[(e + 1) % 3];
    longest = std::max(longest, std::hypot(q[0] - p[0], q[1] - p[1]));
  }
  if (!(area > 1e-14 * longest * longest)) throw SingularElement("triangle has zero area");
  return area;
}

}  // namespace

LocalMatrix local_stiffness(const TriangleCoords& tri) {
  const double area = checked_area(tri);
  // grad(lambda_i) = rot90(opposite edge) / (2 * signed area)
  const double two_a = 2.0 * signed_area(tri);
  Eigen::Matrix<double, 3, 2> grad;
  for (int i = 0; i < 3; ++i) {
    const auto& p = tri[(i + 1) % 3];
    const auto& q = tri[(i + 2) % 3];
    grad(i, 0) = (p[1] - q[1]) / two_a;
    grad(i, 1) = (q[0] - p[0]) / two_a;
  }
  return area * grad * grad.transpose();
}

LocalMatrix local_mass(const TriangleCoords& tri) {
  const double area = checked_area(tri);
  LocalMatrix m;
  m << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  return (area / 12.0) * m;
}

TriangleCoords triangle_coords(const Mesh& mesh, std::size_t triangle) {
  const auto& t = mesh.triangles().at(triangle);
  TriangleCoords out;
  for (int i = 0; i < 3; ++i) {
    const auto& v = mesh.vertices()[t[i]];
    out[i] = {v.x, v.y};
  }
  return out;
}

Discretization assemble(const Mesh& mesh) {
  DofMap dofs(mesh);
  if (dofs.n_dofs() == 0) throw EmptyProblem("mesh has no interior vertices");

  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> a_entries;
  std::vector<Triplet> m_entries;
  a_entries.reserve(9 * mesh.num_triangles());
  m_entries.reserve(9 * mesh.num_triangles());

  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto coords = triangle_coords(mesh, t);
    const LocalMatrix ka = local_stiffness(coords);
    const LocalMatrix km = local_mass(coords);
    const auto& tri = mesh.triangles()[t];
    std::array<std::optional<std::size_t>, 3> idx;
    for (int i = 0; i < 3; ++i) idx[i] = dofs.dof(tri[i]);
    for (int i = 0; i < 3; ++i) {
      if (!idx[i]) continue;
      for (int j = 0; j < 3; ++j) {
        if (!idx[j]) continue;
        const auto r = static_cast<Eigen::Index>(*idx[i]);
        const auto c = static_cast<Eigen::Index>(*idx[j]);
        a_entries.emplace_back(r, c, ka(i, j));
        m_entries.emplace_back(r, c, km(i, j));
      }
    }
  }

  const auto n = static_cast<Eigen::Index>(dofs.n_dofs());
  Eigen::SparseMatrix<double> a(n, n);
  Eigen::SparseMatrix<double> m(n, n);
  a.setFromTriplets(a_entries.begin(), a_entries.end());
  m.setFromTriplets(m_entries.begin(), m_entries.end());
  // Local matrices are only symmetric to rounding; mirror the lower triangle so the
  // global matrices are exactly symmetric.
  a = Eigen::SparseMatrix<double>(a.selfadjointView<Eigen::Lower>());
  m = Eigen::SparseMatrix<double>(m.selfadjointView<Eigen::Lower>());
  return {SymSparseMatrix(std::move(a)), SymSparseMatrix(std::move(m)), std::move(dofs)};
}

void write_coordinate(const SymSparseMatrix& m, std::ostream& out) {
  const auto old_precision = out.precision(17);
  const auto& s = m.matrix();
  for (int k = 0; k < s.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(s, k); it; ++it)
      out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
  out.precision(old_precision);
}

}  // namespace eigencert
