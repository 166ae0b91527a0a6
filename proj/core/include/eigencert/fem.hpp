// Copyright (c) eigencert contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef EIGENCERT_FEM_HPP
#define EIGENCERT_FEM_HPP

#include "eigencert/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

namespace eigencert {

using Point = std::array<double, 2>;
using TriangleCoords = std::array<Point, 3>;
using LocalMatrix = Eigen::Matrix3d;

/// Interior vertex <-> degree of freedom numbering (boundary vertices carry no dof).
class DofMap {
public:
  explicit DofMap(const Mesh& mesh);

  std::size_t n_dofs() const noexcept { return dof_to_vertex_.size(); }
  std::size_t n_vertices() const noexcept { return vertex_to_dof_.size(); }
  /// Empty for boundary vertices.
  std::optional<std::size_t> dof(std::size_t vertex) const;
  std::size_t vertex(std::size_t dof) const { return dof_to_vertex_.at(dof); }

  /// Expands dof coefficients to vertex values (zero on the boundary).
  Eigen::VectorXd to_vertex_values(const Eigen::Ref<const Eigen::VectorXd>& dofs) const;
  Eigen::VectorXd to_dof_values(const Eigen::Ref<const Eigen::VectorXd>& vertex_values) const;

private:
  static constexpr std::size_t no_dof = static_cast<std::size_t>(-1);
  std::vector<std::size_t> vertex_to_dof_;
  std::vector<std::size_t> dof_to_vertex_;
};

/// Symmetric sparse matrix; both triangles are stored so products need no special casing.
class SymSparseMatrix {
public:
  SymSparseMatrix() = default;
  /// Symmetrizes nothing: throws ValidationError unless `m` is exactly symmetric.
  explicit SymSparseMatrix(Eigen::SparseMatrix<double> m);

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  const Eigen::SparseMatrix<double>& matrix() const noexcept { return m_; }
  Eigen::MatrixXd to_dense() const { return Eigen::MatrixXd(m_); }

  double quadratic_form(const Eigen::Ref<const Eigen::VectorXd>& x) const { return x.dot(m_ * x); }

private:
  Eigen::SparseMatrix<double> m_;
};

/// P1 element stiffness (grad phi_i, grad phi_j). Throws SingularElement on zero area.
LocalMatrix local_stiffness(const TriangleCoords& tri);
/// P1 element mass (phi_i, phi_j) = area/12 * [[2,1,1],[1,2,1],[1,1,2]].
LocalMatrix local_mass(const TriangleCoords& tri);

TriangleCoords triangle_coords(const Mesh& mesh, std::size_t triangle);

struct Discretization {
  SymSparseMatrix stiffness;
  SymSparseMatrix mass;
  DofMap dofs;
};

/// Assembles stiffness and mass over interior dofs, Dirichlet rows and columns eliminated.
/// Throws EmptyProblem when the mesh has no interior vertex.
Discretization assemble(const Mesh& mesh);

/// `row col value` triplets, 0-based, one per stored entry.
void write_coordinate(const SymSparseMatrix& m, std::ostream& out);

}  // namespace eigencert

#endif  // EIGENCERT_FEM_HPP
