// Copyright (c) eigencert contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef EIGENCERT_MESH_HPP
#define EIGENCERT_MESH_HPP

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace eigencert {

struct Vertex {
  double x = 0.0;
  double y = 0.0;
  bool on_boundary = false;

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// Vertex indices in counterclockwise order.
struct Triangle {
  std::array<std::size_t, 3> v{};

  std::size_t operator[](std::size_t i) const { return v[i]; }
  friend bool operator==(const Triangle&, const Triangle&) = default;
};

enum class DomainTag { unit_square, l_shape, external };

std::string_view to_string(DomainTag tag);

/// Conforming triangulation of a polygon with Dirichlet boundary marking.
///
/// Instances are only produced by the builders, `refine_uniform` and `load_mesh`, all of
/// which validate conformity, orientation and boundary flags. A Mesh is immutable.
class Mesh {
public:
  /// Validates and takes ownership. Throws ValidationError on any broken invariant.
  Mesh(std::vector<Vertex> vertices, std::vector<Triangle> triangles, DomainTag tag);

  const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
  const std::vector<Triangle>& triangles() const noexcept { return triangles_; }
  DomainTag domain() const noexcept { return tag_; }

  std::size_t num_vertices() const noexcept { return vertices_.size(); }
  std::size_t num_triangles() const noexcept { return triangles_.size(); }
  std::size_t num_interior_vertices() const noexcept;

  /// Maximum edge length.
  double h() const noexcept { return h_; }
  /// Largest leg length: the maximum over triangles of the middle edge length.
  /// For right triangles this is the largest leg.
  double h_leg() const noexcept { return h_leg_; }

  double signed_area(std::size_t triangle) const;
  double total_area() const;

  friend bool operator==(const Mesh&, const Mesh&) = default;

private:
  std::vector<Vertex> vertices_;
  std::vector<Triangle> triangles_;
  DomainTag tag_;
  double h_ = 0.0;
  double h_leg_ = 0.0;
};

/// Uniform grid of (0,1)^2 with `n` cells per side, each cell cut by its
/// lower-left to upper-right diagonal. Vertices are row-major, y outermost.
Mesh build_unit_square_mesh(std::size_t n);

/// Uniform grid of (-1,1)^2 \ (-1,0]^2 with `n` cells per unit length, same diagonal
/// pattern. Vertices are row-major over the (2n+1)^2 grid with the removed quadrant skipped.
Mesh build_lshape_mesh(std::size_t n);

/// Splits every triangle into four congruent children through the edge midpoints.
/// Original vertices keep their indices; midpoints follow in edge discovery order.
Mesh refine_uniform(const Mesh& mesh);

/// Plain text: `NV NT`, NV lines `x y b`, NT lines `i j k`; `#` starts a comment.
void write_mesh(const Mesh& mesh, std::ostream& out);
Mesh read_mesh(std::istream& in, DomainTag tag = DomainTag::external);
void save_mesh(const Mesh& mesh, const std::filesystem::path& path);
Mesh load_mesh(const std::filesystem::path& path);

/// Area of the generating domain, or 0 for external meshes.
double domain_area(DomainTag tag);

/// Whether (x, y) lies on the analytic boundary of the tagged domain.
bool on_domain_boundary(DomainTag tag, double x, double y, double tol = 1e-12);

}  // namespace eigencert

#endif  // EIGENCERT_MESH_HPP
