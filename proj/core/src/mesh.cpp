// Copyright (c) eigencert contributors
// SPDX-License-Identifier: Apache-2.0

#include "eigencert/mesh.hpp"

#include "eigencert/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

namespace eigencert {
namespace {

using Edge = std::pair<std::size_t, std::size_t>;

Edge make_edge(std::size_t a, std::size_t b) { return a < b ? Edge{a, b} : Edge{b, a}; }

double edge_length(const Vertex& a, const Vertex& b) { return std::hypot(b.x - a.x, b.y - a.y); }

// Sorted edge list with incidence counts.
std::vector<std::pair<Edge, int>> edge_census(const std::vector<Triangle>& triangles) {
  std::vector<Edge> edges;
  edges.reserve(3 * triangles.size());
  for (const auto& t : triangles) {
    for (int e = 0; e < 3; ++e) edges.push_back(make_edge(t[e], t[(e + 1) % 3]));
  }
  std::sort(edges.begin(), edges.end());
  std::vector<std::pair<Edge, int>> census;
  for (const auto& e : edges) {
    if (!census.empty() && census.back().first == e)
      ++census.back().second;
    else
      census.emplace_back(e, 1);
  }
  return census;
}

}  // namespace

std::string_view to_string(DomainTag tag) {
  switch (tag) {
    case DomainTag::unit_square: return "unit_square";
    case DomainTag::l_shape: return "l_shape";
    case DomainTag::external: return "external";
  }
  return "external";
}

double domain_area(DomainTag tag) {
  switch (tag) {
    case DomainTag::unit_square: return 1.0;
    case DomainTag::l_shape: return 3.0;
    case DomainTag::external: return 0.0;
  }
  return 0.0;
}

bool on_domain_boundary(DomainTag tag, double x, double y, double tol) {
  auto near = [tol](double a, double b) { return std::abs(a - b) <= tol; };
  switch (tag) {
    case DomainTag::unit_square:
      return near(x, 0.0) || near(x, 1.0) || near(y, 0.0) || near(y, 1.0);
    case DomainTag::l_shape:
      return near(x, -1.0) || near(x, 1.0) || near(y, -1.0) || near(y, 1.0) ||
             (near(x, 0.0) && y <= tol) || (near(y, 0.0) && x <= tol);
    case DomainTag::external: return false;
  }
  return false;
}

Mesh::Mesh(std::vector<Vertex> vertices, std::vector<Triangle> triangles, DomainTag tag)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)), tag_(tag) {
  const std::size_t nv = vertices_.size();
  if (triangles_.empty()) throw ValidationError("mesh has no triangles");

  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    for (auto i : tri.v) {
      if (i >= nv)
        throw ValidationError("triangle " + std::to_string(t) + " references missing vertex " +
                              std::to_string(i));
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
      throw ValidationError("triangle " + std::to_string(t) + " repeats a vertex");
  }

  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    std::array<double, 3> len{};
    for (int e = 0; e < 3; ++e)
      len[e] = edge_length(vertices_[tri[e]], vertices_[tri[(e + 1) % 3]]);
    std::sort(len.begin(), len.end());
    if (signed_area(t) <= 1e-14 * len[2] * len[2])
      throw ValidationError("triangle " + std::to_string(t) +
                            " is degenerate or clockwise (signed area must be positive)");
    h_ = std::max(h_, len[2]);
    h_leg_ = std::max(h_leg_, len[1]);
  }

  // Conformity and boundary flags: an edge is interior (2 triangles) or on the
  // boundary (1 triangle); a vertex is flagged iff it touches a boundary edge.
  std::vector<char> touches_boundary(nv, 0);
  std::vector<char> used(nv, 0);
  for (const auto& [edge, count] : edge_census(triangles_)) {
    if (count > 2)
      throw ValidationError("edge (" + std::to_string(edge.first) + ", " +
                            std::to_string(edge.second) + ") is shared by " +
                            std::to_string(count) + " triangles");
    used[edge.first] = used[edge.second] = 1;
    if (count == 1) touches_boundary[edge.first] = touches_boundary[edge.second] = 1;
  }
  for (std::size_t i = 0; i < nv; ++i) {
    if (!used[i]) throw ValidationError("vertex " + std::to_string(i) + " belongs to no triangle");
    if (static_cast<bool>(touches_boundary[i]) != vertices_[i].on_boundary)
      throw ValidationError("boundary flag of vertex " + std::to_string(i) +
                            " disagrees with the boundary edges");
  }

  if (tag_ != DomainTag::external) {
    const double area = total_area();
    if (std::abs(area - domain_area(tag_)) > 1e-12 * std::max(1.0, domain_area(tag_)))
      throw ValidationError("triangles do not cover the domain (area " + std::to_string(area) + ")");
    for (std::size_t i = 0; i < nv; ++i) {
      const auto& v = vertices_[i];
      if (on_domain_boundary(tag_, v.x, v.y) != v.on_boundary)
        throw ValidationError("boundary flag of vertex " + std::to_string(i) +
                              " disagrees with the domain boundary");
    }
  }
}

std::size_t Mesh::num_interior_vertices() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(vertices_.begin(), vertices_.end(), [](const Vertex& v) { return !v.on_boundary; }));
}

double Mesh::signed_area(std::size_t triangle) const {
  const auto& t = triangles_.at(triangle);
  const auto& a = vertices_[t[0]];
  const auto& b = vertices_[t[1]];
  const auto& c = vertices_[t[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double Mesh::total_area() const {
  double sum = 0.0;
  for (std::size_t t = 0; t < triangles_.size(); ++t) sum += signed_area(t);
  return sum;
}

namespace {

// Structured grid with spacing 1/n whose lower-left node is (-shift/n, -shift/n); only
// cells with keep(i, j) are triangulated.
template <typename Keep>
Mesh build_grid(std::size_t n, std::size_t cells, std::size_t shift, DomainTag tag, Keep keep) {
  const std::size_t side = cells + 1;
  constexpr auto none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(side * side, none);

  // A node exists iff one of its up to four adjacent cells is kept.
  auto node_used = [&](std::size_t i, std::size_t j) {
    for (std::size_t ci = (i ? i - 1 : 0); ci <= std::min(i, cells - 1); ++ci)
      for (std::size_t cj = (j ? j - 1 : 0); cj <= std::min(j, cells - 1); ++cj)
        if (keep(ci, cj)) return true;
    return false;
  };

  std::vector<Vertex> vertices;
  const auto coord = [n, shift](std::size_t i) {
    return (static_cast<double>(i) - static_cast<double>(shift)) / static_cast<double>(n);
  };
  for (std::size_t j = 0; j < side; ++j) {
    for (std::size_t i = 0; i < side; ++i) {
      if (!node_used(i, j)) continue;
      const double x = coord(i);
      const double y = coord(j);
      index[j * side + i] = vertices.size();
      vertices.push_back({x, y, on_domain_boundary(tag, x, y)});
    }
  }

  std::vector<Triangle> triangles;
  for (std::size_t j = 0; j < cells; ++j) {
    for (std::size_t i = 0; i < cells; ++i) {
      if (!keep(i, j)) continue;
      const std::size_t a = index[j * side + i];
      const std::size_t b = index[j * side + i + 1];
      const std::size_t c = index[(j + 1) * side + i + 1];
      const std::size_t d = index[(j + 1) * side + i];
      triangles.push_back({{a, b, c}});
      triangles.push_back({{a, c, d}});
    }
  }
  return Mesh(std::move(vertices), std::move(triangles), tag);
}

}  // namespace

Mesh build_unit_square_mesh(std::size_t n) {
  if (n == 0) throw InvalidParameter("unit square mesh needs n >= 1");
  return build_grid(n, n, 0, DomainTag::unit_square, [](std::size_t, std::size_t) { return true; });
}

Mesh build_lshape_mesh(std::size_t n) {
  if (n == 0) throw InvalidParameter("L-shape mesh needs n >= 1");
  return build_grid(n, 2 * n, n, DomainTag::l_shape,
                    [n](std::size_t i, std::size_t j) { return i >= n || j >= n; });
}

Mesh refine_uniform(const Mesh& mesh) {
  std::vector<Vertex> vertices = mesh.vertices();
  const auto census = edge_census(mesh.triangles());
  std::map<Edge, std::size_t> midpoint;
  // Discovery order: triangle by triangle, edge by edge.
  for (const auto& t : mesh.triangles()) {
    for (int e = 0; e < 3; ++e) {
      const Edge edge = make_edge(t[e], t[(e + 1) % 3]);
      if (midpoint.contains(edge)) continue;
      const auto it = std::lower_bound(census.begin(), census.end(), std::make_pair(edge, 0));
      const bool boundary_edge = it->second == 1;
      const auto& a = vertices[edge.first];
      const auto& b = vertices[edge.second];
      midpoint.emplace(edge, vertices.size());
      vertices.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y), boundary_edge});
    }
  }
  std::vector<Triangle> triangles;
  triangles.reserve(4 * mesh.num_triangles());
  for (const auto& t : mesh.triangles()) {
    const std::size_t m01 = midpoint.at(make_edge(t[0], t[1]));
    const std::size_t m12 = midpoint.at(make_edge(t[1], t[2]));
    const std::size_t m20 = midpoint.at(make_edge(t[2], t[0]));
    triangles.push_back({{t[0], m01, m20}});
    triangles.push_back({{m01, t[1], m12}});
    triangles.push_back({{m20, m12, t[2]}});
    triangles.push_back({{m01, m12, m20}});
  }
  return Mesh(std::move(vertices), std::move(triangles), mesh.domain());
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << mesh.num_vertices() << ' ' << mesh.num_triangles() << '\n';
  for (const auto& v : mesh.vertices()) out << v.x << ' ' << v.y << ' ' << (v.on_boundary ? 1 : 0) << '\n';
  for (const auto& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out.precision(old_precision);
}

Mesh read_mesh(std::istream& in, DomainTag tag) {
  std::string raw;
  std::size_t line_no = 0;

  // Next non-empty, comment-stripped line.
  auto next = [&](std::istringstream& fields, const char* what) {
    while (std::getline(in, raw)) {
      ++line_no;
      if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
      fields.clear();
      fields.str(raw);
      return;
    }
    throw ParseError(std::string("unexpected end of file, expected ") + what, line_no + 1);
  };
  auto expect_end = [&](std::istringstream& fields) {
    std::string rest;
    if (fields >> rest) throw ParseError("trailing token '" + rest + "'", line_no);
  };

  std::istringstream fields;
  next(fields, "header 'NV NT'");
  long long nv = -1, nt = -1;
  if (!(fields >> nv >> nt) || nv < 0 || nt < 0) throw ParseError("bad header, expected 'NV NT'", line_no);
  expect_end(fields);

  std::vector<Vertex> vertices(static_cast<std::size_t>(nv));
  for (auto& v : vertices) {
    next(fields, "vertex line 'x y b'");
    int b = -1;
    if (!(fields >> v.x >> v.y >> b) || (b != 0 && b != 1))
      throw ParseError("bad vertex line, expected 'x y b' with b in {0,1}", line_no);
    expect_end(fields);
    v.on_boundary = b == 1;
  }
  std::vector<Triangle> triangles(static_cast<std::size_t>(nt));
  for (auto& t : triangles) {
    next(fields, "triangle line 'i j k'");
    long long idx[3];
    if (!(fields >> idx[0] >> idx[1] >> idx[2])) throw ParseError("bad triangle line, expected 'i j k'", line_no);
    expect_end(fields);
    for (int k = 0; k < 3; ++k) {
      if (idx[k] < 0 || idx[k] >= nv)
        throw ParseError("vertex index " + std::to_string(idx[k]) + " out of range", line_no);
      t.v[k] = static_cast<std::size_t>(idx[k]);
    }
  }
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    if (raw.find_first_not_of(" \t\r") != std::string::npos) throw ParseError("unexpected extra content", line_no);
  }
  return Mesh(std::move(vertices), std::move(triangles), tag);
}

void save_mesh(const Mesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_mesh(mesh, out);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Mesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_mesh(in);
}

}  // namespace eigencert
