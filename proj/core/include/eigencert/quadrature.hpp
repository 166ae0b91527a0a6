// Copyright (c) eigencert contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef EIGENCERT_QUADRATURE_HPP
#define EIGENCERT_QUADRATURE_HPP

#include "eigencert/fem.hpp"

#include <vector>

namespace eigencert {

struct QuadraturePoint {
  double xi = 0.0;   ///< reference coordinates on (0,0), (1,0), (0,1)
  double eta = 0.0;
  double weight = 0.0;
};

/// Rule on the reference triangle; weights sum to its area 1/2.
struct QuadratureRule {
  std::vector<QuadraturePoint> points;
  int degree = 0;  ///< exact for all polynomials up to this total degree

  /// Same rule applied on the four midpoint children of the reference triangle.
  QuadratureRule refined() const;
};

/// Collapsed (Duffy) tensor Gauss-Legendre rule exact up to `degree` >= 0.
QuadratureRule triangle_rule(int degree);

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Integral of f(x, y) over a physical triangle.
template <typename F>
double integrate(const TriangleCoords& tri, const QuadratureRule& rule, F&& f) {
  const auto& [a, b, c] = tri;
  const double jac = std::abs((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
  double sum = 0.0;
  for (const auto& q : rule.points) {
    const double x = a[0] + (b[0] - a[0]) * q.xi + (c[0] - a[0]) * q.eta;
    const double y = a[1] + (b[1] - a[1]) * q.xi + (c[1] - a[1]) * q.eta;
    sum += q.weight * f(x, y);
  }
  return jac * sum;
}

}  // namespace eigencert

#endif  // EIGENCERT_QUADRATURE_HPP
