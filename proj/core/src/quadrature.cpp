// Copyright (c) eigencert contributors
// SPDX-License-Identifier: Apache-2.0

#include "eigencert/quadrature.hpp"

#include "eigencert/errors.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace eigencert {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw InvalidParameter("Gauss-Legendre rule needs at least one point");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(n, x).second;
    const auto idx = static_cast<std::size_t>(n - 1 - i);  // ascending nodes
    nodes[idx] = 0.5 * (x + 1.0);
    weights[idx] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

QuadratureRule triangle_rule(int degree) {
  if (degree < 0) throw InvalidParameter("quadrature degree must be nonnegative");
  // x^a y^b under (u, v) -> (u, (1-u) v) has degree a+b+1 in u and b in v.
  const int n = (degree + 2 + 1) / 2;
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  QuadratureRule rule;
  rule.degree = degree;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double u = x[static_cast<std::size_t>(i)];
      const double v = x[static_cast<std::size_t>(j)];
      rule.points.push_back({u, (1.0 - u) * v, w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(j)] * (1.0 - u)});
    }
  return rule;
}

QuadratureRule QuadratureRule::refined() const {
  // Children as (origin, edge1, edge2) in reference coordinates; each has area 1/8.
  struct Child {
    double ox, oy, e1x, e1y, e2x, e2y;
  };
  static constexpr Child children[4] = {
      {0.0, 0.0, 0.5, 0.0, 0.0, 0.5},
      {0.5, 0.0, 0.5, 0.0, 0.0, 0.5},
      {0.0, 0.5, 0.5, 0.0, 0.0, 0.5},
      {0.5, 0.5, -0.5, 0.0, 0.0, -0.5},
  };
  QuadratureRule out;
  out.degree = degree;
  for (const auto& c : children)
    for (const auto& q : points)
      out.points.push_back({c.ox + c.e1x * q.xi + c.e2x * q.eta, c.oy + c.e1y * q.xi + c.e2y * q.eta, 0.25 * q.weight});
  return out;
}

}  // namespace eigencert
