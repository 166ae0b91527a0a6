// Copyright (c) eigencert contributors
// SPDX-License-Identifier: Apache-2.0

#include "eigencert/cluster_bounds.hpp"

#include "eigencert/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace eigencert {

double compute_xi(const EnclosureTable& enclosures, const ClusterSpec& cluster) {
  check_cluster(cluster);
  const double lo = enclosures[cluster.first].lo;
  const double hi = enclosures[cluster.last].hi;
  if (!(lo > 0.0)) throw InvalidEnclosure("lower bound of lambda_" + std::to_string(cluster.first) + " is not positive");
  return std::max(0.0, (hi - lo) / lo);
}

GapFactors compute_tau_tauh(const EnclosureTable& enclosures, const EigenSolution& discrete,
                            const ClusterSpec& cluster) {
  const SeparationCheck sep = verify_separation(enclosures, discrete, cluster);
  if (!sep.ok)
    throw BoundNotApplicable("cluster {" + std::to_string(cluster.first) + ".." + std::to_string(cluster.last) +
                             "} is not separated from the neighbouring discrete eigenvalues");
  GapFactors out;
  // Right neighbour: both ratios grow with lambda_j, worst case at lambda_N^hi.
  const double hi = enclosures[cluster.last].hi;
  const double right = discrete.value(cluster.last + 1);
  out.tau = hi / (right - hi);
  out.tau_h = right / (right - hi);
  // Left neighbour: both ratios shrink with lambda_j, worst case at lambda_n^lo.
  if (cluster.first > 1) {
    const double lo = enclosures[cluster.first].lo;
    const double left = discrete.value(cluster.first - 1);
    out.tau = std::max(out.tau, lo / (lo - left));
    out.tau_h = std::max(out.tau_h, left / (lo - left));
  }
  return out;
}

BetaBound compute_beta(double tau, double tau_h, double xi, std::size_t m) {
  if (m == 0) throw InvalidParameter("cluster size must be positive");
  if (tau < 0.0 || tau_h < 0.0 || xi < 0.0) throw InvalidParameter("beta inputs must be nonnegative");
  const double root_m = std::sqrt(static_cast<double>(m));
  const double general = tau * root_m;
  const double product = tau_h * xi;
  const bool condition = m == 1 ? xi == 0.0 : product < 1.0 - 1.0 / root_m;
  if (!condition) return {general, false};
  return {std::min(tau / (1.0 - product), general), true};
}

double delta_b_projection(double beta, double lambda_N_hi, double ch) {
  if (beta < 0.0 || lambda_N_hi < 0.0 || ch < 0.0) throw InvalidParameter("projection bound inputs must be nonnegative");
  return (1.0 + beta) * lambda_N_hi * ch * ch;
}

std::optional<double> delta_a_from_delta_b(double delta_b, double lambda_n_lo, double lambda_N_hi,
                                           double lambda_hN) {
  if (delta_b < 0.0) throw InvalidParameter("delta_b must be nonnegative");
  if (delta_b >= 1.0) return std::nullopt;
  double radicand = 2.0 - 2.0 * lambda_n_lo * std::sqrt((1.0 - delta_b * delta_b) / (lambda_N_hi * lambda_hN));
  if (radicand < 0.0) {
    if (radicand < -1e-14) return std::nullopt;
    radicand = 0.0;
  }
  return std::sqrt(radicand);
}

Nonorthogonality nonorthogonality(const Eigen::MatrixXd& first, const Eigen::MatrixXd& second,
                                  const SymSparseMatrix& a, const SymSparseMatrix& m) {
  auto top_cosine = [&](const SymSparseMatrix& inner) {
    const Eigen::MatrixXd q1 = orthonormalize(first, inner);
    const Eigen::MatrixXd q2 = orthonormalize(second, inner);
    const Eigen::MatrixXd cross = q1.transpose() * (inner.matrix() * q2);
    return Eigen::JacobiSVD<Eigen::MatrixXd>(cross).singularValues()(0);
  };
  if (first.cols() == 0 || second.cols() == 0) throw RankError("empty basis");
  return {top_cosine(a), top_cosine(m)};
}

double rayleigh_delta_b_squared(const RayleighFormulaInput& in) {
  if (!(in.rho > in.lambda_n.hi)) throw InadmissibleShift("rho must exceed the upper bound of lambda_n");
  // d/dx (c - x)/(rho - x) has the sign of c - rho.
  const double c = in.lambda_hat + in.theta;
  const double x = c - in.rho > 0.0 ? in.lambda_n.hi : in.lambda_n.lo;
  return (c - x) / (in.rho - x);
}

double rayleigh_delta_a_squared(const RayleighFormulaInput& in) {
  if (!(in.rho > in.lambda_n.hi)) throw InadmissibleShift("rho must exceed the upper bound of lambda_n");
  // Linear-fractional in lambda_n with its pole at rho, hence monotone on the enclosure.
  auto g = [&](double x) {
    return (in.rho * (in.lambda_hat - x) + x * in.lambda_hat * in.vartheta) / (in.lambda_hat * (in.rho - x));
  };
  return std::max(g(in.lambda_n.lo), g(in.lambda_n.hi));
}

std::vector<RayleighBounds> algorithm1_bounds(std::span<const ClusterSpec> clusters, const EnclosureTable& enclosures,
                                              const EigenSolution& discrete, const SymSparseMatrix& a,
                                              const SymSparseMatrix& m, std::span<const CertifiedDistances> earlier) {
  if (!earlier.empty() && earlier.size() != clusters.size())
    throw InvalidParameter("earlier bounds must be given for every cluster or none");
  std::vector<RayleighBounds> out(clusters.size());
  std::vector<Eigen::MatrixXd> bases(clusters.size());
  // Best available (delta_a, delta_b) per processed cluster.
  std::vector<std::pair<double, double>> best(clusters.size());

  for (std::size_t k = 0; k < clusters.size(); ++k) {
    auto& res = out[k];
    const ClusterSpec& c = clusters[k];
    try {
      check_cluster(c);
      const std::size_t expected_first = k == 0 ? 1 : clusters[k - 1].last + 1;
      if (c.first != expected_first)
        throw BoundNotApplicable("clusters must be contiguous from index 1");
      for (std::size_t l = 0; l < k; ++l)
        if (!out[l].ok) throw BoundNotApplicable("an earlier cluster has no certified bound");
      if (!verify_separation(enclosures, discrete, c).ok) throw BoundNotApplicable("cluster is not separated");
      if (c.last + 1 > enclosures.size())
        throw BoundNotApplicable("no enclosure for lambda_" + std::to_string(c.last + 1) + " to choose rho");

      res.rho = enclosures[c.last + 1].lo;
      bases[k] = discrete.basis(c.first, c.last);
      res.lambda_hat = rayleigh_quotient_max(bases[k], a, m);
      for (std::size_t l = 0; l < k; ++l) {
        const Nonorthogonality no = nonorthogonality(bases[l], bases[k], a, m);
        const double lo = enclosures[clusters[l].first].lo;
        const auto [da, db] = best[l];
        res.vartheta += (res.rho / lo - 1.0) * (no.zeta_hat + da) * (no.zeta_hat + da);
        res.theta += (res.rho - lo) * (no.epsilon_hat + db) * (no.epsilon_hat + db);
      }
      const RayleighFormulaInput in{res.rho, res.lambda_hat, enclosures[c.first], res.vartheta, res.theta};
      res.delta_b = std::sqrt(std::max(0.0, rayleigh_delta_b_squared(in)));
      res.delta_a = std::sqrt(std::max(0.0, rayleigh_delta_a_squared(in)));
      res.ok = true;

      best[k] = {res.delta_a, res.delta_b};
      if (!earlier.empty()) {
        if (earlier[k].delta_a) best[k].first = std::min(best[k].first, *earlier[k].delta_a);
        if (earlier[k].delta_b) best[k].second = std::min(best[k].second, *earlier[k].delta_b);
      }
    } catch (const Error& e) {
      res.ok = false;
      res.message = e.what();
    }
  }
  return out;
}

std::vector<ClusterReport> build_cluster_reports(std::span<const ClusterSpec> clusters,
                                                 const EnclosureTable& enclosures, const EigenSolution& discrete,
                                                 const SymSparseMatrix& a, const SymSparseMatrix& m,
                                                 const ProjectionConstant& ch) {
  std::vector<ClusterReport> reports(clusters.size());
  std::vector<CertifiedDistances> certified(clusters.size());

  for (std::size_t k = 0; k < clusters.size(); ++k) {
    auto& r = reports[k];
    r.spec = clusters[k];
    try {
      check_cluster(r.spec);
      const SeparationCheck sep = verify_separation(enclosures, discrete, r.spec);
      r.separation_ok = sep.ok;
      r.left_margin = sep.left_margin;
      r.right_margin = sep.right_margin;
      if (!sep.ok) {
        r.diagnostics.emplace_back("separation violated: no bounds for this cluster");
        continue;
      }
      ClusterQuantities q;
      q.xi = compute_xi(enclosures, r.spec);
      const GapFactors gap = compute_tau_tauh(enclosures, discrete, r.spec);
      q.tau = gap.tau;
      q.tau_h = gap.tau_h;
      const BetaBound beta = compute_beta(q.tau, q.tau_h, q.xi, r.spec.size());
      q.beta = beta.beta;
      q.sharper_applicable = beta.sharper_applicable;
      q.lambda_n_lo = enclosures[r.spec.first].lo;
      q.lambda_N_hi = enclosures[r.spec.last].hi;
      q.ch = ch;
      r.quantities = q;

      r.delta_b_projection = delta_b_projection(q.beta, q.lambda_N_hi, ch.value);
      r.delta_a_from_b = delta_a_from_delta_b(*r.delta_b_projection, q.lambda_n_lo, q.lambda_N_hi,
                                              discrete.value(r.spec.last));
      if (!r.delta_a_from_b) r.diagnostics.emplace_back("energy bound from the L2 bound not applicable (delta_b >= 1)");
      certified[k] = {r.delta_a_from_b, r.delta_b_projection};
    } catch (const Error& e) {
      r.diagnostics.emplace_back(e.what());
    }
  }

  const auto rayleigh = algorithm1_bounds(clusters, enclosures, discrete, a, m, certified);
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    auto& r = reports[k];
    const auto& res = rayleigh[k];
    if (!r.separation_ok) continue;
    if (!res.ok) {
      r.diagnostics.push_back("rayleigh-quotient bounds: " + res.message);
      continue;
    }
    r.rho = res.rho;
    r.lambda_hat = res.lambda_hat;
    r.theta = res.theta;
    r.vartheta = res.vartheta;
    r.delta_b_alg1 = res.delta_b;
    r.delta_a_alg1 = res.delta_a;
  }
  return reports;
}

std::vector<ClusterSpec> auto_clusters(const EigenSolution& discrete, std::size_t count, double relative_gap) {
  std::vector<ClusterSpec> out;
  std::size_t i = 1;
  while (out.size() < count && i < discrete.k()) {
    const std::size_t first = i;
    while (i < discrete.k() && (discrete.value(i + 1) - discrete.value(i)) < relative_gap * discrete.value(i)) ++i;
    if (i >= discrete.k()) break;
    out.push_back({first, i});
    ++i;
  }
  return out;
}

}  // namespace eigencert
