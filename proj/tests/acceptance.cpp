// Copyright (c) eigencert contributors
// SPDX-License-Identifier: Apache-2.0

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <eigencert/cluster_bounds.hpp>
#include <eigencert/errors.hpp>
#include <eigencert/experiment.hpp>
#include <eigencert/validation.hpp>

#include <Eigen/QR>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>

namespace {

using namespace eigencert;
using Clock = std::chrono::steady_clock;

const std::filesystem::path data_dir = EIGENCERT_TEST_DATA_DIR;
constexpr double pi2 = std::numbers::pi * std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

EigenSolution solve_auto(const Discretization& d, std::size_t k) {
  return d.dofs.n_dofs() <= 1500 ? solve_dense(d.stiffness, d.mass, k) : solve_iterative(d.stiffness, d.mass, k);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

ExperimentConfig square_config() {
  ExperimentConfig cfg;
  cfg.domain = DomainTag::unit_square;
  cfg.mesh_sizes = {8, 16, 32, 64};
  cfg.clusters = {{1, 1}, {2, 3}, {4, 4}, {5, 6}};
  cfg.ch_source = ChSourceKind::convex;
  cfg.enclosure_source = EnclosureSourceKind::file;
  cfg.enclosure_file = data_dir / "square_exact.enc";
  return cfg;
}

ExperimentConfig lshape_config() {
  ExperimentConfig cfg;
  cfg.domain = DomainTag::l_shape;
  cfg.mesh_sizes = {32, 64, 128, 256};
  cfg.clusters = {{1, 1}, {2, 2}, {3, 3}, {4, 4}};
  cfg.ch_source = ChSourceKind::lshape_table;
  cfg.enclosure_source = EnclosureSourceKind::lshape_reference;
  cfg.solver = SolverKind::iterative;
  cfg.reference_n = 256;
  return cfg;
}

Outcome ac1() {
  const auto start = Clock::now();
  const double exact[] = {2, 5, 5, 8, 10, 10};
  std::size_t violations = 0;
  for (std::size_t n : {8u, 16u, 32u, 64u}) {
    const Mesh mesh = build_unit_square_mesh(n);
    const Discretization d = assemble(mesh);
    const EnclosureTable t = lower_bounds_from_ch(solve_auto(d, 6), ch_convex(mesh.h_leg()));
    for (std::size_t i = 1; i <= 6; ++i)
      if (!t[i].contains(exact[i - 1] * pi2)) ++violations;
  }
  const double elapsed = seconds_since(start);
  return {violations == 0 && elapsed < 60.0,
          std::to_string(violations) + " containment violations in 24, " + fmt(elapsed) + " s"};
}

Outcome ac2(const ExperimentResult& sq) {
  const double exact[] = {2, 5, 5, 8, 10, 10};
  std::size_t violations = 0;
  std::vector<std::pair<double, double>> err;
  for (const auto& m : sq.meshes) {
    for (std::size_t i = 1; i <= 6; ++i)
      if (m.solution.value(i) < exact[i - 1] * pi2) ++violations;
    err.emplace_back(m.h, m.solution.value(1) - 2 * pi2);
  }
  const auto s = slope(err);
  const bool ok = violations == 0 && s && std::abs(*s - 2.0) <= 0.2;
  return {ok, std::to_string(violations) + " upper-bound violations, slope " + (s ? fmt(*s) : "undefined")};
}

Outcome ac3(const ExperimentResult& sq) {
  bool ok = true;
  std::string detail = "slopes";
  for (std::size_t c = 1; c <= 4; ++c) {
    const auto& r = sq.table.at(c, "delta_b_proj").rate;
    ok = ok && r && std::abs(*r - 2.0) <= 0.2;
    detail += " " + (r ? fmt(*r) : std::string("undefined"));
  }
  return {ok, detail};
}

Outcome ac4(const ExperimentResult& sq) {
  const auto& r = sq.table.at(1, "delta_b_alg1").rate;
  const auto& finest = sq.meshes.back().reports[0];
  const bool larger = finest.delta_b_alg1 && finest.delta_b_projection && *finest.delta_b_alg1 > *finest.delta_b_projection;
  const bool ok = r && std::abs(*r - 1.0) <= 0.3 && larger;
  return {ok, "slope " + (r ? fmt(*r) : std::string("undefined")) + ", finest alg1 " +
                  (finest.delta_b_alg1 ? fmt(*finest.delta_b_alg1) : std::string("-")) + " vs projection " +
                  (finest.delta_b_projection ? fmt(*finest.delta_b_projection) : std::string("-"))};
}

Outcome ac5(const ExperimentResult& sq) {
  std::size_t count = 0, violations = 0;
  bool projection_b_seen = false;
  for (const auto& c : dominance_checks(sq)) {
    if (c.proxy) continue;
    ++count;
    if (!c.ok) ++violations;
    if (c.bound == "delta_b_proj") projection_b_seen = true;
  }
  const bool complete = sq.all_clusters_ok() && projection_b_seen;
  return {complete && violations == 0,
          std::to_string(count) + " comparisons, " + std::to_string(violations) + " violations"};
}

Outcome ac6(const ExperimentResult& r, double elapsed) {
  bool ok = elapsed < 600.0;
  std::size_t separated = 0, total = 0;
  for (const auto& m : r.meshes)
    for (const auto& rep : m.reports) {
      ++total;
      if (rep.separation_ok) ++separated;
    }
  ok = ok && total == 16 && separated == total;
  std::string detail = "slopes";
  for (std::size_t c = 1; c <= 4; ++c) {
    const auto& s = r.table.at(c, "delta_b_proj").rate;
    ok = ok && s && std::abs(*s - 4.0 / 3.0) <= 0.25;
    detail += " " + (s ? fmt(*s) : std::string("undefined"));
  }
  std::size_t proxies = 0, violations = 0;
  for (const auto& c : dominance_checks(r)) {
    if (!c.proxy) continue;
    ++proxies;
    if (!c.ok) ++violations;
  }
  ok = ok && proxies > 0 && violations == 0;
  detail += ", " + std::to_string(separated) + "/" + std::to_string(total) + " separated, " + std::to_string(violations) +
            "/" + std::to_string(proxies) + " proxy exceedances, " + fmt(elapsed) + " s";
  return {ok, detail};
}

Outcome ac7() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> msize(1, 32);
  std::size_t applicable = 0, violations = 0;
  for (int i = 0; i < 100000; ++i) {
    const double tau = 20 * u(rng), tau_h = 20 * u(rng), xi = u(rng) * u(rng) * u(rng);
    const std::size_t m = msize(rng);
    const double root_m = std::sqrt(static_cast<double>(m));
    const BetaBound b = compute_beta(tau, tau_h, xi, m);
    if (b.beta > tau * root_m) ++violations;
    if (tau_h * xi < 1.0 - 1.0 / root_m) {
      ++applicable;
      if (tau / (1.0 - tau_h * xi) > tau * root_m) ++violations;
    }
  }
  return {violations == 0 && applicable > 0,
          std::to_string(applicable) + " samples meet the condition, " + std::to_string(violations) + " violations"};
}

double max_report_difference(const std::vector<ClusterReport>& a, const std::vector<ClusterReport>& b) {
  double worst = 0.0;
  auto cmp = [&](const std::optional<double>& x, const std::optional<double>& y) {
    if (x.has_value() != y.has_value()) worst = std::numeric_limits<double>::infinity();
    else if (x) worst = std::max(worst, std::abs(*x - *y));
  };
  for (std::size_t k = 0; k < a.size(); ++k) {
    cmp(a[k].delta_b_projection, b[k].delta_b_projection);
    cmp(a[k].delta_a_from_b, b[k].delta_a_from_b);
    cmp(a[k].delta_b_alg1, b[k].delta_b_alg1);
    cmp(a[k].delta_a_alg1, b[k].delta_a_alg1);
    worst = std::max(worst, std::abs(a[k].rho - b[k].rho));
    worst = std::max(worst, std::abs(a[k].lambda_hat - b[k].lambda_hat) / a[k].lambda_hat);
    worst = std::max(worst, std::abs(a[k].theta - b[k].theta));
    worst = std::max(worst, std::abs(a[k].vartheta - b[k].vartheta));
    if (a[k].quantities && b[k].quantities) {
      worst = std::max(worst, std::abs(a[k].quantities->beta - b[k].quantities->beta));
      worst = std::max(worst, std::abs(a[k].quantities->tau - b[k].quantities->tau));
      worst = std::max(worst, std::abs(a[k].quantities->tau_h - b[k].quantities->tau_h));
    }
  }
  return worst;
}

Outcome ac8() {
  const Mesh mesh = build_unit_square_mesh(16);
  const Discretization d = assemble(mesh);
  const EigenSolution s = solve_dense(d.stiffness, d.mass, 8);
  const EnclosureTable enc = load_enclosures(data_dir / "square_exact.enc");
  const ProjectionConstant ch = ch_convex(mesh.h_leg());
  const std::vector<ClusterSpec> clusters{{1, 1}, {2, 3}, {4, 4}, {5, 6}};
  const auto base = build_cluster_reports(clusters, enc, s, d.stiffness, d.mass, ch);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    EigenSolution rotated = s;
    for (const auto& c : clusters) {
      const auto m = static_cast<Eigen::Index>(c.size());
      Eigen::MatrixXd r(m, m);
      for (auto& x : r.reshaped()) x = g(rng);
      const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(r).householderQ();
      rotated.vectors.middleCols(static_cast<Eigen::Index>(c.first - 1), m) = s.basis(c.first, c.last) * q;
    }
    worst = std::max(worst, max_report_difference(base, build_cluster_reports(clusters, enc, rotated, d.stiffness, d.mass, ch)));
  }
  bool all = true;
  for (const auto& r : base) all = all && r.certified() && r.delta_b_alg1.has_value();
  return {all && worst <= 1e-10, "max deviation " + fmt(worst) + " over 20 rotations"};
}

Outcome ac9() {
  double worst = 0.0;
  for (const Mesh& mesh : {build_unit_square_mesh(8), build_unit_square_mesh(16), build_lshape_mesh(4),
                           build_lshape_mesh(8), build_lshape_mesh(16)}) {
    const Discretization d = assemble(mesh);
    const EigenSolution a = solve_dense(d.stiffness, d.mass, 8);
    const EigenSolution b = solve_iterative(d.stiffness, d.mass, 8);
    for (std::size_t i = 1; i <= 8; ++i) worst = std::max(worst, std::abs(a.value(i) - b.value(i)) / a.value(i));
  }
  return {worst <= 1e-8, "max relative difference " + fmt(worst)};
}

Outcome ac10(const ExperimentResult& sq, const ExperimentResult& ls) {
  double worst = 0.0;
  std::size_t pairs = 0;
  for (const ExperimentResult* r : {&sq, &ls})
    for (const auto& m : r->meshes) {
      const Discretization d = assemble(experiment_mesh(r->config, m.n));
      const auto& cl = r->config.clusters;
      for (std::size_t i = 0; i < cl.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) {
          const Nonorthogonality no = nonorthogonality(m.solution.basis(cl[i].first, cl[i].last),
                                                       m.solution.basis(cl[j].first, cl[j].last), d.stiffness, d.mass);
          worst = std::max({worst, no.zeta_hat, no.epsilon_hat});
          ++pairs;
        }
    }
  return {pairs > 0 && worst <= 1e-8, std::to_string(pairs) + " cluster pairs, max cosine " + fmt(worst)};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](const char* name, const std::function<Outcome()>& f) {
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %s: %s\n", name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  };

  std::optional<ExperimentResult> square, lshape;
  double lshape_seconds = 0.0;
  try {
    square = run_experiment(square_config());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "square sweep failed: %s\n", e.what());
  }
  try {
    const auto start = Clock::now();
    lshape = run_experiment(lshape_config());
    lshape_seconds = seconds_since(start);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "L-shape sweep failed: %s\n", e.what());
  }
  auto need = [](const std::optional<ExperimentResult>& r) -> const ExperimentResult& {
    if (!r) throw std::runtime_error("sweep unavailable");
    return *r;
  };

  report("AC1", ac1);
  report("AC2", [&] { return ac2(need(square)); });
  report("AC3", [&] { return ac3(need(square)); });
  report("AC4", [&] { return ac4(need(square)); });
  report("AC5", [&] { return ac5(need(square)); });
  report("AC6", [&] { return ac6(need(lshape), lshape_seconds); });
  report("AC7", ac7);
  report("AC8", ac8);
  report("AC9", ac9);
  report("AC10", [&] { return ac10(need(square), need(lshape)); });
  return failures == 0 ? 0 : 1;
}
