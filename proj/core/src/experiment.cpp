// Copyright (c) eigencert contributors
// SPDX-License-Identifier: Apache-2.0

#include "eigencert/experiment.hpp"

#include "eigencert/errors.hpp"
#include "eigencert/validation.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <mutex>
#include <thread>

namespace eigencert {

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::automatic: return "auto";
    case SolverKind::dense: return "dense";
    case SolverKind::iterative: return "iterative";
  }
  return "unknown";
}

std::string_view to_string(ChSourceKind kind) {
  switch (kind) {
    case ChSourceKind::convex: return "convex";
    case ChSourceKind::lshape_table: return "lshape_table";
    case ChSourceKind::file: return "file";
  }
  return "unknown";
}

std::string_view to_string(EnclosureSourceKind kind) {
  switch (kind) {
    case EnclosureSourceKind::computed: return "computed";
    case EnclosureSourceKind::file: return "file";
    case EnclosureSourceKind::lshape_reference: return "lshape_reference";
  }
  return "unknown";
}

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

void ExperimentConfig::check() const {
  if (mesh_sizes.empty()) throw InvalidParameter("no mesh sizes given");
  for (std::size_t i = 0; i < mesh_sizes.size(); ++i) {
    if (mesh_sizes[i] == 0) throw InvalidParameter("mesh sizes must be positive");
    if (i > 0 && mesh_sizes[i] <= mesh_sizes[i - 1]) throw InvalidParameter("mesh sizes must be strictly increasing");
    if (domain == DomainTag::external && !is_power_of_two(mesh_sizes[i]))
      throw InvalidParameter("mesh-file sweeps need power-of-two subdivisions");
  }
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    check_cluster(clusters[k]);
    if (k > 0 && clusters[k].first <= clusters[k - 1].last)
      throw InvalidParameter("clusters must be ordered and non-overlapping");
  }
  if (domain == DomainTag::external && mesh_file.empty()) throw InvalidParameter("mesh file domain without a path");
  if (ch_source == ChSourceKind::file && ch_file.empty()) throw InvalidParameter("constant file not given");
  if (enclosure_source == EnclosureSourceKind::file && enclosure_file.empty())
    throw InvalidParameter("enclosure file not given");
  if (!(inflation >= 1.0) || !std::isfinite(inflation)) throw InvalidParameter("inflation factor must be >= 1");
  if (!(tol >= 1e-12)) throw InvalidParameter("solver tolerance must be >= 1e-12");
  if (max_iterations == 0) throw InvalidParameter("iteration budget must be positive");
  if (num_eigenvalues != 0 && !clusters.empty() && num_eigenvalues < clusters.back().last + 1)
    throw InvalidParameter("too few eigenvalues requested for the last cluster");
}

std::size_t ExperimentConfig::eigenvalue_count() const {
  if (num_eigenvalues != 0) return num_eigenvalues;
  return clusters.empty() ? 6 : clusters.back().last + 2;
}

std::optional<double> slope(std::span<const std::pair<double, double>> series, std::vector<std::string>* warnings) {
  std::vector<std::pair<double, double>> usable;
  for (const auto& [h, v] : series) {
    if (h > 0.0 && v > 0.0 && std::isfinite(h) && std::isfinite(v)) {
      usable.emplace_back(std::log(h), std::log(v));
    } else if (warnings) {
      warnings->push_back("slope: skipped point (h=" + std::to_string(h) + ", value=" + std::to_string(v) + ")");
    }
  }
  if (usable.size() < 3) return std::nullopt;
  const auto last = std::span(usable).last(3);
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : last) {
    mx += x / 3.0;
    my += y / 3.0;
  }
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [x, y] : last) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

ConvergenceTable ConvergenceTable::from_results(std::span<const MeshResult> results, std::size_t cluster_count) {
  ConvergenceTable table;
  for (std::size_t c = 0; c < cluster_count; ++c) {
    std::map<std::string, ConvergenceSeries> by_name;
    std::vector<std::string> order;
    auto add = [&](const std::string& name, double h, const std::optional<double>& value) {
      if (!value) return;
      auto [it, inserted] = by_name.try_emplace(name);
      if (inserted) {
        it->second.cluster = c + 1;
        it->second.quantity = name;
        order.push_back(name);
      }
      it->second.points.emplace_back(h, *value);
    };
    for (const auto& r : results) {
      if (c < r.reports.size()) {
        const auto& rep = r.reports[c];
        add("delta_b_proj", r.h, rep.delta_b_projection);
        add("delta_a_from_b", r.h, rep.delta_a_from_b);
        add("delta_b_alg1", r.h, rep.delta_b_alg1);
        add("delta_a_alg1", r.h, rep.delta_a_alg1);
      }
      if (c < r.validation.size()) {
        const auto& v = r.validation[c];
        const std::string prefix = v.proxy ? "proxy" : "true";
        add(prefix + "_delta_b", r.h, v.delta_b);
        add(prefix + "_delta_a", r.h, v.delta_a);
      }
    }
    for (const auto& name : order) {
      auto& s = by_name[name];
      s.rate = slope(s.points, &table.warnings_);
      table.series_.push_back(std::move(s));
    }
  }
  return table;
}

const ConvergenceSeries& ConvergenceTable::at(std::size_t cluster, const std::string& quantity) const {
  for (const auto& s : series_)
    if (s.cluster == cluster && s.quantity == quantity) return s;
  throw InvalidParameter("no series " + quantity + " for cluster " + std::to_string(cluster));
}

bool ExperimentResult::all_clusters_ok() const {
  for (const auto& m : meshes) {
    if (!m.errors.empty() || m.reports.size() != config.clusters.size()) return false;
    for (const auto& r : m.reports)
      if (!r.separation_ok || !r.certified()) return false;
  }
  return true;
}

std::size_t thread_budget(std::size_t tasks) {
  std::size_t budget = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("EIGENCERT_THREADS")) {
    std::size_t value = 0;
    const char* end = env + std::strlen(env);
    const auto [ptr, ec] = std::from_chars(env, end, value);
    if (ec == std::errc() && ptr == end && value > 0) budget = value;
  }
  return std::max<std::size_t>(1, std::min(budget, tasks));
}

Mesh experiment_mesh(const ExperimentConfig& config, std::size_t n) {
  switch (config.domain) {
    case DomainTag::unit_square: return build_unit_square_mesh(n);
    case DomainTag::l_shape: return build_lshape_mesh(n);
    case DomainTag::external: {
      if (!is_power_of_two(n)) throw InvalidParameter("mesh-file sweeps need power-of-two subdivisions");
      Mesh mesh = load_mesh(config.mesh_file);
      for (std::size_t s = 1; s < n; s *= 2) mesh = refine_uniform(mesh);
      return mesh;
    }
  }
  throw InvalidParameter("unknown domain");
}

namespace {

EigenSolution solve(const ExperimentConfig& config, const Discretization& disc, std::size_t k, SolverKind& used) {
  const std::size_t dim = disc.dofs.n_dofs();
  used = config.solver;
  if (used == SolverKind::automatic) used = dim <= config.dense_limit ? SolverKind::dense : SolverKind::iterative;
  if (used == SolverKind::dense) return solve_dense(disc.stiffness, disc.mass, k);
  IterativeOptions options;
  options.tol = config.tol;
  options.max_iterations = config.max_iterations;
  return solve_iterative(disc.stiffness, disc.mass, k, options);
}

ProjectionConstant projection_constant(const ExperimentConfig& config, const Mesh& mesh) {
  switch (config.ch_source) {
    case ChSourceKind::convex: return ch_convex(mesh.h_leg());
    case ChSourceKind::lshape_table: return ch_table_lshape(mesh.h_leg());
    case ChSourceKind::file: return ch_from_file(config.ch_file, mesh.h_leg());
  }
  throw InvalidParameter("unknown constant source");
}

EnclosureTable enclosure_table(const ExperimentConfig& config, const EigenSolution& solution,
                               const ProjectionConstant& ch) {
  auto table = [&] {
    switch (config.enclosure_source) {
      case EnclosureSourceKind::computed: return lower_bounds_from_ch(solution, ch);
      case EnclosureSourceKind::file: return load_enclosures(config.enclosure_file);
      case EnclosureSourceKind::lshape_reference: return lshape_reference_enclosures();
    }
    throw InvalidParameter("unknown enclosure source");
  }();
  return config.inflation > 1.0 ? table.inflated(config.inflation) : table;
}

void validate_square(const ExperimentConfig& config, const Mesh& mesh, const Discretization& disc, MeshResult& r) {
  r.validation.resize(config.clusters.size());
  for (std::size_t c = 0; c < config.clusters.size(); ++c) {
    auto& v = r.validation[c];
    try {
      const auto& spec = config.clusters[c];
      if (spec.last > r.solution.k()) throw InvalidParameter("cluster exceeds the computed eigenpairs");
      const auto modes = square_cluster_modes(spec);
      const Eigen::MatrixXd basis = r.solution.basis(spec.first, spec.last);
      v.delta_b = true_delta(modes, basis, mesh, disc, InnerProduct::l2);
      v.delta_a = true_delta(modes, basis, mesh, disc, InnerProduct::energy);
    } catch (const Error& e) {
      v.message = e.what();
    }
  }
}

// Solution pieces that the proxy step needs again.
struct Solved {
  Mesh mesh;
  Discretization disc;
};

Solved run_mesh_impl(const ExperimentConfig& config, std::size_t n, MeshResult& r, bool validate) {
  r.n = n;
  Mesh mesh = experiment_mesh(config, n);
  r.h = mesh.h();
  r.h_leg = mesh.h_leg();
  Discretization disc = assemble(mesh);
  r.dofs = disc.dofs.n_dofs();
  const std::size_t k = std::min(config.eigenvalue_count(), r.dofs);
  r.solution = solve(config, disc, k, r.solver_used);
  r.ch = projection_constant(config, mesh);
  const EnclosureTable table = enclosure_table(config, r.solution, r.ch);
  r.enclosures = table.entries();
  r.reports = build_cluster_reports(config.clusters, table, r.solution, disc.stiffness, disc.mass, r.ch);
  if (validate && config.domain == DomainTag::unit_square) validate_square(config, mesh, disc, r);
  return {std::move(mesh), std::move(disc)};
}

}  // namespace

MeshResult run_mesh(const ExperimentConfig& config, std::size_t n) {
  MeshResult r;
  try {
    run_mesh_impl(config, n, r, config.validate);
  } catch (const Error& e) {
    r.errors.emplace_back(e.what());
  }
  return r;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.check();
  ExperimentResult result;
  result.config = config;
  if (config.clusters.empty()) result.warnings.emplace_back("no clusters configured: nothing to bound");

  const std::size_t tasks = config.mesh_sizes.size();
  result.meshes.resize(tasks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < thread_budget(tasks); ++w)
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < tasks; i = next++) {
          try {
            result.meshes[i] = run_mesh(config, config.mesh_sizes[i]);
          } catch (...) {
            const std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
  }
  if (failure) std::rethrow_exception(failure);

  const bool want_proxy = config.validate && config.domain != DomainTag::unit_square && config.reference_n > 0 &&
                          !config.clusters.empty();
  if (want_proxy) {
    try {
      // Reuse the sweep's solve when the reference size is part of it.
      MeshResult reference;
      std::optional<Solved> fine;
      for (const auto& r : result.meshes)
        if (r.n == config.reference_n && r.errors.empty()) {
          reference.solution = r.solution;
          Mesh mesh = experiment_mesh(config, r.n);
          Discretization disc = assemble(mesh);
          fine = Solved{std::move(mesh), std::move(disc)};
        }
      if (!fine) fine = run_mesh_impl(config, config.reference_n, reference, false);
      for (auto& r : result.meshes) {
        if (!r.errors.empty() || 4 * r.n > config.reference_n) continue;
        const Mesh coarse = experiment_mesh(config, r.n);
        const Discretization coarse_disc = assemble(coarse);
        r.validation.resize(config.clusters.size());
        for (std::size_t c = 0; c < config.clusters.size(); ++c) {
          auto& v = r.validation[c];
          v.proxy = true;
          try {
            const auto& spec = config.clusters[c];
            if (spec.last > r.solution.k() || spec.last > reference.solution.k())
              throw InvalidParameter("cluster exceeds the computed eigenpairs");
            const ProxyDistances d =
                reference_proxy(spec, coarse, coarse_disc, r.solution, fine->mesh, fine->disc, reference.solution);
            v.delta_b = d.delta_b;
            v.delta_a = d.delta_a;
          } catch (const Error& e) {
            v.message = e.what();
          }
        }
      }
    } catch (const Error& e) {
      result.warnings.push_back(std::string("reference solution failed: ") + e.what());
    }
  }

  result.table = ConvergenceTable::from_results(result.meshes, config.clusters.size());
  return result;
}

std::vector<DominanceCheck> dominance_checks(const ExperimentResult& result) {
  std::vector<DominanceCheck> out;
  for (const auto& m : result.meshes) {
    for (std::size_t c = 0; c < m.validation.size() && c < m.reports.size(); ++c) {
      const auto& v = m.validation[c];
      const auto& rep = m.reports[c];
      auto check = [&](const char* name, const std::optional<double>& bound, const std::optional<double>& truth) {
        if (!bound || !truth) return;
        out.push_back({m.n, c + 1, name, *bound, *truth, v.proxy, *bound >= *truth});
      };
      check("delta_b_proj", rep.delta_b_projection, v.delta_b);
      check("delta_b_alg1", rep.delta_b_alg1, v.delta_b);
      check("delta_a_from_b", rep.delta_a_from_b, v.delta_a);
      check("delta_a_alg1", rep.delta_a_alg1, v.delta_a);
    }
  }
  return out;
}

}  // namespace eigencert
