// Copyright (c) eigencert contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef EIGENCERT_EXPERIMENT_HPP
#define EIGENCERT_EXPERIMENT_HPP

#include "eigencert/cluster_bounds.hpp"
#include "eigencert/mesh.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace eigencert {

enum class SolverKind { automatic, dense, iterative };
enum class ChSourceKind { convex, lshape_table, file };
enum class EnclosureSourceKind { computed, file, lshape_reference };

std::string_view to_string(SolverKind kind);
std::string_view to_string(ChSourceKind kind);
std::string_view to_string(EnclosureSourceKind kind);

/// One mesh sweep. For a mesh file, each n is a power-of-two subdivision of the file mesh.
struct ExperimentConfig {
  DomainTag domain = DomainTag::unit_square;
  std::filesystem::path mesh_file;
  std::vector<std::size_t> mesh_sizes;
  std::vector<ClusterSpec> clusters;

  ChSourceKind ch_source = ChSourceKind::convex;
  std::filesystem::path ch_file;
  EnclosureSourceKind enclosure_source = EnclosureSourceKind::computed;
  std::filesystem::path enclosure_file;
  double inflation = 1.0;

  SolverKind solver = SolverKind::automatic;
  std::size_t dense_limit = 1500;  ///< automatic picks dense up to this dimension
  double tol = 1e-10;
  std::size_t max_iterations = 2000;
  std::size_t num_eigenvalues = 0;  ///< 0: two beyond the last cluster

  bool validate = true;
  /// L-shape and mesh files: n of the nested reference solution for the truth proxy (0: none).
  std::size_t reference_n = 0;

  std::filesystem::path output_dir = ".";

  /// Throws InvalidParameter on an inconsistent configuration.
  void check() const;
  std::size_t eigenvalue_count() const;
};

/// Truth values for one cluster on one mesh; `proxy` marks the non-guaranteed reference kind.
struct ValidationValues {
  std::optional<double> delta_b;
  std::optional<double> delta_a;
  bool proxy = false;
  std::string message;
};

struct MeshResult {
  std::size_t n = 0;
  double h = 0.0;
  double h_leg = 0.0;
  std::size_t dofs = 0;
  SolverKind solver_used = SolverKind::dense;
  EigenSolution solution;
  std::vector<Enclosure> enclosures;  ///< as used, after inflation
  ProjectionConstant ch;
  std::vector<ClusterReport> reports;
  std::vector<ValidationValues> validation;  ///< one per cluster, empty if disabled
  std::vector<std::string> errors;           ///< failures that prevented all cluster work
};

/// Least-squares slope of log(value) against log(h) over the last three usable points.
/// Nonpositive values are skipped (and reported through `warnings`); fewer than three usable
/// points give no slope.
std::optional<double> slope(std::span<const std::pair<double, double>> series,
                            std::vector<std::string>* warnings = nullptr);

struct ConvergenceSeries {
  std::size_t cluster = 0;  ///< 1-based position in the cluster list
  std::string quantity;
  std::vector<std::pair<double, double>> points;  ///< (h, value)
  std::optional<double> rate;
};

/// Per (cluster, quantity) series in sweep order with fitted rates.
class ConvergenceTable {
public:
  static ConvergenceTable from_results(std::span<const MeshResult> results, std::size_t cluster_count);

  const std::vector<ConvergenceSeries>& series() const noexcept { return series_; }
  /// Throws InvalidParameter for an unknown (cluster, quantity).
  const ConvergenceSeries& at(std::size_t cluster, const std::string& quantity) const;
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

private:
  std::vector<ConvergenceSeries> series_;
  std::vector<std::string> warnings_;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<MeshResult> meshes;  ///< ordered by decreasing h
  ConvergenceTable table;
  std::vector<std::string> warnings;

  /// Every cluster on every mesh received its projection bounds.
  bool all_clusters_ok() const;
};

/// Worker count: EIGENCERT_THREADS when set to a positive integer, else the hardware
/// concurrency, never more than `tasks`.
std::size_t thread_budget(std::size_t tasks);

/// Builds the mesh for sweep size n of the configured domain.
Mesh experiment_mesh(const ExperimentConfig& config, std::size_t n);

/// Solves, bounds and validates on one mesh.
MeshResult run_mesh(const ExperimentConfig& config, std::size_t n);

/// Full sweep, parallel over mesh sizes.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct DominanceCheck {
  std::size_t n = 0;
  std::size_t cluster = 0;
  std::string bound;
  double bound_value = 0.0;
  double truth = 0.0;
  bool proxy = false;
  bool ok = false;
};

/// Compares every available bound with its truth value (projection and Rayleigh routes).
std::vector<DominanceCheck> dominance_checks(const ExperimentResult& result);

}  // namespace eigencert

#endif  // EIGENCERT_EXPERIMENT_HPP
