// Copyright (c) eigencert contributors
// SPDX-License-Identifier: Apache-2.0

#include "config.hpp"

#include <eigencert/errors.hpp>
#include <eigencert/experiment.hpp>
#include <eigencert/mesh.hpp>
#include <eigencert/report.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace eigencert;

void print_rates(const ExperimentResult& result) {
  for (const auto& s : result.table.series()) {
    std::cout << "  cluster " << s.cluster << " " << s.quantity << ": ";
    if (s.rate) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", *s.rate);
      std::cout << "rate " << buf << "\n";
    } else {
      std::cout << "rate undefined (" << s.points.size() << " points)\n";
    }
  }
}

void print_diagnostics(const ExperimentResult& result) {
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& m : result.meshes) {
    for (const auto& e : m.errors) std::cerr << "n=" << m.n << ": error: " << e << "\n";
    for (const auto& w : m.solution.warnings) std::cerr << "n=" << m.n << ": solver: " << w << "\n";
    for (std::size_t c = 0; c < m.reports.size(); ++c)
      for (const auto& d : m.reports[c].diagnostics) std::cerr << "n=" << m.n << " cluster " << c + 1 << ": " << d << "\n";
  }
}

struct Overrides {
  std::string out;
  std::string ch_source;
  std::string enclosure_source;
  std::optional<double> inflation;
};

ExperimentResult execute(ExperimentConfig cfg, const Overrides& o) {
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (!o.ch_source.empty()) cli::set_ch_source(cfg, o.ch_source, ".");
  if (!o.enclosure_source.empty()) cli::set_enclosure_source(cfg, o.enclosure_source, ".");
  if (o.inflation) cfg.inflation = *o.inflation;
  cfg.check();
  ExperimentResult result = run_experiment(cfg);
  const auto files = write_outputs(result, cfg.output_dir);
  print_diagnostics(result);
  std::cout << "wrote " << files.size() << " files to " << cfg.output_dir.string() << "\n";
  print_rates(result);
  return result;
}

int cmd_run(const std::string& config, const Overrides& o) {
  const ExperimentResult result = execute(cli::load_config(config), o);
  return result.all_clusters_ok() ? 0 : 1;
}

int cmd_validate(const std::string& config, const Overrides& o) {
  ExperimentConfig cfg = cli::load_config(config);
  cfg.validate = true;
  const ExperimentResult result = execute(std::move(cfg), o);
  std::size_t violations = 0, proxy_violations = 0, checked = 0;
  for (const auto& c : dominance_checks(result)) {
    ++checked;
    if (c.ok) continue;
    (c.proxy ? proxy_violations : violations) += 1;
    std::cout << (c.proxy ? "proxy exceeds " : "VIOLATION ") << c.bound << " n=" << c.n << " cluster " << c.cluster
              << ": bound " << c.bound_value << " < " << (c.proxy ? "proxy " : "true ") << c.truth << "\n";
  }
  std::cout << "dominance: " << checked << " comparisons, " << violations << " violations, " << proxy_violations
            << " proxy exceedances\n";
  return violations == 0 && result.all_clusters_ok() ? 0 : 1;
}

int cmd_mesh(const std::string& domain, std::size_t n, const std::string& out) {
  const DomainTag tag = cli::parse_domain(domain);
  if (tag == DomainTag::external) throw InvalidParameter("unknown domain '" + domain + "' (unit_square or l_shape)");
  const Mesh mesh = tag == DomainTag::unit_square ? build_unit_square_mesh(n) : build_lshape_mesh(n);
  const std::filesystem::path path(out);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  save_mesh(mesh, path);
  std::cout << "wrote " << mesh.num_vertices() << " vertices, " << mesh.num_triangles() << " triangles to " << out
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Guaranteed eigenfunction error bounds for P1 finite elements"};
  app.require_subcommand(1);

  std::string config, out, domain;
  std::size_t n = 0;
  Overrides overrides;

  auto sweep_options = [&](CLI::App* sub) {
    sub->add_option("--config", config, "Experiment file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", overrides.out, "Output directory (overrides output_dir)");
    sub->add_option("--ch-source", overrides.ch_source, "convex | table | file:PATH");
    sub->add_option("--enclosure-source", overrides.enclosure_source, "computed | table | file:PATH");
    sub->add_option("--inflation", overrides.inflation, "Enclosure safety factor >= 1");
  };
  auto* run = app.add_subcommand("run", "Run a mesh sweep and write reports");
  sweep_options(run);
  auto* validate = app.add_subcommand("validate", "Run a sweep and check every bound against the truth");
  sweep_options(validate);

  auto* mesh = app.add_subcommand("mesh", "Write a uniform mesh file");
  mesh->add_option("--domain", domain, "unit_square or l_shape")->required();
  mesh->add_option("--n", n, "Subdivisions per unit length")->required()->check(CLI::PositiveNumber);
  mesh->add_option("--out", out, "Output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config, overrides);
    if (*validate) return cmd_validate(config, overrides);
    if (*mesh) return cmd_mesh(domain, n, out);
  } catch (const eigencert::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
