// Copyright (c) eigencert contributors
// SPDX-License-Identifier: Apache-2.0

#include "eigencert/report.hpp"

#include "eigencert/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace eigencert {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

nlohmann::json opt(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

// JSON has no infinities.
nlohmann::json finite(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

std::string flags(const ClusterReport& r) {
  std::string out = r.separation_ok ? "separated" : "not_separated";
  if (r.quantities && r.quantities->sharper_applicable) out += ";sharper_beta";
  if (r.certified()) out += ";certified";
  if (r.delta_b_alg1) out += ";rayleigh";
  if (!r.diagnostics.empty()) out += ";diagnostics";
  return out;
}

nlohmann::json cluster_json(const ClusterReport& r, const ValidationValues* v) {
  nlohmann::json j;
  j["first"] = r.spec.first;
  j["last"] = r.spec.last;
  j["separation_ok"] = r.separation_ok;
  j["left_margin"] = finite(r.left_margin);
  j["right_margin"] = finite(r.right_margin);
  if (r.quantities) {
    const auto& q = *r.quantities;
    j["tau"] = q.tau;
    j["tau_h"] = q.tau_h;
    j["xi"] = q.xi;
    j["beta"] = q.beta;
    j["sharper_beta"] = q.sharper_applicable;
    j["lambda_n_lo"] = q.lambda_n_lo;
    j["lambda_N_hi"] = q.lambda_N_hi;
    j["ch"] = q.ch.value;
  }
  j["delta_b_proj"] = opt(r.delta_b_projection);
  j["delta_a_from_b"] = opt(r.delta_a_from_b);
  j["delta_b_alg1"] = opt(r.delta_b_alg1);
  j["delta_a_alg1"] = opt(r.delta_a_alg1);
  j["rho"] = r.rho;
  j["lambda_hat"] = r.lambda_hat;
  j["theta"] = r.theta;
  j["vartheta"] = r.vartheta;
  j["diagnostics"] = r.diagnostics;
  if (v) {
    j["validation"] = {{"kind", v->proxy ? "proxy" : "true"},
                       {"guaranteed_truth", !v->proxy},
                       {"delta_b", opt(v->delta_b)},
                       {"delta_a", opt(v->delta_a)},
                       {"message", v->message}};
  }
  return j;
}

template <typename Writer>
std::filesystem::path write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  writer(out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
  return path;
}

}  // namespace

void write_report_csv(const ExperimentResult& result, std::ostream& out) {
  out << "n,h,h_leg,cluster,first,last,tau,tau_h,xi,beta,delta_b_proj,delta_a_from_b,delta_b_alg1,delta_a_alg1,"
         "flags,true_delta_b,true_delta_a,validation_kind\n";
  const auto& clusters = result.config.clusters;
  for (const auto& m : result.meshes) {
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      out << m.n << ',' << num(m.h) << ',' << num(m.h_leg) << ',' << c + 1 << ',' << clusters[c].first << ','
          << clusters[c].last << ',';
      if (c >= m.reports.size()) {
        out << ",,,,,,,,mesh_error,,,\n";
        continue;
      }
      const auto& r = m.reports[c];
      if (r.quantities) {
        const auto& q = *r.quantities;
        out << num(q.tau) << ',' << num(q.tau_h) << ',' << num(q.xi) << ',' << num(q.beta) << ',';
      } else {
        out << ",,,,";
      }
      out << num(r.delta_b_projection) << ',' << num(r.delta_a_from_b) << ',' << num(r.delta_b_alg1) << ','
          << num(r.delta_a_alg1) << ',' << flags(r) << ',';
      if (c < m.validation.size()) {
        const auto& v = m.validation[c];
        out << num(v.delta_b) << ',' << num(v.delta_a) << ',' << (v.proxy ? "proxy" : "true") << '\n';
      } else {
        out << ",,none\n";
      }
    }
  }
}

void write_report_json(const ExperimentResult& result, std::ostream& out) {
  const auto& cfg = result.config;
  nlohmann::json root;
  nlohmann::json clusters = nlohmann::json::array();
  for (const auto& c : cfg.clusters) clusters.push_back({c.first, c.last});
  root["config"] = {{"domain", cfg.domain == DomainTag::external ? cfg.mesh_file.string()
                                                                    : std::string(to_string(cfg.domain))},
                    {"mesh_sizes", cfg.mesh_sizes},
                    {"clusters", clusters},
                    {"ch_source", to_string(cfg.ch_source)},
                    {"enclosure_source", to_string(cfg.enclosure_source)},
                    {"inflation", cfg.inflation},
                    {"solver", to_string(cfg.solver)},
                    {"tol", cfg.tol},
                    {"reference_n", cfg.reference_n}};

  nlohmann::json meshes = nlohmann::json::array();
  for (const auto& m : result.meshes) {
    nlohmann::json jm;
    jm["n"] = m.n;
    jm["h"] = m.h;
    jm["h_leg"] = m.h_leg;
    jm["dofs"] = m.dofs;
    jm["solver"] = to_string(m.solver_used);
    jm["ch"] = {{"value", m.ch.value}, {"source", to_string(m.ch.source)}};
    jm["eigenvalues"] = std::vector<double>(m.solution.values.data(), m.solution.values.data() + m.solution.values.size());
    jm["residuals"] = m.solution.residual_norms;
    jm["solver_warnings"] = m.solution.warnings;
    nlohmann::json enc = nlohmann::json::array();
    for (const auto& e : m.enclosures) enc.push_back({e.lo, e.hi});
    jm["enclosures"] = enc;
    nlohmann::json jc = nlohmann::json::array();
    for (std::size_t c = 0; c < m.reports.size(); ++c)
      jc.push_back(cluster_json(m.reports[c], c < m.validation.size() ? &m.validation[c] : nullptr));
    jm["clusters"] = jc;
    jm["errors"] = m.errors;
    meshes.push_back(jm);
  }
  root["meshes"] = meshes;

  nlohmann::json rates = nlohmann::json::array();
  for (const auto& s : result.table.series())
    rates.push_back({{"cluster", s.cluster}, {"quantity", s.quantity}, {"points", s.points.size()}, {"slope", opt(s.rate)}});
  root["rates"] = rates;
  nlohmann::json notes = nlohmann::json::array();
  if (cfg.ch_source == ChSourceKind::convex)
    notes.push_back("convex projection constant taken as 0.493 * h_leg; the alternative reading h_leg / 0.493 "
                    "is about 4.1 times larger and is not used");
  if (cfg.inflation == 1.0) notes.push_back("floating-point evaluation without enclosure inflation");
  root["notes"] = notes;
  root["warnings"] = result.warnings;
  root["all_clusters_ok"] = result.all_clusters_ok();
  out << root.dump(2) << '\n';
}

void write_series_csv(const ConvergenceSeries& series, std::ostream& out) {
  out << "h,value\n";
  for (const auto& [h, v] : series.points) out << num(h) << ',' << num(v) << '\n';
}

void write_rates_csv(const ConvergenceTable& table, std::ostream& out) {
  out << "cluster,quantity,points,slope\n";
  for (const auto& s : table.series())
    out << s.cluster << ',' << s.quantity << ',' << s.points.size() << ',' << num(s.rate) << '\n';
}

std::string series_file_name(const ConvergenceSeries& series) {
  return "series_" + std::to_string(series.cluster) + "_" + series.quantity + ".csv";
}

std::vector<std::filesystem::path> write_outputs(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  std::vector<std::filesystem::path> written;
  written.push_back(write_file(dir / "report.csv", [&](std::ostream& o) { write_report_csv(result, o); }));
  written.push_back(write_file(dir / "report.json", [&](std::ostream& o) { write_report_json(result, o); }));
  written.push_back(write_file(dir / "rates.csv", [&](std::ostream& o) { write_rates_csv(result.table, o); }));
  for (const auto& s : result.table.series())
    written.push_back(write_file(dir / series_file_name(s), [&](std::ostream& o) { write_series_csv(s, o); }));
  return written;
}

}  // namespace eigencert
