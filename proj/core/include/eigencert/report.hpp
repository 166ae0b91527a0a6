// Copyright (c) eigencert contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef EIGENCERT_REPORT_HPP
#define EIGENCERT_REPORT_HPP

#include "eigencert/experiment.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace eigencert {

/// One row per cluster per mesh. Missing values are empty fields; numbers use 17 digits.
void write_report_csv(const ExperimentResult& result, std::ostream& out);

/// Full audit record: configuration, eigenvalues, enclosures and every per-cluster quantity.
void write_report_json(const ExperimentResult& result, std::ostream& out);

/// `h,value` lines of one convergence series.
void write_series_csv(const ConvergenceSeries& series, std::ostream& out);

/// `cluster,quantity,points,slope` with an empty slope when it is undefined.
void write_rates_csv(const ConvergenceTable& table, std::ostream& out);

/// File name series_<cluster>_<quantity>.csv.
std::string series_file_name(const ConvergenceSeries& series);

/// Writes report.csv, report.json, rates.csv and every series file into `dir`, creating it.
/// Returns the written paths. Throws Error when a file cannot be written.
std::vector<std::filesystem::path> write_outputs(const ExperimentResult& result, const std::filesystem::path& dir);

}  // namespace eigencert

#endif  // EIGENCERT_REPORT_HPP
