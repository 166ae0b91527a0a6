// Copyright (c) eigencert contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef EIGENCERT_TOOLS_CONFIG_HPP
#define EIGENCERT_TOOLS_CONFIG_HPP

#include <eigencert/experiment.hpp>

#include <filesystem>
#include <iosfwd>

namespace eigencert::cli {

/// Reads a TOML/INI style `key = value` experiment file. Relative file paths inside it are
/// taken relative to `base_dir`; `output_dir` stays relative to the working directory.
/// Throws ParseError for unknown keys or malformed values.
ExperimentConfig read_config(std::istream& in, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

/// convex | table | file:PATH. Relative paths are resolved against `base_dir`.
void set_ch_source(ExperimentConfig& cfg, const std::string& text, const std::filesystem::path& base_dir);
/// computed | table | file:PATH.
void set_enclosure_source(ExperimentConfig& cfg, const std::string& text, const std::filesystem::path& base_dir);

/// "1-3" or "4" as a cluster index range.
ClusterSpec parse_cluster(const std::string& text);

/// "unit_square" | "square" | "l_shape" | "lshape"; anything else is a mesh file path.
DomainTag parse_domain(const std::string& text);

}  // namespace eigencert::cli

#endif  // EIGENCERT_TOOLS_CONFIG_HPP
