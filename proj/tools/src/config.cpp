// Copyright (c) eigencert contributors
// SPDX-License-Identifier: Apache-2.0

#include "config.hpp"

#include <eigencert/errors.hpp>

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>

namespace eigencert::cli {

namespace {

std::size_t to_size(const std::string& key, const std::string& text) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError("'" + key + "': expected a nonnegative integer, got '" + text + "'", 0);
  return value;
}

double to_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError("'" + key + "': expected a number, got '" + text + "'", 0);
  return value;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ParseError("'" + key + "': expected true or false, got '" + text + "'", 0);
}

const std::string& single(const CLI::ConfigItem& item) {
  if (item.inputs.size() != 1) throw ParseError("'" + item.name + "' takes exactly one value", 0);
  return item.inputs.front();
}

std::filesystem::path resolve_path(const std::string& text, const std::filesystem::path& base_dir) {
  const std::filesystem::path path(text);
  return path.is_absolute() ? path : base_dir / path;
}

// "file:PATH" -> PATH, otherwise empty.
std::optional<std::string> file_argument(const std::string& text) {
  if (text.rfind("file:", 0) != 0) return std::nullopt;
  return text.substr(5);
}

// CLI11 folds repeated adjacent keys into one item, so repeats are caught on the raw text.
void reject_repeated_keys(const std::string& text) {
  std::set<std::string> keys;
  std::istringstream lines(text);
  std::size_t number = 0;
  for (std::string line; std::getline(lines, line);) {
    ++number;
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#' || line[start] == ';' || line[start] == '[') continue;
    const auto eq = line.find('=', start);
    if (eq == std::string::npos) continue;
    std::string key = line.substr(start, eq - start);
    key.erase(key.find_last_not_of(" \t") + 1);
    if (!keys.insert(key).second) throw ParseError("config: duplicate key '" + key + "'", number);
  }
}

}  // namespace

DomainTag parse_domain(const std::string& text) {
  if (text == "unit_square" || text == "square") return DomainTag::unit_square;
  if (text == "l_shape" || text == "lshape") return DomainTag::l_shape;
  return DomainTag::external;
}

ClusterSpec parse_cluster(const std::string& text) {
  const auto dash = text.find('-');
  ClusterSpec c;
  if (dash == std::string::npos) {
    c.first = c.last = to_size("clusters", text);
  } else {
    c.first = to_size("clusters", text.substr(0, dash));
    c.last = to_size("clusters", text.substr(dash + 1));
  }
  if (c.first == 0 || c.last < c.first) throw ParseError("invalid cluster range '" + text + "'", 0);
  return c;
}

void set_ch_source(ExperimentConfig& cfg, const std::string& text, const std::filesystem::path& base_dir) {
  if (const auto path = file_argument(text)) {
    cfg.ch_source = ChSourceKind::file;
    cfg.ch_file = resolve_path(*path, base_dir);
  } else if (text == "convex") {
    cfg.ch_source = ChSourceKind::convex;
  } else if (text == "table" || text == "lshape_table") {
    cfg.ch_source = ChSourceKind::lshape_table;
  } else if (text == "file") {
    cfg.ch_source = ChSourceKind::file;
  } else {
    throw ParseError("unknown constant source '" + text + "' (convex, table, file:PATH)", 0);
  }
}

void set_enclosure_source(ExperimentConfig& cfg, const std::string& text, const std::filesystem::path& base_dir) {
  if (const auto path = file_argument(text)) {
    cfg.enclosure_source = EnclosureSourceKind::file;
    cfg.enclosure_file = resolve_path(*path, base_dir);
  } else if (text == "computed") {
    cfg.enclosure_source = EnclosureSourceKind::computed;
  } else if (text == "lshape_reference" || text == "table") {
    cfg.enclosure_source = EnclosureSourceKind::lshape_reference;
  } else if (text == "file") {
    cfg.enclosure_source = EnclosureSourceKind::file;
  } else {
    throw ParseError("unknown enclosure source '" + text + "' (computed, table, file:PATH)", 0);
  }
}

ExperimentConfig read_config(std::istream& in, const std::filesystem::path& base_dir) {
  const std::string text(std::istreambuf_iterator<char>(in), {});
  reject_repeated_keys(text);
  std::vector<CLI::ConfigItem> items;
  try {
    std::istringstream stream(text);
    items = CLI::ConfigTOML().from_config(stream);
  } catch (const CLI::Error& e) {
    throw ParseError(std::string("config: ") + e.what(), 0);
  }
  auto resolve = [&](const std::string& p) { return resolve_path(p, base_dir); };

  ExperimentConfig cfg;
  std::set<std::string> seen;
  for (const auto& item : items) {
    if (!item.parents.empty() || item.name == "++" || item.name == "--")
      throw ParseError("config: sections are not supported ('" + item.name + "')", 0);
    if (!seen.insert(item.name).second) throw ParseError("config: duplicate key '" + item.name + "'", 0);
    const std::string& key = item.name;
    if (key == "domain") {
      const std::string& v = single(item);
      cfg.domain = parse_domain(v);
      if (cfg.domain == DomainTag::external) cfg.mesh_file = resolve(v);
    } else if (key == "mesh_sizes") {
      for (const auto& v : item.inputs) cfg.mesh_sizes.push_back(to_size(key, v));
    } else if (key == "clusters") {
      for (const auto& v : item.inputs) cfg.clusters.push_back(parse_cluster(v));
    } else if (key == "ch_source") {
      set_ch_source(cfg, single(item), base_dir);
    } else if (key == "ch_file") {
      cfg.ch_file = resolve(single(item));
    } else if (key == "enclosure_source") {
      set_enclosure_source(cfg, single(item), base_dir);
    } else if (key == "enclosure_file") {
      cfg.enclosure_file = resolve(single(item));
    } else if (key == "inflation") {
      cfg.inflation = to_double(key, single(item));
    } else if (key == "solver") {
      const std::string& v = single(item);
      if (v == "auto") cfg.solver = SolverKind::automatic;
      else if (v == "dense") cfg.solver = SolverKind::dense;
      else if (v == "iterative") cfg.solver = SolverKind::iterative;
      else throw ParseError("config: unknown solver '" + v + "'", 0);
    } else if (key == "dense_limit") {
      cfg.dense_limit = to_size(key, single(item));
    } else if (key == "tol") {
      cfg.tol = to_double(key, single(item));
    } else if (key == "max_iterations") {
      cfg.max_iterations = to_size(key, single(item));
    } else if (key == "num_eigenvalues") {
      cfg.num_eigenvalues = to_size(key, single(item));
    } else if (key == "validate") {
      cfg.validate = to_bool(key, single(item));
    } else if (key == "reference_n") {
      cfg.reference_n = to_size(key, single(item));
    } else if (key == "output_dir") {
      cfg.output_dir = single(item);
    } else {
      throw ParseError("config: unknown key '" + key + "'", 0);
    }
  }
  cfg.check();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_config(in, path.parent_path());
}

}  // namespace eigencert::cli
