// Copyright (c) eigencert contributors
// SPDX-License-Identifier: Apache-2.0

#include "eigencert/enclosures.hpp"

#include "eigencert/errors.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

namespace eigencert {

std::string_view to_string(EnclosureSource source) {
  switch (source) {
    case EnclosureSource::computed: return "computed";
    case EnclosureSource::table: return "table";
    case EnclosureSource::file: return "file";
  }
  return "file";
}

std::string_view to_string(ConstantSource source) {
  switch (source) {
    case ConstantSource::convex_formula: return "convex_formula";
    case ConstantSource::table: return "table";
    case ConstantSource::file: return "file";
  }
  return "file";
}

EnclosureTable::EnclosureTable(std::vector<Enclosure> entries, EnclosureSource source)
    : entries_(std::move(entries)), source_(source) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    const std::string tag = "enclosure " + std::to_string(i + 1);
    if (!(e.lo > 0.0)) throw ValidationError(tag + ": lower bound must be positive");
    if (!(e.lo <= e.hi)) throw ValidationError(tag + ": lower bound exceeds upper bound");
    if (i > 0 && (e.lo < entries_[i - 1].lo || e.hi < entries_[i - 1].hi))
      throw ValidationError(tag + ": endpoints must be nondecreasing in the index");
  }
}

const Enclosure& EnclosureTable::operator[](std::size_t index) const {
  if (index == 0 || index > entries_.size())
    throw InvalidParameter("no enclosure for eigenvalue index " + std::to_string(index));
  return entries_[index - 1];
}

EnclosureTable EnclosureTable::inflated(double factor) const {
  if (!(factor >= 1.0)) throw InvalidParameter("inflation factor must be >= 1");
  auto out = entries_;
  for (auto& e : out) {
    e.lo /= factor;
    e.hi *= factor;
  }
  return {std::move(out), source_};
}

ProjectionConstant ch_convex(double h_leg) {
  if (!(h_leg > 0.0)) throw InvalidParameter("leg length must be positive");
  return {convex_projection_factor * h_leg, ConstantSource::convex_formula, h_leg};
}

namespace {

bool same_h(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); }

}  // namespace

ProjectionConstant ch_table_lshape(double h) {
  static constexpr std::array<std::pair<double, double>, 4> table{{
      {1.0 / 32, 0.0359},
      {1.0 / 64, 0.0218},
      {1.0 / 128, 0.0134},
      {1.0 / 256, 0.00832},
  }};
  for (const auto& [mesh_h, value] : table)
    if (same_h(h, mesh_h)) return {value, ConstantSource::table, mesh_h};
  throw MissingConstant("no tabulated projection constant for h = " + std::to_string(h) +
                        "; supply one with --ch-source file:PATH");
}

ProjectionConstant ch_from_file(const std::filesystem::path& path, double h) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(raw);
    double mesh_h = 0.0, value = 0.0;
    std::string rest;
    if (!(fields >> mesh_h >> value) || (fields >> rest)) throw ParseError("expected 'h value'", line_no);
    if (!(mesh_h > 0.0) || !(value > 0.0)) throw ParseError("h and C_h must be positive", line_no);
    if (same_h(h, mesh_h)) return {value, ConstantSource::file, mesh_h};
  }
  throw MissingConstant("'" + path.string() + "' has no projection constant for h = " + std::to_string(h));
}

EnclosureTable lower_bounds_from_ch(const EigenSolution& discrete, const ProjectionConstant& ch) {
  std::vector<Enclosure> out;
  out.reserve(discrete.k());
  const double c2 = ch.value * ch.value;
  for (std::size_t i = 0; i < discrete.k(); ++i) {
    const double lh = discrete.values[static_cast<Eigen::Index>(i)];
    out.push_back({lh / (1.0 + c2 * lh), lh});
  }
  return {std::move(out), EnclosureSource::computed};
}

EnclosureTable read_enclosures(std::istream& in) {
  std::vector<Enclosure> entries;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(raw);
    long long index = 0;
    Enclosure e;
    std::string rest;
    if (!(fields >> index >> e.lo >> e.hi) || (fields >> rest)) throw ParseError("expected 'index lo hi'", line_no);
    if (index != static_cast<long long>(entries.size()) + 1)
      throw ParseError("expected index " + std::to_string(entries.size() + 1), line_no);
    if (!(e.lo <= e.hi)) throw ValidationError("line " + std::to_string(line_no) + ": lo > hi");
    entries.push_back(e);
  }
  if (entries.empty()) throw ParseError("enclosure table is empty", 0);
  return {std::move(entries), EnclosureSource::file};
}

EnclosureTable load_enclosures(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_enclosures(in);
}

void write_enclosures(const EnclosureTable& table, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "# index lo hi\n";
  for (std::size_t i = 1; i <= table.size(); ++i) out << i << ' ' << table[i].lo << ' ' << table[i].hi << '\n';
  out.precision(old_precision);
}

EnclosureTable lshape_reference_enclosures() {
  return {{
              {9.63971, 9.63973},
              {15.19725, 15.19726},
              {19.73920, 19.73921},
              {29.52147, 29.52149},
              {31.91262, 31.91264},
          },
          EnclosureSource::table};
}

void check_cluster(const ClusterSpec& cluster) {
  if (cluster.first == 0 || cluster.first > cluster.last)
    throw InvalidParameter("cluster {" + std::to_string(cluster.first) + ".." + std::to_string(cluster.last) +
                           "} must satisfy 1 <= first <= last");
}

SeparationCheck verify_separation(const EnclosureTable& enclosures, const EigenSolution& discrete,
                                  const ClusterSpec& cluster) {
  check_cluster(cluster);
  if (cluster.last > enclosures.size())
    throw InvalidParameter("enclosures do not reach index " + std::to_string(cluster.last));
  if (cluster.last + 1 > discrete.k())
    throw InvalidParameter("discrete eigenvalue " + std::to_string(cluster.last + 1) + " was not computed");

  SeparationCheck out;
  if (cluster.first > 1) out.left_margin = enclosures[cluster.first].lo - discrete.value(cluster.first - 1);
  out.right_margin = discrete.value(cluster.last + 1) - enclosures[cluster.last].hi;
  out.ok = out.left_margin > 0.0 && out.right_margin > 0.0;
  return out;
}

}  // namespace eigencert
