// Copyright (c) eigencert contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef EIGENCERT_ENCLOSURES_HPP
#define EIGENCERT_ENCLOSURES_HPP

#include "eigencert/eigensolve.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <string_view>
#include <vector>

namespace eigencert {

/// Certified interval [lo, hi] containing one exact eigenvalue.
struct Enclosure {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double value) const noexcept { return lo <= value && value <= hi; }
  double width() const noexcept { return hi - lo; }
};

enum class EnclosureSource { computed, table, file };

std::string_view to_string(EnclosureSource source);

/// Enclosures for lambda_1, lambda_2, ... (1-based access).
class EnclosureTable {
public:
  /// Throws ValidationError unless 0 < lo <= hi and both endpoint sequences are nondecreasing.
  EnclosureTable(std::vector<Enclosure> entries, EnclosureSource source);

  std::size_t size() const noexcept { return entries_.size(); }
  const Enclosure& operator[](std::size_t index) const;  ///< 1-based
  const std::vector<Enclosure>& entries() const noexcept { return entries_; }
  EnclosureSource source() const noexcept { return source_; }

  /// Widens every interval to [lo / factor, hi * factor]; factor >= 1.
  EnclosureTable inflated(double factor) const;

private:
  std::vector<Enclosure> entries_;
  EnclosureSource source_;
};

enum class ConstantSource { convex_formula, table, file };

std::string_view to_string(ConstantSource source);

/// Constant C_h of the a priori projection estimate |u - P_h u| <= C_h^2 |f|.
struct ProjectionConstant {
  double value = 0.0;
  ConstantSource source = ConstantSource::convex_formula;
  double mesh_h = 0.0;
};

/// Factor of the convex-domain constant for right-triangle meshes, C_h = 0.493 * largest leg.
inline constexpr double convex_projection_factor = 0.493;

/// Throws InvalidParameter unless h_leg > 0.
ProjectionConstant ch_convex(double h_leg);

/// Tabulated constants for the L-shape uniform meshes with leg length 1/32 .. 1/256.
/// Throws MissingConstant for any other h.
ProjectionConstant ch_table_lshape(double h);

/// Reads `h value` lines (`#` comments) and returns the entry whose h matches to 1e-9 relative.
ProjectionConstant ch_from_file(const std::filesystem::path& path, double h);

/// [lambda_h / (1 + C_h^2 lambda_h), lambda_h] for every computed discrete eigenvalue.
EnclosureTable lower_bounds_from_ch(const EigenSolution& discrete, const ProjectionConstant& ch);

/// Text lines `index lo hi`, indices 1..n in order, `#` comments.
/// Throws ParseError (malformed or empty) or ValidationError (lo > hi, non-monotone).
EnclosureTable read_enclosures(std::istream& in);
EnclosureTable load_enclosures(const std::filesystem::path& path);
void write_enclosures(const EnclosureTable& table, std::ostream& out);

/// The L-shape eigenvalue enclosures for lambda_1..lambda_5 shipped with the library.
EnclosureTable lshape_reference_enclosures();

/// Consecutive 1-based index range {first, ..., last} of one eigenvalue cluster.
struct ClusterSpec {
  std::size_t first = 1;
  std::size_t last = 1;

  std::size_t size() const noexcept { return last - first + 1; }
  friend bool operator==(const ClusterSpec&, const ClusterSpec&) = default;
};

/// Throws InvalidParameter unless 1 <= first <= last.
void check_cluster(const ClusterSpec& cluster);

struct SeparationCheck {
  bool ok = false;
  /// lambda_first^lo - lambda_{h,first-1}; +inf when the cluster starts at index 1.
  double left_margin = std::numeric_limits<double>::infinity();
  /// lambda_{h,last+1} - lambda_last^hi.
  double right_margin = 0.0;
};

/// lambda_{h,n-1} < lambda_n^lo and lambda_N^hi < lambda_{h,N+1}.
/// Throws InvalidParameter if an index is outside either table.
SeparationCheck verify_separation(const EnclosureTable& enclosures, const EigenSolution& discrete,
                                  const ClusterSpec& cluster);

}  // namespace eigencert

#endif  // EIGENCERT_ENCLOSURES_HPP
