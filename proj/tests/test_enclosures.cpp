// Copyright (c) eigencert contributors
// SPDX-License-Identifier: Apache-2.0

#include <eigencert/enclosures.hpp>
#include <eigencert/errors.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace {

using namespace eigencert;

constexpr double pi2 = std::numbers::pi * std::numbers::pi;
const std::filesystem::path data_dir = EIGENCERT_TEST_DATA_DIR;

EigenSolution fake_solution(std::vector<double> values) {
  EigenSolution s;
  s.values = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  s.vectors = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(values.size()));
  s.residual_norms.assign(values.size(), 0.0);
  return s;
}

TEST(Enclosures, ConvexConstant) {
  EXPECT_NEAR(ch_convex(0.25).value, 0.12325, 1e-15);
  EXPECT_NEAR(ch_convex(0.125).value, 0.5 * ch_convex(0.25).value, 1e-16);
  EXPECT_EQ(ch_convex(0.25).source, ConstantSource::convex_formula);
  EXPECT_THROW(ch_convex(0.0), InvalidParameter);
}

TEST(Enclosures, TabulatedLShapeConstants) {
  EXPECT_EQ(ch_table_lshape(1.0 / 32).value, 0.0359);
  EXPECT_EQ(ch_table_lshape(1.0 / 64).value, 0.0218);
  EXPECT_EQ(ch_table_lshape(1.0 / 128).value, 0.0134);
  EXPECT_EQ(ch_table_lshape(1.0 / 256).value, 0.00832);
  EXPECT_THROW(ch_table_lshape(1.0 / 100), MissingConstant);
}

TEST(Enclosures, ConstantFile) {
  const auto path = std::filesystem::temp_directory_path() / "eigencert_ch.txt";
  {
    std::ofstream out(path);
    out << "# h value\n0.03125 0.0359\n0.015625 0.0218 # second\n";
  }
  EXPECT_EQ(ch_from_file(path, 1.0 / 64).value, 0.0218);
  EXPECT_EQ(ch_from_file(path, 1.0 / 64).source, ConstantSource::file);
  EXPECT_THROW(ch_from_file(path, 0.5), MissingConstant);
  std::filesystem::remove(path);
}

TEST(Enclosures, LowerBoundFormula) {
  const auto t = lower_bounds_from_ch(fake_solution({20.0}), {0.1, ConstantSource::file, 0.1});
  EXPECT_NEAR(t[1].lo, 20.0 / 1.2, 1e-13);
  EXPECT_EQ(t[1].hi, 20.0);
  const auto tiny = lower_bounds_from_ch(fake_solution({20.0}), {1e-9, ConstantSource::file, 0.1});
  EXPECT_NEAR(tiny[1].lo, 20.0, 1e-12);
  const auto big = lower_bounds_from_ch(fake_solution({20.0}), {0.2, ConstantSource::file, 0.1});
  EXPECT_LT(big[1].lo, t[1].lo);
  EXPECT_EQ(big[1].hi, t[1].hi);
}

TEST(Enclosures, ComputedEnclosuresContainSquareEigenvalues) {
  const double exact[] = {2, 5, 5, 8, 10, 10};
  for (std::size_t n : {8u, 16u}) {
    const Mesh mesh = build_unit_square_mesh(n);
    const Discretization d = assemble(mesh);
    const auto t = lower_bounds_from_ch(solve_dense(d.stiffness, d.mass, 6), ch_convex(mesh.h_leg()));
    for (std::size_t i = 1; i <= 6; ++i) EXPECT_TRUE(t[i].contains(exact[i - 1] * pi2)) << "n=" << n << " i=" << i;
  }
}

TEST(Enclosures, BundledLShapeTable) {
  const EnclosureTable t = load_enclosures(data_dir / "lshape_table2.enc");
  const EnclosureTable ref = lshape_reference_enclosures();
  ASSERT_EQ(t.size(), 5u);
  ASSERT_EQ(ref.size(), 5u);
  const double lo[] = {9.63971, 15.19725, 19.73920, 29.52147, 31.91262};
  const double hi[] = {9.63973, 15.19726, 19.73921, 29.52149, 31.91264};
  for (std::size_t i = 1; i <= 5; ++i) {
    EXPECT_EQ(t[i].lo, lo[i - 1]);
    EXPECT_EQ(t[i].hi, hi[i - 1]);
    EXPECT_EQ(ref[i].lo, lo[i - 1]);
    EXPECT_EQ(ref[i].hi, hi[i - 1]);
  }
  EXPECT_TRUE(t[3].contains(2 * pi2));
}

TEST(Enclosures, BundledSquareTable) {
  const EnclosureTable t = load_enclosures(data_dir / "square_exact.enc");
  const int levels[] = {2, 5, 5, 8, 10, 10, 13, 13, 17, 17, 18, 20};
  ASSERT_EQ(t.size(), 12u);
  for (std::size_t i = 1; i <= 12; ++i) {
    EXPECT_DOUBLE_EQ(t[i].lo, levels[i - 1] * pi2);
    EXPECT_EQ(t[i].lo, t[i].hi);
  }
}

TEST(Enclosures, FileErrors) {
  {
    std::istringstream in("1 2.0 1.0\n");
    EXPECT_THROW(read_enclosures(in), ValidationError);
  }
  {
    std::istringstream in("# nothing\n\n");
    EXPECT_THROW(read_enclosures(in), ParseError);
  }
  {
    std::istringstream in("1 5 6\n2 4 7\n");
    EXPECT_THROW(read_enclosures(in), ValidationError);
  }
  {
    std::istringstream in("1 1 2\n3 4 5\n");
    EXPECT_THROW(read_enclosures(in), ParseError);
  }
  EXPECT_THROW(load_enclosures(data_dir / "no_such_file.enc"), IoError);
}

TEST(Enclosures, WriteReadRoundTrip) {
  const EnclosureTable t = lshape_reference_enclosures();
  std::stringstream io;
  write_enclosures(t, io);
  const EnclosureTable back = read_enclosures(io);
  for (std::size_t i = 1; i <= t.size(); ++i) {
    EXPECT_EQ(back[i].lo, t[i].lo);
    EXPECT_EQ(back[i].hi, t[i].hi);
  }
}

TEST(Enclosures, Inflation) {
  const EnclosureTable t = lshape_reference_enclosures().inflated(1.001);
  EXPECT_NEAR(t[1].lo, 9.63971 / 1.001, 1e-12);
  EXPECT_NEAR(t[1].hi, 9.63973 * 1.001, 1e-12);
  EXPECT_THROW(lshape_reference_enclosures().inflated(0.5), InvalidParameter);
}

TEST(Enclosures, SeparationOnSquare) {
  const Discretization d = assemble(build_unit_square_mesh(32));
  const EigenSolution s = solve_dense(d.stiffness, d.mass, 7);
  const EnclosureTable exact = load_enclosures(data_dir / "square_exact.enc");
  const SeparationCheck c = verify_separation(exact, s, {2, 3});
  EXPECT_TRUE(c.ok);
  EXPECT_GT(c.left_margin, 0.0);
  EXPECT_GT(c.right_margin, 0.0);
  const SeparationCheck first = verify_separation(exact, s, {1, 1});
  EXPECT_EQ(first.left_margin, std::numeric_limits<double>::infinity());
}

TEST(Enclosures, SeparationViolated) {
  const EigenSolution s = fake_solution({10.0, 20.0, 30.0});
  const EnclosureTable t({{9, 10}, {19, 31}, {29, 31}}, EnclosureSource::table);
  EXPECT_FALSE(verify_separation(t, s, {2, 2}).ok);
  EXPECT_TRUE(verify_separation(t, s, {1, 1}).ok);
  EXPECT_THROW(verify_separation(t, s, {3, 3}), InvalidParameter);
}

TEST(Enclosures, TableInvariants) {
  EXPECT_THROW(EnclosureTable({{0.0, 1.0}}, EnclosureSource::table), ValidationError);
  EXPECT_THROW(EnclosureTable({{2.0, 3.0}, {1.0, 4.0}}, EnclosureSource::table), ValidationError);
  EXPECT_THROW(check_cluster({3, 2}), InvalidParameter);
  EXPECT_THROW(check_cluster({0, 2}), InvalidParameter);
}

}  // namespace
