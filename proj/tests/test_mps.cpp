#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "qaplp/mps.hpp"
#include "qaplp/simplex.hpp"

using namespace qaplp;

namespace {

SparseModel awkward_numbers() {
  SparseModel m;
  m.name = "AWKWARD";
  m.col_names = {"x", "a_very_long_column_name_1", "z"};
  m.cost = {0.1, 1.0 / 3.0, 0.0};
  m.add_row("R1", RowFamily::Other, 1e-300, {{0, 2.0 / 7.0}, {1, -1e300}});
  m.add_row("F2_1_1_2", RowFamily::F2, 0.0, {{1, std::nextafter(1.0, 2.0)}, {2, 5e-324}});
  m.add_row("F1", RowFamily::F1, 123456789.125, {{0, 1.0}, {2, -0.7}});
  return m;
}

SparseModel round_trip(const SparseModel& m) {
  std::stringstream buf;
  write_mps(buf, m);
  return read_mps(buf);
}

}  // namespace

TEST_CASE("round trip is bit-exact") {
  const auto m = awkward_numbers();
  const auto back = round_trip(m);
  CHECK(back == m);
  CHECK(back.row_family[1] == RowFamily::F2);

  for (int n : {3, 4}) {
    const auto space = build_space(n);
    auto model = build_model(generate_random(n, CostMode::WithOpcost, 77), space);
    model.name = "QAPo" + std::to_string(n) + "7";
    CHECK(round_trip(model) == model);
  }
}

TEST_CASE("field layout") {
  SparseModel m;
  m.name = "TINY";
  m.col_names = {"x1", "x2", "x3"};
  m.cost = {1, 2, 0};
  m.add_row("R1", RowFamily::Other, 1, {{0, 1.0}, {1, 1.0}});
  std::stringstream buf;
  write_mps(buf, m);
  const std::string text = buf.str();
  CHECK(text.find("NAME          TINY\n") == 0);
  CHECK(text.find("\n E  R1\n") != std::string::npos);
  CHECK(text.find("\n    x1        OBJ       1              R1        1\n") != std::string::npos);
  CHECK(text.find("\n    x3        OBJ       0\n") != std::string::npos);
  CHECK(text.find("\n    RHS       R1        1\n") != std::string::npos);
  CHECK(text.rfind("ENDATA\n") == text.size() - 7);

  // A long name pushes the next field right by two spaces.
  std::stringstream longbuf;
  write_mps(longbuf, awkward_numbers());
  CHECK(longbuf.str().find("    a_very_long_column_name_1  OBJ  ") != std::string::npos);
}

TEST_CASE("reader accepts common variants and rejects the rest") {
  std::istringstream variant(
      "* comment\nNAME demo\nROWS\n N cost\n E c1\nCOLUMNS\n"
      "    MARKER 'MARKER' 'INTORG'\n x cost 1 c1 1\n y c1 1\nRHS\n c1 2\nBOUNDS\n LO BND x 0\nENDATA\n");
  const auto m = read_mps(variant);
  CHECK(m.cols() == 2);
  CHECK(m.rhs[0] == 2.0);
  CHECK(m.cost[0] == 1.0);

  std::istringstream inequality("NAME x\nROWS\n N obj\n L c1\nCOLUMNS\nENDATA\n");
  CHECK_THROWS_AS(read_mps(inequality), std::invalid_argument);
  std::istringstream bounded("NAME x\nROWS\n N obj\n E c1\nCOLUMNS\n x c1 1\nRHS\nBOUNDS\n UP BND x 4\nENDATA\n");
  CHECK_THROWS_AS(read_mps(bounded), std::invalid_argument);
  std::istringstream truncated("NAME x\nROWS\n N obj\n");
  CHECK_THROWS_AS(read_mps(truncated), std::invalid_argument);
  std::istringstream badnum("NAME x\nROWS\n N obj\n E c1\nCOLUMNS\n x c1 1.5q\nENDATA\n");
  CHECK_THROWS_AS(read_mps(badnum), std::invalid_argument);
  CHECK_THROWS_AS(import_mps("/nonexistent/dir/file.mps"), std::runtime_error);
}

TEST_CASE("cross check against a supplied objective") {
  const auto dir = std::filesystem::temp_directory_path() / "qaplp_test_mps";
  std::filesystem::create_directories(dir);
  const auto path = dir / "uniform4.mps";
  const auto space = build_space(4);
  export_mps(build_model(make_uniform(4, 50, 10), space), path);

  const auto ok = external_cross_check(path.string(), 6000.0);
  CHECK(ok.internal == doctest::Approx(6000.0).epsilon(1e-12));
  CHECK(ok.abs_diff <= 1e-6);
  CHECK(ok.agree);

  const auto wrong = external_cross_check(path.string(), 5999.0);
  CHECK_FALSE(wrong.agree);
  CHECK(wrong.rel_diff > 1e-6);
  CHECK_THROWS_AS(external_cross_check(path.string(), std::nullopt), std::invalid_argument);
  std::filesystem::remove_all(dir);
}
