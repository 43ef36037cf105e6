#include <charconv>
#include <cmath>
#include <cstring>
#include <doctest.h>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "stiefel/csv.hpp"
#include "stiefel/errors.hpp"

using namespace stiefel;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "stiefel_csv_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("format_double round-trips exactly") {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<std::uint64_t> bits;
  int checked = 0;
  while (checked < 20000) {
    const std::uint64_t b = bits(gen);
    double x;
    std::memcpy(&x, &b, sizeof x);
    if (!std::isfinite(x)) continue;
    const std::string s = csv::format_double(x);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    REQUIRE(back == x);
    ++checked;
  }
  CHECK(csv::format_double(0.1) == "0.1");
  CHECK(csv::format_double(3.0) == "3");
  CHECK(csv::format_double(std::numeric_limits<double>::quiet_NaN()) == "NA");
}

TEST_CASE("numeric tables with and without header") {
  const auto with = csv::read_numeric(scratch("h.csv", "a,b\n1,2\nNA,4.5\n"));
  CHECK(with.header == std::vector<std::string>{"a", "b"});
  CHECK(with.values.rows() == 2);
  CHECK(std::isnan(with.values(1, 0)));
  CHECK(with.values(1, 1) == 4.5);

  const auto without = csv::read_numeric(scratch("n.csv", "1,2\n3,\n"));
  CHECK(without.header.empty());
  CHECK(without.values.rows() == 2);
  CHECK(std::isnan(without.values(1, 1)));
}

TEST_CASE("written matrices read back identically") {
  Matrix m(2, 3);
  m << 0.1, -2.5e-300, 1.0 / 3.0, std::numeric_limits<double>::quiet_NaN(), 1e300, 7;
  const fs::path p = fs::temp_directory_path() / "stiefel_csv_test" / "w.csv";
  csv::write_matrix(p, m, {"x", "y", "z"});
  const auto t = csv::read_numeric(p);
  CHECK(t.header == std::vector<std::string>{"x", "y", "z"});
  CHECK(std::isnan(t.values(1, 0)));
  for (int j = 0; j < 3; ++j) CHECK(t.values(0, j) == m(0, j));
  CHECK(t.values(1, 2) == 7.0);
  CHECK(slurp(p).rfind("x,y,z\n0.1,", 0) == 0);
}

TEST_CASE("malformed tables") {
  const auto ragged = scratch("r.csv", "1,2\n3\n");
  CHECK_THROWS_AS(csv::read_numeric(ragged), ParseError);
  CHECK(error_of([&] { csv::read_numeric(ragged); }).find("line 2") != std::string::npos);
  CHECK_THROWS_AS(csv::read_numeric(scratch("t.csv", "1,2\n3,x\n")), ParseError);
  CHECK_THROWS_AS(csv::read_numeric(scratch("e.csv", "")), ParseError);
  CHECK_THROWS_AS(csv::read_numeric("/nonexistent/dir/file.csv"), IoError);
}

TEST_CASE("adjacency parsing") {
  SUBCASE("diagonal is ignored and NA is missing") {
    const auto y = csv::parse_adjacency(scratch("a.csv", "9,1,0\n1,x,NA\n0,NA,NA\n"));
    CHECK(y.size() == 3);
    CHECK(y.at(0, 1) == Edge::kPresent);
    CHECK(y.at(0, 2) == Edge::kAbsent);
    CHECK(y.at(1, 2) == Edge::kMissing);
    CHECK(y.at(1, 1) == Edge::kMissing);
    CHECK(y.observed_dyads() == 2);
    CHECK(y.observed_density() == 0.5);
  }
  SUBCASE("non-binary entry names its cell") {
    const auto p = scratch("b.csv", "0,1,0\n1,0,2\n0,1,0\n");
    CHECK_THROWS_AS(csv::parse_adjacency(p), ParseError);
    const std::string msg = error_of([&] { csv::parse_adjacency(p); });
    CHECK(msg.find("line 2, column 3") != std::string::npos);
    CHECK(msg.find("'2'") != std::string::npos);
  }
  SUBCASE("asymmetry names the first dyad") {
    const auto p = scratch("c.csv", "0,1,0\n0,0,1\n1,1,0\n");
    CHECK_THROWS_AS(csv::parse_adjacency(p), InputError);
    CHECK(error_of([&] { csv::parse_adjacency(p); }).find("(1,2)") != std::string::npos);
  }
  SUBCASE("non-square") {
    CHECK_THROWS_AS(csv::parse_adjacency(scratch("d.csv", "0,1,0\n1,0,1\n")), ParseError);
  }
}

TEST_CASE("covariates") {
  const auto p = scratch("x.csv", "1,0\n0,NA\n1,1\n");
  const auto cov = csv::parse_covariates(p, 3);
  CHECK(cov.names == std::vector<std::string>{"x1", "x2"});
  CHECK(std::isnan(cov.values(1, 1)));
  CHECK_THROWS_AS(csv::parse_covariates(p, 4), InputError);
  const auto named = csv::parse_covariates(scratch("y.csv", "male,old\n1,0\n"));
  CHECK(named.names == std::vector<std::string>{"male", "old"});
  CHECK_THROWS_AS(csv::parse_covariates(scratch("z.csv", "0.5\n")), ParseError);
}

TEST_CASE("write_rows checks field counts") {
  const fs::path p = fs::temp_directory_path() / "stiefel_csv_test" / "rows.csv";
  csv::write_rows(p, {"a", "b"}, {{"1", "2"}, {"3", "NA"}});
  CHECK(slurp(p) == "a,b\n1,2\n3,NA\n");
  CHECK_THROWS(csv::write_rows(p, {"a", "b"}, {{"1"}}));
  CHECK_THROWS_AS(csv::write_text("/nonexistent/dir/out.txt", "x"), IoError);
}
