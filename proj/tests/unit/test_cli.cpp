#include <algorithm>
#include <doctest.h>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "stiefel/cli.hpp"
#include "stiefel/csv.hpp"
#include "stiefel/eigenmodel.hpp"

using namespace stiefel;
namespace fs = std::filesystem;

namespace {

int run_cli(std::initializer_list<std::string> args) {
  std::vector<std::string> owned{"stiefel-mcmc"};
  owned.insert(owned.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : owned) argv.push_back(a.c_str());
  return cli::main_entry(static_cast<int>(argv.size()), argv.data());
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "stiefel_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const fs::path& p) {
  const std::string s = slurp(p);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

fs::path network_file(const fs::path& dir, Eigen::Index n) {
  Rng rng(99);
  const auto u = random_uniform_frame(n, 2, rng);
  Vector lambda(2);
  lambda << 8.0, 4.0;
  const auto y = eigen::simulate_network(-1.0, lambda, u, rng);
  const fs::path p = dir / "Y.csv";
  csv::write_matrix(p, y.to_matrix());
  return p;
}

}  // namespace

TEST_CASE("svd-sim writes the data files deterministically") {
  const fs::path a = fresh_dir("sim_a"), b = fresh_dir("sim_b");
  REQUIRE(run_cli({"svd-sim", "--seed", "7", "--out-dir", a.string()}) == cli::kExitOk);
  REQUIRE(run_cli({"svd-sim", "--seed", "7", "--out-dir", b.string()}) == cli::kExitOk);
  const auto y = csv::read_numeric(a / "Y.csv");
  CHECK(y.values.rows() == 60);
  CHECK(y.values.cols() == 40);
  CHECK(csv::read_numeric(a / "d0.csv").values.rows() == 4);
  for (const char* f : {"Y.csv", "M0.csv", "d0.csv"}) {
    CAPTURE(f);
    CHECK(slurp(a / f) == slurp(b / f));
  }
  const fs::path c = fresh_dir("sim_c");
  REQUIRE(run_cli({"svd-sim", "--seed", "8", "--out-dir", c.string()}) == cli::kExitOk);
  CHECK(slurp(a / "Y.csv") != slurp(c / "Y.csv"));
}

TEST_CASE("validation failures exit with code 2") {
  const fs::path d = fresh_dir("bad");
  CHECK(run_cli({"svd-sim", "--rank-true", "0", "--out-dir", d.string()}) == cli::kExitValidation);
  CHECK(run_cli({"svd-sim", "--m", "3", "--n", "2", "--rank-true", "3", "--out-dir", d.string()}) ==
        cli::kExitValidation);
  CHECK(run_cli({"svd-sim", "--bogus"}) == cli::kExitValidation);
  CHECK(run_cli({}) == cli::kExitValidation);
}

TEST_CASE("svd-fit outputs") {
  const fs::path sim = fresh_dir("fit_sim");
  REQUIRE(run_cli({"svd-sim", "--m", "20", "--n", "15", "--rank-true", "2", "--out-dir", sim.string()}) == 0);

  SUBCASE("one saved draw and no truth") {
    const fs::path out = fresh_dir("fit_one");
    REQUIRE(run_cli({"svd-fit", "--input", (sim / "Y.csv").string(), "--rank", "3", "--iters", "5", "--thin", "5",
                     "--out-dir", out.string()}) == 0);
    CHECK(line_count(out / "d_trace.csv") == 2);
    CHECK(slurp(out / "d_trace.csv").rfind("iter,d_1,d_2,d_3\n5,", 0) == 0);
    CHECK(!fs::exists(out / "summary.csv"));
    CHECK(csv::read_numeric(out / "M_post_mean.csv").values.rows() == 20);
    CHECK(csv::read_numeric(out / "M_rankR.csv").values.cols() == 15);
    CHECK(fs::exists(out / "manifest.json"));
  }
  SUBCASE("truth gives a summary") {
    const fs::path out = fresh_dir("fit_truth");
    REQUIRE(run_cli({"svd-fit", "--input", (sim / "Y.csv").string(), "--truth", (sim / "M0.csv").string(),
                     "--rank", "3", "--iters", "50", "--out-dir", out.string()}) == 0);
    const auto s = csv::read_numeric(out / "summary.csv");
    CHECK(s.header == std::vector<std::string>{"mse_mle", "mse_posterior_mean", "mse_rank_r"});
    CHECK(line_count(out / "d_trace.csv") == 11);
  }
  SUBCASE("missing input exits with code 3") {
    const fs::path out = fresh_dir("fit_missing");
    CHECK(run_cli({"svd-fit", "--input", (sim / "nope.csv").string(), "--out-dir", out.string()}) == cli::kExitIo);
  }
  SUBCASE("rank above the data dimension") {
    const fs::path out = fresh_dir("fit_rank");
    CHECK(run_cli({"svd-fit", "--input", (sim / "Y.csv").string(), "--rank", "16", "--iters", "5", "--out-dir",
                   out.string()}) == cli::kExitValidation);
  }
}

TEST_CASE("eigen-fit outputs") {
  const fs::path dir = fresh_dir("eigen");
  const fs::path y = network_file(dir, 50);
  const fs::path out = dir / "out";
  REQUIRE(run_cli({"eigen-fit", "--input", y.string(), "--iters", "300", "--burn", "50", "--thin", "10",
                   "--out-dir", out.string()}) == 0);
  const auto trace = csv::read_numeric(out / "lambda_theta_trace.csv");
  CHECK(trace.header == std::vector<std::string>{"iter", "lambda_1", "lambda_2", "theta"});
  CHECK(trace.values.rows() == 25);
  for (Eigen::Index i = 0; i < trace.values.rows(); ++i) CHECK(trace.values(i, 1) <= trace.values(i, 2));
  const auto pos = csv::read_numeric(out / "positions.csv");
  CHECK(pos.values.rows() == 50);
  CHECK(pos.header.front() == "node");
  CHECK(csv::read_numeric(out / "M_bar.csv").values.rows() == 50);
  CHECK(csv::read_numeric(out / "eigenvalues.csv").values.rows() == 2);
}

TEST_CASE("eigen-fit carries covariates and checks their length") {
  const fs::path dir = fresh_dir("eigen_cov");
  const fs::path y = network_file(dir, 12);
  std::string good = "group\n", bad = "group\n";
  for (int i = 0; i < 12; ++i) good += (i % 2 ? "1\n" : "0\n");
  for (int i = 0; i < 11; ++i) bad += "1\n";
  std::ofstream(dir / "good.csv") << good;
  std::ofstream(dir / "bad.csv") << bad;
  REQUIRE(run_cli({"eigen-fit", "--input", y.string(), "--covariates", (dir / "good.csv").string(), "--iters",
                   "40", "--burn", "0", "--thin", "10", "--out-dir", (dir / "o").string()}) == 0);
  CHECK(csv::read_numeric(dir / "o" / "positions.csv").header.back() == "group");
  CHECK(run_cli({"eigen-fit", "--input", y.string(), "--covariates", (dir / "bad.csv").string(), "--iters", "40",
                 "--out-dir", (dir / "o2").string()}) == cli::kExitValidation);
}

TEST_CASE("manifest replay reproduces a run") {
  const fs::path sim = fresh_dir("replay_sim");
  REQUIRE(run_cli({"svd-sim", "--m", "12", "--n", "10", "--rank-true", "2", "--out-dir", sim.string()}) == 0);
  const fs::path a = fresh_dir("replay_a");
  REQUIRE(run_cli({"svd-fit", "--input", (sim / "Y.csv").string(), "--rank", "3", "--iters", "40", "--seed", "11",
                   "--out-dir", a.string()}) == 0);
  const fs::path b = fresh_dir("replay_b");
  REQUIRE(run_cli({"svd-fit", "--manifest", (a / "manifest.json").string(), "--out-dir", b.string()}) == 0);
  CHECK(slurp(a / "d_trace.csv") == slurp(b / "d_trace.csv"));
  CHECK(slurp(a / "M_post_mean.csv") == slurp(b / "M_post_mean.csv"));

  const auto config = cli::config_from_manifest(a / "manifest.json");
  CHECK(config.seed == 11);
  CHECK(config.rank == 3);
  CHECK(cli::manifest_json(config) == slurp(a / "manifest.json"));
}

TEST_CASE("multiple chains write separate directories") {
  const fs::path sim = fresh_dir("chains_sim");
  REQUIRE(run_cli({"svd-sim", "--m", "12", "--n", "10", "--rank-true", "2", "--out-dir", sim.string()}) == 0);
  const fs::path out = fresh_dir("chains");
  REQUIRE(run_cli({"svd-fit", "--input", (sim / "Y.csv").string(), "--rank", "2", "--iters", "20", "--chains", "3",
                   "--out-dir", out.string()}) == 0);
  for (int k = 1; k <= 3; ++k) CHECK(fs::exists(out / ("chain_" + std::to_string(k)) / "d_trace.csv"));
  CHECK(slurp(out / "chain_1" / "d_trace.csv") != slurp(out / "chain_2" / "d_trace.csv"));
}

TEST_CASE("config defaults and validation") {
  cli::RunConfig c;
  c.command = cli::Command::kSvdFit;
  const auto r = c.resolved();
  CHECK(r.rank == 6);
  CHECK(r.iters == 2500);
  CHECK(r.thin == 5);
  c.command = cli::Command::kEigenFit;
  const auto e = c.resolved();
  CHECK(e.rank == 2);
  CHECK(e.iters == 10000);
  CHECK(e.burn == 100);
  CHECK(e.thin == 10);
  CHECK(cli::command_name(cli::Command::kEigenFit) == "eigen-fit");
}
