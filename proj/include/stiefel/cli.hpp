#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace stiefel::cli {

enum class Command { kSvdSim, kSvdFit, kEigenFit };

std::string command_name(Command c);

/// Everything a run depends on. Unset optionals take the per-command
/// defaults from resolved().
struct RunConfig {
  Command command = Command::kSvdSim;
  long m = 60;
  long n = 40;
  long rank_true = 4;
  std::optional<long> rank;
  std::optional<long> iters;
  std::optional<long> burn;
  std::optional<long> thin;
  double nu0 = 1.0;
  double s20 = 1.0;
  double eta0 = 1.0;
  double t20 = 1.0;
  std::optional<double> t2_lambda;
  double t2_theta = 100.0;
  std::uint64_t seed = 1;
  std::filesystem::path input;
  std::filesystem::path truth;
  std::filesystem::path covariates;
  std::filesystem::path out_dir = ".";
  int chains = 1;

  /// Copy with the command's defaults filled in: svd-fit uses rank 6,
  /// 2500 iterations and thin 5; eigen-fit uses rank 2, 10000 iterations,
  /// burn 100 and thin 10. τ²_λ defaults to the node count and is resolved
  /// when the network is read.
  RunConfig resolved() const;

  /// Throws InputError / DimensionError for values that cannot describe a
  /// run (non-positive counts, rank above a dimension, bad hyperparameters).
  void validate() const;
};

/// JSON manifest written next to every run's outputs. Feeding it back
/// through config_from_manifest() reproduces the run.
std::string manifest_json(const RunConfig& config);
RunConfig config_from_manifest(const std::filesystem::path& path);

/// svd-sim: writes Y.csv, M0.csv, d0.csv and manifest.json.
void cmd_svd_sim(const RunConfig& config);
/// svd-fit: writes d_trace.csv, d_summary.csv, M_post_mean.csv,
/// M_rankR.csv, manifest.json and, when a truth matrix is given, summary.csv.
void cmd_svd_fit(const RunConfig& config);
/// eigen-fit: writes lambda_theta_trace.csv, M_bar.csv, positions.csv,
/// eigenvalues.csv and manifest.json.
void cmd_eigen_fit(const RunConfig& config);

void run(const RunConfig& config);

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitInternal = 1;

/// Parses arguments, runs the command and maps errors to exit codes.
int main_entry(int argc, const char* const* argv);

}  // namespace stiefel::cli
