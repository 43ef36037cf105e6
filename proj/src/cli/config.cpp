#include <cmath>
#include <fstream>
#include <json.hpp>
#include <string>

#include "stiefel/cli.hpp"
#include "stiefel/errors.hpp"
#include "stiefel/version.hpp"

namespace stiefel::cli {
namespace {

using nlohmann::json;

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InputError(std::string("--") + name + " must be a finite positive number");
  }
}

template <typename T>
json optional_to_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from_json(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

Command command_from_name(const std::string& name) {
  for (Command c : {Command::kSvdSim, Command::kSvdFit, Command::kEigenFit}) {
    if (command_name(c) == name) return c;
  }
  throw InputError("manifest names unknown command '" + name + "'");
}

}  // namespace

std::string command_name(Command c) {
  switch (c) {
    case Command::kSvdSim:
      return "svd-sim";
    case Command::kSvdFit:
      return "svd-fit";
    case Command::kEigenFit:
      return "eigen-fit";
  }
  return "unknown";
}

RunConfig RunConfig::resolved() const {
  RunConfig out = *this;
  switch (command) {
    case Command::kSvdSim:
      break;
    case Command::kSvdFit:
      if (!out.rank) out.rank = 6;
      if (!out.iters) out.iters = 2500;
      if (!out.thin) out.thin = 5;
      if (!out.burn) out.burn = 0;
      break;
    case Command::kEigenFit:
      if (!out.rank) out.rank = 2;
      if (!out.iters) out.iters = 10000;
      if (!out.burn) out.burn = 100;
      if (!out.thin) out.thin = 10;
      break;
  }
  return out;
}

void RunConfig::validate() const {
  if (chains < 1) throw InputError("--chains must be at least 1");
  switch (command) {
    case Command::kSvdSim:
      if (m < 1 || n < 1) throw InputError("--m and --n must be positive");
      if (rank_true < 1) throw InputError("--rank-true must be positive");
      if (rank_true > std::min(m, n)) {
        throw DimensionError("--rank-true " + std::to_string(rank_true) + " exceeds min(m, n) = " +
                             std::to_string(std::min(m, n)));
      }
      return;
    case Command::kSvdFit:
      if (input.empty()) throw InputError("svd-fit requires --input");
      if (rank && *rank < 1) throw InputError("--rank must be positive");
      if (thin && *thin < 1) throw InputError("--thin must be positive");
      if (iters && *iters < 1) throw InputError("--iters must be positive");
      if (burn && *burn != 0) throw InputError("svd-fit does not use --burn");
      if (resolved().iters < resolved().thin) throw InputError("--iters must be at least --thin");
      require_positive(nu0, "nu0");
      require_positive(s20, "s20");
      require_positive(eta0, "eta0");
      require_positive(t20, "t20");
      return;
    case Command::kEigenFit: {
      if (input.empty()) throw InputError("eigen-fit requires --input");
      const RunConfig r = resolved();
      if (*r.rank < 1) throw InputError("--rank must be positive");
      if (*r.thin < 1) throw InputError("--thin must be positive");
      if (*r.burn < 0) throw InputError("--burn must be non-negative");
      if (*r.iters <= *r.burn) throw InputError("--iters must exceed --burn");
      if (*r.iters / *r.thin - *r.burn / *r.thin < 1) {
        throw InputError("no iteration would be saved with these --iters/--burn/--thin");
      }
      if (t2_lambda) require_positive(*t2_lambda, "t2-lambda");
      require_positive(t2_theta, "t2-theta");
      return;
    }
  }
}

std::string manifest_json(const RunConfig& config) {
  json j;
  j["tool"] = "stiefel-mcmc";
  j["version"] = kVersion;
  j["command"] = command_name(config.command);
  j["seed"] = config.seed;
  j["m"] = config.m;
  j["n"] = config.n;
  j["rank_true"] = config.rank_true;
  j["rank"] = optional_to_json(config.rank);
  j["iters"] = optional_to_json(config.iters);
  j["burn"] = optional_to_json(config.burn);
  j["thin"] = optional_to_json(config.thin);
  j["nu0"] = config.nu0;
  j["s20"] = config.s20;
  j["eta0"] = config.eta0;
  j["t20"] = config.t20;
  j["t2_lambda"] = optional_to_json(config.t2_lambda);
  j["t2_theta"] = config.t2_theta;
  j["input"] = config.input.string();
  j["truth"] = config.truth.string();
  j["covariates"] = config.covariates.string();
  j["out_dir"] = config.out_dir.string();
  j["chains"] = config.chains;
  return j.dump(2) + "\n";
}

RunConfig config_from_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
    RunConfig c;
    c.command = command_from_name(j.at("command").get<std::string>());
    c.seed = j.at("seed").get<std::uint64_t>();
    c.m = j.value("m", c.m);
    c.n = j.value("n", c.n);
    c.rank_true = j.value("rank_true", c.rank_true);
    c.rank = optional_from_json<long>(j, "rank");
    c.iters = optional_from_json<long>(j, "iters");
    c.burn = optional_from_json<long>(j, "burn");
    c.thin = optional_from_json<long>(j, "thin");
    c.nu0 = j.value("nu0", c.nu0);
    c.s20 = j.value("s20", c.s20);
    c.eta0 = j.value("eta0", c.eta0);
    c.t20 = j.value("t20", c.t20);
    c.t2_lambda = optional_from_json<double>(j, "t2_lambda");
    c.t2_theta = j.value("t2_theta", c.t2_theta);
    c.input = j.value("input", std::string());
    c.truth = j.value("truth", std::string());
    c.covariates = j.value("covariates", std::string());
    c.out_dir = j.value("out_dir", std::string("."));
    c.chains = j.value("chains", 1);
    return c;
  } catch (const json::exception& e) {
    throw ParseError("manifest '" + path.string() + "': " + e.what());
  }
}

}  // namespace stiefel::cli
