#include <CLI11.hpp>
#include <exception>
#include <filesystem>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "logging.hpp"
#include "stiefel/cli.hpp"
#include "stiefel/csv.hpp"
#include "stiefel/eigenmodel.hpp"
#include "stiefel/errors.hpp"
#include "stiefel/rng.hpp"
#include "stiefel/simd.hpp"
#include "stiefel/svd_model.hpp"
#include "stiefel/version.hpp"

namespace stiefel::cli {
namespace fs = std::filesystem;
namespace {

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  }
}

void require_file(const fs::path& path, const char* what) {
  if (!fs::is_regular_file(path)) {
    throw IoError(std::string(what) + " file '" + path.string() + "' does not exist");
  }
}

std::vector<std::string> numbered(const std::string& prefix, Eigen::Index count) {
  std::vector<std::string> out;
  for (Eigen::Index k = 1; k <= count; ++k) out.push_back(prefix + std::to_string(k));
  return out;
}

// Trace rows: the iteration number followed by the row of `values`, then any
// extra column.
std::vector<std::vector<std::string>> trace_rows(const std::vector<long>& iterations, const Matrix& values,
                                                 const Vector* extra = nullptr) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(iterations.size());
  for (std::size_t s = 0; s < iterations.size(); ++s) {
    const auto i = static_cast<Eigen::Index>(s);
    std::vector<std::string> row{std::to_string(iterations[s])};
    for (Eigen::Index j = 0; j < values.cols(); ++j) row.push_back(csv::format_double(values(i, j)));
    if (extra) row.push_back(csv::format_double((*extra)(i)));
    rows.push_back(std::move(row));
  }
  return rows;
}

// Runs `body(chain_index, chain_dir, rng)` for every chain. One chain writes
// straight into out_dir; several chains run on their own threads and write
// to out_dir/chain_<k>.
void run_chains(const RunConfig& config, const std::function<void(int, const fs::path&, Rng&)>& body) {
  const Rng root(config.seed);
  if (config.chains == 1) {
    Rng rng = root.split("chain-1");
    body(1, config.out_dir, rng);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(config.chains));
  std::vector<std::thread> workers;
  for (int k = 1; k <= config.chains; ++k) {
    const fs::path dir = config.out_dir / ("chain_" + std::to_string(k));
    prepare_dir(dir);
    workers.emplace_back([&, k, dir] {
      try {
        Rng rng = root.split("chain-" + std::to_string(k));
        body(k, dir, rng);
      } catch (...) {
        errors[static_cast<std::size_t>(k - 1)] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

template <typename State>
std::function<void(long, const State&)> progress(int chain, long iters) {
  const long step = std::max(1L, iters / 10);
  return [chain, iters, step](long s, const State&) {
    if (s % step == 0 || s == iters) log().info("chain {}: iteration {}/{}", chain, s, iters);
  };
}

}  // namespace

void cmd_svd_sim(const RunConfig& input_config) {
  const RunConfig config = input_config.resolved();
  config.validate();
  prepare_dir(config.out_dir);
  Rng rng = Rng(config.seed).split("svd-sim");
  const svd::SimulatedData data = svd::simulate_dataset(config.m, config.n, config.rank_true, rng);
  csv::write_matrix(config.out_dir / "Y.csv", data.y);
  csv::write_matrix(config.out_dir / "M0.csv", data.m0);
  csv::write_matrix(config.out_dir / "d0.csv", data.truth.d, {"d0"});
  csv::write_text(config.out_dir / "manifest.json", manifest_json(input_config));
  log().info("svd-sim: wrote {}x{} data with rank {} to {}", config.m, config.n, config.rank_true,
             config.out_dir.string());
}

void cmd_svd_fit(const RunConfig& input_config) {
  const RunConfig config = input_config.resolved();
  config.validate();
  require_file(config.input, "input");
  if (!config.truth.empty()) require_file(config.truth, "truth");
  prepare_dir(config.out_dir);

  const Matrix y = csv::read_numeric(config.input).values;
  if (!y.allFinite()) throw InputError("svd-fit: input '" + config.input.string() + "' has missing or non-finite entries");
  const Eigen::Index r = *config.rank;
  if (r > std::min(y.rows(), y.cols())) {
    throw DimensionError("svd-fit: --rank " + std::to_string(r) + " exceeds min(m, n) = " +
                         std::to_string(std::min(y.rows(), y.cols())));
  }
  std::optional<Matrix> truth;
  if (!config.truth.empty()) {
    truth = csv::read_numeric(config.truth).values;
    if (truth->rows() != y.rows() || truth->cols() != y.cols()) {
      throw DimensionError("svd-fit: truth matrix is " + std::to_string(truth->rows()) + "x" +
                           std::to_string(truth->cols()) + " but the data are " + std::to_string(y.rows()) +
                           "x" + std::to_string(y.cols()));
    }
  }
  const svd::HyperParams hyper{config.nu0, config.s20, config.eta0, config.t20};
  log().info("svd-fit: {}x{} data, rank {}, {} iterations, thin {}, {} kernels", y.rows(), y.cols(), r,
             *config.iters, *config.thin, simd::active_kernels().name);

  run_chains(config, [&](int chain, const fs::path& dir, Rng& rng) {
    const svd::GibbsResult result = svd::run_gibbs(y, r, hyper, *config.iters, *config.thin, rng,
                                                   progress<svd::ModelState>(chain, *config.iters));
    csv::write_rows(dir / "d_trace.csv", [&] {
      auto h = numbered("d_", r);
      h.insert(h.begin(), "iter");
      return h;
    }(), trace_rows(result.saved_iterations, result.d_trace));

    const Vector d_post = svd::posterior_mean_d(result);
    std::vector<std::vector<std::string>> summary_rows;
    for (Eigen::Index j = 0; j < r; ++j) {
      summary_rows.push_back({std::to_string(j + 1), csv::format_double(result.mle.d(j)),
                              csv::format_double(d_post(j))});
    }
    csv::write_rows(dir / "d_summary.csv", {"j", "d_mle", "d_post_mean"}, summary_rows);

    const Matrix m_rank = svd::rank_r_approximation(result.posterior_mean, r);
    csv::write_matrix(dir / "M_post_mean.csv", result.posterior_mean);
    csv::write_matrix(dir / "M_rankR.csv", m_rank);
    if (truth) {
      const Matrix m_mle = result.mle.mean_matrix();
      csv::write_rows(dir / "summary.csv", {"mse_mle", "mse_posterior_mean", "mse_rank_r"},
                      {{csv::format_double(mean_squared_error(*truth, m_mle)),
                        csv::format_double(mean_squared_error(*truth, result.posterior_mean)),
                        csv::format_double(mean_squared_error(*truth, m_rank))}});
    }
  });
  csv::write_text(config.out_dir / "manifest.json", manifest_json(input_config));
}

void cmd_eigen_fit(const RunConfig& input_config) {
  const RunConfig config = input_config.resolved();
  config.validate();
  require_file(config.input, "input");
  if (!config.covariates.empty()) require_file(config.covariates, "covariates");
  prepare_dir(config.out_dir);

  const SymmetricBinaryNetwork y = csv::parse_adjacency(config.input);
  std::optional<NodeCovariates> covariates;
  if (!config.covariates.empty()) covariates = csv::parse_covariates(config.covariates, y.size());

  eigen::HyperParams hyper = eigen::HyperParams::defaults_for(y.size());
  if (config.t2_lambda) hyper.t2_lambda = *config.t2_lambda;
  hyper.t2_theta = config.t2_theta;
  hyper.rank = *config.rank;
  hyper.validate(y.size());
  log().info("eigen-fit: n = {}, rank {}, {} iterations, burn {}, thin {}", y.size(), hyper.rank,
             *config.iters, *config.burn, *config.thin);

  run_chains(config, [&](int chain, const fs::path& dir, Rng& rng) {
    const eigen::GibbsResult result = eigen::run_gibbs(y, hyper, *config.iters, *config.burn, *config.thin,
                                                       rng, progress<eigen::ModelState>(chain, *config.iters));
    auto header = numbered("lambda_", hyper.rank);
    header.insert(header.begin(), "iter");
    header.push_back("theta");
    csv::write_rows(dir / "lambda_theta_trace.csv", header,
                    trace_rows(result.saved_iterations, result.lambda_trace, &result.theta_trace));
    csv::write_matrix(dir / "M_bar.csv", result.m_bar);

    const eigen::LatentPositions pos = eigen::latent_positions(result.m_bar, hyper.rank);
    const Matrix scaled = pos.scaled();
    std::vector<std::string> pos_header{"node"};
    for (const auto& h : numbered("u_", hyper.rank)) pos_header.push_back(h);
    for (const auto& h : numbered("x_", hyper.rank)) pos_header.push_back(h);
    if (covariates) {
      for (const auto& name : covariates->names) pos_header.push_back(name);
    }
    std::vector<std::vector<std::string>> rows;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      std::vector<std::string> row{std::to_string(i + 1)};
      for (Eigen::Index k = 0; k < hyper.rank; ++k) row.push_back(csv::format_double(pos.positions(i, k)));
      for (Eigen::Index k = 0; k < hyper.rank; ++k) row.push_back(csv::format_double(scaled(i, k)));
      if (covariates) {
        for (Eigen::Index c = 0; c < covariates->values.cols(); ++c) {
          row.push_back(csv::format_double(covariates->values(i, c)));
        }
      }
      rows.push_back(std::move(row));
    }
    csv::write_rows(dir / "positions.csv", pos_header, rows);

    std::vector<std::vector<std::string>> eig_rows;
    for (Eigen::Index k = 0; k < hyper.rank; ++k) {
      eig_rows.push_back({std::to_string(k + 1), csv::format_double(pos.eigenvalues(k))});
    }
    csv::write_rows(dir / "eigenvalues.csv", {"k", "eigenvalue"}, eig_rows);
  });
  csv::write_text(config.out_dir / "manifest.json", manifest_json(input_config));
}

void run(const RunConfig& config) {
  switch (config.command) {
    case Command::kSvdSim:
      return cmd_svd_sim(config);
    case Command::kSvdFit:
      return cmd_svd_fit(config);
    case Command::kEigenFit:
      return cmd_eigen_fit(config);
  }
}

int main_entry(int argc, const char* const* argv) {
  CLI::App app{"Stiefel-manifold MCMC: model-based SVD and probit eigenmodel samplers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  RunConfig parsed;
  std::string manifest;
  long rank = 0, iters = 0, burn = 0, thin = 0;
  double t2_lambda = 0.0;
  std::string input, truth, covariates, out_dir = ".";

  // Options remembered so that flags given alongside --manifest override it.
  struct Binding {
    CLI::Option* option;
    std::function<void(RunConfig&)> apply;
  };
  std::vector<Binding> bindings;
  auto bind = [&bindings](CLI::Option* opt, std::function<void(RunConfig&)> apply) {
    bindings.push_back({opt, std::move(apply)});
  };

  auto add_common = [&](CLI::App* sub) {
    bind(sub->add_option("--seed", parsed.seed, "64-bit random seed")->default_val(1),
         [&](RunConfig& c) { c.seed = parsed.seed; });
    bind(sub->add_option("--out-dir", out_dir, "output directory (created if absent)")->default_val("."),
         [&](RunConfig& c) { c.out_dir = out_dir; });
    sub->add_option("--manifest", manifest, "replay the run described by a manifest.json");
  };
  auto add_chains = [&](CLI::App* sub) {
    bind(sub->add_option("--chains", parsed.chains, "independent chains, run in parallel")
             ->default_val(1)
             ->check(CLI::PositiveNumber),
         [&](RunConfig& c) { c.chains = parsed.chains; });
  };
  auto add_mcmc = [&](CLI::App* sub, const char* rank_help, const char* iters_help, const char* thin_help) {
    bind(sub->add_option("--input", input, "input CSV"), [&](RunConfig& c) { c.input = input; });
    bind(sub->add_option("--rank", rank, rank_help), [&](RunConfig& c) { c.rank = rank; });
    bind(sub->add_option("--iters", iters, iters_help), [&](RunConfig& c) { c.iters = iters; });
    bind(sub->add_option("--thin", thin, thin_help), [&](RunConfig& c) { c.thin = thin; });
  };

  CLI::App* sim = app.add_subcommand("svd-sim", "simulate Y = U0 D0 V0^T + noise");
  bind(sim->add_option("--m", parsed.m, "rows")->default_val(60), [&](RunConfig& c) { c.m = parsed.m; });
  bind(sim->add_option("--n", parsed.n, "columns")->default_val(40), [&](RunConfig& c) { c.n = parsed.n; });
  bind(sim->add_option("--rank-true", parsed.rank_true, "rank of the true mean")->default_val(4),
       [&](RunConfig& c) { c.rank_true = parsed.rank_true; });
  add_common(sim);

  CLI::App* svd_fit = app.add_subcommand("svd-fit", "Gibbs sampler for the reduced-rank SVD model");
  add_mcmc(svd_fit, "model rank R (default 6)", "iterations (default 2500)", "save every thin-th iteration (default 5)");
  bind(svd_fit->add_option("--truth", truth, "true mean matrix (M0.csv) for the MSE summary"),
       [&](RunConfig& c) { c.truth = truth; });
  bind(svd_fit->add_option("--nu0", parsed.nu0, "prior sample size for sigma^2")->default_val(1.0),
       [&](RunConfig& c) { c.nu0 = parsed.nu0; });
  bind(svd_fit->add_option("--s20", parsed.s20, "prior guess of sigma^2")->default_val(1.0),
       [&](RunConfig& c) { c.s20 = parsed.s20; });
  bind(svd_fit->add_option("--eta0", parsed.eta0, "prior sample size for tau^2")->default_val(1.0),
       [&](RunConfig& c) { c.eta0 = parsed.eta0; });
  bind(svd_fit->add_option("--t20", parsed.t20, "prior guess of tau^2")->default_val(1.0),
       [&](RunConfig& c) { c.t20 = parsed.t20; });
  add_common(svd_fit);
  add_chains(svd_fit);

  CLI::App* eigen_fit = app.add_subcommand("eigen-fit", "probit eigenmodel Gibbs sampler for a symmetric network");
  add_mcmc(eigen_fit, "latent dimension R (default 2)", "iterations (default 10000)",
           "after burn-in, save iterations that are multiples of thin (default 10)");
  bind(eigen_fit->add_option("--burn", burn, "iterations discarded before saving (default 100)"),
       [&](RunConfig& c) { c.burn = burn; });
  bind(eigen_fit->add_option("--covariates", covariates, "node covariates CSV, copied into positions.csv"),
       [&](RunConfig& c) { c.covariates = covariates; });
  bind(eigen_fit->add_option("--t2-lambda", t2_lambda, "prior variance of lambda (default: node count)"),
       [&](RunConfig& c) { c.t2_lambda = t2_lambda; });
  bind(eigen_fit->add_option("--t2-theta", parsed.t2_theta, "prior variance of theta")->default_val(100.0),
       [&](RunConfig& c) { c.t2_theta = parsed.t2_theta; });
  add_common(eigen_fit);
  add_chains(eigen_fit);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    RunConfig config;
    if (!manifest.empty()) {
      config = config_from_manifest(manifest);
    }
    if (sim->parsed()) config.command = Command::kSvdSim;
    if (svd_fit->parsed()) config.command = Command::kSvdFit;
    if (eigen_fit->parsed()) config.command = Command::kEigenFit;
    if (!manifest.empty() && config.command != config_from_manifest(manifest).command) {
      throw InputError("manifest '" + manifest + "' describes a different command");
    }
    for (const auto& b : bindings) {
      const bool given = b.option->count() > 0;
      if (given || manifest.empty()) {
        // Without a manifest every bound option applies, including defaults,
        // except optionals that were not given.
        if (given || b.option->get_default_str().size() > 0) b.apply(config);
      }
    }
    run(config);
    return kExitOk;
  } catch (const IoError& e) {
    log().error("{}", e.what());
    return kExitIo;
  } catch (const Error& e) {
    log().error("{}", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    log().error("internal error: {}", e.what());
    return kExitInternal;
  }
}

}  // namespace stiefel::cli
