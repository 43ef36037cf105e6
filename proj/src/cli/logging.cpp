#include "logging.hpp"

#include <cstdlib>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <string>

namespace stiefel::cli {
namespace {

std::shared_ptr<spdlog::logger> make_logger() {
  auto logger = spdlog::stderr_color_mt("stiefel-mcmc");
  logger->set_pattern("[%l] %v");
  auto level = spdlog::level::warn;
  if (const char* env = std::getenv("STIEFEL_MCMC_LOG"); env != nullptr && *env) {
    level = spdlog::level::from_str(env);
  }
  logger->set_level(level);
  return logger;
}

}  // namespace

spdlog::logger& log() {
  static const std::shared_ptr<spdlog::logger> logger = make_logger();
  return *logger;
}

}  // namespace stiefel::cli
