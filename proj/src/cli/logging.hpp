#pragma once

#include <spdlog/spdlog.h>

namespace stiefel::cli {

/// stderr logger; level from STIEFEL_MCMC_LOG (trace, debug, info, warn,
/// error, critical, off). Defaults to warn.
spdlog::logger& log();

}  // namespace stiefel::cli
