#pragma once

#include <string>
#include <vector>

#include "sb/config.hpp"

namespace sbtool {

// Runs one batch command from a validated config.  Returns the process exit
// code (0 ok, 2 certification failure); usage problems throw sb::ConfigError
// and are mapped to exit 1 by the caller.
int run_command(const sb::JobConfig& cfg);

// The regression-store front end.  pin recomputes oracle and implementation
// and rewrites the store; compare checks the implementation against what is
// stored.  list prints the registry and does nothing else.
int run_pin(const std::vector<std::string>& ids, bool all, bool compare_mode,
            bool list, const std::string& store_path);

} // namespace sbtool
