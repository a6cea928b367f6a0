#pragma once

#include <string>

#include "CLI11.hpp"
#include "ltscm/cli.hpp"

namespace ltscm::cli {

// Registers every RunConfig field as --<key> and the --config file reader.
void register_options(CLI::App& app, RunConfig& cfg, std::string& command);

}  // namespace ltscm::cli
