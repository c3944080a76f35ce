#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace tdakit {

struct OptionSpec {
    std::string key;  // used as --key on the command line
    std::string help;
    bool flag = false;  // takes no value; present means "true"
};

struct CommandSpec {
    std::string name;
    std::string help;
    std::vector<OptionSpec> options;
};

/// Every subcommand with the options it accepts.
const std::vector<CommandSpec>& command_specs();

struct RunConfig {
    std::string command;
    std::map<std::string, std::string> options;
};

enum ExitCode { kExitOk = 0, kExitRuntime = 1, kExitValidation = 2 };

/// Validates the configuration (unknown keys, missing or malformed values)
/// before doing any work, then runs the subcommand. Results go to files or
/// `out`; errors are reported on `err` prefixed by the failing stage.
int run_pipeline(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace tdakit
