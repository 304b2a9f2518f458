#pragma once

#include <exception>
#include <filesystem>

namespace invmerton::cli {

enum ExitCode : int { Success = 0, DomainFail = 1, ConfigError = 2, NumericalError = 3 };

struct CommandOptions {
    std::filesystem::path config;
    std::filesystem::path out = ".";
    bool force = false;
};

int cmd_det_recover(const CommandOptions& opt);
int cmd_black_check(const CommandOptions& opt);
int cmd_recover(const CommandOptions& opt);
int cmd_simulate(const CommandOptions& opt);
int cmd_budget(const CommandOptions& opt);
/// Writes every fixture config into opt.out.
int cmd_examples(const CommandOptions& opt);

/// Exit code for an exception escaping a command.
int exit_code_for(const std::exception& e);

/// Parses argv and dispatches; diagnostics go to stderr.
int run(int argc, char** argv);

}  // namespace invmerton::cli
