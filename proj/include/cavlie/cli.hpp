// cli.hpp — analysis commands behind the command-line front end.
#pragma once

#include "cavlie/report.hpp"

namespace cavlie::cli {

Json cmd_analyze(const AnalysisConfig& config);
Json cmd_verify_identities(const AnalysisConfig& config);
Json cmd_complementarity(const AnalysisConfig& config);
Json cmd_synthesize(const AnalysisConfig& config);

// Full front end: subcommand dispatch, config file handling, report output.
// Exit codes: 0 completed (verdicts may be negative), 1 configuration error,
// 2 numeric precondition violation, 3 identity-suite residual failure.
int run_main(int argc, char** argv);

}  // namespace cavlie::cli
