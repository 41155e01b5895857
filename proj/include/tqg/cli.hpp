#pragma once

namespace tqg {

/// Command-line entry point; returns the process exit code.
/// Subcommands: init, run, resume, export-grid, diagnose, verify.
int cli(int argc, const char* const* argv);

}  // namespace tqg
