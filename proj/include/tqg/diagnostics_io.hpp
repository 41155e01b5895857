#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "tqg/tqg_system.hpp"

namespace tqg {

/// CSV stream for diagnostics records. Header row:
///   step,time,hamiltonian,cas_b_1..cas_b_K,cas_qb_0..cas_qb_K,fp_iters,fp_residual
/// Values are written with 17 significant digits so a re-read reproduces the
/// doubles exactly; every row is flushed.
class DiagnosticsWriter {
public:
    /// Opens `path` and writes the header (truncating), or appends without a
    /// header when `append` is set.
    DiagnosticsWriter(const std::string& path, int max_power, bool append = false);

    void append(const DiagnosticsRecord& record);
    static std::string header(int max_power);

private:
    std::ofstream out_;
    std::string path_;
    int max_power_;
};

/// Parses a diagnostics CSV back into records (validates the header).
std::vector<DiagnosticsRecord> read_diagnostics(const std::string& path,
                                                int max_power);

/// One formatted row (no newline), shared by writer and tests.
std::string format_diagnostics_row(const DiagnosticsRecord& record);

}  // namespace tqg
