#include "tqg/diagnostics_io.hpp"

#include <cstdio>
#include <sstream>

#include "tqg/errors.hpp"

namespace tqg {

namespace {
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}
}  // namespace

std::string DiagnosticsWriter::header(int max_power) {
    std::string h = "step,time,hamiltonian";
    for (int k = 1; k <= max_power; ++k) h += ",cas_b_" + std::to_string(k);
    for (int k = 0; k <= max_power; ++k) h += ",cas_qb_" + std::to_string(k);
    h += ",fp_iters,fp_residual";
    return h;
}

std::string format_diagnostics_row(const DiagnosticsRecord& r) {
    std::string row = std::to_string(r.step) + "," + fmt(r.time) + "," +
                      fmt(r.hamiltonian);
    for (double v : r.casimirs_b) row += "," + fmt(v);
    for (double v : r.casimirs_qb) row += "," + fmt(v);
    row += "," + std::to_string(r.fp_iterations) + "," + fmt(r.fp_residual);
    return row;
}

DiagnosticsWriter::DiagnosticsWriter(const std::string& path, int max_power,
                                     bool append)
    : path_(path), max_power_(max_power) {
    out_.open(path, append ? (std::ios::out | std::ios::app)
                           : (std::ios::out | std::ios::trunc));
    if (!out_) throw io_error("cannot open diagnostics stream: " + path);
    if (!append) {
        out_ << header(max_power) << "\n";
        out_.flush();
    }
}

void DiagnosticsWriter::append(const DiagnosticsRecord& record) {
    if (static_cast<int>(record.casimirs_b.size()) != max_power_ ||
        static_cast<int>(record.casimirs_qb.size()) != max_power_ + 1) {
        throw io_error("diagnostics record arity does not match the header");
    }
    out_ << format_diagnostics_row(record) << "\n";
    out_.flush();
    if (!out_) throw io_error("diagnostics write failed: " + path_);
}

std::vector<DiagnosticsRecord> read_diagnostics(const std::string& path,
                                                int max_power) {
    std::ifstream f(path);
    if (!f) throw io_error("cannot open diagnostics file: " + path);
    std::string line;
    if (!std::getline(f, line)) throw io_error("empty diagnostics file: " + path);
    if (line != DiagnosticsWriter::header(max_power)) {
        throw io_error("diagnostics header mismatch in " + path);
    }
    const std::size_t ncol = 5 + max_power + (max_power + 1);
    std::vector<DiagnosticsRecord> out;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != ncol) {
            throw io_error("diagnostics row has wrong column count in " + path);
        }
        DiagnosticsRecord r;
        std::size_t i = 0;
        r.step = std::stol(cells[i++]);
        r.time = std::stod(cells[i++]);
        r.hamiltonian = std::stod(cells[i++]);
        r.casimirs_b.resize(max_power);
        for (int k = 0; k < max_power; ++k) r.casimirs_b[k] = std::stod(cells[i++]);
        r.casimirs_qb.resize(max_power + 1);
        for (int k = 0; k <= max_power; ++k) r.casimirs_qb[k] = std::stod(cells[i++]);
        r.fp_iterations = std::stoi(cells[i++]);
        r.fp_residual = std::stod(cells[i++]);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace tqg
