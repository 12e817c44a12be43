#ifndef NLFV_IO_HPP
#define NLFV_IO_HPP

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "nlfv/analysis.hpp"
#include "nlfv/solver1d.hpp"
#include "nlfv/solver2d.hpp"

namespace nlfv {

// Shortest exact decimal form of a double ("%.17g" after round-trip
// shortening); parsing it back recovers the identical bits, so re-emitting a
// parsed file is byte-identical.
std::string format_double(double value);

// Snapshot of a 1D state: header "x,u1,...,uN", one row per cell with the
// cell center and the unweighted values.
void write_state_csv(const std::filesystem::path& path,
                     const SystemState& state);

// 2D snapshot: header "x,y,u1,...,uN", rows ordered by y then x.
void write_state_csv_2d(const std::filesystem::path& path,
                        const SystemState2D& state);

// Per-step diagnostics series of a run.
void write_diagnostics_csv(const std::filesystem::path& path,
                           const RunResult& result);
void write_diagnostics_csv_2d(const std::filesystem::path& path,
                              const RunResult2D& result);

// Refinement table as CSV "dx,e,alpha" (alpha = nan on the finest row) plus
// a two-column "dx e" log-log data file for plotting.
void write_convergence_csv(const std::filesystem::path& path,
                           const ConvergenceTable& table);
void write_loglog_data(const std::filesystem::path& path,
                       const ConvergenceTable& table);

// Entropy audit summary: CSV "alpha,max_residual".
void write_entropy_csv(const std::filesystem::path& path,
                       const std::vector<std::pair<double, double>>& rows);

// Minimal structured-text sidecar (flat "key: value" lines, emitted in the
// given order).
void write_meta(const std::filesystem::path& path,
                const std::vector<std::pair<std::string, std::string>>& items);

// Parsed numeric CSV with its header line. Cells are re-emitted with
// format_double, so write(read(file)) is byte-identical for files this
// library wrote.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

}  // namespace nlfv

#endif
