#include "nlfv/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace nlfv {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write to " + path.string() + " failed");
}

}  // namespace

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buffer[40];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buffer, sizeof(buffer), "%.*g", precision, value);
        double back = 0.0;
        std::sscanf(buffer, "%lf", &back);
        if (back == value) return buffer;
    }
    return buffer;
}

void write_state_csv(const std::filesystem::path& path,
                     const SystemState& state) {
    std::ofstream out = open_for_write(path);
    out << "x";
    for (int k = 0; k < state.n_components; ++k) out << ",u" << (k + 1);
    out << "\n";
    for (long i = 0; i < state.grid.n_cells; ++i) {
        out << format_double(state.grid.center(i));
        for (int k = 0; k < state.n_components; ++k) {
            out << ','
                << format_double(
                       state.u[static_cast<size_t>(k)][static_cast<size_t>(i)]);
        }
        out << "\n";
    }
    finish_write(out, path);
}

void write_state_csv_2d(const std::filesystem::path& path,
                        const SystemState2D& state) {
    std::ofstream out = open_for_write(path);
    out << "x,y";
    for (int k = 0; k < state.n_components; ++k) out << ",u" << (k + 1);
    out << "\n";
    for (long jy = 0; jy < state.grid.ny; ++jy) {
        for (long ix = 0; ix < state.grid.nx; ++ix) {
            out << format_double(state.grid.xcenter(ix)) << ','
                << format_double(state.grid.ycenter(jy));
            for (int k = 0; k < state.n_components; ++k) {
                out << ','
                    << format_double(
                           state.u[static_cast<size_t>(k)]
                                  [static_cast<size_t>(jy * state.grid.nx +
                                                       ix)]);
            }
            out << "\n";
        }
    }
    finish_write(out, path);
}

void write_diagnostics_csv(const std::filesystem::path& path,
                           const RunResult& result) {
    std::ofstream out = open_for_write(path);
    const int n = result.state.n_components;
    out << "step,t,dt,min_value";
    for (int k = 0; k < n; ++k) out << ",l1_u" << (k + 1);
    for (int k = 0; k < n; ++k) out << ",linf_w" << (k + 1);
    for (int k = 0; k < n; ++k) out << ",tv_w" << (k + 1);
    out << ",increment_l1";
    out << "\n";
    for (size_t idx = 0; idx < result.series.size(); ++idx) {
        const StepDiagnostics& diag = result.series[idx];
        out << idx << ',' << format_double(diag.t) << ','
            << format_double(diag.dt) << ',' << format_double(diag.min_value);
        for (int k = 0; k < n; ++k)
            out << ',' << format_double(diag.l1[static_cast<size_t>(k)]);
        for (int k = 0; k < n; ++k)
            out << ','
                << format_double(diag.linf_ubar[static_cast<size_t>(k)]);
        for (int k = 0; k < n; ++k)
            out << ','
                << format_double(diag.tv_ubar[static_cast<size_t>(k)]);
        out << ',' << format_double(diag.time_increment_l1);
        out << "\n";
    }
    finish_write(out, path);
}

void write_diagnostics_csv_2d(const std::filesystem::path& path,
                              const RunResult2D& result) {
    std::ofstream out = open_for_write(path);
    const int n = result.state.n_components;
    out << "step,t,dt,min_value";
    for (int k = 0; k < n; ++k) out << ",l1_u" << (k + 1);
    for (int k = 0; k < n; ++k) out << ",linf_u" << (k + 1);
    out << "\n";
    for (size_t idx = 0; idx < result.series.size(); ++idx) {
        const StepDiagnostics2D& diag = result.series[idx];
        out << idx << ',' << format_double(diag.t) << ','
            << format_double(diag.dt) << ',' << format_double(diag.min_value);
        for (int k = 0; k < n; ++k)
            out << ',' << format_double(diag.l1[static_cast<size_t>(k)]);
        for (int k = 0; k < n; ++k)
            out << ',' << format_double(diag.linf[static_cast<size_t>(k)]);
        out << "\n";
    }
    finish_write(out, path);
}

void write_convergence_csv(const std::filesystem::path& path,
                           const ConvergenceTable& table) {
    std::ofstream out = open_for_write(path);
    out << "dx,e,alpha\n";
    for (const ConvergenceRow& row : table.rows) {
        out << format_double(row.dx) << ',' << format_double(row.error) << ','
            << format_double(row.rate) << "\n";
    }
    finish_write(out, path);
}

void write_loglog_data(const std::filesystem::path& path,
                       const ConvergenceTable& table) {
    std::ofstream out = open_for_write(path);
    for (const ConvergenceRow& row : table.rows)
        out << format_double(row.dx) << ' ' << format_double(row.error)
            << "\n";
    finish_write(out, path);
}

void write_entropy_csv(const std::filesystem::path& path,
                       const std::vector<std::pair<double, double>>& rows) {
    std::ofstream out = open_for_write(path);
    out << "alpha,max_residual\n";
    for (const auto& [alpha, residual] : rows)
        out << format_double(alpha) << ',' << format_double(residual) << "\n";
    finish_write(out, path);
}

void write_meta(
    const std::filesystem::path& path,
    const std::vector<std::pair<std::string, std::string>>& items) {
    std::ofstream out = open_for_write(path);
    for (const auto& [key, value] : items) out << key << ": " << value << "\n";
    finish_write(out, path);
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    CsvTable table;
    std::string line;
    if (!std::getline(in, line))
        throw IoError(path.string() + " is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    {
        std::stringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ','))
            table.header.push_back(field);
    }
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ',')) {
            double value = 0.0;
            if (field == "nan") {
                value = std::numeric_limits<double>::quiet_NaN();
            } else if (field == "inf") {
                value = std::numeric_limits<double>::infinity();
            } else if (field == "-inf") {
                value = -std::numeric_limits<double>::infinity();
            } else {
                const char* first = field.data();
                const char* last = first + field.size();
                auto [ptr, ec] = std::from_chars(first, last, value);
                if (ec != std::errc() || ptr != last)
                    throw IoError(path.string() + ":" +
                                  std::to_string(line_no) +
                                  ": cannot parse number '" + field + "'");
            }
            row.push_back(value);
        }
        if (row.size() != table.header.size())
            throw IoError(path.string() + ":" + std::to_string(line_no) +
                          ": expected " +
                          std::to_string(table.header.size()) +
                          " fields, found " + std::to_string(row.size()));
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    std::ofstream out = open_for_write(path);
    for (size_t i = 0; i < table.header.size(); ++i) {
        if (i > 0) out << ',';
        out << table.header[i];
    }
    out << "\n";
    for (const std::vector<double>& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out << ',';
            out << format_double(row[i]);
        }
        out << "\n";
    }
    finish_write(out, path);
}

}  // namespace nlfv
