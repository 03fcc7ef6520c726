#include "irssim/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace irssim {

namespace {

std::string quoted_if_needed(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

}  // namespace

std::string format_cell(const ExperimentResult::Cell& cell) {
    if (std::holds_alternative<long long>(cell))
        return std::to_string(std::get<long long>(cell));
    if (std::holds_alternative<double>(cell)) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.9g", std::get<double>(cell));
        return std::string(buf);
    }
    return quoted_if_needed(std::get<std::string>(cell));
}

void emit_csv(const ExperimentResult& result, std::ostream& out) {
    for (size_t i = 0; i < result.columns.size(); ++i) {
        if (i) out << ',';
        out << quoted_if_needed(result.columns[i]);
    }
    out << '\n';
    out << "# experiment=" << result.experiment << " seed=" << result.seed
        << " version=" << kVersion << " config=" << result.config_digest;
    for (const auto& [key, value] : result.metadata)
        out << ' ' << key << '=' << value;
    out << '\n';
    for (const auto& row : result.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << format_cell(row[i]);
        }
        out << '\n';
    }
}

std::string csv_to_string(const ExperimentResult& result) {
    std::ostringstream out;
    emit_csv(result, out);
    return out.str();
}

void write_csv(const ExperimentResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    emit_csv(result, out);
    out.flush();
    if (!out) throw IoError("cannot write output file: " + path);
}

}  // namespace irssim
