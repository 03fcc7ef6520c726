#pragma once

#include <ostream>
#include <string>

#include "irssim/experiments.hpp"

namespace irssim {

// 9 significant digits, C locale, no trailing noise; integers and strings
// pass through. Strings containing a comma or quote get RFC-4180 quoting.
std::string format_cell(const ExperimentResult::Cell& cell);

// Layout: header row, then one '#' metadata line (experiment, seed, version,
// config digest, any extra pairs), then the data rows. Byte-stable for a
// given result.
void emit_csv(const ExperimentResult& result, std::ostream& out);

// Throws IoError when the file cannot be written.
void write_csv(const ExperimentResult& result, const std::string& path);

std::string csv_to_string(const ExperimentResult& result);

}  // namespace irssim
