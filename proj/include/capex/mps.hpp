#pragma once

#include "capex/lp.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace capex::lp {

/// Writes the LP as a fixed-format MPS file (ROWS/COLUMNS/RHS/BOUNDS),
/// readable by mainstream solvers. Names must be unique. Throws IoError /
/// ValidationError.
void export_mps(const LinearProgram& lp, const std::vector<std::string>& var_names,
                const std::filesystem::path& path, const std::string& problem_name = "CAPEX");

struct MpsProgram {
    LinearProgram lp;
    std::vector<std::string> var_names;
    std::vector<std::string> row_names;
};

/// Inverse of export_mps. Missing RHS entries default to 0 per MPS
/// convention; unknown sections and malformed senses are errors that carry
/// the offending line number.
MpsProgram import_mps(const std::filesystem::path& path);

} // namespace capex::lp
