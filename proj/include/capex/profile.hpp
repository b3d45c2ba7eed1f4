#pragma once

#include "capex/types.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace capex {

struct ScaleResult {
    Profile profile;
    int clipped_hours = 0; // entries clipped to 1.0 after scaling
};

/// Linearly scales a profile so its mean equals target_mean, then clips
/// values to 1.0. Shape is preserved for unclipped entries. Throws
/// ValidationError on a zero-mean input.
ScaleResult scale_profile(const Profile& p, double target_mean);

/// Reads a CSV file: header row with series names, one row per time step,
/// '.' decimal separator. Returns series in file column order.
std::map<std::string, std::vector<double>> read_csv(const std::filesystem::path& path,
                                                    std::vector<std::string>* column_order = nullptr);

/// Writes series as CSV with a header row; columns in the given order.
void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& columns,
               const std::map<std::string, std::vector<double>>& series);

} // namespace capex
