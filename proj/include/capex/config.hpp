#pragma once

#include "capex/types.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace capex {

// Minimal TOML-style config reader: [table] headers, [[array-of-table]]
// headers, key = value lines with strings, numbers and booleans, and #
// comments. Enough for the system config format; not a full TOML parser.
namespace toml {

using Scalar = std::variant<double, bool, std::string>;
using Table = std::map<std::string, Scalar>;

struct Document {
    std::map<std::string, Table> tables;
    std::map<std::string, std::vector<Table>> table_arrays;
};

Document parse(const std::string& text, const std::string& source_name = "<string>");
Document parse_file(const std::filesystem::path& path);

} // namespace toml

/// Loads and fully validates a system from a config file plus the profile
/// CSVs it references. Throws IoError / ValidationError.
SystemSpec load_system(const std::filesystem::path& config_path);

/// Writes a system as a config file plus profile CSVs under dir. The output
/// loads back to an equal SystemSpec.
void save_system(const SystemSpec& spec, const std::filesystem::path& dir);

/// Canonical text form of a spec (save_system's config plus all profile
/// data), independent of the key order of the file it was loaded from.
std::string canonical_text(const SystemSpec& spec);

/// FNV-1a hash of canonical_text, as a hex string.
std::string spec_hash(const SystemSpec& spec);

} // namespace capex
