#include "capex/mps.hpp"

#include "capex/types.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace capex::lp {

namespace {

std::string pad8(const std::string& s) {
    return s.size() >= 8 ? s : s + std::string(8 - s.size(), ' ');
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string row_name(int i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "R%07d", i + 1);
    return buf;
}

} // namespace

void export_mps(const LinearProgram& lp, const std::vector<std::string>& var_names,
                const std::filesystem::path& path, const std::string& problem_name) {
    lp.check();
    if (lp.num_vars() == 0) throw ValidationError("export_mps: no columns");
    if (static_cast<int>(var_names.size()) != lp.num_vars())
        throw ValidationError("export_mps: name count mismatch");
    std::set<std::string> seen;
    for (const auto& nm : var_names) {
        if (nm.empty() || nm.size() > 255)
            throw ValidationError("export_mps: bad variable name '" + nm + "'");
        if (nm.find_first_of(" \t") != std::string::npos)
            throw ValidationError("export_mps: whitespace in name '" + nm + "'");
        if (!seen.insert(nm).second)
            throw ValidationError("export_mps: duplicate name '" + nm + "'");
    }

    std::ostringstream os;
    os << "NAME          " << problem_name << "\n";
    os << "ROWS\n";
    os << " N  COST\n";
    for (int i = 0; i < lp.num_rows(); ++i)
        os << " " << static_cast<char>(lp.senses[i]) << "  " << row_name(i) << "\n";

    // column-major entry order
    std::vector<std::vector<std::pair<int, double>>> cols(lp.num_vars());
    for (const auto& e : lp.entries) cols[e.col].emplace_back(e.row, e.value);

    os << "COLUMNS\n";
    for (int j = 0; j < lp.num_vars(); ++j) {
        if (lp.cost[j] != 0.0)
            os << "    " << pad8(var_names[j]) << "  " << pad8("COST") << "  "
               << num(lp.cost[j]) << "\n";
        for (const auto& [r, v] : cols[j])
            os << "    " << pad8(var_names[j]) << "  " << pad8(row_name(r)) << "  "
               << num(v) << "\n";
    }

    os << "RHS\n";
    if (lp.objective_offset != 0.0)
        os << "    " << pad8("RHS") << "  " << pad8("COST") << "  "
           << num(-lp.objective_offset) << "\n";
    for (int i = 0; i < lp.num_rows(); ++i)
        if (lp.rhs[i] != 0.0)
            os << "    " << pad8("RHS") << "  " << pad8(row_name(i)) << "  "
               << num(lp.rhs[i]) << "\n";

    os << "BOUNDS\n";
    for (int j = 0; j < lp.num_vars(); ++j) {
        const double lo = lp.lo[j], hi = lp.hi[j];
        if (lo == 0.0 && std::isinf(hi)) continue;
        if (lo == hi) {
            os << " FX " << pad8("BND") << "  " << pad8(var_names[j]) << "  "
               << num(lo) << "\n";
            continue;
        }
        if (std::isinf(lo))
            os << " MI " << pad8("BND") << "  " << pad8(var_names[j]) << "\n";
        else if (lo != 0.0)
            os << " LO " << pad8("BND") << "  " << pad8(var_names[j]) << "  "
               << num(lo) << "\n";
        if (!std::isinf(hi))
            os << " UP " << pad8("BND") << "  " << pad8(var_names[j]) << "  "
               << num(hi) << "\n";
    }
    os << "ENDATA\n";

    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << os.str();
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

namespace {

std::vector<std::string> tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string t;
    while (ss >> t) out.push_back(t);
    return out;
}

[[noreturn]] void parse_fail(const std::filesystem::path& path, int lineno,
                             const std::string& what) {
    std::ostringstream os;
    os << "'" << path.string() << "' line " << lineno << ": " << what;
    throw IoError(os.str());
}

double parse_num(const std::string& s, const std::filesystem::path& path, int lineno) {
    try {
        size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        parse_fail(path, lineno, "bad number '" + s + "'");
    }
}

} // namespace

MpsProgram import_mps(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");

    MpsProgram out;
    LinearProgram& lp = out.lp;
    std::map<std::string, int> row_index; // constraint rows only
    std::map<std::string, int> var_index;
    std::string objective_row;

    auto var_id = [&](const std::string& name) {
        auto it = var_index.find(name);
        if (it != var_index.end()) return it->second;
        const int id = lp.add_var(0.0, 0.0, kInf);
        var_index.emplace(name, id);
        out.var_names.push_back(name);
        return id;
    };

    enum class Section { none, rows, columns, rhs, bounds, done };
    Section section = Section::none;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '*') continue;
        if (!std::isspace(static_cast<unsigned char>(line[0]))) {
            const auto tok = tokens(line);
            const std::string& head = tok[0];
            if (head == "NAME") continue;
            if (head == "ROWS") section = Section::rows;
            else if (head == "COLUMNS") section = Section::columns;
            else if (head == "RHS") section = Section::rhs;
            else if (head == "BOUNDS") section = Section::bounds;
            else if (head == "ENDATA") { section = Section::done; break; }
            else parse_fail(path, lineno, "unknown section '" + head + "'");
            continue;
        }
        const auto tok = tokens(line);
        if (tok.empty()) continue;
        switch (section) {
        case Section::rows: {
            if (tok.size() != 2) parse_fail(path, lineno, "expected 'sense name'");
            const std::string& sense = tok[0];
            if (sense == "N") {
                if (objective_row.empty()) objective_row = tok[1];
                // additional free rows are ignored
            } else if (sense == "L" || sense == "G" || sense == "E") {
                const int id = lp.add_row(static_cast<Sense>(sense[0]), 0.0);
                row_index.emplace(tok[1], id);
                out.row_names.push_back(tok[1]);
            } else {
                parse_fail(path, lineno, "malformed row sense '" + sense + "'");
            }
            break;
        }
        case Section::columns: {
            if (tok.size() != 3 && tok.size() != 5)
                parse_fail(path, lineno, "expected column entry pairs");
            const int j = var_id(tok[0]);
            for (size_t k = 1; k + 1 < tok.size(); k += 2) {
                const double v = parse_num(tok[k + 1], path, lineno);
                if (tok[k] == objective_row) {
                    lp.cost[j] += v;
                } else {
                    auto it = row_index.find(tok[k]);
                    if (it == row_index.end())
                        parse_fail(path, lineno, "unknown row '" + tok[k] + "'");
                    lp.add_entry(it->second, j, v);
                }
            }
            break;
        }
        case Section::rhs: {
            if (tok.size() != 3 && tok.size() != 5)
                parse_fail(path, lineno, "expected rhs entry pairs");
            for (size_t k = 1; k + 1 < tok.size(); k += 2) {
                const double v = parse_num(tok[k + 1], path, lineno);
                if (tok[k] == objective_row) {
                    lp.objective_offset = -v;
                } else {
                    auto it = row_index.find(tok[k]);
                    if (it == row_index.end())
                        parse_fail(path, lineno, "unknown row '" + tok[k] + "'");
                    lp.rhs[it->second] = v;
                }
            }
            break;
        }
        case Section::bounds: {
            if (tok.size() < 3) parse_fail(path, lineno, "expected bound entry");
            const std::string& kind = tok[0];
            auto it = var_index.find(tok[2]);
            if (it == var_index.end())
                parse_fail(path, lineno, "unknown column '" + tok[2] + "'");
            const int j = it->second;
            if (kind == "MI") { lp.lo[j] = -kInf; break; }
            if (kind == "PL") { lp.hi[j] = kInf; break; }
            if (tok.size() < 4) parse_fail(path, lineno, "bound needs a value");
            const double v = parse_num(tok[3], path, lineno);
            if (kind == "UP") lp.hi[j] = v;
            else if (kind == "LO") lp.lo[j] = v;
            else if (kind == "FX") { lp.lo[j] = v; lp.hi[j] = v; }
            else parse_fail(path, lineno, "unknown bound type '" + kind + "'");
            break;
        }
        default:
            parse_fail(path, lineno, "data outside any section");
        }
    }
    if (section != Section::done) parse_fail(path, lineno, "missing ENDATA");
    lp.check();
    return out;
}

} // namespace capex::lp
