#include "capex/profile.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace capex {

ScaleResult scale_profile(const Profile& p, double target_mean) {
    const double m = p.mean();
    if (m <= 0) throw ValidationError("scale_profile: zero-mean input profile");
    if (target_mean <= 0) throw ValidationError("scale_profile: target mean must be > 0");
    const double factor = target_mean / m;
    ScaleResult out;
    out.profile = p;
    for (double& v : out.profile.values) {
        v *= factor;
        if (v > 1.0) {
            v = 1.0;
            ++out.clipped_hours;
        }
    }
    return out;
}

std::map<std::string, std::vector<double>> read_csv(const std::filesystem::path& path,
                                                    std::vector<std::string>* column_order) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw IoError("'" + path.string() + "': empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> cols;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cols.push_back(cell);
    }
    if (cols.empty()) throw IoError("'" + path.string() + "': no header columns");

    std::map<std::string, std::vector<double>> out;
    for (const auto& c : cols) out[c];
    if (column_order) *column_order = cols;

    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        size_t pos = 0, col = 0;
        while (col < cols.size()) {
            size_t comma = line.find(',', pos);
            std::string cell = line.substr(pos, comma == std::string::npos
                                                    ? std::string::npos
                                                    : comma - pos);
            double v = 0.0;
            try {
                size_t used = 0;
                v = std::stod(cell, &used);
                while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used])))
                    ++used;
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                std::ostringstream os;
                os << "'" << path.string() << "' line " << lineno << ": bad number '"
                   << cell << "'";
                throw IoError(os.str());
            }
            out[cols[col]].push_back(v);
            ++col;
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (col != cols.size()) {
            std::ostringstream os;
            os << "'" << path.string() << "' line " << lineno << ": expected "
               << cols.size() << " columns, got " << col;
            throw IoError(os.str());
        }
    }
    return out;
}

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& columns,
               const std::map<std::string, std::vector<double>>& series) {
    std::ostringstream os;
    size_t rows = 0;
    for (size_t i = 0; i < columns.size(); ++i) {
        os << (i ? "," : "") << columns[i];
        rows = std::max(rows, series.at(columns[i]).size());
    }
    os << "\n";
    char buf[40];
    for (size_t r = 0; r < rows; ++r) {
        for (size_t i = 0; i < columns.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", series.at(columns[i]).at(r));
            os << (i ? "," : "") << buf;
        }
        os << "\n";
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << os.str();
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

} // namespace capex
