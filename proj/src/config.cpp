#include "capex/config.hpp"

#include "capex/profile.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace capex {

namespace toml {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// strips a # comment that is not inside a quoted string
std::string strip_comment(const std::string& line) {
    bool in_str = false;
    for (size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_str = !in_str;
        else if (line[i] == '#' && !in_str) return line.substr(0, i);
    }
    return line;
}

Scalar parse_scalar(const std::string& raw, const std::string& where) {
    const std::string v = trim(raw);
    if (v.empty()) throw ValidationError(where + ": empty value");
    if (v.front() == '"') {
        if (v.size() < 2 || v.back() != '"')
            throw ValidationError(where + ": unterminated string");
        return v.substr(1, v.size() - 2);
    }
    if (v == "true") return true;
    if (v == "false") return false;
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size())
        throw ValidationError(where + ": cannot parse value '" + v + "'");
    return d;
}

} // namespace

Document parse(const std::string& text, const std::string& source_name) {
    Document doc;
    Table* current = nullptr;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::ostringstream ctx;
        ctx << source_name << ":" << lineno;
        const std::string where = ctx.str();
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            const bool array = line.size() > 1 && line[1] == '[';
            const std::string close = array ? "]]" : "]";
            const size_t end = line.find(close);
            if (end == std::string::npos || trim(line.substr(end + close.size())).size())
                throw ValidationError(where + ": malformed table header");
            const std::string name = trim(line.substr(array ? 2 : 1, end - (array ? 2 : 1)));
            if (name.empty()) throw ValidationError(where + ": empty table name");
            if (array) {
                doc.table_arrays[name].emplace_back();
                current = &doc.table_arrays[name].back();
            } else {
                current = &doc.tables[name];
            }
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ValidationError(where + ": empty key");
        if (!current) throw ValidationError(where + ": key outside any table");
        (*current)[key] = parse_scalar(line.substr(eq + 1), where);
    }
    return doc;
}

Document parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.filename().string());
}

} // namespace toml

namespace {

using toml::Scalar;
using toml::Table;

double num(const Table& t, const std::string& key, double def) {
    auto it = t.find(key);
    if (it == t.end()) return def;
    if (auto* d = std::get_if<double>(&it->second)) return *d;
    throw ValidationError("key '" + key + "': expected a number");
}

double require_num(const Table& t, const std::string& key, const std::string& ctx) {
    auto it = t.find(key);
    if (it == t.end()) throw ValidationError(ctx + ": missing key '" + key + "'");
    if (auto* d = std::get_if<double>(&it->second)) return *d;
    throw ValidationError(ctx + ": key '" + key + "' must be a number");
}

std::string str(const Table& t, const std::string& key, const std::string& def) {
    auto it = t.find(key);
    if (it == t.end()) return def;
    if (auto* s = std::get_if<std::string>(&it->second)) return *s;
    throw ValidationError("key '" + key + "': expected a string");
}

std::string require_str(const Table& t, const std::string& key, const std::string& ctx) {
    auto it = t.find(key);
    if (it == t.end()) throw ValidationError(ctx + ": missing key '" + key + "'");
    if (auto* s = std::get_if<std::string>(&it->second)) return *s;
    throw ValidationError(ctx + ": key '" + key + "' must be a string");
}

bool boolean(const Table& t, const std::string& key, bool def) {
    auto it = t.find(key);
    if (it == t.end()) return def;
    if (auto* b = std::get_if<bool>(&it->second)) return *b;
    throw ValidationError("key '" + key + "': expected a boolean");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

TechnologySpec tech_from_table(const Table& t) {
    TechnologySpec g;
    g.name = require_str(t, "name", "technology");
    const std::string ctx = "technology '" + g.name + "'";
    g.tech_class = tech_class_from_name(require_str(t, "class", ctx));
    g.inv_cost = num(t, "inv_cost", 0.0);
    g.fixed_om = num(t, "fixed_om", 0.0);
    g.var_om = num(t, "var_om", 0.0);
    g.efficiency = num(t, "efficiency", 1.0);
    g.fuel = str(t, "fuel", "");
    g.existing_capacity = num(t, "existing_capacity", 0.0);
    if (t.count("max_capacity")) g.max_capacity = require_num(t, "max_capacity", ctx);
    g.retirable = boolean(t, "retirable", false);
    g.min_output_frac = num(t, "min_output_frac", 0.0);
    g.uc_flag = boolean(t, "uc", false);
    g.reserve_flag = boolean(t, "reserve", false);
    g.lifetime = static_cast<int>(num(t, "lifetime", 25));
    g.startup_cost = num(t, "startup_cost", 0.0);
    g.capture_frac = num(t, "capture_frac", 0.0);
    g.investable = boolean(t, "investable", true);
    if (auto it = t.find("availability"); it != t.end()) {
        if (auto* s = std::get_if<std::string>(&it->second)) g.availability_series = *s;
        else if (auto* d = std::get_if<double>(&it->second)) g.availability_const = *d;
        else throw ValidationError(ctx + ": availability must be a number or series name");
    }
    g.duration = num(t, "duration", 0.0);
    g.roundtrip_efficiency = num(t, "roundtrip_efficiency", 1.0);
    if (t.count("fixed_energy_capacity"))
        g.fixed_energy_capacity = require_num(t, "fixed_energy_capacity", ctx);
    return g;
}

void emit_tech(std::ostream& os, const TechnologySpec& g) {
    os << "\n[[technology]]\n";
    os << "name = \"" << g.name << "\"\n";
    os << "class = \"" << tech_class_name(g.tech_class) << "\"\n";
    os << "inv_cost = " << fmt(g.inv_cost) << "\n";
    os << "fixed_om = " << fmt(g.fixed_om) << "\n";
    os << "var_om = " << fmt(g.var_om) << "\n";
    os << "efficiency = " << fmt(g.efficiency) << "\n";
    if (!g.fuel.empty()) os << "fuel = \"" << g.fuel << "\"\n";
    os << "existing_capacity = " << fmt(g.existing_capacity) << "\n";
    if (g.max_capacity) os << "max_capacity = " << fmt(*g.max_capacity) << "\n";
    os << "retirable = " << (g.retirable ? "true" : "false") << "\n";
    os << "min_output_frac = " << fmt(g.min_output_frac) << "\n";
    os << "uc = " << (g.uc_flag ? "true" : "false") << "\n";
    os << "reserve = " << (g.reserve_flag ? "true" : "false") << "\n";
    os << "lifetime = " << g.lifetime << "\n";
    os << "startup_cost = " << fmt(g.startup_cost) << "\n";
    os << "capture_frac = " << fmt(g.capture_frac) << "\n";
    os << "investable = " << (g.investable ? "true" : "false") << "\n";
    if (!g.availability_series.empty())
        os << "availability = \"" << g.availability_series << "\"\n";
    else
        os << "availability = " << fmt(g.availability_const) << "\n";
    if (g.is_storage()) {
        os << "duration = " << fmt(g.duration) << "\n";
        os << "roundtrip_efficiency = " << fmt(g.roundtrip_efficiency) << "\n";
        if (g.fixed_energy_capacity)
            os << "fixed_energy_capacity = " << fmt(*g.fixed_energy_capacity) << "\n";
    }
}

std::string config_string(const SystemSpec& spec,
                          const std::vector<std::string>& hourly_files,
                          const std::vector<std::string>& weekly_files) {
    std::ostringstream os;
    os << "[system]\n";
    os << "hours = " << spec.hours << "\n";
    os << "voll = " << fmt(spec.voll) << "\n";
    os << "unmet_reserve_penalty = " << fmt(spec.unmet_reserve_penalty) << "\n";
    os << "discount_rate = " << fmt(spec.discount_rate) << "\n";
    os << "\n[reserves]\n";
    os << "op_load_frac = " << fmt(spec.reserve_rules.op_load_frac) << "\n";
    os << "op_vre_frac = " << fmt(spec.reserve_rules.op_vre_frac) << "\n";
    os << "reg_load_frac = " << fmt(spec.reserve_rules.reg_load_frac) << "\n";
    os << "\n[co2]\n";
    os << "policy = \""
       << (spec.co2.kind == Co2Policy::Kind::none
               ? "none"
               : spec.co2.kind == Co2Policy::Kind::total_cap ? "total_cap"
                                                             : "intensity_cap")
       << "\"\n";
    os << "value = " << fmt(spec.co2.value) << "\n";
    if (!spec.hydro.inflow_series.empty() || spec.hydro.capacity_cap_mw > 0 ||
        spec.hydro.annual_energy_cap_mwh > 0) {
        os << "\n[hydro]\n";
        if (!spec.hydro.inflow_series.empty())
            os << "inflow_series = \"" << spec.hydro.inflow_series << "\"\n";
        os << "reservoir_energy_mwh = " << fmt(spec.hydro.reservoir_energy_mwh) << "\n";
        os << "initial_level_mwh = " << fmt(spec.hydro.initial_level_mwh) << "\n";
        os << "end_tolerance = " << fmt(spec.hydro.end_tolerance) << "\n";
        os << "capacity_cap_mw = " << fmt(spec.hydro.capacity_cap_mw) << "\n";
        os << "annual_energy_cap_mwh = " << fmt(spec.hydro.annual_energy_cap_mwh) << "\n";
    }
    for (const auto& f : spec.fuels) {
        os << "\n[[fuel]]\n";
        os << "name = \"" << f.name << "\"\n";
        os << "price = " << fmt(f.price) << "\n";
        os << "co2_content = " << fmt(f.co2_content) << "\n";
        os << "biofuel = " << (f.biofuel ? "true" : "false") << "\n";
    }
    for (const auto& g : spec.technologies) emit_tech(os, g);
    for (size_t i = 0; i < spec.years.size(); ++i) {
        const auto& y = spec.years[i];
        os << "\n[[year]]\n";
        os << "label = \"" << y.label << "\"\n";
        os << "weight = " << fmt(y.weight) << "\n";
        os << "hourly = \"" << hourly_files[i] << "\"\n";
        if (!weekly_files[i].empty())
            os << "weekly = \"" << weekly_files[i] << "\"\n";
    }
    return os.str();
}

} // namespace

SystemSpec load_system(const std::filesystem::path& config_path) {
    if (!std::filesystem::exists(config_path))
        throw IoError("missing file '" + config_path.string() + "'");
    const toml::Document doc = toml::parse_file(config_path);
    const std::filesystem::path base = config_path.parent_path();

    SystemSpec spec;
    if (auto it = doc.tables.find("system"); it != doc.tables.end()) {
        const Table& t = it->second;
        spec.hours = static_cast<int>(num(t, "hours", 8760));
        spec.voll = num(t, "voll", 13000.0);
        spec.unmet_reserve_penalty = num(t, "unmet_reserve_penalty", 1000.0);
        spec.discount_rate = num(t, "discount_rate", 0.10);
    }
    if (auto it = doc.tables.find("reserves"); it != doc.tables.end()) {
        const Table& t = it->second;
        spec.reserve_rules.op_load_frac = num(t, "op_load_frac", 0.03);
        spec.reserve_rules.op_vre_frac = num(t, "op_vre_frac", 0.05);
        spec.reserve_rules.reg_load_frac = num(t, "reg_load_frac", 0.01);
    }
    if (auto it = doc.tables.find("co2"); it != doc.tables.end()) {
        const Table& t = it->second;
        const std::string policy = str(t, "policy", "none");
        if (policy == "none") spec.co2.kind = Co2Policy::Kind::none;
        else if (policy == "total_cap") spec.co2.kind = Co2Policy::Kind::total_cap;
        else if (policy == "intensity_cap") spec.co2.kind = Co2Policy::Kind::intensity_cap;
        else throw ValidationError("co2 policy '" + policy + "' unknown");
        spec.co2.value = num(t, "value", 0.0);
    }
    if (auto it = doc.tables.find("hydro"); it != doc.tables.end()) {
        const Table& t = it->second;
        spec.hydro.inflow_series = str(t, "inflow_series", "");
        spec.hydro.reservoir_energy_mwh = num(t, "reservoir_energy_mwh", 0.0);
        spec.hydro.initial_level_mwh = num(t, "initial_level_mwh", 0.0);
        spec.hydro.end_tolerance = num(t, "end_tolerance", 0.10);
        spec.hydro.capacity_cap_mw = num(t, "capacity_cap_mw", 0.0);
        spec.hydro.annual_energy_cap_mwh = num(t, "annual_energy_cap_mwh", 0.0);
    }
    if (auto it = doc.table_arrays.find("fuel"); it != doc.table_arrays.end()) {
        for (const Table& t : it->second) {
            FuelSpec f;
            f.name = require_str(t, "name", "fuel");
            f.price = num(t, "price", 0.0);
            f.co2_content = num(t, "co2_content", 0.0);
            f.biofuel = boolean(t, "biofuel", false);
            spec.fuels.push_back(std::move(f));
        }
    }
    if (auto it = doc.table_arrays.find("technology"); it != doc.table_arrays.end())
        for (const Table& t : it->second) spec.technologies.push_back(tech_from_table(t));

    if (auto it = doc.table_arrays.find("year"); it != doc.table_arrays.end()) {
        for (const Table& t : it->second) {
            YearData y;
            y.label = require_str(t, "label", "year");
            const std::string ctx = "year '" + y.label + "'";
            y.weight = require_num(t, "weight", ctx);
            const std::string hourly_file = require_str(t, "hourly", ctx);
            auto series = read_csv(base / hourly_file);
            auto dit = series.find("demand");
            if (dit == series.end())
                throw ValidationError(ctx + ": hourly file '" + hourly_file +
                                      "' has no 'demand' column");
            y.demand.values = dit->second;
            y.demand.resolution = Profile::Resolution::hourly;
            y.demand.year_label = y.label;
            series.erase(dit);
            for (auto& [name, values] : series) {
                Profile p;
                p.values = std::move(values);
                p.resolution = Profile::Resolution::hourly;
                p.year_label = y.label;
                y.hourly.emplace(name, std::move(p));
            }
            const std::string weekly_file = str(t, "weekly", "");
            if (!weekly_file.empty()) {
                auto wk = read_csv(base / weekly_file);
                for (auto& [name, values] : wk) {
                    Profile p;
                    p.values = std::move(values);
                    p.resolution = Profile::Resolution::weekly;
                    p.year_label = y.label;
                    y.weekly.emplace(name, std::move(p));
                }
            }
            spec.years.push_back(std::move(y));
        }
    }

    validate(spec);
    return spec;
}

void save_system(const SystemSpec& spec, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> hourly_files, weekly_files;
    for (const auto& y : spec.years) {
        const std::string hfile = "year_" + y.label + ".csv";
        std::vector<std::string> cols{"demand"};
        std::map<std::string, std::vector<double>> series{{"demand", y.demand.values}};
        for (const auto& [name, p] : y.hourly) {
            cols.push_back(name);
            series.emplace(name, p.values);
        }
        write_csv(dir / hfile, cols, series);
        hourly_files.push_back(hfile);
        if (!y.weekly.empty()) {
            const std::string wfile = "year_" + y.label + "_weekly.csv";
            std::vector<std::string> wcols;
            std::map<std::string, std::vector<double>> wseries;
            for (const auto& [name, p] : y.weekly) {
                wcols.push_back(name);
                wseries.emplace(name, p.values);
            }
            write_csv(dir / wfile, wcols, wseries);
            weekly_files.push_back(wfile);
        } else {
            weekly_files.push_back("");
        }
    }
    const std::string cfg = config_string(spec, hourly_files, weekly_files);
    std::ofstream out(dir / "config.toml", std::ios::trunc);
    if (!out) throw IoError("cannot write '" + (dir / "config.toml").string() + "'");
    out << cfg;
}

std::string canonical_text(const SystemSpec& spec) {
    std::vector<std::string> hfiles(spec.years.size()), wfiles(spec.years.size());
    for (size_t i = 0; i < spec.years.size(); ++i) {
        hfiles[i] = "year_" + spec.years[i].label + ".csv";
        wfiles[i] = spec.years[i].weekly.empty()
                        ? ""
                        : "year_" + spec.years[i].label + "_weekly.csv";
    }
    std::ostringstream os;
    os << config_string(spec, hfiles, wfiles);
    char buf[40];
    auto dump = [&](const std::vector<double>& vals) {
        for (double v : vals) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            os << buf << ",";
        }
        os << "\n";
    };
    for (const auto& y : spec.years) {
        os << "@" << y.label << ".demand:";
        dump(y.demand.values);
        for (const auto& [name, p] : y.hourly) {
            os << "@" << y.label << "." << name << ":";
            dump(p.values);
        }
        for (const auto& [name, p] : y.weekly) {
            os << "@" << y.label << ".w." << name << ":";
            dump(p.values);
        }
    }
    return os.str();
}

std::string spec_hash(const SystemSpec& spec) {
    const std::string text = canonical_text(spec);
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace capex
