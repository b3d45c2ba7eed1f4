#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace capex {

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SolveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FuelSpec {
    std::string name;
    double price = 0.0;        // currency per MMBtu
    double co2_content = 0.0;  // tonnes CO2 per MMBtu
    bool biofuel = false;      // biofuel-class fuels must have co2_content == 0

    bool operator==(const FuelSpec&) const = default;
};

enum class TechClass { thermal, vre, hydro_reservoir, storage };

std::string tech_class_name(TechClass c);
TechClass tech_class_from_name(const std::string& s);

/// One generation or storage technology. Storage-specific fields are only
/// meaningful when tech_class == storage.
struct TechnologySpec {
    std::string name;
    TechClass tech_class = TechClass::thermal;
    double inv_cost = 0.0;   // currency/kW
    double fixed_om = 0.0;   // currency/kW-yr
    double var_om = 0.0;     // currency/MWh
    double efficiency = 1.0; // (0,1]
    std::string fuel;        // fuel name, empty = none
    double existing_capacity = 0.0; // MW
    std::optional<double> max_capacity; // MW cap on net capacity
    bool retirable = false;
    double min_output_frac = 0.0; // fraction of committed capacity
    bool uc_flag = false;
    bool reserve_flag = false;
    int lifetime = 25;          // years
    double startup_cost = 0.0;  // currency per MW started
    double capture_frac = 0.0;  // CO2 capture fraction (CCS)
    bool investable = true;     // expansion allowed

    // availability: either a constant factor or a named hourly series
    double availability_const = 1.0;
    std::string availability_series; // empty = constant

    // storage fields
    double duration = 0.0;              // hours, energy/power ratio
    double roundtrip_efficiency = 1.0;  // (0,1]
    std::optional<double> fixed_energy_capacity; // MWh, exogenous-capacity studies

    bool is_storage() const { return tech_class == TechClass::storage; }
    bool operator==(const TechnologySpec&) const = default;
};

struct Profile {
    enum class Resolution { hourly, weekly };
    std::vector<double> values;
    Resolution resolution = Resolution::hourly;
    std::string year_label;

    double mean() const;
    bool operator==(const Profile&) const = default;
};

struct ReserveRules {
    double op_load_frac = 0.03;
    double op_vre_frac = 0.05;
    double reg_load_frac = 0.01;

    bool any() const { return op_load_frac > 0 || op_vre_frac > 0 || reg_load_frac > 0; }
    bool operator==(const ReserveRules&) const = default;
};

struct Co2Policy {
    enum class Kind { none, total_cap, intensity_cap };
    Kind kind = Kind::none;
    double value = 0.0; // tonnes/yr for total_cap, g/kWh for intensity_cap

    bool operator==(const Co2Policy&) const = default;
};

struct HydroData {
    std::string inflow_series;           // weekly series name, empty = no reservoir data
    double reservoir_energy_mwh = 0.0;   // energy capacity of the reservoir
    double initial_level_mwh = 0.0;
    double end_tolerance = 0.10;         // end-year level within this fraction of initial
    double capacity_cap_mw = 0.0;        // 0 = no cap (group hydro capacity limit)
    double annual_energy_cap_mwh = 0.0;  // 0 = no cap

    bool operator==(const HydroData&) const = default;
};

/// One weather/load year: the demand series plus every availability and
/// inflow series referenced by the technologies.
struct YearData {
    std::string label;
    double weight = 1.0; // W_y
    Profile demand;                              // hourly, MW
    std::map<std::string, Profile> hourly;       // availability factors in [0,1]
    std::map<std::string, Profile> weekly;       // inflows, MWh per week

    bool operator==(const YearData&) const = default;
};

struct SystemSpec {
    std::vector<FuelSpec> fuels;
    std::vector<TechnologySpec> technologies;
    std::vector<YearData> years;
    ReserveRules reserve_rules;
    double voll = 13000.0;                 // C^ENS, currency/MWh
    double unmet_reserve_penalty = 1000.0; // C^R, currency/MW-h
    double discount_rate = 0.10;
    Co2Policy co2;
    HydroData hydro;
    int hours = 8760; // horizon length; 8760 for real datasets, smaller for toys

    const FuelSpec* find_fuel(const std::string& name) const;
    const TechnologySpec* find_tech(const std::string& name) const;
    int year_index(const std::string& label) const; // -1 if absent

    bool operator==(const SystemSpec&) const = default;
};

/// Checks every SystemSpec invariant; throws ValidationError on the first
/// violation.
void validate(const SystemSpec& spec);

} // namespace capex
