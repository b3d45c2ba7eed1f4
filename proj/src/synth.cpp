#include "capex/synth.hpp"

#include "capex/profile.hpp"

#include <cmath>
#include <random>

namespace capex {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Euro/boe -> $/MMBtu at a fixed 1.10 EUR->USD rate, 5.698 MMBtu per boe
double boe(double euro_per_boe) { return euro_per_boe * 1.10 / 5.698; }

std::uint64_t mix(std::uint64_t seed, const std::string& tag) {
    std::uint64_t h = 14695981039346656037ull ^ seed;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

// smooth autocorrelated noise in roughly [-1, 1]
std::vector<double> smooth_noise(std::mt19937_64& rng, int n, double persistence) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> out(n);
    double v = 0.0;
    const double blend = std::sqrt(1.0 - persistence * persistence);
    for (int t = 0; t < n; ++t) {
        v = persistence * v + blend * gauss(rng);
        out[t] = std::tanh(v);
    }
    return out;
}

Profile solar_shape(std::mt19937_64& rng, int hours) {
    const auto cloud = smooth_noise(rng, hours, 0.95);
    Profile p;
    p.values.resize(hours);
    for (int t = 0; t < hours; ++t) {
        const int hod = t % 24;
        const double day = static_cast<double>(t) / 24.0;
        // daylight bell centred on noon, stronger in summer
        const double sun = std::max(0.0, std::sin((hod - 6.0) / 12.0 * kPi));
        const double season = 1.0 - 0.45 * std::cos(2.0 * kPi * (day + 10.0) / 365.0);
        const double sky = 0.75 + 0.25 * cloud[t];
        p.values[t] = sun * sun * season * sky;
    }
    return p;
}

Profile wind_shape(std::mt19937_64& rng, int hours, double winter_bias) {
    const auto gust = smooth_noise(rng, hours, 0.985);
    Profile p;
    p.values.resize(hours);
    for (int t = 0; t < hours; ++t) {
        const double day = static_cast<double>(t) / 24.0;
        const double season = 1.0 + winter_bias * std::cos(2.0 * kPi * (day + 10.0) / 365.0);
        const double v = 0.5 + 0.5 * gust[t];
        p.values[t] = std::min(1.0, std::max(0.0, v * v * season));
    }
    return p;
}

Profile demand_shape(std::mt19937_64& rng, int hours, double annual_mwh) {
    const auto noise = smooth_noise(rng, hours, 0.9);
    Profile p;
    p.values.resize(hours);
    for (int t = 0; t < hours; ++t) {
        const int hod = t % 24;
        const double day = static_cast<double>(t) / 24.0;
        const double daily = 0.85 + 0.25 * std::exp(-0.5 * std::pow((hod - 18.5) / 4.0, 2)) +
                             0.15 * std::exp(-0.5 * std::pow((hod - 9.0) / 3.0, 2));
        const double season = 1.0 + 0.12 * std::cos(2.0 * kPi * (day + 15.0) / 365.0) +
                              0.06 * std::cos(4.0 * kPi * day / 365.0);
        p.values[t] = daily * season * (1.0 + 0.04 * noise[t]);
    }
    const double target = annual_mwh / 8760.0; // average MW at full-year scale
    const double m = p.mean();
    for (double& v : p.values) v *= target / m;
    return p;
}

} // namespace

YearData synth_year(const SystemSpec& spec, const std::string& label,
                    std::uint64_t seed, int hours) {
    YearData yd;
    yd.label = label;

    {
        std::mt19937_64 rng(mix(seed, label + "/demand"));
        std::uniform_real_distribution<double> load_scale(0.97, 1.03);
        const double scale = load_scale(rng);
        yd.demand = demand_shape(rng, hours, 404e6 * scale);
        yd.demand.resolution = Profile::Resolution::hourly;
        yd.demand.year_label = label;
    }

    for (const auto& tech : spec.technologies) {
        if (tech.availability_series.empty()) continue;
        if (yd.hourly.count(tech.availability_series)) continue;
        std::mt19937_64 rng(mix(seed, label + "/" + tech.availability_series));
        Profile shape;
        if (tech.availability_series.find("solar") != std::string::npos)
            shape = solar_shape(rng, hours);
        else if (tech.availability_series.find("off") != std::string::npos)
            shape = wind_shape(rng, hours, 0.35);
        else
            shape = wind_shape(rng, hours, 0.25);
        // availability_const doubles as the year-average target for synthesis
        Profile scaled = scale_profile(shape, tech.availability_const).profile;
        scaled.resolution = Profile::Resolution::hourly;
        scaled.year_label = label;
        yd.hourly[tech.availability_series] = std::move(scaled);
    }

    if (!spec.hydro.inflow_series.empty()) {
        std::mt19937_64 rng(mix(seed, label + "/" + spec.hydro.inflow_series));
        const int weeks = (hours + 167) / 168;
        double reservoir_mw = 0.0;
        for (const auto& tech : spec.technologies)
            if (tech.tech_class == TechClass::hydro_reservoir)
                reservoir_mw += tech.existing_capacity;
        const auto wet = smooth_noise(rng, weeks, 0.7);
        Profile inflow;
        inflow.resolution = Profile::Resolution::weekly;
        inflow.year_label = label;
        inflow.values.resize(weeks);
        for (int k = 0; k < weeks; ++k) {
            // spring melt plus noise; ~35% average capacity factor worth of water
            const double season =
                1.0 + 0.5 * std::sin(2.0 * kPi * (k + 6.0) / 52.0);
            inflow.values[k] =
                reservoir_mw * 168.0 * 0.35 * season * (1.0 + 0.25 * wet[k]);
        }
        yd.weekly[spec.hydro.inflow_series] = std::move(inflow);
    }
    return yd;
}

SystemSpec default_system(int num_years, std::uint64_t seed, int hours) {
    SystemSpec s;
    s.hours = hours;
    s.voll = 13000.0;
    s.unmet_reserve_penalty = 1000.0;
    s.discount_rate = 0.10;

    s.fuels = {
        {"oil", boe(111.0), 0.070, false},
        {"coal", boe(26.0), 0.100, false},
        {"gas", boe(68.0), 0.053, false},
        {"biofuel", boe(108.0), 0.0, true},
    };

    auto thermal = [](std::string name, double eff, std::string fuel, double inv,
                      double fom, double vom, double min_frac, double capture) {
        TechnologySpec t;
        t.name = std::move(name);
        t.tech_class = TechClass::thermal;
        t.efficiency = eff;
        t.fuel = std::move(fuel);
        t.inv_cost = inv;
        t.fixed_om = fom;
        t.var_om = vom;
        t.min_output_frac = min_frac;
        t.capture_frac = capture;
        t.uc_flag = true;
        t.reserve_flag = true;
        t.startup_cost = 50.0;
        return t;
    };
    auto vre = [](std::string name, double inv, double fom, double vom, double exist,
                  double af, std::string series, bool invest) {
        TechnologySpec t;
        t.name = std::move(name);
        t.tech_class = TechClass::vre;
        t.inv_cost = inv;
        t.fixed_om = fom;
        t.var_om = vom;
        t.existing_capacity = exist;
        t.availability_const = af;
        t.availability_series = std::move(series);
        t.investable = invest;
        return t;
    };
    auto storage = [](std::string name, double inv, double fom, double vom,
                      double exist, double dur, double rt, bool invest) {
        TechnologySpec t;
        t.name = std::move(name);
        t.tech_class = TechClass::storage;
        t.inv_cost = inv;
        t.fixed_om = fom;
        t.var_om = vom;
        t.existing_capacity = exist;
        t.duration = dur;
        t.roundtrip_efficiency = rt;
        t.reserve_flag = true;
        t.investable = invest;
        return t;
    };

    s.technologies.push_back(thermal("ccgt", 0.517, "gas", 748.80, 17.55, 2.7, 0.30, 0.0));
    s.technologies.push_back(thermal("ocgt", 0.341, "gas", 471.74, 17.55, 4.1, 0.20, 0.0));
    s.technologies.push_back(
        thermal("ccgt_ccs", 0.447, "gas", 1755.0, 40.13, 3.25, 0.30, 0.88));
    s.technologies.push_back(
        vre("wind_onshore", 1103.31, 14.04, 0.21, 0.0, 0.249, "wind_on_af", true));
    s.technologies.push_back(
        vre("wind_offshore", 2212.47, 32.76, 0.46, 0.0, 0.506, "wind_off_af", true));
    {
        TechnologySpec t;
        t.name = "hydro_reservoir";
        t.tech_class = TechClass::hydro_reservoir;
        t.inv_cost = 3510.0;
        t.fixed_om = 29.84;
        t.var_om = 0.37;
        t.existing_capacity = 12126.0;
        t.uc_flag = true;
        t.reserve_flag = true;
        t.investable = false;
        s.technologies.push_back(t);
    }
    s.technologies.push_back(vre("hydro_ror", 2691.0, 9.48, 0.0, 5332.0, 0.445, "", false));
    s.technologies.push_back(
        storage("hydro_pumped", 4095.0, 35.1, 0.47, 5732.0, 8.0, 0.80, false));
    s.technologies.push_back(vre("solar_pv", 531.18, 10.76, 0.0, 0.0, 0.173, "solar_af", true));
    s.technologies.push_back(storage("battery_3h", 561.6, 3.04, 0.64, 0.0, 3.0, 0.85, true));
    s.technologies.push_back(storage("battery_8h", 971.1, 3.04, 0.64, 0.0, 8.0, 0.85, true));
    s.technologies.push_back(vre("geothermal", 3057.21, 122.85, 0.37, 869.0, 0.8, "", false));
    s.technologies.push_back(
        thermal("bio", 0.341, "biofuel", 1228.5, 27.26, 3.0, 0.20, 0.0));
    s.technologies.push_back(vre("bio_cogen", 1228.5, 27.26, 3.0, 2040.0, 0.54, "", false));

    s.hydro.inflow_series = "hydro_inflow";
    s.hydro.reservoir_energy_mwh = 3.6e6;
    s.hydro.initial_level_mwh = 1.8e6;
    s.hydro.end_tolerance = 0.10;
    s.hydro.capacity_cap_mw = 22000.0;
    s.hydro.annual_energy_cap_mwh = 45e6;

    for (int y = 0; y < num_years; ++y) {
        const std::string label = std::to_string(2006 + y);
        YearData yd = synth_year(s, label, seed + y, hours);
        yd.weight = 1.0 / num_years;
        s.years.push_back(std::move(yd));
    }
    // the year-average targets are baked into the generated series; reset the
    // constants so the spec round-trips through config files unchanged
    for (auto& t : s.technologies)
        if (!t.availability_series.empty()) t.availability_const = 1.0;
    validate(s);
    return s;
}

} // namespace capex
