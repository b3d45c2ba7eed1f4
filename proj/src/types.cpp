#include "capex/types.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace capex {

std::string tech_class_name(TechClass c) {
    switch (c) {
    case TechClass::thermal: return "thermal";
    case TechClass::vre: return "vre";
    case TechClass::hydro_reservoir: return "hydro_reservoir";
    case TechClass::storage: return "storage";
    }
    return "?";
}

TechClass tech_class_from_name(const std::string& s) {
    if (s == "thermal") return TechClass::thermal;
    if (s == "vre") return TechClass::vre;
    if (s == "hydro_reservoir") return TechClass::hydro_reservoir;
    if (s == "storage") return TechClass::storage;
    throw ValidationError("unknown technology class '" + s + "'");
}

double Profile::mean() const {
    if (values.empty()) return 0.0;
    return std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
}

const FuelSpec* SystemSpec::find_fuel(const std::string& name) const {
    for (const auto& f : fuels)
        if (f.name == name) return &f;
    return nullptr;
}

const TechnologySpec* SystemSpec::find_tech(const std::string& name) const {
    for (const auto& t : technologies)
        if (t.name == name) return &t;
    return nullptr;
}

int SystemSpec::year_index(const std::string& label) const {
    for (size_t i = 0; i < years.size(); ++i)
        if (years[i].label == label) return static_cast<int>(i);
    return -1;
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ValidationError(msg); }

void check_profile(const Profile& p, const std::string& what, int hours,
                   bool availability) {
    const size_t expect = p.resolution == Profile::Resolution::hourly
                              ? static_cast<size_t>(hours)
                              : static_cast<size_t>((hours + 167) / 168);
    if (p.values.size() != expect) {
        std::ostringstream os;
        os << what << ": profile length " << p.values.size() << " != " << expect;
        fail(os.str());
    }
    for (double v : p.values) {
        if (!std::isfinite(v)) fail(what + ": non-finite profile value");
        if (availability && (v < 0.0 || v > 1.0)) {
            std::ostringstream os;
            os << what << ": availability factor " << v << " outside [0,1]";
            fail(os.str());
        }
        if (!availability && v < 0.0) fail(what + ": negative value");
    }
}

} // namespace

void validate(const SystemSpec& spec) {
    if (spec.technologies.empty()) fail("no technologies");
    if (spec.years.empty()) fail("no years");
    if (spec.hours < 1) fail("hours must be positive");
    if (spec.voll <= 0) fail("voll must be > 0");
    if (spec.unmet_reserve_penalty < 0) fail("unmet_reserve_penalty must be >= 0");
    if (spec.discount_rate <= 0) fail("discount_rate must be > 0");

    std::set<std::string> fuel_names;
    for (const auto& f : spec.fuels) {
        if (f.name.empty()) fail("fuel with empty name");
        if (!fuel_names.insert(f.name).second) fail("duplicate fuel '" + f.name + "'");
        if (f.price < 0) fail("fuel '" + f.name + "': negative price");
        if (f.co2_content < 0) fail("fuel '" + f.name + "': negative co2_content");
        if (f.biofuel && f.co2_content != 0.0)
            fail("fuel '" + f.name + "': biofuel must have co2_content = 0");
    }

    std::set<std::string> tech_names;
    int num_hydro_reservoir = 0;
    for (const auto& t : spec.technologies) {
        const std::string ctx = "technology '" + t.name + "'";
        if (t.name.empty()) fail("technology with empty name");
        if (!tech_names.insert(t.name).second) fail("duplicate " + ctx);
        if (t.inv_cost < 0 || t.fixed_om < 0 || t.var_om < 0)
            fail(ctx + ": negative cost");
        if (t.efficiency <= 0 || t.efficiency > 1)
            fail(ctx + ": efficiency outside (0,1]");
        if (t.min_output_frac < 0 || t.min_output_frac >= 1)
            fail(ctx + ": min_output_frac outside [0,1)");
        if (t.existing_capacity < 0) fail(ctx + ": negative existing_capacity");
        if (t.max_capacity && *t.max_capacity < 0) fail(ctx + ": negative max_capacity");
        if (t.lifetime < 1) fail(ctx + ": lifetime < 1");
        if (t.capture_frac < 0 || t.capture_frac > 1)
            fail(ctx + ": capture_frac outside [0,1]");
        if (t.availability_const < 0 || t.availability_const > 1)
            fail(ctx + ": constant availability outside [0,1]");
        if (t.tech_class == TechClass::thermal) {
            if (t.fuel.empty()) fail(ctx + ": thermal technology needs a fuel");
        }
        if (!t.fuel.empty() && !spec.find_fuel(t.fuel))
            fail(ctx + ": dangling fuel reference '" + t.fuel + "'");
        if (t.tech_class == TechClass::vre && t.availability_series.empty() &&
            t.availability_const <= 0)
            fail(ctx + ": vre technology needs an availability profile");
        if (t.tech_class == TechClass::storage) {
            if (t.duration <= 0) fail(ctx + ": storage duration must be > 0");
            if (t.roundtrip_efficiency <= 0 || t.roundtrip_efficiency > 1)
                fail(ctx + ": roundtrip_efficiency outside (0,1]");
            if (t.fixed_energy_capacity) {
                if (*t.fixed_energy_capacity <= 0)
                    fail(ctx + ": fixed_energy_capacity must be > 0");
                if (t.investable)
                    fail(ctx + ": fixed_energy_capacity forbids investment");
            }
        }
        if (t.tech_class == TechClass::hydro_reservoir) ++num_hydro_reservoir;
    }
    if (num_hydro_reservoir > 1)
        fail("more than one hydro_reservoir technology sharing the reservoir data");
    if (num_hydro_reservoir == 1 && spec.hydro.inflow_series.empty())
        fail("hydro_reservoir technology present but no inflow series configured");

    double wsum = 0.0;
    std::set<std::string> labels;
    for (const auto& y : spec.years) {
        const std::string ctx = "year '" + y.label + "'";
        if (y.label.empty()) fail("year with empty label");
        if (!labels.insert(y.label).second) fail("duplicate " + ctx);
        if (y.weight < 0) fail(ctx + ": negative weight");
        wsum += y.weight;
        check_profile(y.demand, ctx + " demand", spec.hours, /*availability=*/false);
        for (const auto& [name, p] : y.hourly)
            check_profile(p, ctx + " series '" + name + "'", spec.hours, true);
        for (const auto& t : spec.technologies) {
            if (!t.availability_series.empty() && !y.hourly.count(t.availability_series))
                fail(ctx + ": missing availability series '" + t.availability_series +
                     "' for technology '" + t.name + "'");
        }
        if (num_hydro_reservoir == 1) {
            auto it = y.weekly.find(spec.hydro.inflow_series);
            if (it == y.weekly.end())
                fail(ctx + ": missing weekly inflow series '" + spec.hydro.inflow_series + "'");
            const size_t weeks = static_cast<size_t>((spec.hours + 167) / 168);
            if (it->second.values.size() != weeks) {
                std::ostringstream os;
                os << ctx << ": inflow series length " << it->second.values.size()
                   << " != " << weeks;
                fail(os.str());
            }
        }
    }
    if (std::abs(wsum - 1.0) > 1e-9) {
        std::ostringstream os;
        os << "weights sum " << wsum << " != 1";
        fail(os.str());
    }
}

} // namespace capex
