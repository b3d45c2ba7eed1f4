#include "capex/finance.hpp"

#include <cmath>

namespace capex {

double annuity_factor(double rate, int lifetime_years) {
    if (rate <= 0) throw ValidationError("annuity_factor: rate must be > 0");
    if (lifetime_years < 1) throw ValidationError("annuity_factor: lifetime must be >= 1");
    return rate / (1.0 - std::pow(1.0 + rate, -lifetime_years));
}

double heat_rate(double efficiency) {
    if (efficiency <= 0 || efficiency > 1)
        throw ValidationError("heat_rate: efficiency outside (0,1]");
    return kMmbtuPerMwh / efficiency;
}

double emissions_rate(const TechnologySpec& tech, const FuelSpec& fuel,
                      double capture_frac) {
    return heat_rate(tech.efficiency) * fuel.co2_content * (1.0 - capture_frac);
}

double emissions_rate(const TechnologySpec& tech, const SystemSpec& spec) {
    if (tech.fuel.empty())
        throw ValidationError("emissions_rate: technology '" + tech.name + "' has no fuel");
    const FuelSpec* f = spec.find_fuel(tech.fuel);
    if (!f)
        throw ValidationError("emissions_rate: dangling fuel '" + tech.fuel + "'");
    return emissions_rate(tech, *f, tech.capture_frac);
}

double fuel_cost_per_mwh(const TechnologySpec& tech, const SystemSpec& spec) {
    if (tech.fuel.empty()) return 0.0;
    const FuelSpec* f = spec.find_fuel(tech.fuel);
    if (!f)
        throw ValidationError("fuel_cost_per_mwh: dangling fuel '" + tech.fuel + "'");
    return heat_rate(tech.efficiency) * f->price;
}

double breakeven_cost(double cost_no_ess, double cost_with_ess, double rate,
                      int lifetime_years, double energy_capacity_kwh) {
    if (energy_capacity_kwh <= 0)
        throw ValidationError("breakeven_cost: energy capacity must be > 0");
    const double delta = std::abs(cost_no_ess - cost_with_ess);
    return delta * (1.0 - std::pow(1.0 + rate, -lifetime_years)) /
           (rate * energy_capacity_kwh);
}

} // namespace capex
