#pragma once

#include "capex/types.hpp"

namespace capex {

// 1 MWh = 3.412142 MMBtu (thermal equivalent)
inline constexpr double kMmbtuPerMwh = 3.412142;

/// Capital recovery factor r / (1 - (1+r)^-L). Strictly decreasing in
/// lifetime, always > r.
double annuity_factor(double rate, int lifetime_years);

/// Heat rate in MMBtu per MWh for a thermal unit of the given efficiency.
double heat_rate(double efficiency);

/// Tonnes CO2 emitted per MWh generated: heat_rate / efficiency times the
/// fuel carbon content, net of capture. Throws on fuel-less technologies.
double emissions_rate(const TechnologySpec& tech, const FuelSpec& fuel,
                      double capture_frac);

/// emissions_rate with the capture fraction taken from the technology itself.
double emissions_rate(const TechnologySpec& tech, const SystemSpec& spec);

/// Fuel cost in currency per MWh generated.
double fuel_cost_per_mwh(const TechnologySpec& tech, const SystemSpec& spec);

/// Breakeven storage investment cost per kWh: the annual system saving
/// repaid over the storage lifetime, per unit of energy capacity.
double breakeven_cost(double cost_no_ess, double cost_with_ess, double rate,
                      int lifetime_years, double energy_capacity_kwh);

} // namespace capex
