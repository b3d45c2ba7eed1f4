#pragma once

#include "capex/model.hpp"
#include "capex/types.hpp"

#include <map>
#include <optional>
#include <string>

namespace capex {

struct CostBreakdown {
    double investment = 0.0; // annuitized
    double fixed_om = 0.0;
    double variable_om = 0.0;
    double fuel = 0.0;
    double startup = 0.0;
    double ens_cost = 0.0;
    double unmet_reserve_cost = 0.0;
    double total = 0.0;
    double average_energy_cost = 0.0; // total / annual demand

    double sum_of_parts() const {
        return investment + fixed_om + variable_om + fuel + startup + ens_cost +
               unmet_reserve_cost;
    }
};

struct EmissionsReport {
    double total = 0.0;     // tonnes/yr (weighted across model years)
    double intensity = 0.0; // g CO2 per kWh consumed
};

/// Annual average curtailment of a VRE technology in one model year:
/// 1 - (dispatched energy / available energy). nullopt when no energy was
/// available.
std::optional<double> curtailment(const PlanSolution& sol, const SystemSpec& spec,
                                  const std::string& tech, const std::string& year);

/// Utilization ratio theta (dispatched / available), the complement of
/// curtailment.
std::optional<double> utilization(const PlanSolution& sol, const SystemSpec& spec,
                                  const std::string& tech, const std::string& year);

/// Objective terms re-evaluated from the primal solution. Throws SolveError if
/// the recomputed total drifts from the LP objective by more than 1e-6
/// relative, or when called on an unsolved input.
CostBreakdown cost_breakdown(const PlanSolution& sol, const SystemSpec& spec);

EmissionsReport emissions_report(const PlanSolution& sol, const SystemSpec& spec);

/// Annual generation per technology (weighted across model years), MWh.
/// Storage contributes its discharged energy.
std::map<std::string, double> annual_generation(const PlanSolution& sol,
                                                const SystemSpec& spec);

/// Weighted annual demand of the solved years, MWh.
double annual_demand(const PlanSolution& sol, const SystemSpec& spec);

/// Operating share of the cost breakdown (everything except investment and
/// fixed O&M).
double operating_cost(const CostBreakdown& c);

} // namespace capex
